#pragma once

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "particle_system.hpp"

namespace cyclefv {

/// Shortest decimal form that parses back to the identical double
/// (17 significant digits are always sufficient).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

/// Serializes an ensemble as `replica,time,site_0,...,site_{K-1}` with a
/// mandatory header; counts stay integers, times round-trip exactly.
inline std::string trajectory_csv(const TrajectoryEnsemble& ens) {
  std::string out = "replica,time";
  for (int k = 0; k < ens.K; ++k) out += ",site_" + std::to_string(k);
  out += '\n';
  for (std::size_t r = 0; r < ens.records.size(); ++r) {
    for (std::size_t ti = 0; ti < ens.records[r].size(); ++ti) {
      out += std::to_string(r);
      out += ',';
      out += format_double(ens.sample_times[ti]);
      for (int k = 0; k < ens.K; ++k) {
        out += ',';
        out += std::to_string(ens.records[r][ti].counts[static_cast<std::size_t>(k)]);
      }
      out += '\n';
    }
  }
  return out;
}

/// Inverse of trajectory_csv (seed is not part of the layout and is left 0).
inline TrajectoryEnsemble parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("replica,time", 0) != 0)
    throw std::invalid_argument("parse_trajectory_csv: missing header");
  int K = 0;
  for (std::size_t pos = 0; (pos = line.find(",site_", pos)) != std::string::npos; ++pos) ++K;
  if (K < 3) throw std::invalid_argument("parse_trajectory_csv: needs >= 3 site columns");
  TrajectoryEnsemble ens;
  ens.K = K;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    const auto next_cell = [&row, &line](std::string& out) {
      if (!std::getline(row, out, ','))
        throw std::invalid_argument("parse_trajectory_csv: short row: " + line);
    };
    next_cell(cell);
    const std::size_t replica = std::stoull(cell);
    next_cell(cell);
    const double t = std::strtod(cell.c_str(), nullptr);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      next_cell(cell);
      counts[static_cast<std::size_t>(k)] = std::stoull(cell);
    }
    if (std::getline(row, cell, ','))
      throw std::invalid_argument("parse_trajectory_csv: excess columns: " + line);
    if (replica >= ens.records.size()) ens.records.resize(replica + 1);
    if (replica == 0) ens.sample_times.push_back(t);
    ens.records[replica].emplace_back(std::move(counts));
  }
  if (ens.records.empty() || ens.records[0].empty())
    throw std::invalid_argument("parse_trajectory_csv: no data rows");
  ens.N = ens.records[0][0].N;
  return ens;
}

}  // namespace cyclefv
