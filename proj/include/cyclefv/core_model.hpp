#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclefv {

inline constexpr const char* version = "0.1.0";

/// A precondition on a mathematical argument was violated (bad index range,
/// bad polynomial degree, sites too close for a formula's validity region).
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Requested a particle move out of a site that holds no particles.
struct EmptySite : std::runtime_error {
  explicit EmptySite(const std::string& what) : std::runtime_error(what) {}
};

/// Reduces a (possibly negative) site index to {0, ..., K-1}.
inline int mod_site(long long i, int K) {
  long long r = i % K;
  return static_cast<int>(r < 0 ? r + K : r);
}

/// Shortest distance between two sites along the cycle.
inline int cyclic_distance(long long a, long long b, int K) {
  int d = mod_site(a - b, K);
  return std::min(d, K - d);
}

/// Parameters of the particle system on the cycle Z/KZ: each particle jumps
/// clockwise at rate 1 and anti-clockwise at rate theta, and is killed at
/// rate p, upon which it restarts on the site of a uniformly chosen survivor.
struct ModelParams {
  int K;
  double theta;
  double p;

  ModelParams(int K_, double theta_, double p_) : K(K_), theta(theta_), p(p_) {
    if (K < 3) throw std::invalid_argument("ModelParams: K must be >= 3");
    if (!(theta > 0.0)) throw std::invalid_argument("ModelParams: theta must be > 0");
    if (!(p > 0.0)) throw std::invalid_argument("ModelParams: p must be > 0");
  }
};

/// Occupation vector eta on Z/KZ; eta(k) counts particles on site k and the
/// total is N. N >= 2 because redistribution divides by N - 1.
struct Configuration {
  std::vector<std::uint64_t> counts;
  std::uint64_t N;

  explicit Configuration(std::vector<std::uint64_t> counts_)
      : counts(std::move(counts_)),
        N(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0})) {
    if (counts.size() < 3)
      throw std::invalid_argument("Configuration: K must be >= 3");
    if (N < 2) throw std::invalid_argument("Configuration: N must be >= 2");
  }

  int K() const { return static_cast<int>(counts.size()); }

  /// Occupancy of site k, index reduced mod K.
  std::uint64_t operator()(long long k) const { return counts[mod_site(k, K())]; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.counts == b.counts;
  }
  friend std::strong_ordering operator<=>(const Configuration& a,
                                          const Configuration& b) {
    return a.counts <=> b.counts;
  }
};

/// Places all N particles on one site.
inline Configuration all_at_site(int K, std::uint64_t N, int site = 0) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(K), 0);
  c[static_cast<std::size_t>(mod_site(site, K))] = N;
  return Configuration(std::move(c));
}

/// Probability vector on Z/KZ: nonnegative weights summing to 1.
struct ProbVector {
  std::vector<double> weights;

  explicit ProbVector(std::vector<double> w) : weights(std::move(w)) {
    double sum = 0.0;
    for (double x : weights) {
      if (!(x >= 0.0)) throw std::invalid_argument("ProbVector: negative weight");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("ProbVector: weights must sum to 1");
  }

  static ProbVector uniform(int K) {
    return ProbVector(std::vector<double>(static_cast<std::size_t>(K), 1.0 / K));
  }

  static ProbVector delta(int K, long long k) {
    std::vector<double> w(static_cast<std::size_t>(K), 0.0);
    w[static_cast<std::size_t>(mod_site(k, K))] = 1.0;
    return ProbVector(std::move(w));
  }

  /// Repairs a vector that is a probability vector up to floating-point
  /// residue: entries in [-tol, 0) are clamped to 0, then the vector is
  /// rescaled to unit mass. Entries below -tol are an error.
  static ProbVector normalized(std::vector<double> w, double tol = 1e-10) {
    double sum = 0.0;
    for (double& x : w) {
      if (x < 0.0) {
        if (x < -tol)
          throw std::invalid_argument("ProbVector::normalized: negative weight");
        x = 0.0;
      }
      sum += x;
    }
    if (!(sum > 0.5))
      throw std::invalid_argument("ProbVector::normalized: mass too far from 1");
    for (double& x : w) x /= sum;
    return ProbVector(std::move(w));
  }

  int K() const { return static_cast<int>(weights.size()); }
  double operator[](long long k) const { return weights[static_cast<std::size_t>(mod_site(k, K()))]; }
};

/// Eigenvalues of a K x K circulant operator, ordered by Fourier mode k,
/// i.e. eigenvalues[k] belongs to the eigencolumn (omega^{jk})_j.
struct ComplexSpectrum {
  std::vector<std::complex<double>> eigenvalues;
  int K() const { return static_cast<int>(eigenvalues.size()); }
};

/// Euclidean distance between two probability vectors on the same cycle.
inline double l2_distance(const ProbVector& a, const ProbVector& b) {
  if (a.K() != b.K()) throw std::invalid_argument("l2_distance: size mismatch");
  double s = 0.0;
  for (int k = 0; k < a.K(); ++k) {
    double d = a.weights[static_cast<std::size_t>(k)] - b.weights[static_cast<std::size_t>(k)];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Total-variation distance: half the l1 distance.
inline double tv_distance(const ProbVector& a, const ProbVector& b) {
  if (a.K() != b.K()) throw std::invalid_argument("tv_distance: size mismatch");
  double s = 0.0;
  for (int k = 0; k < a.K(); ++k)
    s += std::abs(a.weights[static_cast<std::size_t>(k)] - b.weights[static_cast<std::size_t>(k)]);
  return 0.5 * s;
}

/// m(eta): the proportion of particles per site.
inline ProbVector empirical_measure(const Configuration& c) {
  std::vector<double> w(c.counts.size());
  for (std::size_t k = 0; k < c.counts.size(); ++k)
    w[k] = static_cast<double>(c.counts[k]) / static_cast<double>(c.N);
  return ProbVector(std::move(w));
}

/// Cyclic shift by l sites: result(k) = eta(k + l).
inline Configuration rotate(const Configuration& c, long long l) {
  const int K = c.K();
  std::vector<std::uint64_t> out(c.counts.size());
  for (int k = 0; k < K; ++k)
    out[static_cast<std::size_t>(k)] = c.counts[static_cast<std::size_t>(mod_site(k + l, K))];
  return Configuration(std::move(out));
}

/// T_{i->j}: moves one particle from site i to site j (indices mod K).
/// Throws EmptySite when site i is unoccupied.
inline Configuration move_particle(const Configuration& c, long long i, long long j) {
  const int K = c.K();
  const int ii = mod_site(i, K);
  const int jj = mod_site(j, K);
  if (c.counts[static_cast<std::size_t>(ii)] == 0)
    throw EmptySite("move_particle: site " + std::to_string(ii) + " is empty");
  std::vector<std::uint64_t> out = c.counts;
  out[static_cast<std::size_t>(ii)] -= 1;
  out[static_cast<std::size_t>(jj)] += 1;
  return Configuration(std::move(out));
}

}  // namespace cyclefv
