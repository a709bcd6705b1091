#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chebyshev.hpp"
#include "circulant.hpp"
#include "core_model.hpp"
#include "linalg.hpp"

namespace cyclefv {

/// Two independent computation paths disagreed beyond tolerance.
struct ConsistencyError : std::runtime_error {
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// beta_N = 2(1 + p / ((N-1)(1+theta))), the diagonal coefficient of the
/// pair-correlation system. Always >= 2.
inline double beta_coefficient(const ModelParams& params, std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("beta_coefficient: N must be >= 2");
  return 2.0 * (1.0 + params.p / ((static_cast<double>(N) - 1.0) * (1.0 + params.theta)));
}

/// gamma_N = -2(1 + N p / ((N-1)(1+theta))), the right-hand-side coefficient
/// attached to the variance entry.
inline double gamma_coefficient(const ModelParams& params, std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("gamma_coefficient: N must be >= 2");
  const double n = static_cast<double>(N);
  return -2.0 * (1.0 + n * params.p / ((n - 1.0) * (1.0 + params.theta)));
}

/// The linear system A s = b satisfied by the stationary second moments
/// s_k = E[eta(0) eta(k)] / N^2. A = circ(beta_N, -1, 0, ..., 0, -1) is a
/// symmetric circulant; b is almost symmetric (b_k = b_{K-k}).
struct AlmostSymmetricSystem {
  CirculantMatrix A;
  std::vector<double> b;
};

/// Stationary second moments and centered covariances of the site
/// proportions under the stationary law of the particle system.
struct StationaryMomentSet {
  ModelParams params;
  std::uint64_t N;
  double beta_N;
  double gamma_N;
  std::vector<double> s;    // s_k = E[eta(0) eta(k)] / N^2
  std::vector<double> cov;  // cov[k] = s_k - 1/K^2
};

inline AlmostSymmetricSystem build_system(const ModelParams& params, std::uint64_t N) {
  const int K = params.K;
  const double beta = beta_coefficient(params, N);
  const double gamma = gamma_coefficient(params, N);
  std::vector<double> row(static_cast<std::size_t>(K), 0.0);
  row[0] = beta;
  row[1] = -1.0;
  row[static_cast<std::size_t>(K - 1)] = -1.0;
  const double scale = -1.0 / (static_cast<double>(K) * static_cast<double>(N));
  std::vector<double> b(static_cast<std::size_t>(K), 0.0);
  b[0] = scale * gamma;
  b[1] = scale;
  b[static_cast<std::size_t>(K - 1)] = scale;
  return {CirculantMatrix{std::move(row)}, std::move(b)};
}

namespace detail {

inline StationaryMomentSet moment_set_from_s(const ModelParams& params,
                                             std::uint64_t N, std::vector<double> s) {
  const double invk2 = 1.0 / (static_cast<double>(params.K) * static_cast<double>(params.K));
  std::vector<double> cov(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) cov[k] = s[k] - invk2;
  return {params, N, beta_coefficient(params, N), gamma_coefficient(params, N),
          std::move(s), std::move(cov)};
}

/// Ratios N_n(x) / D_top(x) for n = 0..top, by running both recurrences
/// jointly and renormalizing by a power of two whenever iterates grow past
/// 1e300. Only ratios are needed, and those stay bounded.
inline std::vector<double> family_ratio_column(PolyFamily num_family, int top, double x) {
  const auto num0 = detail::recurrence_setup(num_family, x);
  const auto den0 = detail::recurrence_setup(
      num_family == PolyFamily::Neven ? PolyFamily::Deven : PolyFamily::Dodd, x);
  // iterates carry a shared binary exponent; stored numerators remember theirs
  double n_prev = num0.p0, n_cur = num0.p1;
  double d_prev = den0.p0, d_cur = den0.p1;
  long long exp_shift = 0;
  std::vector<double> num_val(static_cast<std::size_t>(top) + 1);
  std::vector<long long> num_exp(static_cast<std::size_t>(top) + 1);
  num_val[0] = n_prev;
  num_exp[0] = 0;
  if (top >= 1) {
    num_val[1] = n_cur;
    num_exp[1] = 0;
  }
  for (int n = 2; n <= top; ++n) {
    double n_next = x * n_cur - n_prev;
    double d_next = x * d_cur - d_prev;
    n_prev = n_cur;
    n_cur = n_next;
    d_prev = d_cur;
    d_cur = d_next;
    const double mag = std::max(std::max(std::abs(n_cur), std::abs(n_prev)),
                                std::max(std::abs(d_cur), std::abs(d_prev)));
    if (mag > 1e300) {
      const double f = 0x1.0p-512;
      n_prev *= f;
      n_cur *= f;
      d_prev *= f;
      d_cur *= f;
      exp_shift += 512;
    }
    num_val[static_cast<std::size_t>(n)] = n_cur;
    num_exp[static_cast<std::size_t>(n)] = exp_shift;
  }
  const double d_top = (top == 0) ? den0.p0 : (top == 1 ? den0.p1 : d_cur);
  if (!(std::abs(d_top) > 0.0))
    throw SolveError("family_ratio_column: zero denominator");
  std::vector<double> ratios(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    ratios[idx] = std::ldexp(num_val[idx] / d_top,
                             static_cast<int>(num_exp[idx] - exp_shift));
  }
  return ratios;
}

}  // namespace detail

/// Solves the pair-correlation system by dense LU.
inline StationaryMomentSet solve_sk_linear(const ModelParams& params, std::uint64_t N) {
  const auto sys = build_system(params, N);
  const int K = params.K;
  Vector b(K);
  for (int k = 0; k < K; ++k) b(k) = sys.b[static_cast<std::size_t>(k)];
  const Vector x = solve_dense(sys.A.dense(), b);
  std::vector<double> s(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) s[static_cast<std::size_t>(k)] = x(k);
  // The system turns singular as N grows (row sum beta_N - 2 -> 0), and the
  // solve error concentrates along the constant vector. Total mass is pinned
  // exactly at sum_k s_k = 1/K, so restore that component.
  double total = 0.0;
  for (const double v : s) total += v;
  const double shift = (1.0 / static_cast<double>(K) - total) / static_cast<double>(K);
  for (double& v : s) v += shift;
  return detail::moment_set_from_s(params, N, std::move(s));
}

/// Closed form for the pair correlations:
///   K = 2 K2     : s_k = (N-1)/(KN) * Neven_{K2-k}(beta) / Deven_{K2}(beta)
///   K = 2 K2 + 1 : s_k = (N-1)/(KN) * Nodd_{K2-k}(beta) / Dodd_{K2}(beta)
/// for 0 <= k <= K2, with 1/(KN) added at k = 0 and s_{K-k} = s_k.
inline StationaryMomentSet sk_closed_form(const ModelParams& params, std::uint64_t N) {
  const int K = params.K;
  const double beta = beta_coefficient(params, N);
  const int k2 = K / 2;
  const bool even = (K % 2 == 0);
  const auto ratios = detail::family_ratio_column(
      even ? PolyFamily::Neven : PolyFamily::Nodd, k2, beta);
  const double front =
      (static_cast<double>(N) - 1.0) / (static_cast<double>(K) * static_cast<double>(N));
  std::vector<double> s(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k <= k2; ++k)
    s[static_cast<std::size_t>(k)] = front * ratios[static_cast<std::size_t>(k2 - k)];
  s[0] += 1.0 / (static_cast<double>(K) * static_cast<double>(N));
  for (int k = 1; k < K - k2; ++k)
    s[static_cast<std::size_t>(K - k)] = s[static_cast<std::size_t>(k)];
  return detail::moment_set_from_s(params, N, std::move(s));
}

enum class CovarianceMethod { closed_form, linear_solve, checked };

/// Stationary moments by the requested route. `checked` runs both routes and
/// throws ConsistencyError if any component differs by more than check_tol.
inline StationaryMomentSet stationary_moments(const ModelParams& params, std::uint64_t N,
                                              CovarianceMethod method = CovarianceMethod::closed_form,
                                              double check_tol = 1e-10) {
  switch (method) {
    case CovarianceMethod::closed_form:
      return sk_closed_form(params, N);
    case CovarianceMethod::linear_solve:
      return solve_sk_linear(params, N);
    case CovarianceMethod::checked: {
      auto a = sk_closed_form(params, N);
      const auto b = solve_sk_linear(params, N);
      for (std::size_t k = 0; k < a.s.size(); ++k) {
        if (std::abs(a.s[k] - b.s[k]) > check_tol)
          throw ConsistencyError("stationary_moments: closed form and linear solve "
                                 "disagree at lag " + std::to_string(k));
      }
      return a;
    }
  }
  throw std::logic_error("stationary_moments: unreachable");
}

/// Centered covariances cov[k] = s_k - 1/K^2 of the site proportions.
inline std::vector<double> stationary_covariances(const ModelParams& params, std::uint64_t N,
                                                  CovarianceMethod method = CovarianceMethod::closed_form) {
  return stationary_moments(params, N, method).cov;
}

/// True iff covariance is non-increasing in the graph distance:
/// cov[k] >= cov[k+1] - 1e-14 for k = 0 .. floor(K/2)-1.
inline bool check_monotone(const std::vector<double>& cov) {
  const int K = static_cast<int>(cov.size());
  for (int k = 0; k + 1 <= K / 2; ++k) {
    if (!(cov[static_cast<std::size_t>(k)] >= cov[static_cast<std::size_t>(k) + 1] - 1e-14))
      return false;
  }
  return true;
}

struct AsymptoticCovariance {
  double order1;
  double order2;
};

/// Large-N development of cov[k]:
///   order1 = (1/N) [ (1/K) 1_{k=0} - 1/K^2 + p (6k(k-K) + K^2 - 1) / (6 K^2 (theta+1)) ]
///   order2 = order1
///          + (p^2/N^2) [ 30 k(K-k)(k(K-k)+2) - (K-1)(K+1)(K^2+11) ] / (180 K^2 (theta+1)^2)
inline AsymptoticCovariance cov_asymptotic(const ModelParams& params, std::uint64_t N,
                                           long long k_raw) {
  const double K = params.K;
  const double k = mod_site(k_raw, params.K);
  const double n = static_cast<double>(N);
  const double t1 = 1.0 + params.theta;
  const double lead = (k == 0.0 ? 1.0 / K : 0.0) - 1.0 / (K * K) +
                      params.p * (6.0 * k * (k - K) + K * K - 1.0) / (6.0 * K * K * t1);
  const double order1 = lead / n;
  const double kk = k * (K - k);
  const double second = params.p * params.p *
                        (30.0 * kk * (kk + 2.0) - (K - 1.0) * (K + 1.0) * (K * K + 11.0)) /
                        (180.0 * K * K * t1 * t1);
  return {order1, order1 + second / (n * n)};
}

/// The l2 distance between the empirical stationary profile and the uniform
/// profile, in expectation-square form: sqrt(K * cov[0]).
inline double qsd_distance_exact(const ModelParams& params, std::uint64_t N) {
  const auto cov = stationary_covariances(params, N);
  return std::sqrt(static_cast<double>(params.K) * cov[0]);
}

/// Asymptotic upper bound for qsd_distance_exact:
/// sqrt((K-1)/N) * sqrt(1 + p(K+1) / (6(1+theta))).
inline double qsd_distance_bound(const ModelParams& params, std::uint64_t N) {
  const double K = params.K;
  const double n = static_cast<double>(N);
  return std::sqrt((K - 1.0) / n) *
         std::sqrt(1.0 + params.p * (K + 1.0) / (6.0 * (1.0 + params.theta)));
}

/// Exact flip symmetry of the system: returns max |(JAJ - A)(i,j)| together
/// with the rhs part max |(Jb - b)(i)|, where (Jv)_k = v_{(K-k) mod K}.
/// Zero for every valid system; nonzero input signals corrupted assembly.
inline double almost_symmetry_sandwich(const AlmostSymmetricSystem& sys) {
  const int K = sys.A.K();
  double worst = 0.0;
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const double flipped = sys.A.entry(mod_site(-i, K), mod_site(-j, K));
      worst = std::max(worst, std::abs(flipped - sys.A.entry(i, j)));
    }
    const double bf = sys.b[static_cast<std::size_t>(mod_site(-i, K))];
    worst = std::max(worst, std::abs(bf - sys.b[static_cast<std::size_t>(i)]));
  }
  return worst;
}

}  // namespace cyclefv
