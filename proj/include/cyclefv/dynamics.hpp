#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "circulant.hpp"
#include "core_model.hpp"
#include "linalg.hpp"
#include "stationary_covariance.hpp"

namespace cyclefv {

/// The adaptive integrator would need a step below 1e-12 to meet tolerance.
struct StepSizeUnderflow : std::runtime_error {
  explicit StepSizeUnderflow(const std::string& what) : std::runtime_error(what) {}
};

/// Mean site proportions at time t started from eta0: m(eta0) e^{tQ}.
/// The first moments close on themselves, so this is exact, not approximate.
inline ProbVector mean_dynamics(const ModelParams& params, const Configuration& eta0,
                                double t) {
  if (params.K != eta0.K())
    throw std::invalid_argument("mean_dynamics: params and eta0 disagree on K");
  return ProbVector::normalized(
      exp_action(build_Q(params), t, empirical_measure(eta0).weights));
}

/// The two-walker operator Q (+) Q = Q(x)I + I(x)Q on K^2 coordinates
/// (k,r) |-> kK + r, minus `shift` times the identity (the uniform pair
/// killing 2p/(N-1) in the killed version). The operator is block-circulant
/// with circulant blocks, not circulant in the flattened index, so it is
/// kept in factored form; F_K (x) F_K diagonalizes it with eigenvalues
/// lambda_a + lambda_b - shift.
struct KroneckerSumOperator {
  CirculantMatrix q;
  double shift = 0.0;

  int K() const { return q.K(); }

  Matrix dense() const {
    const Matrix qd = q.dense();
    const Matrix id = Matrix::Identity(K(), K());
    Matrix out = kron(qd, id) + kron(id, qd);
    out.diagonal().array() -= shift;
    return out;
  }

  /// Action on a row-vector field g laid out as the K x K matrix G(k,r):
  /// (g M) reshaped = Q^T G + G Q - shift G.
  Matrix apply_row_field(const Matrix& G) const {
    const Matrix qd = q.dense();
    return qd.transpose() * G + G * qd - shift * G;
  }

  /// e^{tM} assembled mode by mode from the Fourier eigenpairs:
  /// entry[(u,v),(k,r)] = (1/K^2) sum_{a,b} e^{t mu_ab} w^{(u-k)a + (v-r)b},
  /// mu_ab = lambda_a + lambda_b - shift. Independent of the Kronecker
  /// factorization of e^{tM}, which is verified against this, not assumed.
  Matrix exponential_dense(double t) const {
    const int k = K();
    const auto spec = circ_eigenvalues(q);
    const auto roots = detail::unit_roots(k);
    // profile(d1, d2) = (1/K^2) sum_{a,b} e^{t mu_ab} w^{d1 a + d2 b}
    std::vector<std::complex<double>> efac(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a)
      efac[static_cast<std::size_t>(a)] =
          std::exp(t * (spec.eigenvalues[static_cast<std::size_t>(a)] - 0.5 * shift));
    Matrix out(k * k, k * k);
    std::vector<std::vector<std::complex<double>>> profile(
        static_cast<std::size_t>(k),
        std::vector<std::complex<double>>(static_cast<std::size_t>(k)));
    for (int d1 = 0; d1 < k; ++d1) {
      for (int d2 = 0; d2 < k; ++d2) {
        std::complex<double> acc = 0.0;
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) {
            const auto m = static_cast<std::size_t>(
                (static_cast<long long>(d1) * a + static_cast<long long>(d2) * b) % k);
            acc += efac[static_cast<std::size_t>(a)] * efac[static_cast<std::size_t>(b)] *
                   roots[m];
          }
        }
        profile[static_cast<std::size_t>(d1)][static_cast<std::size_t>(d2)] =
            acc / static_cast<double>(k * k);
      }
    }
    for (int u = 0; u < k; ++u)
      for (int v = 0; v < k; ++v)
        for (int kk = 0; kk < k; ++kk)
          for (int r = 0; r < k; ++r) {
            const auto& z = profile[static_cast<std::size_t>(mod_site(u - kk, k))]
                                   [static_cast<std::size_t>(mod_site(v - r, k))];
            if (std::abs(z.imag()) > 1e-10)
              throw SpectralError("KroneckerSumOperator: imaginary residue in e^{tM}");
            out(u * k + v, kk * k + r) = z.real();
          }
    return out;
  }
};

/// Plain two-walker operator Q (+) Q.
inline KroneckerSumOperator q2_operator(const ModelParams& params) {
  return {build_Q(params), 0.0};
}

/// Killed version Q_p^{(2)} = Q (+) Q - (2p/(N-1)) I.
inline KroneckerSumOperator q2_operator_killed(const ModelParams& params, std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("q2_operator_killed: N must be >= 2");
  return {build_Q(params), 2.0 * params.p / (static_cast<double>(N) - 1.0)};
}

/// Source term of the covariance ODE, given the mean profile s at the same
/// time. Case split on the pair:
///   k = r:        (1/N)[s(k-1) + (1 + theta + 2pN/(N-1)) s(k) + theta s(k+1)]
///                 - (2p/(N-1)) s(k)^2
///   edge {a,a+1}: -(1/N)[s(a) + theta s(a+1)] - (2p/(N-1)) s(k) s(r),
///                 the wrap edge {K-1, 0} oriented with a = K-1
///   otherwise:    -(2p/(N-1)) s(k) s(r)
struct DriftTerm {
  Matrix w;
};

inline DriftTerm drift_term(const ModelParams& params, std::uint64_t N,
                            const ProbVector& s) {
  if (s.K() != params.K) throw std::invalid_argument("drift_term: size mismatch");
  if (N < 2) throw std::invalid_argument("drift_term: N must be >= 2");
  const int K = params.K;
  const double n = static_cast<double>(N);
  const double pn = 2.0 * params.p / (n - 1.0);
  const double diag_coeff = 1.0 + params.theta + 2.0 * params.p * n / (n - 1.0);
  Matrix w(K, K);
  for (int k = 0; k < K; ++k) {
    for (int r = 0; r < K; ++r) {
      double value = -pn * s[k] * s[r];
      if (k == r) {
        value += (s[k - 1] + diag_coeff * s[k] + params.theta * s[k + 1]) / n;
      } else if (cyclic_distance(k, r, K) == 1) {
        const int a = (r == mod_site(k + 1, K)) ? k : r;
        value -= (s[a] + params.theta * s[a + 1]) / n;
      }
      w(k, r) = value;
    }
  }
  return {std::move(w)};
}

/// Long-time limit of the source term: drift_term at the uniform profile.
inline DriftTerm drift_term_infinity(const ModelParams& params, std::uint64_t N) {
  return drift_term(params, N, ProbVector::uniform(params.K));
}

/// Covariance field g_t(k,r) = Cov[eta_t(k)/N, eta_t(r)/N] for a
/// deterministic start; g_0 = 0.
struct CovarianceField {
  double t;
  Matrix g;
};

/// Stationary covariance field, solved from g M + w_inf = 0 with
/// M = Q_p^{(2)}. Equals the stationary covariances arranged as
/// g(k,r) = cov[(r-k) mod K].
inline CovarianceField g_infinity(const ModelParams& params, std::uint64_t N) {
  const int K = params.K;
  const auto op = q2_operator_killed(params, N);
  const Matrix w = drift_term_infinity(params, N).w;
  Matrix A = op.dense().transpose();
  Vector rhs(K * K);
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < K; ++r) rhs(k * K + r) = -w(k, r);
  const Vector g = solve_dense(A, rhs);
  CovarianceField out{0.0, Matrix(K, K)};
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < K; ++r) out.g(k, r) = g(k * K + r);
  return out;
}

/// Integrates dg/dt = g Q_p^{(2)} + w_t from g_0 = 0 across the grid with a
/// Dormand-Prince 5(4) embedded pair. w_t is rebuilt from the exact mean
/// profile at every stage time. `max_embedded_error` (optional) receives the
/// largest accepted local error estimate.
inline std::vector<CovarianceField> integrate_g(const ModelParams& params, std::uint64_t N,
                                                const Configuration& eta0,
                                                const std::vector<double>& t_grid,
                                                double local_tol = 1e-10,
                                                double* max_embedded_error = nullptr) {
  if (t_grid.empty() || t_grid[0] != 0.0)
    throw std::invalid_argument("integrate_g: grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("integrate_g: grid must increase");
  const int K = params.K;
  const auto op = q2_operator_killed(params, N);
  // explicit return type: the sum must be evaluated before its operands die
  auto f = [&](double t, const Matrix& g) -> Matrix {
    return op.apply_row_field(g) + drift_term(params, N, mean_dynamics(params, eta0, t)).w;
  };

  std::vector<CovarianceField> out;
  out.reserve(t_grid.size());
  Matrix g = Matrix::Zero(K, K);
  out.push_back({0.0, g});
  double t = 0.0;
  double h = 1e-3;
  double worst_err = 0.0;

  for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
    const double target = t_grid[gi];
    // stop within floating slack of the target, then snap; only the
    // error-controlled step h is subject to the underflow contract
    while (t < target - 1e-13 * std::max(1.0, target)) {
      if (h < 1e-12)
        throw StepSizeUnderflow("integrate_g: step below 1e-12 at t = " + std::to_string(t));
      const double hs = std::min(h, target - t);
      const Matrix k1 = f(t, g);
      const Matrix k2 = f(t + hs / 5.0, g + hs * (k1 / 5.0));
      const Matrix k3 = f(t + 3.0 * hs / 10.0, g + hs * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
      const Matrix k4 = f(t + 4.0 * hs / 5.0,
                          g + hs * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
      const Matrix k5 =
          f(t + 8.0 * hs / 9.0,
            g + hs * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                      64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
      const Matrix k6 = f(t + hs, g + hs * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                            46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                            5103.0 / 18656.0 * k5));
      const Matrix g5 = g + hs * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                                  125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
      const Matrix k7 = f(t + hs, g5);
      const Matrix err_mat =
          hs * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 +
                (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                (125.0 / 192.0 - 393.0 / 640.0) * k4 +
                (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
                (11.0 / 84.0 - 187.0 / 2100.0) * k6 - (1.0 / 40.0) * k7);
      const double scale = 1.0 + g.cwiseAbs().maxCoeff();
      const double err = err_mat.cwiseAbs().maxCoeff() / scale;
      if (err <= local_tol) {
        t += hs;
        g = g5;
        worst_err = std::max(worst_err, err);
      }
      const double grow = (err > 0.0) ? 0.9 * std::pow(local_tol / err, 0.2) : 5.0;
      h = hs * std::min(5.0, std::max(0.2, grow));
    }
    t = target;
    out.push_back({target, g});
  }
  if (max_embedded_error) *max_embedded_error = worst_err;
  return out;
}

/// Constants of the variance and empirical-distance bounds.
///   p_N  = 2p/(N-1)
///   C_KN = (2/N) (1 + theta + p/(N-1) + p N (K+1) sqrt(K-1) / (K sqrt(K) (N-1)))
///   D_K  = 2 (1 + theta + p (K+1) sqrt(K-1) / (K sqrt(K)))
///   E_K  = (K-1)/K^2 + (K^2-1) / (6 K^2 (1+theta))
struct BoundConstants {
  double p_N;
  double C_KN;
  double D_K;
  double E_K;
};

inline BoundConstants bound_constants(const ModelParams& params, std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("bound_constants: N must be >= 2");
  const double K = params.K;
  const double n = static_cast<double>(N);
  const double geom = (K + 1.0) * std::sqrt(K - 1.0) / (K * std::sqrt(K));
  const double p_n = 2.0 * params.p / (n - 1.0);
  const double c_kn =
      (2.0 / n) * (1.0 + params.theta + params.p / (n - 1.0) + params.p * n * geom / (n - 1.0));
  const double d_k = 2.0 * (1.0 + params.theta + params.p * geom);
  const double e_k =
      (K - 1.0) / (K * K) + (K * K - 1.0) / (6.0 * K * K * (1.0 + params.theta));
  return {p_n, c_kn, d_k, e_k};
}

/// Upper bound on |Var[eta_t(k)/N] - Var_stationary| for a deterministic
/// start: C_KN (e^{-p_N t} - e^{-rho_K t}) / (rho_K - p_N) + e^{-p_N t} Var_st,
/// with the analytic limit t e^{-rho_K t} at the removable point rho_K = p_N.
inline double variance_bound(const ModelParams& params, std::uint64_t N, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("variance_bound: t must be >= 0");
  const auto bc = bound_constants(params, N);
  const double rho = spectral_constants(params).rho_K;
  const double var_st = stationary_covariances(params, N)[0];
  double mid;
  if (std::abs(rho - bc.p_N) < 1e-12) {
    mid = bc.C_KN * t * std::exp(-rho * t);
  } else {
    // e^{-p_N t} - e^{-rho t} = -e^{-p_N t} expm1(-(rho - p_N) t), which
    // stays accurate when the two rates nearly coincide
    mid = bc.C_KN * std::exp(-bc.p_N * t) * (-std::expm1(-(rho - bc.p_N) * t)) /
          (rho - bc.p_N);
  }
  return mid + std::exp(-bc.p_N * t) * var_st;
}

/// Time-uniform version: C_KN / max(rho_K, p_N) + 2 Var_stationary.
inline double uniform_variance_bound(const ModelParams& params, std::uint64_t N) {
  const auto bc = bound_constants(params, N);
  const double rho = spectral_constants(params).rho_K;
  const double var_st = stationary_covariances(params, N)[0];
  return bc.C_KN / std::max(rho, bc.p_N) + 2.0 * var_st;
}

struct DistanceBand {
  double lower;
  double upper;
};

/// Bracket on E || m(eta_t) - mu e^{tQ} ||_2 for a deterministic start eta:
///   lower = e^{-alpha_K t} || m(eta) - mu ||_2
///   upper = sqrt(K/N) sqrt(D_K (1 - e^{-rho_K t}) / rho_K + E_K)
///         + e^{-rho_K t} || m(eta) - mu ||_2
/// The upper bound holds up to an o(1/sqrt(N)) remainder.
inline DistanceBand empirical_distance_bound(const ModelParams& params, std::uint64_t N,
                                             double t, const Configuration& eta,
                                             const ProbVector& mu) {
  if (!(t >= 0.0))
    throw std::invalid_argument("empirical_distance_bound: t must be >= 0");
  const auto bc = bound_constants(params, N);
  const auto sc = spectral_constants(params);
  const double d0 = l2_distance(empirical_measure(eta), mu);
  const double lower = std::exp(-sc.alpha_K * t) * d0;
  const double upper =
      std::sqrt(static_cast<double>(params.K) / static_cast<double>(N)) *
          std::sqrt(bc.D_K * (1.0 - std::exp(-sc.rho_K * t)) / sc.rho_K + bc.E_K) +
      std::exp(-sc.rho_K * t) * d0;
  return {lower, upper};
}

}  // namespace cyclefv
