#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "core_model.hpp"
#include "linalg.hpp"

namespace cyclefv {

/// The diagonalization residue of a circulant operation was too large, i.e.
/// the synthesized result of a Fourier-side computation was not real.
struct SpectralError : std::runtime_error {
  explicit SpectralError(const std::string& what) : std::runtime_error(what) {}
};

/// Circulant K x K matrix stored by its first row:
/// entry(r, c) = first_row[(c - r) mod K].
struct CirculantMatrix {
  std::vector<double> first_row;

  int K() const { return static_cast<int>(first_row.size()); }

  double entry(long long r, long long c) const {
    return first_row[static_cast<std::size_t>(mod_site(c - r, K()))];
  }

  Matrix dense() const {
    const int n = K();
    Matrix out(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(r, c) = entry(r, c);
    return out;
  }
};

/// Generator of one walker on the cycle: clockwise rate 1, anti-clockwise
/// rate theta, diagonal -(1+theta). The killing rate plays no role here
/// because killing is uniform and cancels from the conditioned law.
inline CirculantMatrix build_Q(const ModelParams& params) {
  std::vector<double> row(static_cast<std::size_t>(params.K), 0.0);
  row[0] = -(1.0 + params.theta);
  row[1] = 1.0;
  row[static_cast<std::size_t>(params.K - 1)] = params.theta;
  return CirculantMatrix{std::move(row)};
}

namespace detail {

/// K-th roots of unity omega^m = exp(2 pi i m / K) for m = 0..K-1.
inline std::vector<std::complex<double>> unit_roots(int K) {
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(K));
  for (int m = 0; m < K; ++m)
    roots[static_cast<std::size_t>(m)] =
        std::polar(1.0, 2.0 * std::numbers::pi * m / K);
  roots[0] = 1.0;
  return roots;
}

}  // namespace detail

/// Eigenvalues lambda_k = sum_j c_j omega^{kj} of a circulant matrix, the
/// eigenvalue of the eigencolumn (omega^{jk})_j. Exponents are reduced mod K
/// before evaluating the root, which keeps the trigonometry well-conditioned.
inline ComplexSpectrum circ_eigenvalues(const CirculantMatrix& C) {
  const int K = C.K();
  const auto roots = detail::unit_roots(K);
  ComplexSpectrum spec;
  spec.eigenvalues.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < K; ++j) {
      const auto m = static_cast<std::size_t>(
          (static_cast<long long>(k) * j) % K);
      acc += C.first_row[static_cast<std::size_t>(j)] * roots[m];
    }
    spec.eigenvalues[static_cast<std::size_t>(k)] = acc;
  }
  return spec;
}

/// Closed-form spectrum of the single-walker generator:
/// lambda_k = -2(1+theta) sin^2(pi k / K) + i (1-theta) sin(2 pi k / K).
inline ComplexSpectrum q_spectrum_closed_form(const ModelParams& params) {
  const int K = params.K;
  ComplexSpectrum spec;
  spec.eigenvalues.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double s = std::sin(std::numbers::pi * k / K);
    const double re = -2.0 * (1.0 + params.theta) * s * s;
    const double im = (1.0 - params.theta) * std::sin(2.0 * std::numbers::pi * k / K);
    spec.eigenvalues[static_cast<std::size_t>(k)] = {re, im};
  }
  return spec;
}

/// Extremes of the real spectrum gap: rho is the slowest decay rate over
/// nonzero modes, alpha the fastest.
///   rho_K   = 2(1+theta) sin^2(pi / K)
///   alpha_K = 2(1+theta)                      for K even
///           = 2(1+theta) cos^2(pi / (2K))     for K odd
struct SpectralConstants {
  double rho_K;
  double alpha_K;
};

inline SpectralConstants spectral_constants(int K, double theta) {
  if (K < 3) throw std::invalid_argument("spectral_constants: K must be >= 3");
  if (!(theta >= 0.0))
    throw std::invalid_argument("spectral_constants: theta must be >= 0");
  const double s = std::sin(std::numbers::pi / K);
  const double rho = 2.0 * (1.0 + theta) * s * s;
  double alpha;
  if (K % 2 == 0) {
    alpha = 2.0 * (1.0 + theta);
  } else {
    const double c = std::cos(std::numbers::pi / (2.0 * K));
    alpha = 2.0 * (1.0 + theta) * c * c;
  }
  return {rho, alpha};
}

inline SpectralConstants spectral_constants(const ModelParams& params) {
  return spectral_constants(params.K, params.theta);
}

/// Largest deviation of the nonzero closed-form eigenvalues from the ellipse
/// (x + 1 + theta)^2 / (1+theta)^2 + y^2 / (1-theta)^2 = 1.
/// The ellipse degenerates to a segment at theta = 1, hence DomainError there.
inline double ellipse_residual(const ModelParams& params) {
  if (std::abs(params.theta - 1.0) <= 1e-12)
    throw DomainError("ellipse_residual: degenerate at theta = 1");
  const auto spec = q_spectrum_closed_form(params);
  const double a = 1.0 + params.theta;
  const double b = 1.0 - params.theta;
  double worst = 0.0;
  for (int k = 1; k < params.K; ++k) {
    const auto& l = spec.eigenvalues[static_cast<std::size_t>(k)];
    const double x = (l.real() + a) / a;
    const double y = l.imag() / b;
    worst = std::max(worst, std::abs(x * x + y * y - 1.0));
  }
  return worst;
}

/// Row-vector heat action v e^{tC} of a circulant matrix, computed by
/// discrete Fourier analysis: vhat_k = sum_r v_r omega^{rk}, then
/// (v e^{tC})_c = (1/K) sum_k vhat_k e^{t lambda_k} omega^{-kc}.
/// The synthesis must come out real; an imaginary residue above 1e-10
/// indicates a broken spectrum and throws.
inline std::vector<double> exp_action(const CirculantMatrix& C, double t,
                                      const std::vector<double>& v) {
  const int K = C.K();
  if (static_cast<int>(v.size()) != K)
    throw std::invalid_argument("exp_action: vector size mismatch");
  if (!(t >= 0.0)) throw std::invalid_argument("exp_action: t must be >= 0");
  const auto roots = detail::unit_roots(K);
  const auto spec = circ_eigenvalues(C);
  std::vector<std::complex<double>> vhat(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    std::complex<double> acc = 0.0;
    for (int r = 0; r < K; ++r)
      acc += v[static_cast<std::size_t>(r)] *
             roots[static_cast<std::size_t>((static_cast<long long>(r) * k) % K)];
    vhat[static_cast<std::size_t>(k)] =
        acc * std::exp(t * spec.eigenvalues[static_cast<std::size_t>(k)]);
  }
  std::vector<double> out(static_cast<std::size_t>(K));
  for (int c = 0; c < K; ++c) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < K; ++k)
      acc += vhat[static_cast<std::size_t>(k)] *
             std::conj(roots[static_cast<std::size_t>((static_cast<long long>(k) * c) % K)]);
    acc /= static_cast<double>(K);
    if (std::abs(acc.imag()) > 1e-10)
      throw SpectralError("exp_action: imaginary residue above 1e-10");
    out[static_cast<std::size_t>(c)] = acc.real();
  }
  return out;
}

/// Coupling-style lower bound on the spectral gap of a generator:
/// the minimum over ordered state pairs x != y of
/// Q(x,y) + Q(y,x) + sum_{s != x,y} min(Q(x,s), Q(y,s)).
inline double cloez_lambda(const Matrix& Q) {
  if (Q.rows() != Q.cols() || Q.rows() < 2)
    throw std::invalid_argument("cloez_lambda: need a square matrix, n >= 2");
  const Eigen::Index n = Q.rows();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (x == y) continue;
      double val = Q(x, y) + Q(y, x);
      for (Eigen::Index s = 0; s < n; ++s) {
        if (s == x || s == y) continue;
        val += std::min(Q(x, s), Q(y, s));
      }
      best = std::min(best, val);
    }
  }
  return best;
}

inline double cloez_lambda(const CirculantMatrix& C) { return cloez_lambda(C.dense()); }

}  // namespace cyclefv
