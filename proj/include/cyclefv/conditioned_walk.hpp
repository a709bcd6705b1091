#pragma once

#include <cmath>
#include <vector>

#include "circulant.hpp"
#include "core_model.hpp"

namespace cyclefv {

/// Law at time t of one walker on the cycle conditioned on survival, started
/// from nu. Uniform killing cancels from the conditioning, so this is the
/// plain heat flow nu e^{tQ}; it is in particular independent of p.
inline ProbVector conditioned_law(const ModelParams& params, const ProbVector& nu,
                                  double t) {
  if (nu.K() != params.K)
    throw std::invalid_argument("conditioned_law: size mismatch");
  return ProbVector::normalized(exp_action(build_Q(params), t, nu.weights));
}

/// The quasi-stationary profile of the killed walker: uniform on the cycle,
/// for every theta and p.
inline ProbVector qsd(const ModelParams& params) {
  return ProbVector::uniform(params.K);
}

struct SandwichBounds {
  double lower;
  double actual;
  double upper;
};

/// Exponential contraction bracket in l2 between two conditioned laws:
///   e^{-alpha_K t} ||nu - mu||_2 <= ||nu e^{tQ} - mu e^{tQ}||_2
///                                <= e^{-rho_K t} ||nu - mu||_2.
inline SandwichBounds l2_sandwich(const ModelParams& params, const ProbVector& nu,
                                  const ProbVector& mu, double t) {
  const auto sc = spectral_constants(params);
  const double d0 = l2_distance(nu, mu);
  const double dt = l2_distance(conditioned_law(params, nu, t),
                                conditioned_law(params, mu, t));
  return {std::exp(-sc.alpha_K * t) * d0, dt, std::exp(-sc.rho_K * t) * d0};
}

/// Total-variation version of the bracket, obtained from the l2 one through
/// the norm equivalence ||x||_2 <= ||x||_1 <= sqrt(K) ||x||_2:
///   e^{-alpha_K t} d_TV(nu, mu) / sqrt(K) <= d_TV at time t
///                                         <= sqrt(K) e^{-rho_K t} d_TV(nu, mu).
inline SandwichBounds tv_sandwich(const ModelParams& params, const ProbVector& nu,
                                  const ProbVector& mu, double t) {
  const auto sc = spectral_constants(params);
  const double rk = std::sqrt(static_cast<double>(params.K));
  const double d0 = tv_distance(nu, mu);
  const double dt = tv_distance(conditioned_law(params, nu, t),
                                conditioned_law(params, mu, t));
  return {std::exp(-sc.alpha_K * t) * d0 / rk, dt, rk * std::exp(-sc.rho_K * t) * d0};
}

}  // namespace cyclefv
