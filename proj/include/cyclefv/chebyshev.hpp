#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core_model.hpp"

namespace cyclefv {

/// A polynomial recurrence escaped the representable range (|value| > 1e300).
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// Two classical Chebyshev families plus the four combinations that appear as
/// numerators and denominators of the stationary pair-correlation profile.
/// ChebyT, ChebyU satisfy p_{n+1} = 2x p_n - p_{n-1}; the other four satisfy
/// p_{n+1} = x p_n - p_{n-1}.
enum class PolyFamily { ChebyT, ChebyU, Neven, Deven, Nodd, Dodd };

namespace detail {

struct RecurrenceSetup {
  double p0;
  double p1;
  bool doubled_x;  // multiplier is 2x instead of x
};

inline RecurrenceSetup recurrence_setup(PolyFamily family, double x) {
  switch (family) {
    case PolyFamily::ChebyT: return {1.0, x, true};
    case PolyFamily::ChebyU: return {1.0, 2.0 * x, true};
    case PolyFamily::Neven: return {2.0, x, false};
    case PolyFamily::Deven: return {0.0, x + 2.0, false};
    case PolyFamily::Nodd: return {1.0, x - 1.0, false};
    case PolyFamily::Dodd: return {1.0, x + 1.0, false};
  }
  throw std::logic_error("recurrence_setup: unreachable");
}

}  // namespace detail

/// Evaluates the degree-n member of a family at x by forward recurrence.
/// n >= 0 for every family; ChebyU additionally accepts n = -1 (value 0).
/// Throws OverflowError once any iterate exceeds 1e300 in magnitude.
inline double eval(PolyFamily family, long long n, double x) {
  if (n == -1 && family == PolyFamily::ChebyU) return 0.0;
  if (n < 0)
    throw DomainError("eval: degree must be >= 0 (or -1 for ChebyU)");
  const auto setup = detail::recurrence_setup(family, x);
  const double c = setup.doubled_x ? 2.0 * x : x;
  double prev = setup.p0;
  double cur = setup.p1;
  if (n == 0) return prev;
  for (long long i = 1; i < n; ++i) {
    const double next = c * cur - prev;
    if (std::abs(next) > 1e300)
      throw OverflowError("eval: recurrence exceeded 1e300 at degree " +
                          std::to_string(i + 1));
    prev = cur;
    cur = next;
  }
  if (std::abs(cur) > 1e300)
    throw OverflowError("eval: value exceeds 1e300");
  return cur;
}

namespace detail {

inline double rel_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

}  // namespace detail

/// Cross-checks the four closed-form identities tying the combined families
/// to ChebyT/ChebyU at the half argument:
///   Neven_n(x) = 2 T_n(x/2)
///   Deven_n(x) = (x+2) U_{n-1}(x/2)
///   Nodd_n(x)  = U_n(x/2) - U_{n-1}(x/2)
///   Dodd_n(x)  = U_n(x/2) + U_{n-1}(x/2)
/// Returns the largest residual, relative to max(1, |lhs|).
inline double chebyshev_identity_check(long long n, double x) {
  if (n < 0) throw DomainError("chebyshev_identity_check: n must be >= 0");
  const double h = 0.5 * x;
  const double un = eval(PolyFamily::ChebyU, n, h);
  const double unm1 = eval(PolyFamily::ChebyU, n - 1, h);
  double worst = detail::rel_residual(eval(PolyFamily::Neven, n, x),
                                      2.0 * eval(PolyFamily::ChebyT, n, h));
  worst = std::max(worst, detail::rel_residual(eval(PolyFamily::Deven, n, x),
                                               (x + 2.0) * unm1));
  worst = std::max(worst, detail::rel_residual(eval(PolyFamily::Nodd, n, x), un - unm1));
  worst = std::max(worst, detail::rel_residual(eval(PolyFamily::Dodd, n, x), un + unm1));
  return worst;
}

/// Checks the relation 2 N_n(x) - x N_{n+1}(x) + (x-2) D_{n+1}(x) = 0 for the
/// even and the odd numerator/denominator pair. Returns the larger residual,
/// relative to max(1, largest participating term).
inline double three_term_relation_check(long long n, double x) {
  if (n < 0) throw DomainError("three_term_relation_check: n must be >= 0");
  auto residual = [x, n](PolyFamily num, PolyFamily den) {
    const double a = 2.0 * eval(num, n, x);
    const double b = x * eval(num, n + 1, x);
    const double c = (x - 2.0) * eval(den, n + 1, x);
    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    return std::abs(a - b + c) / scale;
  };
  return std::max(residual(PolyFamily::Neven, PolyFamily::Deven),
                  residual(PolyFamily::Nodd, PolyFamily::Dodd));
}

/// First three Taylor coefficients of the combined families at x = 2, i.e.
/// p(2 + e) = a0 + a1 e + a2 e^2 + O(e^3). These drive the large-N expansion
/// of the pair-correlation profile, where the recurrence argument tends to 2.
/// Only the four combined families have a closed form here.
inline std::array<double, 3> taylor_at_two(PolyFamily family, long long n) {
  if (n < 0) throw DomainError("taylor_at_two: n must be >= 0");
  const double d = static_cast<double>(n);
  const double d2 = d * d;
  const double d3 = d2 * d;
  const double d4 = d2 * d2;
  const double d5 = d4 * d;
  switch (family) {
    case PolyFamily::Neven:
      return {2.0, d2, (d4 - d2) / 12.0};
    case PolyFamily::Deven:
      return {4.0 * d, (2.0 * d3 + d) / 3.0, (d5 - d) / 30.0};
    case PolyFamily::Nodd:
      return {1.0, (d2 + d) / 2.0, (d4 + 2.0 * d3 - d2 - 2.0 * d) / 24.0};
    case PolyFamily::Dodd:
      return {2.0 * d + 1.0, (2.0 * d3 + 3.0 * d2 + d) / 6.0,
              (2.0 * d5 + 5.0 * d4 - 5.0 * d2 - 2.0 * d) / 120.0};
    case PolyFamily::ChebyT:
    case PolyFamily::ChebyU:
      throw DomainError("taylor_at_two: only the combined families are supported");
  }
  throw std::logic_error("taylor_at_two: unreachable");
}

}  // namespace cyclefv
