#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "circulant.hpp"
#include "core_model.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace cyclefv {

/// Instance exceeds an enumeration or dense-solve budget.
struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough replicas, batches, or samples for the requested estimator.
struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

/// All occupation vectors with K sites and N particles, in lexicographic
/// order. Cardinality is binomial(K+N-1, N).
struct StateSpace {
  int K;
  std::uint64_t N;
  std::vector<Configuration> states;

  std::size_t size() const { return states.size(); }

  /// Ordinal of a configuration; the ordering is lexicographic so a binary
  /// search suffices.
  std::size_t index_of(const Configuration& c) const {
    const auto it = std::lower_bound(states.begin(), states.end(), c);
    if (it == states.end() || !(*it == c))
      throw std::invalid_argument("StateSpace::index_of: configuration not in space");
    return static_cast<std::size_t>(it - states.begin());
  }
};

/// binomial(n, k) in floating point, for budget guards.
inline double binomial_approx(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i)
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

inline StateSpace enumerate_states(int K, std::uint64_t N) {
  if (K < 3) throw std::invalid_argument("enumerate_states: K must be >= 3");
  if (N < 2) throw std::invalid_argument("enumerate_states: N must be >= 2");
  const double card = binomial_approx(static_cast<std::uint64_t>(K) + N - 1, N);
  if (card > 1e7)
    throw TooLarge("enumerate_states: " + std::to_string(card) + " states exceed the 1e7 guard");
  StateSpace space{K, N, {}};
  space.states.reserve(static_cast<std::size_t>(card + 0.5));
  std::vector<std::uint64_t> cur(static_cast<std::size_t>(K), 0);
  // lexicographic generation: fill site by site, last site takes the rest
  auto rec = [&](auto&& self, int site, std::uint64_t left) -> void {
    if (site == K - 1) {
      cur[static_cast<std::size_t>(site)] = left;
      space.states.emplace_back(cur);
      return;
    }
    for (std::uint64_t c = 0; c <= left; ++c) {
      cur[static_cast<std::size_t>(site)] = c;
      self(self, site + 1, left - c);
    }
  };
  rec(rec, 0, N);
  return space;
}

/// Sparse generator of the N-particle chain over StateSpace ordinals, in
/// compressed row form. Rows sum to zero; parallel edges (one target reached
/// by several single-particle moves) are accumulated.
struct FullGenerator {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  Matrix dense() const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t e = row_ptr[r]; e < row_ptr[r + 1]; ++e)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col[e])) = val[e];
    return out;
  }

  /// Looks up entry (r, c); zero when absent.
  double entry(std::size_t r, std::size_t c) const {
    const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
    const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return val[static_cast<std::size_t>(it - col.begin())];
  }
};

/// Rate of the single-particle move i -> j out of eta:
/// eta(i) [ 1_{j=i+1} + theta 1_{j=i-1} + p eta(j)/(N-1) ].
/// The redistribution factor divides eta(j) by N-1 before multiplying, so
/// that structurally exact rates (eta(j) = N-1) stay exact in floating point.
inline double move_rate(const ModelParams& params, const Configuration& eta,
                        long long i, long long j) {
  const int K = params.K;
  const int ii = mod_site(i, K);
  const int jj = mod_site(j, K);
  if (ii == jj) return 0.0;
  double unit = params.p * (static_cast<double>(eta(jj)) / (static_cast<double>(eta.N) - 1.0));
  if (jj == mod_site(ii + 1, K)) unit += 1.0;
  if (jj == mod_site(ii - 1, K)) unit += params.theta;
  return static_cast<double>(eta(ii)) * unit;
}

inline FullGenerator full_generator(const ModelParams& params, const StateSpace& space) {
  if (params.K != space.K)
    throw std::invalid_argument("full_generator: params and space disagree on K");
  FullGenerator gen;
  gen.n = space.size();
  gen.row_ptr.assign(gen.n + 1, 0);
  std::map<std::size_t, double> row;
  for (std::size_t si = 0; si < space.size(); ++si) {
    const Configuration& eta = space.states[si];
    row.clear();
    double total = 0.0;
    for (int i = 0; i < space.K; ++i) {
      if (eta.counts[static_cast<std::size_t>(i)] == 0) continue;
      for (int j = 0; j < space.K; ++j) {
        if (j == i) continue;
        const double rate = move_rate(params, eta, i, j);
        if (rate == 0.0) continue;
        row[space.index_of(move_particle(eta, i, j))] += rate;
        total += rate;
      }
    }
    row[si] -= total;
    for (const auto& [c, v] : row) {
      gen.col.push_back(c);
      gen.val.push_back(v);
    }
    gen.row_ptr[si + 1] = gen.col.size();
  }
  return gen;
}

/// Exact stationary distribution of the particle chain: the unique nu with
/// nu L = 0, sum 1. Dense LU on the transposed system with one equation
/// replaced by normalization; residual certified below 1e-11.
inline std::vector<double> stationary_distribution_exact(const FullGenerator& gen) {
  if (gen.n > 20000)
    throw TooLarge("stationary_distribution_exact: beyond the 20000-state dense budget");
  const Vector nu = stationary_row(gen.dense());
  // residual ||nu L||_inf through the sparse rows
  std::vector<double> res(gen.n, 0.0);
  for (std::size_t r = 0; r < gen.n; ++r)
    for (std::size_t e = gen.row_ptr[r]; e < gen.row_ptr[r + 1]; ++e)
      res[gen.col[e]] += nu(static_cast<Eigen::Index>(r)) * gen.val[e];
  double worst = 0.0;
  for (double x : res) worst = std::max(worst, std::abs(x));
  if (worst > 1e-11)
    throw SolveError("stationary_distribution_exact: residual " + std::to_string(worst));
  std::vector<double> out(gen.n);
  for (std::size_t i = 0; i < gen.n; ++i) {
    out[i] = nu(static_cast<Eigen::Index>(i));
    if (!(out[i] > 0.0))
      throw SolveError("stationary_distribution_exact: nonpositive mass");
  }
  return out;
}

/// Transient law mu_0 e^{tL} by uniformization: P = I + L/Lambda and
/// Poisson(Lambda t) mixture, truncated once the remaining tail is below
/// 1e-13 in probability, which certifies l1 error below 1e-12.
inline std::vector<double> transient_distribution(const FullGenerator& gen,
                                                  const std::vector<double>& mu0,
                                                  double t) {
  if (mu0.size() != gen.n)
    throw std::invalid_argument("transient_distribution: size mismatch");
  if (!(t >= 0.0)) throw std::invalid_argument("transient_distribution: t must be >= 0");
  double lambda = 0.0;
  for (std::size_t r = 0; r < gen.n; ++r)
    for (std::size_t e = gen.row_ptr[r]; e < gen.row_ptr[r + 1]; ++e)
      if (gen.col[e] == r) lambda = std::max(lambda, -gen.val[e]);
  if (lambda * t > 5000.0)
    throw TooLarge("transient_distribution: Lambda*t too large for plain uniformization");
  if (lambda * t == 0.0) return mu0;
  // Poisson weights are carried without the e^{-mass} prefactor, which would
  // underflow beyond mass ~ 700: weight = mass^n / n! up to power-of-two
  // rescales (exact), and the result is normalized by the weight total at the
  // end. Past the mode the terms decay at least geometrically with ratio
  // mass/(n+1), which bounds the discarded tail.
  const double mass = lambda * t;
  std::vector<double> v = mu0;  // current Poisson term, v P^n
  std::vector<double> acc = mu0;
  double weight = 1.0;
  double total = 1.0;
  std::vector<double> next(gen.n);
  for (std::uint64_t n = 1;; ++n) {
    // next = v P = v + (v L) / Lambda
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t r = 0; r < gen.n; ++r) {
      const double vr = v[r];
      if (vr == 0.0) continue;
      for (std::size_t e = gen.row_ptr[r]; e < gen.row_ptr[r + 1]; ++e)
        next[gen.col[e]] += vr * gen.val[e] / lambda;
    }
    for (std::size_t i = 0; i < gen.n; ++i) next[i] += v[i];
    v.swap(next);
    weight *= mass / static_cast<double>(n);
    total += weight;
    for (std::size_t i = 0; i < gen.n; ++i) acc[i] += weight * v[i];
    if (static_cast<double>(n) >= mass) {
      const double r = mass / static_cast<double>(n + 1);
      if (weight * r <= (1.0 - r) * 1e-13 * total) break;
    }
    if (weight > 8e270) {
      const double down = std::ldexp(1.0, -900);
      weight *= down;
      total *= down;
      for (double& x : acc) x *= down;
    }
    if (n > static_cast<std::uint64_t>(mass) + 2000)
      throw SolveError("transient_distribution: Poisson tail failed to close");
  }
  for (double& x : acc) x /= total;
  return acc;
}

/// E[eta(k)/N] under a distribution over the state space.
inline double mean_occupancy(const StateSpace& space, const std::vector<double>& dist,
                             long long k) {
  const int kk = mod_site(k, space.K);
  double acc = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i)
    acc += dist[i] * static_cast<double>(space.states[i].counts[static_cast<std::size_t>(kk)]);
  return acc / static_cast<double>(space.N);
}

/// E[eta(k) eta(l)] / N^2 under a distribution over the state space.
inline double second_moment(const StateSpace& space, const std::vector<double>& dist,
                            long long k, long long l) {
  const int kk = mod_site(k, space.K);
  const int ll = mod_site(l, space.K);
  double acc = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& c = space.states[i].counts;
    acc += dist[i] * static_cast<double>(c[static_cast<std::size_t>(kk)]) *
           static_cast<double>(c[static_cast<std::size_t>(ll)]);
  }
  return acc / (static_cast<double>(space.N) * static_cast<double>(space.N));
}

/// Quantifies how far the chain is from reversible.
/// kolmogorov_violation: gap between the forward and backward rate products
/// around the canonical 3-cycle (N,0,0,...) -> (N-1,1,0,...) -> (N-1,0,1,...),
/// which is (p+1)N vs N theta^2 (p+theta) when K = 3.
/// detailed_balance_violation: max over ordered state pairs of
/// |nu(a) L(a,b) - nu(b) L(b,a)| under the exact stationary law.
struct ReversibilityReport {
  double kolmogorov_violation;
  double detailed_balance_violation;
};

inline ReversibilityReport reversibility_report(const ModelParams& params, std::uint64_t N) {
  const auto space = enumerate_states(params.K, N);
  const auto gen = full_generator(params, space);
  const auto nu = stationary_distribution_exact(gen);

  const auto eta1 = all_at_site(params.K, N, 0);
  const auto eta2 = move_particle(eta1, 0, 1);
  const auto eta3 = move_particle(eta1, 0, 2);
  const std::size_t i1 = space.index_of(eta1);
  const std::size_t i2 = space.index_of(eta2);
  const std::size_t i3 = space.index_of(eta3);
  const double forward = gen.entry(i1, i2) * gen.entry(i2, i3) * gen.entry(i3, i1);
  const double backward = gen.entry(i1, i3) * gen.entry(i3, i2) * gen.entry(i2, i1);

  double worst = 0.0;
  for (std::size_t r = 0; r < gen.n; ++r) {
    for (std::size_t e = gen.row_ptr[r]; e < gen.row_ptr[r + 1]; ++e) {
      const std::size_t c = gen.col[e];
      if (c == r) continue;
      worst = std::max(worst, std::abs(nu[r] * gen.val[e] - nu[c] * gen.entry(c, r)));
    }
  }
  return {std::abs(forward - backward), worst};
}

/// Which closed-form generator action to evaluate: the single-site function
/// f_k(eta) = eta(k), the squared site f_{k,k}, the adjacent product
/// f_{k,k+1}, or the separated product f_{k,l} with cyclic distance >= 2.
enum class MomentKind { f_k, f_kk, f_k_kplus1, f_kl };

/// Closed form of (L f)(eta) for the four product functions above. Matches
/// the brute-force generator row applied to f on every state.
inline double generator_moment(const ModelParams& params, const Configuration& eta,
                               MomentKind kind, long long k, long long l = 0) {
  const double theta = params.theta;
  const double p = params.p;
  const double nm1 = static_cast<double>(eta.N) - 1.0;
  const auto e = [&eta](long long s) { return static_cast<double>(eta(s)); };
  switch (kind) {
    case MomentKind::f_k:
      return e(k - 1) - (1.0 + theta) * e(k) + theta * e(k + 1);
    case MomentKind::f_kk:
      return 2.0 * (e(k - 1) * e(k) - (1.0 + theta + p / nm1) * e(k) * e(k) +
                    theta * e(k) * e(k + 1)) +
             e(k - 1) +
             (1.0 + theta + 2.0 * p * static_cast<double>(eta.N) / nm1) * e(k) +
             theta * e(k + 1);
    case MomentKind::f_k_kplus1:
      return -2.0 * (1.0 + theta + p / nm1) * e(k) * e(k + 1) +
             e(k - 1) * e(k + 1) + theta * e(k + 1) * e(k + 1) + e(k) * e(k) +
             theta * e(k) * e(k + 2) - e(k) - theta * e(k + 1);
    case MomentKind::f_kl: {
      if (cyclic_distance(k, l, eta.K()) < 2)
        throw DomainError("generator_moment: f_kl needs cyclic separation >= 2");
      return -2.0 * (1.0 + theta + p / nm1) * e(k) * e(l) + e(k - 1) * e(l) +
             theta * e(k + 1) * e(l) + e(k) * e(l - 1) + theta * e(k) * e(l + 1);
    }
  }
  throw std::logic_error("generator_moment: unreachable");
}

/// Brute-force (L f)(eta) = sum_{eta'} L(eta, eta') f(eta') for the same
/// product functions, straight from the move rates. Oracle for the closed
/// forms; O(K^2) per call.
inline double generator_moment_bruteforce(const ModelParams& params, const Configuration& eta,
                                          MomentKind kind, long long k, long long l = 0) {
  auto f = [&](const Configuration& c) -> double {
    switch (kind) {
      case MomentKind::f_k: return static_cast<double>(c(k));
      case MomentKind::f_kk: return static_cast<double>(c(k)) * static_cast<double>(c(k));
      case MomentKind::f_k_kplus1:
        return static_cast<double>(c(k)) * static_cast<double>(c(k + 1));
      case MomentKind::f_kl:
        return static_cast<double>(c(k)) * static_cast<double>(c(l));
    }
    throw std::logic_error("generator_moment_bruteforce: unreachable");
  };
  if (kind == MomentKind::f_kl && cyclic_distance(k, l, eta.K()) < 2)
    throw DomainError("generator_moment_bruteforce: f_kl needs cyclic separation >= 2");
  const double f0 = f(eta);
  double acc = 0.0;
  for (int i = 0; i < eta.K(); ++i) {
    if (eta.counts[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < eta.K(); ++j) {
      if (j == i) continue;
      const double rate = move_rate(params, eta, i, j);
      if (rate == 0.0) continue;
      acc += rate * (f(move_particle(eta, i, j)) - f0);
    }
  }
  return acc;
}

/// Sampled trajectories of the particle chain. Identical (seed, parameters,
/// sample grid) reproduce records bit for bit, independent of thread count.
struct TrajectoryEnsemble {
  int K = 0;
  std::uint64_t N = 0;
  std::uint64_t seed = 0;
  std::vector<double> sample_times;
  std::vector<std::vector<Configuration>> records;  // [replica][time index]

  std::size_t replicas() const { return records.size(); }
};

namespace detail {

/// One replica of the jump chain. Site i fires at effective rate
/// eta(i) [ (1+theta) + p (N - eta(i)) / (N-1) ]; self-landing
/// redistribution moves are thinned out of the rate rather than sampled.
inline std::vector<Configuration> simulate_one(const ModelParams& params,
                                               const Configuration& eta0,
                                               const std::vector<double>& times,
                                               Rng rng) {
  const int K = params.K;
  const double n = static_cast<double>(eta0.N);
  std::vector<std::uint64_t> cnt = eta0.counts;
  std::vector<double> rate(static_cast<std::size_t>(K));
  std::vector<Configuration> out;
  out.reserve(times.size());
  double t = 0.0;
  std::size_t idx = 0;
  while (idx < times.size()) {
    double total = 0.0;
    for (int i = 0; i < K; ++i) {
      const double c = static_cast<double>(cnt[static_cast<std::size_t>(i)]);
      rate[static_cast<std::size_t>(i)] =
          c * ((1.0 + params.theta) + params.p * (n - c) / (n - 1.0));
      total += rate[static_cast<std::size_t>(i)];
    }
    const double t_next = t + rng.next_exponential(total);
    while (idx < times.size() && times[idx] < t_next) {
      out.emplace_back(cnt);
      ++idx;
    }
    if (idx >= times.size()) break;
    t = t_next;
    // site holding the jumping particle
    double u = rng.next_unit() * total;
    int i = K - 1;
    for (int s = 0; s < K; ++s) {
      if (u < rate[static_cast<std::size_t>(s)] && cnt[static_cast<std::size_t>(s)] > 0) {
        i = s;
        break;
      }
      u -= rate[static_cast<std::size_t>(s)];
    }
    while (cnt[static_cast<std::size_t>(i)] == 0) i = mod_site(i - 1, K);
    // move type: clockwise, anti-clockwise, or redistribution
    const double ci = static_cast<double>(cnt[static_cast<std::size_t>(i)]);
    const double per_particle = (1.0 + params.theta) + params.p * (n - ci) / (n - 1.0);
    const double x = rng.next_unit() * per_particle;
    int j;
    if (x < 1.0) {
      j = mod_site(i + 1, K);
    } else if (x < 1.0 + params.theta) {
      j = mod_site(i - 1, K);
    } else {
      // uniform over the N - eta(i) particles elsewhere
      double v = rng.next_unit() * (n - ci);
      j = -1;
      for (int s = 0; s < K; ++s) {
        if (s == i) continue;
        const double cs = static_cast<double>(cnt[static_cast<std::size_t>(s)]);
        if (v < cs && cs > 0.0) {
          j = s;
          break;
        }
        v -= cs;
      }
      if (j < 0) {
        j = mod_site(i - 1, K);
        while (cnt[static_cast<std::size_t>(j)] == 0 || j == i) j = mod_site(j - 1, K);
      }
    }
    cnt[static_cast<std::size_t>(i)] -= 1;
    cnt[static_cast<std::size_t>(j)] += 1;
  }
  return out;
}

}  // namespace detail

/// Simulates `replicas` independent copies started from eta0, recording the
/// configuration at each sample time. Replica r always draws from the stream
/// (seed, r), so the result is identical for any thread count.
inline TrajectoryEnsemble simulate_ensemble(const ModelParams& params,
                                            const Configuration& eta0,
                                            const std::vector<double>& sample_times,
                                            std::size_t replicas, std::uint64_t seed,
                                            unsigned threads = 1) {
  if (params.K != eta0.K())
    throw std::invalid_argument("simulate_ensemble: params and eta0 disagree on K");
  if (replicas == 0)
    throw std::invalid_argument("simulate_ensemble: need at least one replica");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0) || (i > 0 && sample_times[i] < sample_times[i - 1]))
      throw std::invalid_argument("simulate_ensemble: sample times must be sorted, >= 0");
  }
  TrajectoryEnsemble ens;
  ens.K = params.K;
  ens.N = eta0.N;
  ens.seed = seed;
  ens.sample_times = sample_times;
  ens.records.resize(replicas);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(replicas)));
  if (workers == 1) {
    for (std::size_t r = 0; r < replicas; ++r)
      ens.records[r] = detail::simulate_one(params, eta0, sample_times, Rng(seed, r));
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t r = w; r < replicas; r += workers)
          ens.records[r] = detail::simulate_one(params, eta0, sample_times, Rng(seed, r));
      });
    }
    for (auto& th : pool) th.join();
  }
  return ens;
}

/// Single-replica convenience wrapper.
inline TrajectoryEnsemble simulate(const ModelParams& params, const Configuration& eta0,
                                   const std::vector<double>& sample_times,
                                   std::uint64_t seed) {
  return simulate_ensemble(params, eta0, sample_times, 1, seed);
}

struct MomentEstimate {
  double mean_k;
  double cov_kl;
  double std_error;       // standard error of cov_kl
  double mean_std_error;  // standard error of mean_k
};

/// Across-replica estimator at one sample time: unbiased sample mean of
/// eta(k)/N and sample covariance of (eta(k)/N, eta(l)/N), with standard
/// errors from the replica spread.
inline MomentEstimate estimate_moments(const TrajectoryEnsemble& ens, long long k,
                                       long long l, std::size_t time_index) {
  const std::size_t R = ens.replicas();
  if (R < 2) throw InsufficientData("estimate_moments: need >= 2 replicas");
  if (time_index >= ens.sample_times.size())
    throw std::invalid_argument("estimate_moments: time index out of range");
  const double n = static_cast<double>(ens.N);
  std::vector<double> xs(R), ys(R);
  for (std::size_t r = 0; r < R; ++r) {
    const Configuration& c = ens.records[r][time_index];
    xs[r] = static_cast<double>(c(k)) / n;
    ys[r] = static_cast<double>(c(l)) / n;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    mx += xs[r];
    my += ys[r];
  }
  mx /= static_cast<double>(R);
  my /= static_cast<double>(R);
  double cov = 0.0, varx = 0.0, varz = 0.0;
  std::vector<double> zs(R);
  for (std::size_t r = 0; r < R; ++r) {
    zs[r] = (xs[r] - mx) * (ys[r] - my);
    cov += zs[r];
    varx += (xs[r] - mx) * (xs[r] - mx);
  }
  cov /= static_cast<double>(R - 1);
  varx /= static_cast<double>(R - 1);
  const double mz = cov * static_cast<double>(R - 1) / static_cast<double>(R);
  for (std::size_t r = 0; r < R; ++r) varz += (zs[r] - mz) * (zs[r] - mz);
  varz /= static_cast<double>(R - 1);
  return {mx, cov, std::sqrt(varz / static_cast<double>(R)),
          std::sqrt(varx / static_cast<double>(R))};
}

/// Batch-means estimator over one long replica: sample indices
/// [first_index, end) are split into n_batches contiguous batches, each batch
/// yields its own mean and covariance, and the spread across batches gives
/// the standard errors. Correlation within a batch is absorbed by the batch
/// length; choose the sampling stride and batch count accordingly.
inline MomentEstimate estimate_moments_batched(const TrajectoryEnsemble& ens, long long k,
                                               long long l, std::size_t first_index,
                                               std::size_t n_batches) {
  if (ens.replicas() != 1)
    throw std::invalid_argument("estimate_moments_batched: expects a single replica");
  const auto& rec = ens.records[0];
  if (first_index >= rec.size())
    throw InsufficientData("estimate_moments_batched: burn-in swallows all samples");
  const std::size_t usable = rec.size() - first_index;
  if (n_batches < 2)
    throw std::invalid_argument("estimate_moments_batched: need >= 2 batches");
  if (usable < 2 * n_batches)
    throw InsufficientData("estimate_moments_batched: need >= 2 samples per batch");
  const std::size_t blen = usable / n_batches;
  const double n = static_cast<double>(ens.N);
  std::vector<double> bc(n_batches), bx(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double mx = 0.0, my = 0.0, mxy = 0.0;
    for (std::size_t s = 0; s < blen; ++s) {
      const Configuration& c = rec[first_index + b * blen + s];
      const double x = static_cast<double>(c(k)) / n;
      const double y = static_cast<double>(c(l)) / n;
      mx += x;
      my += y;
      mxy += x * y;
    }
    mx /= static_cast<double>(blen);
    my /= static_cast<double>(blen);
    mxy /= static_cast<double>(blen);
    bx[b] = mx;
    bc[b] = mxy - mx * my;
  }
  double mean_c = 0.0, mean_x = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    mean_c += bc[b];
    mean_x += bx[b];
  }
  mean_c /= static_cast<double>(n_batches);
  mean_x /= static_cast<double>(n_batches);
  double vc = 0.0, vx = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    vc += (bc[b] - mean_c) * (bc[b] - mean_c);
    vx += (bx[b] - mean_x) * (bx[b] - mean_x);
  }
  vc /= static_cast<double>(n_batches - 1);
  vx /= static_cast<double>(n_batches - 1);
  return {mean_x, mean_c, std::sqrt(vc / static_cast<double>(n_batches)),
          std::sqrt(vx / static_cast<double>(n_batches))};
}

}  // namespace cyclefv
