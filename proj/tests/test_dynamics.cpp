#include <catch2/catch_amalgamated.hpp>
#include <cyclefv/dynamics.hpp>
#include <cyclefv/particle_system.hpp>
#include <cyclefv/verification.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace cyclefv;

TEST_CASE("mean profile starts at the empirical measure and spreads to uniform") {
  const ModelParams params(4, 1.0, 1.0);
  const auto eta0 = all_at_site(4, 5, 2);
  const auto at0 = mean_dynamics(params, eta0, 0.0);
  REQUIRE(std::abs(at0[2] - 1.0) <= 1e-14);
  const auto late = mean_dynamics(params, eta0, 60.0);
  for (int k = 0; k < 4; ++k) REQUIRE(std::abs(late[k] - 0.25) <= 1e-12);
}

TEST_CASE("two-walker operator entries at K = 3, theta = 1") {
  const auto op = q2_operator(ModelParams(3, 1.0, 1.0));
  const Matrix d = op.dense();
  REQUIRE(d.rows() == 9);
  // row (0,0): diagonal -4 and four unit off-diagonal entries
  REQUIRE(d(0, 0) == -4.0);
  REQUIRE(d(0, 3) == 1.0);  // first walker 0 -> 1
  REQUIRE(d(0, 6) == 1.0);  // first walker 0 -> 2
  REQUIRE(d(0, 1) == 1.0);  // second walker 0 -> 1
  REQUIRE(d(0, 2) == 1.0);  // second walker 0 -> 2
  REQUIRE(d.row(0).sum() == 0.0);
  // killed version shifts the diagonal only
  const auto killed = q2_operator_killed(ModelParams(3, 1.0, 1.0), 2);
  REQUIRE(killed.shift == 2.0);
  REQUIRE((killed.dense() - d + 2.0 * Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("row-field action agrees with the flattened dense operator") {
  const auto op = q2_operator_killed(ModelParams(4, 1.7, 0.9), 3);
  const int K = 4;
  Matrix g(K, K);
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < K; ++r) g(k, r) = 0.01 * (k + 1) * (r + 2) - 0.03 * (k == r);
  const Matrix lhs = op.apply_row_field(g);
  Eigen::RowVectorXd flat(K * K);
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < K; ++r) flat(k * K + r) = g(k, r);
  const Eigen::RowVectorXd prod = flat * op.dense();
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < K; ++r)
      REQUIRE(std::abs(lhs(k, r) - prod(k * K + r)) <= 1e-13);
}

TEST_CASE("spectral exponential matches a dense matrix exponential") {
  const auto op = q2_operator_killed(ModelParams(3, 0.6, 1.2), 4);
  const double t = 0.8;
  const Matrix direct = (t * op.dense()).exp();
  REQUIRE((op.exponential_dense(t) - direct).cwiseAbs().maxCoeff() <= 1e-12);
  REQUIRE((op.exponential_dense(0.0) - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() <=
          1e-14);
}

TEST_CASE("source term: frozen values") {
  const ModelParams params(3, 1.0, 1.0);
  // concentrated mean profile
  const auto w0 = drift_term(params, 2, ProbVector::delta(3, 0)).w;
  REQUIRE(w0(0, 0) == 1.0);
  // uniform profile: diagonal value 10/9, zero row sums
  const auto wi = drift_term_infinity(params, 2).w;
  REQUIRE(std::abs(wi(0, 0) - 10.0 / 9.0) <= 1e-15);
  for (int k = 0; k < 3; ++k) REQUIRE(std::abs(wi.row(k).sum()) <= 1e-15);
}

TEST_CASE("source term at the uniform profile has zero row sums for all K") {
  for (int K = 3; K <= 8; ++K) {
    const auto w = drift_term_infinity(ModelParams(K, 1.8, 0.6), 5).w;
    for (int k = 0; k < K; ++k) REQUIRE(std::abs(w.row(k).sum()) <= 1e-14);
  }
}

TEST_CASE("stationary field solve matches the covariance profile") {
  const ModelParams params(3, 1.0, 1.0);
  const auto gi = g_infinity(params, 2).g;
  REQUIRE(std::abs(gi(0, 0) - 5.0 / 36.0) <= 1e-12);
  REQUIRE(std::abs(gi(0, 1) + 5.0 / 72.0) <= 1e-12);
  REQUIRE(std::abs(gi(2, 1) + 5.0 / 72.0) <= 1e-12);
  const auto cov = stationary_covariances(params, 2);
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 3; ++r)
      REQUIRE(std::abs(gi(k, r) - cov[static_cast<std::size_t>(mod_site(r - k, 3))]) <=
              1e-12);
}

TEST_CASE("integration validates the time grid") {
  const ModelParams params(3, 1.0, 1.0);
  const auto eta0 = all_at_site(3, 2, 0);
  REQUIRE_THROWS_AS(integrate_g(params, 2, eta0, {0.5, 1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(integrate_g(params, 2, eta0, {0.0, 1.0, 1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(integrate_g(params, 2, eta0, {}), std::invalid_argument);
}

TEST_CASE("integrated field matches the full-chain oracle") {
  const ModelParams params(3, 1.0, 1.0);
  const std::uint64_t N = 2;
  const auto space = enumerate_states(3, N);
  const auto gen = full_generator(params, space);
  const auto eta0 = all_at_site(3, N, 0);
  double emb = 0.0;
  const auto fields = integrate_g(params, N, eta0, {0.0, 0.5, 2.0}, 1e-10, &emb);
  REQUIRE(fields[0].g.cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const Matrix exact =
        detail::exact_covariance_field(params, space, gen, eta0, fields[i].t);
    REQUIRE((fields[i].g - exact).cwiseAbs().maxCoeff() <= 1e-8);
  }
  REQUIRE(emb <= 1e-10);
}

TEST_CASE("integrated field relaxes to the stationary field") {
  const ModelParams params(3, 1.0, 1.0);
  const std::uint64_t N = 3;
  const auto bc = bound_constants(params, N);
  const double rho = spectral_constants(params).rho_K;
  const double horizon = 100.0 / std::min(rho, bc.p_N);
  const auto fields = integrate_g(params, N, all_at_site(3, N, 0), {0.0, horizon});
  const auto gi = g_infinity(params, N).g;
  REQUIRE((fields[1].g - gi).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("bound constants: regression-locked values") {
  const auto a = bound_constants(ModelParams(3, 1.0, 1.0), 2);
  REQUIRE(a.p_N == 2.0);
  REQUIRE(std::abs(a.C_KN - 5.1773242158072694) <= 1e-15);
  REQUIRE(std::abs(a.D_K - 6.1773242158072694) <= 1e-15);
  REQUIRE(std::abs(a.E_K - 0.29629629629629628) <= 1e-15);
  const auto b = bound_constants(ModelParams(4, 1.0, 1.0), 2);
  REQUIRE(b.p_N == 2.0);
  REQUIRE(std::abs(b.C_KN - 5.1650635094610964) <= 1e-15);
  REQUIRE(std::abs(b.D_K - 6.1650635094610964) <= 1e-15);
  REQUIRE(std::abs(b.E_K - 0.265625) <= 1e-15);
  const auto c = bound_constants(ModelParams(5, 2.0, 0.5), 3);
  REQUIRE(std::abs(c.p_N - 0.5) <= 1e-15);
  REQUIRE(std::abs(c.C_KN - 2.7033229812666164) <= 1e-15);
  REQUIRE(std::abs(c.D_K - 7.0733126291998989) <= 1e-15);
  REQUIRE(std::abs(c.E_K - 0.21333333333333335) <= 1e-15);
  const auto d = bound_constants(ModelParams(8, 0.7, 2.3), 10);
  REQUIRE(std::abs(d.p_N - 0.51111111111111107) <= 1e-15);
  REQUIRE(std::abs(d.C_KN - 0.92897436045986526) <= 1e-15);
  REQUIRE(std::abs(d.D_K - 8.2407692441387859) <= 1e-15);
  REQUIRE(std::abs(d.E_K - 0.20588235294117646) <= 1e-15);
  const auto e = bound_constants(ModelParams(12, 1.0, 1.0), 100);
  REQUIRE(std::abs(e.p_N - 0.020202020202020204) <= 1e-15);
  REQUIRE(std::abs(e.C_KN - 0.061155812122613458) <= 1e-15);
  REQUIRE(std::abs(e.D_K - 6.0744254001387326) <= 1e-15);
  REQUIRE(std::abs(e.E_K - 0.15914351851851855) <= 1e-15);
}

TEST_CASE("variance bound is continuous at the equal-rate point") {
  // rho_K = 2 at K = 4, theta = 1; p = N - 1 makes p_N = 2 as well
  const ModelParams equal(4, 1.0, 2.0);
  const ModelParams nearby(4, 1.0, 2.0 + 1e-10);
  for (const double t : {0.1, 0.5, 2.0}) {
    const double at = variance_bound(equal, 3, t);
    const double near = variance_bound(nearby, 3, t);
    REQUIRE(std::isfinite(at));
    REQUIRE(std::abs(at - near) <= 1e-8);
  }
}

TEST_CASE("variance bound dominates the exact gap on a small instance") {
  const ModelParams params(3, 1.0, 1.0);
  const std::uint64_t N = 2;
  const auto space = enumerate_states(3, N);
  const auto gen = full_generator(params, space);
  const auto eta0 = all_at_site(3, N, 0);
  const double var_st = stationary_covariances(params, N)[0];
  const double uniform = uniform_variance_bound(params, N);
  for (const double t : {0.25, 1.0, 3.0, 5.0}) {
    const Matrix g = detail::exact_covariance_field(params, space, gen, eta0, t);
    const double bound = variance_bound(params, N, t);
    for (int k = 0; k < 3; ++k) {
      REQUIRE(std::abs(g(k, k) - var_st) <= bound + 1e-9);
      REQUIRE(bound <= uniform + 1e-12);
    }
  }
}

TEST_CASE("distance band orders correctly and starts at the initial distance") {
  const ModelParams params(4, 1.0, 1.0);
  const auto eta = all_at_site(4, 50, 0);
  const auto mu = ProbVector::uniform(4);
  const auto band0 = empirical_distance_bound(params, 50, 0.0, eta, mu);
  const double d0 = l2_distance(empirical_measure(eta), mu);
  REQUIRE(std::abs(band0.lower - d0) <= 1e-14);
  REQUIRE(band0.upper >= d0);
  for (const double t : {0.3, 1.0, 4.0}) {
    const auto band = empirical_distance_bound(params, 50, t, eta, mu);
    REQUIRE(band.lower <= band.upper);
    REQUIRE(band.lower >= 0.0);
  }
}
