#include <catch2/catch_amalgamated.hpp>
#include <cyclefv/particle_system.hpp>

#include <cmath>

using namespace cyclefv;

TEST_CASE("state enumeration: cardinality, order, lookup") {
  const auto space = enumerate_states(3, 2);
  REQUIRE(space.size() == 6);  // C(4, 2)
  const auto larger = enumerate_states(4, 3);
  REQUIRE(larger.size() == 20);  // C(6, 3)
  for (std::size_t i = 1; i < larger.size(); ++i)
    REQUIRE(larger.states[i - 1] < larger.states[i]);
  for (std::size_t i = 0; i < larger.size(); ++i)
    REQUIRE(larger.index_of(larger.states[i]) == i);
  REQUIRE_THROWS_AS(larger.index_of(Configuration(std::vector<std::uint64_t>{9, 0, 0, 0})),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(enumerate_states(2, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(enumerate_states(3, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(enumerate_states(60, 30), TooLarge);
}

TEST_CASE("move rates combine walk and redistribution") {
  const ModelParams params(3, 1.0, 1.0);
  const Configuration stacked(std::vector<std::uint64_t>{2, 0, 0});
  // walk only: eta(1) = eta(2) = 0 kills the redistribution part
  REQUIRE(move_rate(params, stacked, 0, 1) == 2.0);
  REQUIRE(move_rate(params, stacked, 0, 2) == 2.0);
  REQUIRE(move_rate(params, stacked, 1, 2) == 0.0);  // empty source
  REQUIRE(move_rate(params, stacked, 0, 0) == 0.0);  // no self moves
  const Configuration split(std::vector<std::uint64_t>{1, 1, 0});
  // site 0 -> 1: walk 1 plus redistribution p * eta(1)/(N-1) = 1
  REQUIRE(move_rate(params, split, 0, 1) == 2.0);
  const ModelParams skewed(3, 2.0, 3.0);
  // site 0 -> 2 is anticlockwise: theta plus 3 * 0/(N-1)
  REQUIRE(move_rate(skewed, split, 0, 2) == 2.0);
  REQUIRE(move_rate(skewed, split, 1, 0) == 2.0 + 3.0);  // theta + p*1/1
}

TEST_CASE("full generator has zero row sums and nonnegative off-diagonals") {
  const ModelParams params(4, 1.5, 0.7);
  const auto space = enumerate_states(4, 3);
  const auto gen = full_generator(params, space);
  const Matrix dense = gen.dense();
  for (int r = 0; r < dense.rows(); ++r) {
    REQUIRE(std::abs(dense.row(r).sum()) <= 1e-12);
    for (int c = 0; c < dense.cols(); ++c)
      if (r != c) REQUIRE(dense(r, c) >= 0.0);
  }
  // CSR entry lookup agrees with the dense form
  for (int r = 0; r < dense.rows(); ++r)
    for (int c = 0; c < dense.cols(); ++c)
      REQUIRE(gen.entry(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) ==
              dense(r, c));
}

TEST_CASE("exact stationary law solves nu L = 0") {
  const ModelParams params(3, 2.0, 1.0);
  const auto space = enumerate_states(3, 3);
  const auto gen = full_generator(params, space);
  const auto nu = stationary_distribution_exact(gen);
  double mass = 0.0;
  for (const double w : nu) {
    REQUIRE(w > 0.0);
    mass += w;
  }
  REQUIRE(std::abs(mass - 1.0) <= 1e-12);
  const Matrix dense = gen.dense();
  Eigen::RowVectorXd row(static_cast<int>(nu.size()));
  for (std::size_t i = 0; i < nu.size(); ++i) row(static_cast<int>(i)) = nu[i];
  REQUIRE((row * dense).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("transient distribution: identity at t = 0, stationary at large t") {
  const ModelParams params(3, 1.0, 1.0);
  const auto space = enumerate_states(3, 2);
  const auto gen = full_generator(params, space);
  std::vector<double> mu0(space.size(), 0.0);
  mu0[0] = 1.0;
  const auto at0 = transient_distribution(gen, mu0, 0.0);
  REQUIRE(at0 == mu0);
  const auto late = transient_distribution(gen, mu0, 200.0);
  const auto nu = stationary_distribution_exact(gen);
  for (std::size_t i = 0; i < nu.size(); ++i)
    REQUIRE(std::abs(late[i] - nu[i]) <= 1e-10);
  double mass = 0.0;
  for (const double w : transient_distribution(gen, mu0, 1.7)) mass += w;
  REQUIRE(std::abs(mass - 1.0) <= 1e-12);
}

TEST_CASE("moment helpers under a point mass") {
  const auto space = enumerate_states(3, 2);
  std::vector<double> dist(space.size(), 0.0);
  const Configuration eta(std::vector<std::uint64_t>{1, 1, 0});
  dist[space.index_of(eta)] = 1.0;
  REQUIRE(mean_occupancy(space, dist, 0) == 0.5);
  REQUIRE(mean_occupancy(space, dist, 2) == 0.0);
  REQUIRE(second_moment(space, dist, 0, 1) == 0.25);
  REQUIRE(second_moment(space, dist, 0, 0) == 0.25);
}

TEST_CASE("reversibility: the K = 3, theta = 1 chain balances exactly") {
  for (const std::uint64_t N : {2ULL, 3ULL, 4ULL}) {
    const auto rep = reversibility_report(ModelParams(3, 1.0, 0.8), N);
    REQUIRE(rep.kolmogorov_violation == 0.0);
    REQUIRE(rep.detailed_balance_violation <= 1e-12);
  }
}

TEST_CASE("reversibility: cycle-product gap is exact at a skewed instance") {
  // forward product (p+1)N = 4, backward N theta^2 (theta+p) = 24
  const auto rep = reversibility_report(ModelParams(3, 2.0, 1.0), 2);
  REQUIRE(rep.kolmogorov_violation == 20.0);
  REQUIRE(rep.detailed_balance_violation > 1e-3);
}

TEST_CASE("reversibility: K >= 4 breaks via a one-way transition") {
  const ModelParams params(4, 1.0, 1.0);
  const std::uint64_t N = 3;
  const auto space = enumerate_states(4, N);
  const auto gen = full_generator(params, space);
  const auto i1 = space.index_of(Configuration(std::vector<std::uint64_t>{3, 0, 0, 0}));
  const auto i3 = space.index_of(Configuration(std::vector<std::uint64_t>{2, 0, 1, 0}));
  // two steps apart on the cycle: walk cannot jump, redistribution needs mass
  REQUIRE(gen.entry(i1, i3) == 0.0);
  REQUIRE(gen.entry(i3, i1) == params.p);
  const auto rep = reversibility_report(params, N);
  REQUIRE(rep.detailed_balance_violation > 1e-3);
}

TEST_CASE("generator action on site products: frozen hand values") {
  const ModelParams params(3, 1.0, 1.0);
  const Configuration stacked(std::vector<std::uint64_t>{2, 0, 0});
  REQUIRE(generator_moment(params, stacked, MomentKind::f_k, 0) == -4.0);
  REQUIRE(generator_moment(params, stacked, MomentKind::f_kk, 0) == -12.0);
  const Configuration split(std::vector<std::uint64_t>{1, 1, 0});
  REQUIRE(generator_moment(params, split, MomentKind::f_k_kplus1, 0) == -6.0);
}

TEST_CASE("generator action: closed form equals brute force on a sweep") {
  const ModelParams params(5, 0.7, 2.3);
  const auto space = enumerate_states(5, 3);
  for (const auto& eta : space.states) {
    for (int k = 0; k < 5; ++k) {
      for (const auto kind : {MomentKind::f_k, MomentKind::f_kk, MomentKind::f_k_kplus1}) {
        REQUIRE(std::abs(generator_moment(params, eta, kind, k) -
                         generator_moment_bruteforce(params, eta, kind, k)) <= 1e-12);
      }
      for (int l = 0; l < 5; ++l) {
        if (cyclic_distance(k, l, 5) < 2) continue;
        REQUIRE(std::abs(generator_moment(params, eta, MomentKind::f_kl, k, l) -
                         generator_moment_bruteforce(params, eta, MomentKind::f_kl, k, l)) <=
                1e-12);
      }
    }
  }
}

TEST_CASE("separated-pair form rejects adjacent sites") {
  const ModelParams params(5, 1.0, 1.0);
  const Configuration eta(std::vector<std::uint64_t>{1, 1, 1, 0, 0});
  REQUIRE_THROWS_AS(generator_moment(params, eta, MomentKind::f_kl, 0, 1), DomainError);
  REQUIRE_THROWS_AS(generator_moment(params, eta, MomentKind::f_kl, 0, 4), DomainError);
  REQUIRE_THROWS_AS(generator_moment(params, eta, MomentKind::f_kl, 2, 2), DomainError);
  REQUIRE_NOTHROW(generator_moment(params, eta, MomentKind::f_kl, 0, 2));
}
