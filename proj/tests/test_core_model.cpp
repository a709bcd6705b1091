#include <catch2/catch_amalgamated.hpp>
#include <cyclefv/core_model.hpp>

#include <cmath>

using namespace cyclefv;

TEST_CASE("mod_site wraps into [0, K)") {
  REQUIRE(mod_site(0, 5) == 0);
  REQUIRE(mod_site(7, 5) == 2);
  REQUIRE(mod_site(-1, 5) == 4);
  REQUIRE(mod_site(-11, 5) == 4);
  REQUIRE(mod_site(5, 5) == 0);
}

TEST_CASE("cyclic_distance is the graph distance on the cycle") {
  REQUIRE(cyclic_distance(0, 0, 6) == 0);
  REQUIRE(cyclic_distance(0, 1, 6) == 1);
  REQUIRE(cyclic_distance(0, 5, 6) == 1);
  REQUIRE(cyclic_distance(0, 3, 6) == 3);
  REQUIRE(cyclic_distance(2, 5, 6) == 3);
  REQUIRE(cyclic_distance(-1, 0, 6) == 1);
}

TEST_CASE("ModelParams validates its domain") {
  REQUIRE_NOTHROW(ModelParams(3, 0.5, 2.0));
  REQUIRE_THROWS_AS(ModelParams(2, 1.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(ModelParams(3, 0.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(ModelParams(3, -1.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(ModelParams(3, 1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(ModelParams(3, 1.0, -0.5), std::invalid_argument);
}

TEST_CASE("Configuration validates and indexes cyclically") {
  const Configuration eta(std::vector<std::uint64_t>{2, 0, 1});
  REQUIRE(eta.K() == 3);
  REQUIRE(eta.N == 3);
  REQUIRE(eta(0) == 2);
  REQUIRE(eta(3) == 2);
  REQUIRE(eta(-1) == 1);
  REQUIRE_THROWS_AS(Configuration(std::vector<std::uint64_t>{1, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Configuration(std::vector<std::uint64_t>{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("all_at_site stacks every particle on one site") {
  const auto eta = all_at_site(4, 7, 2);
  REQUIRE(eta.N == 7);
  REQUIRE(eta(2) == 7);
  REQUIRE(eta(0) == 0);
  REQUIRE(eta(1) == 0);
  REQUIRE(eta(3) == 0);
}

TEST_CASE("ProbVector validates mass and sign") {
  REQUIRE_NOTHROW(ProbVector(std::vector<double>{0.5, 0.25, 0.25}));
  REQUIRE_THROWS_AS(ProbVector(std::vector<double>{0.5, 0.6, -0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(ProbVector(std::vector<double>{0.5, 0.25, 0.3}), std::invalid_argument);
  const auto u = ProbVector::uniform(5);
  REQUIRE(u.K() == 5);
  REQUIRE(u[0] == 0.2);
  const auto d = ProbVector::delta(4, 2);
  REQUIRE(d[2] == 1.0);
  REQUIRE(d[0] == 0.0);
  REQUIRE(d[6] == 1.0);
}

TEST_CASE("ProbVector::normalized clamps rounding negatives and rescales") {
  const auto v = ProbVector::normalized(std::vector<double>{0.7, 0.4, -1e-14});
  REQUIRE(v[2] == 0.0);
  REQUIRE(std::abs(v[0] + v[1] - 1.0) <= 1e-15);
  REQUIRE_THROWS_AS(ProbVector::normalized(std::vector<double>{0.5, 0.7, -0.2}),
                    std::invalid_argument);
}

TEST_CASE("distances: l2 and total variation") {
  const ProbVector a(std::vector<double>{1.0, 0.0, 0.0});
  const ProbVector b(std::vector<double>{0.0, 1.0, 0.0});
  REQUIRE(std::abs(l2_distance(a, b) - std::sqrt(2.0)) <= 1e-15);
  REQUIRE(tv_distance(a, b) == 1.0);
  REQUIRE(tv_distance(a, a) == 0.0);
  const auto u = ProbVector::uniform(4);
  const auto d = ProbVector::delta(4, 0);
  // half l1: (3/4 + 3 * 1/4) / 2
  REQUIRE(std::abs(tv_distance(d, u) - 0.75) <= 1e-15);
}

TEST_CASE("empirical_measure divides counts by N") {
  const auto m = empirical_measure(Configuration(std::vector<std::uint64_t>{3, 1, 0, 0}));
  REQUIRE(m[0] == 0.75);
  REQUIRE(m[1] == 0.25);
  REQUIRE(m[2] == 0.0);
}

TEST_CASE("rotate shifts the occupation pattern") {
  const Configuration eta(std::vector<std::uint64_t>{3, 1, 0});
  const auto r = rotate(eta, 1);
  // result(k) = eta(k + 1)
  REQUIRE(r(0) == 1);
  REQUIRE(r(1) == 0);
  REQUIRE(r(2) == 3);
  const auto full = rotate(eta, 3);
  REQUIRE(full == eta);
  REQUIRE(rotate(eta, -1) == rotate(eta, 2));
}

TEST_CASE("move_particle transfers one particle") {
  const Configuration eta(std::vector<std::uint64_t>{2, 0, 1});
  const auto moved = move_particle(eta, 0, 1);
  REQUIRE(moved(0) == 1);
  REQUIRE(moved(1) == 1);
  REQUIRE(moved(2) == 1);
  REQUIRE(moved.N == eta.N);
  REQUIRE_THROWS_AS(move_particle(eta, 1, 2), EmptySite);
}

TEST_CASE("configurations order lexicographically") {
  const Configuration a(std::vector<std::uint64_t>{0, 2, 0});
  const Configuration b(std::vector<std::uint64_t>{0, 1, 1});
  REQUIRE(b < a);
  REQUIRE(a == a);
}
