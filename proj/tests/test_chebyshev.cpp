#include <catch2/catch_amalgamated.hpp>
#include <cyclefv/chebyshev.hpp>

#include <cmath>

using namespace cyclefv;

TEST_CASE("first-kind and second-kind evaluations at hand values") {
  const double x = 0.3;
  REQUIRE(std::abs(eval(PolyFamily::ChebyT, 3, x) - (4 * x * x * x - 3 * x)) <= 1e-15);
  REQUIRE(std::abs(eval(PolyFamily::ChebyU, 2, x) - (4 * x * x - 1)) <= 1e-15);
  REQUIRE(eval(PolyFamily::ChebyT, 0, x) == 1.0);
  REQUIRE(eval(PolyFamily::ChebyT, 1, x) == x);
  REQUIRE(eval(PolyFamily::ChebyU, 0, x) == 1.0);
  REQUIRE(eval(PolyFamily::ChebyU, 1, x) == 2.0 * x);
  REQUIRE(eval(PolyFamily::ChebyU, -1, x) == 0.0);
  REQUIRE_THROWS_AS(eval(PolyFamily::ChebyT, -1, x), DomainError);
  REQUIRE_THROWS_AS(eval(PolyFamily::Neven, -2, x), DomainError);
}

TEST_CASE("combined families start from their defining initial pairs") {
  const double x = 1.7;
  REQUIRE(eval(PolyFamily::Neven, 0, x) == 2.0);
  REQUIRE(eval(PolyFamily::Neven, 1, x) == x);
  REQUIRE(eval(PolyFamily::Deven, 0, x) == 0.0);
  REQUIRE(eval(PolyFamily::Deven, 1, x) == x + 2.0);
  REQUIRE(eval(PolyFamily::Nodd, 0, x) == 1.0);
  REQUIRE(eval(PolyFamily::Nodd, 1, x) == x - 1.0);
  REQUIRE(eval(PolyFamily::Dodd, 0, x) == 1.0);
  REQUIRE(eval(PolyFamily::Dodd, 1, x) == x + 1.0);
  // shared recurrence p_{n+1} = x p_n - p_{n-1}
  REQUIRE(std::abs(eval(PolyFamily::Neven, 2, x) - (x * x - 2.0)) <= 1e-15);
  REQUIRE(std::abs(eval(PolyFamily::Dodd, 2, x) - (x * (x + 1.0) - 1.0)) <= 1e-15);
}

TEST_CASE("families reduce to first/second-kind combinations") {
  for (long long n = 0; n <= 30; ++n)
    for (const double x : {-2.6, -1.0, -0.3, 0.0, 0.4, 1.0, 2.0, 2.9})
      REQUIRE(chebyshev_identity_check(n, x) <= 1e-11);
}

TEST_CASE("three-term relation holds across both parities") {
  for (long long n = 0; n <= 25; ++n)
    for (const double x : {-2.2, -0.7, 0.1, 1.3, 2.0, 2.5})
      REQUIRE(three_term_relation_check(n, x) <= 1e-11);
}

TEST_CASE("series coefficients at the degenerate point") {
  // frozen closed forms, checked at n = 3
  const auto ne = taylor_at_two(PolyFamily::Neven, 3);
  REQUIRE(ne[0] == 2.0);
  REQUIRE(ne[1] == 9.0);
  REQUIRE(ne[2] == 6.0);
  const auto de = taylor_at_two(PolyFamily::Deven, 3);
  REQUIRE(de[0] == 12.0);
  REQUIRE(de[1] == 19.0);
  REQUIRE(std::abs(de[2] - 8.0) <= 1e-12);  // (3^5 - 3)/30
  const auto no = taylor_at_two(PolyFamily::Nodd, 3);
  REQUIRE(no[0] == 1.0);
  REQUIRE(no[1] == 6.0);
  REQUIRE(std::abs(no[2] - (81.0 + 54.0 - 9.0 - 6.0) / 24.0) <= 1e-12);
  const auto doo = taylor_at_two(PolyFamily::Dodd, 3);
  REQUIRE(doo[0] == 7.0);
  REQUIRE(doo[1] == (54.0 + 27.0 + 3.0) / 6.0);
  REQUIRE(std::abs(doo[2] - (486.0 + 405.0 - 45.0 - 6.0) / 120.0) <= 1e-12);
  REQUIRE_THROWS_AS(taylor_at_two(PolyFamily::ChebyT, 3), DomainError);
}

TEST_CASE("series coefficients predict values near the degenerate point") {
  const double h = 1e-4;
  for (const auto fam :
       {PolyFamily::Neven, PolyFamily::Deven, PolyFamily::Nodd, PolyFamily::Dodd}) {
    for (long long n = 0; n <= 6; ++n) {
      const auto a = taylor_at_two(fam, n);
      const double predicted = a[0] + a[1] * h + a[2] * h * h;
      REQUIRE(std::abs(eval(fam, n, 2.0 + h) - predicted) <= 1e-9);
    }
  }
}

TEST_CASE("runaway growth raises OverflowError") {
  REQUIRE_THROWS_AS(eval(PolyFamily::Deven, 2000, 10.0), OverflowError);
}
