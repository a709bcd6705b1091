#include <catch2/catch_amalgamated.hpp>
#include <cyclefv/io.hpp>
#include <cyclefv/particle_system.hpp>

#include <cstdlib>
#include <cstring>
#include <string>

using namespace cyclefv;

TEST_CASE("format_double survives a string round trip bit for bit") {
  for (const double x : {1.0 / 3.0, 0.1, -0.0, 1e-300, 5e-324, 123456789.123456789,
                         -2.718281828459045, 1.7976931348623157e308}) {
    const std::string text = format_double(x);
    const double back = std::strtod(text.c_str(), nullptr);
    REQUIRE(std::memcmp(&back, &x, sizeof x) == 0);
  }
}

TEST_CASE("join_csv separates with bare commas") {
  REQUIRE(join_csv({"a", "b", "c"}) == "a,b,c");
  REQUIRE(join_csv({"solo"}) == "solo");
  REQUIRE(join_csv({}) == "");
}

TEST_CASE("trajectory serialization round trips") {
  const ModelParams params(4, 1.3, 0.7);
  const auto eta0 = all_at_site(4, 6, 0);
  const auto ens = simulate_ensemble(params, eta0, {0.0, 0.37, 1.0}, 5, 777, 2);
  const std::string csv = trajectory_csv(ens);
  const auto back = parse_trajectory_csv(csv);
  REQUIRE(back.K == ens.K);
  REQUIRE(back.N == ens.N);
  REQUIRE(back.replicas() == ens.replicas());
  REQUIRE(back.sample_times == ens.sample_times);
  for (std::size_t r = 0; r < ens.replicas(); ++r)
    REQUIRE(back.records[r] == ens.records[r]);
  // serialization is canonical: a second pass gives the same bytes
  REQUIRE(trajectory_csv(back) == csv);
}

TEST_CASE("trajectory header names each site column") {
  const auto ens = simulate_ensemble(ModelParams(3, 1.0, 1.0), all_at_site(3, 2, 0),
                                     {0.0}, 1, 1, 1);
  const std::string csv = trajectory_csv(ens);
  REQUIRE(csv.rfind("replica,time,site_0,site_1,site_2\n", 0) == 0);
}

TEST_CASE("malformed trajectory text is rejected") {
  REQUIRE_THROWS_AS(parse_trajectory_csv(""), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_trajectory_csv("nonsense,header\n1,2,3\n"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_trajectory_csv("replica,time,site_0,site_1,site_2\n0,0.0,1\n"),
                    std::invalid_argument);
}
