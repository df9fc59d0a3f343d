#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snowflake/error.hpp"
#include "snowflake/metric_space.hpp"
#include "test_support.hpp"

using namespace snowflake;
namespace ts = testsupport;

TEST_CASE("two-point space validates and normalizes") {
  auto space = validate_metric({{0, 1}, {1, 0}});
  CHECK(space.n == 2);
  CHECK(space.diam == 1.0);
  CHECK(space.d_min == 1.0);
  CHECK(space.scale_factor == 1.0);
}

TEST_CASE("4-cycle normalizes with scale factor 2") {
  auto m = ts::cycle_matrix(4);
  REQUIRE(ts::brute_triangle_ok(m));
  auto space = validate_metric(m);
  CHECK(space.scale_factor == 2.0);
  CHECK(space.diam == 1.0);
  CHECK(space.d(0, 1) == 0.5);
  CHECK(space.d(0, 2) == 1.0);
}

TEST_CASE("validation errors name the witnesses") {
  CHECK_THROWS_WITH_AS(validate_metric({{0, 1}, {2, 0}}), doctest::Contains("AsymmetricEntry"),
                       Error);
  CHECK_THROWS_AS(validate_metric({{0, 0}, {0, 0}}), Error);
  CHECK_THROWS_WITH_AS(validate_metric({{0, -1}, {-1, 0}}),
                       doctest::Contains("NegativeOrZeroOffDiagonal"), Error);
  CHECK_THROWS_WITH_AS(validate_metric({{1, 1}, {1, 0}}), doctest::Contains("NonzeroDiagonal"),
                       Error);
  CHECK_THROWS_WITH_AS(validate_metric(std::vector<std::vector<double>>{{0}}),
                       doctest::Contains("TooFewPoints"), Error);
  // 0-1-2 line with a long shortcut: d(0,2) > d(0,1) + d(1,2)
  CHECK_THROWS_WITH_AS(validate_metric({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}),
                       doctest::Contains("TriangleViolation"), Error);
}

TEST_CASE("snowflake basics") {
  auto space = validate_metric(ts::cycle_matrix(4));
  SUBCASE("alpha = 1 is the identity") {
    auto same = snowflake_metric(space, 1.0);
    for (int i = 0; i < space.n; ++i)
      for (int j = 0; j < space.n; ++j) CHECK(same.d(i, j) == space.d(i, j));
  }
  SUBCASE("entrywise power") {
    auto m = validate_metric({{0, 4}, {4, 0}});
    auto half = snowflake_metric(m, 0.5);
    // normalized two-point space has the single distance 1 at any power
    CHECK(half.d(0, 1) == 1.0);
    CHECK(half.scale_factor == doctest::Approx(2.0));  // 4^(1/2)
  }
  SUBCASE("alpha out of range") {
    CHECK_THROWS_AS(snowflake_metric(space, 0.0), Error);
    CHECK_THROWS_AS(snowflake_metric(space, 1.5), Error);
  }
  SUBCASE("snowflaked 4-cycle passes full re-validation") {
    auto out = snowflake_metric(space, 0.75);
    std::vector<std::vector<double>> m(out.n, std::vector<double>(out.n));
    for (int i = 0; i < out.n; ++i)
      for (int j = 0; j < out.n; ++j) m[i][j] = out.d(i, j);
    CHECK(ts::brute_triangle_ok(m));
  }
}

TEST_CASE("snowflake of random point-cloud metrics never violates the triangle inequality") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    auto pts = ts::random_points(12, 3, seed);
    auto space = space_from_points(pts);
    for (double alpha : {0.1, 0.35, 0.5, 0.8, 1.0}) {
      auto out = snowflake_metric(space, alpha);  // snowflake re-validates internally
      CHECK(out.n == space.n);
    }
  }
}

TEST_CASE("greedy net") {
  auto space = validate_metric(ts::path_matrix(4));  // distances /3 after normalization
  SUBCASE("mesh >= diam keeps only index 0") {
    auto net = greedy_net(space, 1.0);
    CHECK(net.members == std::vector<int>{0});
  }
  SUBCASE("mesh below d_min keeps everything") {
    auto net = greedy_net(space, space.d_min / 2.0);
    CHECK(net.members == std::vector<int>{0, 1, 2, 3});
  }
  SUBCASE("unit mesh on the path keeps {0, 2}") {
    auto net = greedy_net(space, 1.0 / space.scale_factor);
    CHECK(net.members == std::vector<int>{0, 2});
  }
  SUBCASE("separation and covering hold exhaustively") {
    for (double delta : {0.1, 0.3, 0.5, 0.9}) {
      auto net = greedy_net(space, delta);
      CHECK(ts::net_separation_ok(space, net.members, delta));
      CHECK(ts::net_covering_ok(space, net.members, delta));
    }
  }
}

TEST_CASE("greedy net properties on random clouds") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    auto space = space_from_points(ts::random_points(40, 2, 100 + seed));
    for (double delta : {0.05, 0.2, 0.6}) {
      auto net = greedy_net(space, delta);
      CHECK(ts::net_separation_ok(space, net.members, delta));
      CHECK(ts::net_covering_ok(space, net.members, delta));
    }
  }
}

TEST_CASE("doubling estimate") {
  SUBCASE("two-point space clamps to 2") {
    auto space = validate_metric({{0, 1}, {1, 0}});
    CHECK(estimate_doubling(space).K_est == 2.0);
  }
  SUBCASE("uniform metric needs n half-radius balls") {
    int n = 5;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0));
    for (int i = 0; i < n; ++i) m[i][i] = 0.0;
    auto space = validate_metric(m);
    CHECK(estimate_doubling(space).K_est == doctest::Approx(n));
  }
  SUBCASE("8x8 grid, full probe") {
    auto space = space_from_points(ts::grid_points(8));
    auto est = estimate_doubling(space);
    // frozen from the exhaustive greedy-cover oracle over all center/radius pairs
    CHECK(est.K_est == 7.0);
    CHECK(est.K_est <= 36.0);
    CHECK(est.method == DoublingMethod::GreedyCover);
    CHECK(est.probes == 64 * 4);
  }
  SUBCASE("probe budget caps the scan") {
    auto space = space_from_points(ts::grid_points(4));
    auto est = estimate_doubling(space, 3);
    CHECK(est.probes == 3);
    CHECK(est.K_est >= 2.0);
  }
  SUBCASE("user-supplied constant is clamped") {
    CHECK(user_doubling(1.2).K_est == 2.0);
    CHECK(user_doubling(9.0).K_est == 9.0);
    CHECK(user_doubling(9.0).method == DoublingMethod::UserSupplied);
  }
}

TEST_CASE("point-cloud loader matches hand distances") {
  auto space = space_from_points({{0, 0}, {3, 4}, {0, 8}});
  CHECK(space.scale_factor == doctest::Approx(8.0));
  CHECK(space.d(0, 1) == doctest::Approx(5.0 / 8.0));
}
