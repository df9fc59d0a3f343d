#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snowflake/error.hpp"
#include "snowflake/partition.hpp"
#include "snowflake/rng.hpp"
#include "test_support.hpp"

using namespace snowflake;
namespace ts = testsupport;

TEST_CASE("radius density integrates to one") {
  for (double K : {2.0, 4.0, 16.0}) {
    for (double s : {0.5, 1.0, 2.0}) {
      RadiusDistribution dist{s, K};
      double mass = ts::quad_gl([&](double r) { return dist.pdf(r); }, s / 4.0, s / 2.0, 128);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("inverse CDF endpoints and monotonicity") {
  RadiusDistribution dist{1.0, 2.0};
  CHECK(dist.inverse_cdf(0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(dist.inverse_cdf(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  double prev = 0.0;
  for (int t = 0; t <= 100; ++t) {
    double r = dist.inverse_cdf(t / 100.0);
    CHECK(r >= prev);
    prev = r;
  }
  CHECK_THROWS_AS(sample_radius(dist, -0.1), Error);
  CHECK_THROWS_AS(sample_radius(dist, 1.1), Error);
}

TEST_CASE("inverse CDF matches the quadrature + bisection oracle") {
  RadiusDistribution dist{1.0, 2.0};
  // oracle: bisect r with integral phi over [1/4, r] equal to u
  auto cdf_quad = [&](double r) {
    return ts::quad_gl([&](double x) { return dist.pdf(x); }, 0.25, r, 96);
  };
  for (double u : {0.1, 0.5, 0.9}) {
    double oracle = ts::bisect([&](double r) { return cdf_quad(r) - u; }, 0.25, 0.5);
    CHECK(dist.inverse_cdf(u) == doctest::Approx(oracle).epsilon(1e-12));
  }
  // frozen oracle value for the headline case
  CHECK(dist.inverse_cdf(0.5) == doctest::Approx(0.30703357242185375).epsilon(1e-12));
}

TEST_CASE("radius sampler passes a KS test against the closed-form CDF") {
  RadiusDistribution dist{1.0, 4.0};
  SeedStream stream = SeedStream(7).child(kTagRadius);
  std::vector<double> samples(100000);
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = dist.inverse_cdf(stream.uniform(i));
  double stat = ts::ks_statistic(samples, [&](double r) { return dist.cdf(r); });
  CHECK(stat < 0.02);
}

TEST_CASE("ball carve") {
  auto space = validate_metric(ts::path_matrix(5));  // normalized by 4
  SUBCASE("single ball covering everything gives one cluster") {
    auto part = build_partition(space, {2}, {1.0});
    CHECK(part.clusters.size() == 1);
    CHECK(part.clusters[0] == std::vector<int>{0, 1, 2, 3, 4});
  }
  SUBCASE("nested second ball disappears") {
    auto part = build_partition(space, {2, 3}, {1.0, 0.1});
    CHECK(part.clusters.size() == 1);
  }
  SUBCASE("hand-carved path split") {
    // net {0,4}, radii 2 in path units: B(0,.5)={0,1,2}, B(4,.5)\... = {3,4}
    auto part = build_partition(space, {0, 4}, {0.5, 0.5});
    REQUIRE(part.clusters.size() == 2);
    CHECK(part.clusters[0] == std::vector<int>{0, 1, 2});
    CHECK(part.clusters[1] == std::vector<int>{3, 4});
  }
  SUBCASE("uncovered point is an error") {
    CHECK_THROWS_WITH_AS(build_partition(space, {0}, {0.5}), doctest::Contains("UncoveredPoint"),
                         Error);
  }
}

TEST_CASE("carves from s/4-nets with radii in [s/4, s/2] are s-bounded") {
  auto space = space_from_points(ts::random_points(60, 2, 11));
  SeedStream stream(3);
  for (double s : {0.3, 0.6, 1.0}) {
    Net net = greedy_net(space, s / 4.0);
    RadiusDistribution dist{s, 4.0};
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> radii(net.members.size());
      for (std::size_t j = 0; j < radii.size(); ++j)
        radii[j] = dist.inverse_cdf(stream.child(trial).uniform(j));
      auto part = build_partition(space, net.members, radii);
      CHECK(max_cluster_diameter(space, part) <= s);
      // partition covers everything exactly once
      int covered = 0;
      for (const auto& cluster : part.clusters) covered += static_cast<int>(cluster.size());
      CHECK(covered == space.n);
    }
  }
}

TEST_CASE("locality identity and candidate-set size") {
  auto space = space_from_points(ts::grid_points(8));
  double s = 4.0 / space.scale_factor;
  Net net = greedy_net(space, s / 4.0);
  RadiusDistribution dist{s, 7.0};
  SeedStream stream(5);
  double K_cap = 7.0 * 7.0 * 7.0;  // K_est^3 on the audited instance
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> radii(net.members.size());
    for (std::size_t j = 0; j < radii.size(); ++j)
      radii[j] = dist.inverse_cdf(stream.child(trial).uniform(j));
    auto part = build_partition(space, net.members, radii);
    for (int y = 0; y < space.n; ++y) {
      auto entry = locality_of(space, s, net.members, radii, y);  // throws if identity fails
      CHECK(entry.winner >= 0);
      CHECK(std::find(entry.candidates.begin(), entry.candidates.end(), entry.winner) !=
            entry.candidates.end());
      CHECK(space.d(net.members[entry.winner], y) <= radii[entry.winner]);
      CHECK(static_cast<double>(entry.candidates.size()) <= K_cap);
      // winner matches the carve
      CHECK(part.cluster_carve_index[part.assignment[y]] == entry.winner);
    }
  }
}

TEST_CASE("locality candidates follow the 2s window") {
  auto space = validate_metric(ts::path_matrix(3));  // 0, 0.5, 1
  // s = 0.2: center 2 is 1.0 > 0.4 away from point 0, so it drops out
  auto entry = locality_of(space, 0.2, {0, 2}, {0.5, 0.5}, 0);
  CHECK(entry.candidates == std::vector<int>{0});
  // s large: everything within 2s of everything
  auto wide = locality_of(space, 0.6, {0, 2}, {0.5, 0.5}, 1);
  CHECK(wide.candidates == std::vector<int>{0, 1});
}

TEST_CASE("padding audit") {
  SUBCASE("beta window enforced") {
    auto space = validate_metric(ts::path_matrix(4));
    CHECK_THROWS_AS(padding_audit(space, 0.5, 2.0, 0.05, 10, 1), Error);   // beta >= 1/40
    CHECK_THROWS_AS(padding_audit(space, 0.5, 2.0, 0.0, 10, 1), Error);
  }
  SUBCASE("tiny beta pads trivially") {
    auto space = validate_metric(ts::path_matrix(6));
    auto report = padding_audit(space, 0.5, 2.0, 1e-9, 50, 42);
    CHECK(report.min_probability == 1.0);
    CHECK(report.bound == doctest::Approx(std::pow(2.0, -64e-9)));
  }
  SUBCASE("K = 2, beta = 1/64 floor is one half") {
    CHECK(std::pow(2.0, -64.0 / 64.0) == 0.5);
  }
  SUBCASE("empirical minimum clears the floor on a nontrivial instance") {
    // 64-point path, s large enough that the beta-ball holds neighbors
    auto space = validate_metric(ts::path_matrix(64));
    double s = 0.64, beta = 0.0249;
    REQUIRE(beta * s >= space.d_min);  // the audit actually bites
    auto est = estimate_doubling(space);
    auto report = padding_audit(space, s, est.K_est, beta, 4000, 9, 4);
    CHECK(report.min_probability >= report.bound - 3.0 * report.std_error);
    CHECK(report.min_probability < 1.0);  // and it is a real event
  }
}

TEST_CASE("boundary audit exact sides and simulation") {
  SUBCASE("frozen closed-form values, K=2 s=1 beta=0.01 a=0.3 b=0.31") {
    auto sides = boundary_sides_exact(1.0, 2.0, 0.01, 0.3, 0.31);
    CHECK(sides.cut == doctest::Approx(0.0643117484485165).epsilon(1e-12));
    CHECK(sides.meets == doctest::Approx(0.5459724559984187).epsilon(1e-12));
    CHECK(sides.rhs == doctest::Approx(0.12187237566515194).epsilon(1e-12));
    CHECK(sides.cut <= sides.rhs);
  }
  SUBCASE("far ball never cut") {
    auto space = validate_metric(ts::path_matrix(11));  // 0, 0.1, ..., 1
    double s = 0.4, beta = 0.02;
    // x = 0, y = 10: a = d(x, B(y, .008)) = 1 > s/2
    auto report = boundary_audit(space, s, 2.0, beta, 0, 10, 2000, 3);
    CHECK(report.exact.cut == 0.0);
    CHECK(report.exact.meets == 0.0);
    CHECK(report.cut_empirical == 0.0);
    CHECK(report.exact_holds);
  }
  SUBCASE("simulation tracks the closed form within 3 sigma") {
    auto space = validate_metric(ts::path_matrix(21));
    double s = 0.5, beta = 0.024;
    auto report = boundary_audit(space, s, 3.0, beta, 7, 8, 100000, 17, 4);
    CHECK(report.exact_holds);
    double sigma = std::sqrt(report.exact.cut * (1 - report.exact.cut) / report.trials);
    CHECK(std::abs(report.cut_empirical - report.exact.cut) <= 3.0 * std::max(sigma, 1e-4));
    double sigma_m = std::sqrt(report.exact.meets * (1 - report.exact.meets) / report.trials);
    CHECK(std::abs(report.meets_empirical - report.exact.meets) <= 3.0 * std::max(sigma_m, 1e-4));
  }
}

TEST_CASE("audits are reproducible and thread-count independent") {
  auto space = validate_metric(ts::path_matrix(16));
  auto a = padding_audit(space, 0.6, 3.0, 0.02, 200, 77, 1);
  auto b = padding_audit(space, 0.6, 3.0, 0.02, 200, 77, 4);
  CHECK(a.per_point == b.per_point);
  auto c = boundary_audit(space, 0.6, 3.0, 0.02, 1, 9, 5000, 5, 1);
  auto d = boundary_audit(space, 0.6, 3.0, 0.02, 1, 9, 5000, 5, 3);
  CHECK(c.cut_empirical == d.cut_empirical);
  CHECK(c.meets_empirical == d.meets_empirical);
}
