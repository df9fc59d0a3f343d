#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "snowflake/embedding.hpp"
#include "snowflake/error.hpp"
#include "snowflake/llr.hpp"
#include "test_support.hpp"

using namespace snowflake;
namespace ts = testsupport;

namespace {

// rank-one certificate v v^T for v = (1,-1,1,-1): the classic 4-cycle form
std::vector<double> c4_certificate() {
  std::vector<double> v = {1, -1, 1, -1};
  std::vector<double> Q(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Q[i * 4 + j] = v[i] * v[j];
  return Q;
}

// random PSD zero-row-sum matrix: Q = (B P B^T) with B the centering map
std::vector<double> random_certificate(int m, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> A(static_cast<std::size_t>(m) * m);
  for (auto& x : A) x = g(gen);
  // P = A A^T (PSD), then center rows and columns so row sums vanish
  std::vector<double> P(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += A[i * m + k] * A[j * m + k];
      P[i * m + j] = s;
    }
  std::vector<double> row(m, 0.0);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) row[i] += P[i * m + j];
    total += row[i];
  }
  std::vector<double> Q(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      Q[i * m + j] = P[i * m + j] - row[i] / m - row[j] / m + total / (m * m);
  return Q;
}

}  // namespace

TEST_CASE("4-cycle certificate evaluates to sqrt(2)") {
  auto space = validate_metric(ts::cycle_matrix(4));
  double bound = llr_bound(space, {0, 1, 2, 3}, c4_certificate());
  CHECK(bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("certificate validation") {
  auto space = validate_metric(ts::cycle_matrix(4));
  SUBCASE("zero matrix is degenerate") {
    CHECK_THROWS_WITH_AS(llr_bound(space, {0, 1, 2, 3}, std::vector<double>(16, 0.0)),
                         doctest::Contains("DegenerateQ"), Error);
  }
  SUBCASE("asymmetric rejected") {
    auto Q = c4_certificate();
    Q[1] += 0.5;
    CHECK_THROWS_WITH_AS(llr_bound(space, {0, 1, 2, 3}, Q), doctest::Contains("InvalidQ"), Error);
  }
  SUBCASE("nonzero row sums rejected") {
    std::vector<double> Q(16, 0.0);
    Q[0] = Q[5] = Q[10] = Q[15] = 1.0;  // identity: symmetric, PSD, rows sum to 1
    CHECK_THROWS_WITH_AS(llr_bound(space, {0, 1, 2, 3}, Q), doctest::Contains("InvalidQ"), Error);
  }
  SUBCASE("negative definite direction rejected") {
    auto Q = c4_certificate();
    for (auto& x : Q) x = -x;
    CHECK_THROWS_WITH_AS(llr_bound(space, {0, 1, 2, 3}, Q), doctest::Contains("InvalidQ"), Error);
  }
}

TEST_CASE("scaling and relabeling invariance") {
  auto space = validate_metric(ts::cycle_matrix(4));
  auto Q = c4_certificate();
  double base = llr_bound(space, {0, 1, 2, 3}, Q);
  SUBCASE("positive scaling cancels") {
    auto scaled = Q;
    for (auto& x : scaled) x *= 7.25;
    CHECK(llr_bound(space, {0, 1, 2, 3}, scaled) == doctest::Approx(base).epsilon(1e-14));
  }
  SUBCASE("permuting points with Q permuted accordingly") {
    // rotate the cycle by one: subset (1,2,3,0) with the same circulant Q
    CHECK(llr_bound(space, {1, 2, 3, 0}, Q) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("equilateral triangle admits no bound above one") {
  std::vector<std::vector<double>> tri = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  auto space = validate_metric(tri);
  for (unsigned seed = 0; seed < 100; ++seed) {
    auto Q = random_certificate(3, seed);
    bool all_zero = true;
    for (double x : Q) all_zero &= std::abs(x) < 1e-14;
    if (all_zero) continue;
    double bound = llr_bound(space, {0, 1, 2}, Q);
    CHECK(bound <= 1.0 + 1e-9);
  }
}

TEST_CASE("brute-force oracle confirms c2 of the 4-cycle") {
  double oracle = ts::brute_force_c2(ts::cycle_matrix(4), 3, 8, 2024);
  CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("certified snowflake embedding dominates the certificate on the snowflaked metric") {
  auto space = validate_metric(ts::cycle_matrix(4));
  double eps = 0.25;
  auto flaked = snowflake_metric(space, 1.0 - eps);
  auto Q = c4_certificate();
  double bound = llr_bound(flaked, {0, 1, 2, 3}, Q);
  CHECK(bound > 1.0);
  auto params = derive_params(3.0, eps, 0.5, 8.0, 4096.0, space.d_min, 1e-6);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto [result, cert] = certify(space, params, seed, 10000);
    REQUIRE(cert.status == CertStatus::Certified);
    // rows of F as a Euclidean embedding of the snowflaked 4-cycle
    auto check = llr_verify_embedding(flaked, {0, 1, 2, 3}, Q, result.F, params.N);
    CHECK(check.consistent);
    CHECK(check.measured_distortion >= check.bound * (1 - 1e-9));
  }
}

TEST_CASE("verify_embedding consistency") {
  auto space = validate_metric(ts::cycle_matrix(4));
  auto Q = c4_certificate();
  SUBCASE("the optimal square embedding meets the bound with equality") {
    // unit square: edges sqrt(2)/2 * ratio... coordinates of the 4-cycle at
    // the corners; distortion sqrt(2) exactly
    std::vector<double> square = {0, 0, 1, 0, 1, 1, 0, 1};
    auto check = llr_verify_embedding(space, {0, 1, 2, 3}, Q, square, 2);
    CHECK(check.bound == doctest::Approx(std::sqrt(2.0)));
    CHECK(check.measured_distortion == doctest::Approx(std::sqrt(2.0)));
    CHECK(check.consistent);
  }
  SUBCASE("random Q on random metrics never exceeds a measured embedding") {
    for (unsigned trial = 0; trial < 50; ++trial) {
      auto pts = ts::random_points(6, 3, 900 + trial);
      auto space6 = space_from_points(pts);
      auto Q6 = random_certificate(6, trial);
      bool all_zero = true;
      for (double x : Q6) all_zero &= std::abs(x) < 1e-14;
      if (all_zero) continue;
      // embed with the points themselves (isometric up to normalization scale)
      std::vector<double> emb;
      for (const auto& p : pts)
        for (double x : p) emb.push_back(x / space6.scale_factor);
      auto check = llr_verify_embedding(space6, {0, 1, 2, 3, 4, 5}, Q6, emb, 3);
      CHECK(check.consistent);
      CHECK(check.bound <= check.measured_distortion * (1 + 1e-9));
    }
  }
}
