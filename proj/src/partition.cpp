#include "snowflake/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snowflake/error.hpp"
#include "snowflake/parallel.hpp"
#include "snowflake/rng.hpp"

namespace snowflake {

double RadiusDistribution::pdf(double r) const {
  if (r < s / 4.0 || r > s / 2.0) return 0.0;
  double logK = std::log(K);
  double k4 = std::pow(K, 4.0);
  return 16.0 * std::pow(K, 8.0) * logK / (s * (k4 - 1.0)) * std::pow(K, -16.0 * r / s);
}

double RadiusDistribution::cdf(double r) const {
  if (r <= s / 4.0) return 0.0;
  if (r >= s / 2.0) return 1.0;
  double k4 = std::pow(K, 4.0);
  return std::pow(K, 8.0) / (k4 - 1.0) * (std::pow(K, -4.0) - std::pow(K, -16.0 * r / s));
}

double RadiusDistribution::inverse_cdf(double u) const {
  double k4 = std::pow(K, -4.0);
  double k8 = std::pow(K, -8.0);
  double r = -(s / (16.0 * std::log(K))) * std::log(k4 - u * (k4 - k8));
  // guard against rounding at the support endpoints
  return std::clamp(r, s / 4.0, s / 2.0);
}

double sample_radius(const RadiusDistribution& dist, double u) {
  if (!(u >= 0.0 && u <= 1.0))
    fail(Errc::InvalidUniform, "u must be in [0,1], got " + std::to_string(u));
  return dist.inverse_cdf(u);
}

Partition build_partition(const FiniteMetricSpace& space, const std::vector<int>& centers,
                          const std::vector<double>& radii) {
  if (centers.size() != radii.size() || centers.empty())
    fail(Errc::InvalidArgument, "centers and radii must be nonempty and matched");
  Partition part;
  part.centers = centers;
  part.radii = radii;
  part.assignment.assign(space.n, -1);

  std::vector<int> carve_to_cluster(centers.size(), -1);
  for (int y = 0; y < space.n; ++y) {
    int win = -1;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (space.d(centers[j], y) <= radii[j]) {
        win = static_cast<int>(j);
        break;
      }
    }
    if (win < 0)
      fail(Errc::UncoveredPoint, "point " + std::to_string(y) + " not covered by any ball");
    if (carve_to_cluster[win] < 0) {
      carve_to_cluster[win] = static_cast<int>(part.clusters.size());
      part.clusters.emplace_back();
      part.cluster_carve_index.push_back(win);
    }
    int cid = carve_to_cluster[win];
    part.assignment[y] = cid;
    part.clusters[cid].push_back(y);
  }
  return part;
}

std::vector<double> boundary_distances(const FiniteMetricSpace& space, const Partition& part) {
  std::vector<double> out(space.n, std::numeric_limits<double>::infinity());
  if (part.clusters.size() <= 1) return out;
  for (int x = 0; x < space.n; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < space.n; ++y)
      if (part.assignment[y] != part.assignment[x]) best = std::min(best, space.d(x, y));
    out[x] = best;
  }
  return out;
}

double max_cluster_diameter(const FiniteMetricSpace& space, const Partition& part) {
  double best = 0.0;
  for (const auto& cluster : part.clusters) {
    for (std::size_t a = 0; a < cluster.size(); ++a)
      for (std::size_t b = a + 1; b < cluster.size(); ++b)
        best = std::max(best, space.d(cluster[a], cluster[b]));
  }
  return best;
}

LocalityEntry locality_of(const FiniteMetricSpace& space, double s, const std::vector<int>& centers,
                          const std::vector<double>& radii, int y) {
  LocalityEntry entry;
  for (std::size_t j = 0; j < centers.size(); ++j)
    if (space.d(y, centers[j]) <= 2.0 * s) entry.candidates.push_back(static_cast<int>(j));
  for (int j : entry.candidates) {
    if (space.d(centers[j], y) <= radii[j]) {
      entry.winner = j;
      break;
    }
  }
  if (entry.winner < 0)
    fail(Errc::UncoveredPoint, "no candidate ball contains point " + std::to_string(y));

  // carve restricted to the candidate balls must reproduce the full carve
  Partition full = build_partition(space, centers, radii);
  const auto& full_cluster = full.clusters[full.assignment[y]];
  std::vector<int> restricted;
  for (int z = 0; z < space.n; ++z) {
    if (space.d(centers[entry.winner], z) > radii[entry.winner]) continue;
    bool stolen = false;
    for (int j : entry.candidates) {
      if (j >= entry.winner) break;
      if (space.d(centers[j], z) <= radii[j]) {
        stolen = true;
        break;
      }
    }
    if (!stolen) restricted.push_back(z);
  }
  if (restricted != full_cluster)
    fail(Errc::InvalidArgument, "locality identity violated for point " + std::to_string(y));
  return entry;
}

PaddingAuditReport padding_audit(const FiniteMetricSpace& space, double s, double K, double beta,
                                 int trials, std::uint64_t seed, int threads) {
  if (!(beta > 0.0 && beta < 1.0 / 40.0))
    fail(Errc::BetaOutOfRange, "beta must be in (0, 1/40), got " + std::to_string(beta));
  if (K < 2.0) fail(Errc::KTooSmall, "K must be >= 2");
  if (trials <= 0) fail(Errc::InvalidArgument, "trials must be positive");

  Net net = greedy_net(space, s / 4.0);
  RadiusDistribution dist{s, K};
  SeedStream root = SeedStream(seed).child(kTagPadding);

  // per-point small-ball membership, precomputed
  std::vector<std::vector<int>> small_ball(space.n);
  for (int y = 0; y < space.n; ++y)
    for (int z = 0; z < space.n; ++z)
      if (space.d(y, z) <= beta * s) small_ball[y].push_back(z);

  std::vector<std::vector<char>> padded(trials, std::vector<char>(space.n, 0));
  parallel_for(trials, threads, [&](int t) {
    SeedStream ts = root.child(static_cast<std::uint64_t>(t));
    std::vector<double> radii(net.members.size());
    for (std::size_t j = 0; j < radii.size(); ++j)
      radii[j] = dist.inverse_cdf(ts.uniform(static_cast<std::uint64_t>(j)));
    Partition part = build_partition(space, net.members, radii);
    for (int y = 0; y < space.n; ++y) {
      bool inside = true;
      for (int z : small_ball[y]) {
        if (part.assignment[z] != part.assignment[y]) {
          inside = false;
          break;
        }
      }
      padded[t][y] = inside ? 1 : 0;
    }
  });

  PaddingAuditReport report;
  report.s = s;
  report.K = K;
  report.beta = beta;
  report.trials = trials;
  report.bound = std::pow(K, -64.0 * beta);
  report.per_point.assign(space.n, 0.0);
  for (int y = 0; y < space.n; ++y) {
    long hits = 0;
    for (int t = 0; t < trials; ++t) hits += padded[t][y];
    report.per_point[y] = static_cast<double>(hits) / trials;
  }
  report.min_probability = *std::min_element(report.per_point.begin(), report.per_point.end());
  double p = report.min_probability;
  report.std_error = std::sqrt(std::max(p * (1.0 - p), 1e-12) / trials);
  return report;
}

BoundarySides boundary_sides_exact(double s, double K, double beta, double a, double b) {
  RadiusDistribution dist{s, K};
  BoundarySides sides;
  sides.cut = std::max(0.0, dist.cdf(b) - dist.cdf(a));
  sides.meets = 1.0 - dist.cdf(a);
  double k4 = std::pow(K, 4.0);
  sides.rhs = (1.0 - std::pow(K, -32.0 * beta)) * (sides.meets + 1.0 / (k4 - 1.0));
  return sides;
}

BoundaryAuditReport boundary_audit(const FiniteMetricSpace& space, double s, double K, double beta,
                                   int x, int y, int trials, std::uint64_t seed, int threads) {
  if (!(beta > 0.0)) fail(Errc::BetaOutOfRange, "beta must be positive");
  if (K < 2.0) fail(Errc::KTooSmall, "K must be >= 2");
  if (x < 0 || x >= space.n || y < 0 || y >= space.n)
    fail(Errc::InvalidArgument, "point index out of range");

  BoundaryAuditReport report;
  report.trials = trials;
  double a = std::numeric_limits<double>::infinity();
  double b = 0.0;
  for (int z = 0; z < space.n; ++z) {
    if (space.d(y, z) <= beta * s) {
      a = std::min(a, space.d(x, z));
      b = std::max(b, space.d(x, z));
    }
  }
  report.a = a;
  report.b = b;
  report.exact = boundary_sides_exact(s, K, beta, a, b);
  report.exact_holds = report.exact.cut <= report.exact.rhs + 1e-12;

  if (trials > 0) {
    RadiusDistribution dist{s, K};
    SeedStream root = SeedStream(seed).child(kTagBoundary);
    std::vector<char> cut(trials, 0), meets(trials, 0);
    parallel_for(trials, threads, [&](int t) {
      double r = dist.inverse_cdf(root.uniform(static_cast<std::uint64_t>(t)));
      meets[t] = (r >= a) ? 1 : 0;
      cut[t] = (r >= a && r < b) ? 1 : 0;
    });
    long ncut = 0, nmeet = 0;
    for (int t = 0; t < trials; ++t) {
      ncut += cut[t];
      nmeet += meets[t];
    }
    report.cut_empirical = static_cast<double>(ncut) / trials;
    report.meets_empirical = static_cast<double>(nmeet) / trials;
    double p = report.cut_empirical;
    report.std_error = std::sqrt(std::max(p * (1.0 - p), 1e-12) / trials);
  }
  return report;
}

}  // namespace snowflake
