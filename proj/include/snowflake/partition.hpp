#pragma once

#include <cstdint>
#include <vector>

#include "snowflake/metric_space.hpp"

namespace snowflake {

/// Truncated-exponential radius law on [s/4, s/2]:
///   phi_s(r) = 16 K^8 log(K) / (s (K^4 - 1)) * K^(-16 r / s).
struct RadiusDistribution {
  double s = 1.0;  // scale > 0
  double K = 2.0;  // doubling constant >= 2

  double pdf(double r) const;
  double cdf(double r) const;
  /// Closed-form inverse CDF; strictly monotone, maps [0,1] onto [s/4, s/2].
  double inverse_cdf(double u) const;
};

/// inverse_cdf with the precondition check (u in [0,1]).
double sample_radius(const RadiusDistribution& dist, double u);

/// Ball-carved partition: cluster j is B(x_j, r_j) minus the earlier balls,
/// empty sets dropped. Cluster ids follow carve order.
struct Partition {
  std::vector<int> centers;               // carve order (point indices)
  std::vector<double> radii;              // same length as centers
  std::vector<int> assignment;            // point -> cluster id
  std::vector<std::vector<int>> clusters; // sorted member lists
  std::vector<int> cluster_carve_index;   // cluster id -> index into centers
};

Partition build_partition(const FiniteMetricSpace& space, const std::vector<int>& centers,
                          const std::vector<double>& radii);

/// d(x, X \ P(x)) per point; +inf when the partition has a single cluster.
std::vector<double> boundary_distances(const FiniteMetricSpace& space, const Partition& part);

/// max cluster diameter (0 for all-singleton partitions)
double max_cluster_diameter(const FiniteMetricSpace& space, const Partition& part);

/// Locality record for one point: the carve indices within 2s of y, and the
/// winning index. Construction asserts that carving from the candidate set
/// alone reproduces the full-carve cluster of y.
struct LocalityEntry {
  std::vector<int> candidates;  // indices into centers, ascending
  int winner = -1;              // index into centers
};

LocalityEntry locality_of(const FiniteMetricSpace& space, double s, const std::vector<int>& centers,
                          const std::vector<double>& radii, int y);

struct PaddingAuditReport {
  double s = 0.0, K = 0.0, beta = 0.0;
  int trials = 0;
  double bound = 0.0;                // K^(-64 beta)
  std::vector<double> per_point;     // empirical Pr[B(y, beta*s) inside P(y)]
  double min_probability = 0.0;
  double std_error = 0.0;            // binomial, at the minimum
};

/// Monte-Carlo estimate of the padding probability over independent carves.
PaddingAuditReport padding_audit(const FiniteMetricSpace& space, double s, double K, double beta,
                                 int trials, std::uint64_t seed, int threads = 1);

struct BoundarySides {
  double cut = 0.0;    // Pr[ B(x,R) cuts B(y, beta s) ]
  double meets = 0.0;  // Pr[ B(x,R) meets B(y, beta s) ]
  double rhs = 0.0;    // (1 - K^(-32 beta)) (meets + 1/(K^4 - 1))
};

/// Exact sides from the nearest/farthest distances a, b of the small ball to x.
BoundarySides boundary_sides_exact(double s, double K, double beta, double a, double b);

struct BoundaryAuditReport {
  double a = 0.0, b = 0.0;  // realized min / max of d(x, .) over B(y, beta s)
  BoundarySides exact;
  bool exact_holds = false;  // cut <= rhs
  double cut_empirical = 0.0;
  double meets_empirical = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

/// Both sides of the single-ball cut inequality, exactly and by simulation.
BoundaryAuditReport boundary_audit(const FiniteMetricSpace& space, double s, double K, double beta,
                                   int x, int y, int trials, std::uint64_t seed, int threads = 1);

}  // namespace snowflake
