#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snowflake {

/// A validated finite metric space, normalized so that diam = 1.
/// scale_factor is the multiplier that recovers the input units.
struct FiniteMetricSpace {
  int n = 0;
  std::vector<double> dist;          // row-major n*n
  std::vector<std::string> labels;   // empty or size n
  double diam = 1.0;                 // always 1 after construction
  double d_min = 0.0;                // smallest positive entry
  double scale_factor = 1.0;

  double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
};

/// Checks the metric axioms on a raw matrix and returns the normalized space.
/// Throws Error naming the first violated axiom and the witnessing indices.
FiniteMetricSpace validate_metric(const std::vector<double>& matrix, int n,
                                  std::vector<std::string> labels = {});
FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& matrix,
                                  std::vector<std::string> labels = {});

/// Euclidean distance matrix of a point cloud (rows = points), then validate_metric.
FiniteMetricSpace space_from_points(const std::vector<std::vector<double>>& points,
                                    std::vector<std::string> labels = {});

/// Entrywise d^alpha, alpha in (0, 1]. Re-validated on return.
FiniteMetricSpace snowflake_metric(const FiniteMetricSpace& space, double alpha);

struct Net {
  double mesh = 0.0;
  std::vector<int> members;  // ascending point indices
};

/// Greedy net: scan points in ascending index order; a point joins iff it is
/// more than delta from every current member. Separation > delta, covering <= delta.
Net greedy_net(const FiniteMetricSpace& space, double delta);

enum class DoublingMethod { UserSupplied, GreedyCover };

struct DoublingEstimate {
  double K_est = 2.0;  // >= 2
  DoublingMethod method = DoublingMethod::GreedyCover;
  long probes = 0;  // (center, radius) pairs examined
};

/// Upper-bound estimate of the doubling constant: for each probed (center, radius),
/// greedily cover B(x, r) by balls of radius r/2 centered at points of the ball.
/// Radii are dyadic, diam down to d_min; probe_budget < 0 means unlimited.
DoublingEstimate estimate_doubling(const FiniteMetricSpace& space, long probe_budget = -1);

/// Wraps a user-supplied constant in the same reporting type (clamped to >= 2).
DoublingEstimate user_doubling(double K);

}  // namespace snowflake
