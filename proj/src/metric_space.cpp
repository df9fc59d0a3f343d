#include "snowflake/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snowflake/error.hpp"

namespace snowflake {

namespace {

constexpr double kRelSlack = 1e-12;  // rounding slack for symmetry / triangle checks

std::string ij(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::AsymmetricEntry: return "AsymmetricEntry";
    case Errc::NegativeOrZeroOffDiagonal: return "NegativeOrZeroOffDiagonal";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::InvalidUniform: return "InvalidUniform";
    case Errc::UncoveredPoint: return "UncoveredPoint";
    case Errc::BetaOutOfRange: return "BetaOutOfRange";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
    case Errc::KTooSmall: return "KTooSmall";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ThetaNonpositive: return "ThetaNonpositive";
    case Errc::MTooLarge: return "MTooLarge";
    case Errc::InvalidQ: return "InvalidQ";
    case Errc::DegenerateQ: return "DegenerateQ";
    case Errc::KernelNotPSD: return "KernelNotPSD";
    case Errc::UpperMinViolation: return "UpperMinViolation";
    case Errc::IoError: return "IoError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

FiniteMetricSpace validate_metric(const std::vector<double>& matrix, int n,
                                  std::vector<std::string> labels) {
  if (n < 2) fail(Errc::TooFewPoints, "need at least 2 points, got " + std::to_string(n));
  if (matrix.size() != static_cast<std::size_t>(n) * n)
    fail(Errc::InvalidArgument, "matrix size does not match n=" + std::to_string(n));
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
    fail(Errc::InvalidArgument, "labels size does not match n");

  auto at = [&](int i, int j) { return matrix[static_cast<std::size_t>(i) * n + j]; };

  double max_entry = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = at(i, j);
      if (!std::isfinite(v)) fail(Errc::NonFiniteEntry, "entry " + ij(i, j));
      max_entry = std::max(max_entry, std::abs(v));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) fail(Errc::NonzeroDiagonal, "index " + std::to_string(i));
  }
  double sym_tol = kRelSlack * std::max(1.0, max_entry);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(at(i, j) - at(j, i)) > sym_tol) fail(Errc::AsymmetricEntry, "entry " + ij(i, j));
      if (at(i, j) <= 0.0) fail(Errc::NegativeOrZeroOffDiagonal, "entry " + ij(i, j));
    }
  }

  FiniteMetricSpace space;
  space.n = n;
  space.labels = std::move(labels);
  space.dist.assign(static_cast<std::size_t>(n) * n, 0.0);
  // canonicalize: exact symmetry from the upper triangle
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = at(i, j);
      space.dist[static_cast<std::size_t>(i) * n + j] = v;
      space.dist[static_cast<std::size_t>(j) * n + i] = v;
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double dij = space.d(i, j);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        double lhs = space.d(i, k);
        double rhs = dij + space.d(j, k);
        if (lhs > rhs * (1.0 + kRelSlack))
          fail(Errc::TriangleViolation,
               "d" + ij(i, k) + " > d" + ij(i, j) + " + d" + ij(j, k));
      }
    }
  }

  double diam = 0.0;
  for (double v : space.dist) diam = std::max(diam, v);
  space.scale_factor = diam;
  double d_min = std::numeric_limits<double>::infinity();
  for (auto& v : space.dist) {
    v /= diam;
    if (v > 0.0) d_min = std::min(d_min, v);
  }
  space.diam = 1.0;
  space.d_min = d_min;
  return space;
}

FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& matrix,
                                  std::vector<std::string> labels) {
  int n = static_cast<int>(matrix.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != n) fail(Errc::InvalidArgument, "matrix is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return validate_metric(flat, n, std::move(labels));
}

FiniteMetricSpace space_from_points(const std::vector<std::vector<double>>& points,
                                    std::vector<std::string> labels) {
  int n = static_cast<int>(points.size());
  if (n < 2) fail(Errc::TooFewPoints, "need at least 2 points, got " + std::to_string(n));
  std::size_t dim = points[0].size();
  std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (points[i].size() != dim) fail(Errc::InvalidArgument, "ragged point cloud");
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        double diff = points[i][k] - points[j][k];
        s += diff * diff;
      }
      double dv = std::sqrt(s);
      flat[static_cast<std::size_t>(i) * n + j] = dv;
      flat[static_cast<std::size_t>(j) * n + i] = dv;
    }
  }
  return validate_metric(flat, n, std::move(labels));
}

FiniteMetricSpace snowflake_metric(const FiniteMetricSpace& space, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    fail(Errc::AlphaOutOfRange, "alpha must be in (0,1], got " + std::to_string(alpha));
  std::vector<double> powed(space.dist.size());
  for (std::size_t idx = 0; idx < space.dist.size(); ++idx)
    powed[idx] = std::pow(space.dist[idx], alpha);
  FiniteMetricSpace result = validate_metric(powed, space.n, space.labels);
  // (c*d)^a = c^a * d^a, so the original units propagate through the power.
  result.scale_factor = std::pow(space.scale_factor, alpha);
  return result;
}

Net greedy_net(const FiniteMetricSpace& space, double delta) {
  if (!(delta > 0.0)) fail(Errc::InvalidArgument, "net mesh must be positive");
  Net net;
  net.mesh = delta;
  for (int i = 0; i < space.n; ++i) {
    bool far = true;
    for (int m : net.members) {
      if (space.d(i, m) <= delta) {
        far = false;
        break;
      }
    }
    if (far) net.members.push_back(i);
  }
  return net;
}

namespace {

int greedy_cover_size(const FiniteMetricSpace& space, int center, double r) {
  std::vector<int> ball;
  for (int y = 0; y < space.n; ++y)
    if (space.d(center, y) <= r) ball.push_back(y);
  double half = r / 2.0;
  std::vector<char> covered(ball.size(), 0);
  std::size_t remaining = ball.size();
  int count = 0;
  while (remaining > 0) {
    int best = -1, best_cov = -1;
    for (int c : ball) {
      int cov = 0;
      for (std::size_t t = 0; t < ball.size(); ++t)
        if (!covered[t] && space.d(c, ball[t]) <= half) ++cov;
      if (cov > best_cov) {
        best_cov = cov;
        best = c;
      }
    }
    for (std::size_t t = 0; t < ball.size(); ++t) {
      if (!covered[t] && space.d(best, ball[t]) <= half) {
        covered[t] = 1;
        --remaining;
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

DoublingEstimate estimate_doubling(const FiniteMetricSpace& space, long probe_budget) {
  DoublingEstimate est;
  est.method = DoublingMethod::GreedyCover;
  std::vector<double> radii;
  for (double r = space.diam; r >= space.d_min * (1.0 - 1e-12); r /= 2.0) radii.push_back(r);
  int best = 2;
  long probes = 0;
  for (int c = 0; c < space.n && (probe_budget < 0 || probes < probe_budget); ++c) {
    for (double r : radii) {
      if (probe_budget >= 0 && probes >= probe_budget) break;
      best = std::max(best, greedy_cover_size(space, c, r));
      ++probes;
    }
  }
  est.K_est = static_cast<double>(best);
  est.probes = probes;
  return est;
}

DoublingEstimate user_doubling(double K) {
  DoublingEstimate est;
  est.method = DoublingMethod::UserSupplied;
  est.K_est = std::max(2.0, K);
  est.probes = 0;
  return est;
}

}  // namespace snowflake
