#include "snowflake/llr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "snowflake/error.hpp"

namespace snowflake {

QValidation validate_certificate(const std::vector<double>& Q, int m) {
  if (m < 2 || Q.size() != static_cast<std::size_t>(m) * m)
    fail(Errc::InvalidQ, "Q must be m x m with m >= 2");
  QValidation v;
  double max_abs = 0.0;
  bool all_zero = true;
  for (double q : Q) {
    if (!std::isfinite(q)) fail(Errc::InvalidQ, "non-finite entry");
    max_abs = std::max(max_abs, std::abs(q));
    if (q != 0.0) all_zero = false;
  }
  if (all_zero) fail(Errc::DegenerateQ, "Q is identically zero");

  double tol = 1e-10 * std::max(1.0, max_abs);
  auto at = [&](int i, int j) { return Q[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(at(i, j) - at(j, i)) > tol)
        fail(Errc::InvalidQ, "asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  v.symmetric = true;

  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += at(i, j);
    if (std::abs(s) > tol * m)
      fail(Errc::InvalidQ, "row " + std::to_string(i) + " does not sum to zero");
  }
  v.zero_row_sums = true;

  Eigen::MatrixXd mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mat(i, j) = 0.5 * (at(i, j) + at(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = solver.eigenvalues().minCoeff();
  v.trace = mat.trace();
  if (v.min_eigenvalue < -1e-10 * std::max(1.0, v.trace))
    fail(Errc::InvalidQ, "not positive semidefinite (min eigenvalue " +
                             std::to_string(v.min_eigenvalue) + ")");
  v.psd = true;
  return v;
}

double llr_bound(const FiniteMetricSpace& space, const std::vector<int>& subset,
                 const std::vector<double>& Q) {
  int m = static_cast<int>(subset.size());
  validate_certificate(Q, m);
  for (int idx : subset)
    if (idx < 0 || idx >= space.n) fail(Errc::InvalidArgument, "subset index out of range");

  double num = 0.0, den = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double q = Q[static_cast<std::size_t>(i) * m + j];
      double d2 = space.d(subset[i], subset[j]);
      d2 *= d2;
      if (q > 0.0) num += q * d2;
      else den += -q * d2;
    }
  }
  if (den == 0.0) {
    if (num == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();  // unbounded certificate
  }
  return std::sqrt(num / den);
}

LLRCertificate make_certificate(const FiniteMetricSpace& space, const std::vector<int>& subset,
                                const std::vector<double>& Q) {
  LLRCertificate cert;
  cert.subset = subset;
  cert.Q = Q;
  cert.bound = llr_bound(space, subset, Q);
  return cert;
}

LLRCheck llr_verify_embedding(const FiniteMetricSpace& space, const std::vector<int>& subset,
                              const std::vector<double>& Q, const std::vector<double>& embedding,
                              int dim) {
  int m = static_cast<int>(subset.size());
  if (dim <= 0 || embedding.size() != static_cast<std::size_t>(m) * dim)
    fail(Errc::InvalidArgument, "embedding must be |subset| x dim");
  LLRCheck check;
  check.bound = llr_bound(space, subset, Q);

  double max_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        double diff = embedding[static_cast<std::size_t>(i) * dim + k] -
                      embedding[static_cast<std::size_t>(j) * dim + k];
        s += diff * diff;
      }
      double ratio = std::sqrt(s) / space.d(subset[i], subset[j]);
      max_ratio = std::max(max_ratio, ratio);
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  check.measured_distortion =
      (min_ratio == 0.0) ? std::numeric_limits<double>::infinity() : max_ratio / min_ratio;
  check.consistent = check.measured_distortion >= check.bound * (1.0 - 1e-9);
  return check;
}

}  // namespace snowflake
