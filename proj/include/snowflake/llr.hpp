#pragma once

#include <vector>

#include "snowflake/metric_space.hpp"

namespace snowflake {

/// Validation record for a quadratic-form certificate matrix: symmetric,
/// zero row sums, positive semidefinite.
struct QValidation {
  bool symmetric = false;
  bool zero_row_sums = false;
  bool psd = false;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
};

/// Checks the certificate matrix; throws InvalidQ / DegenerateQ on failure.
QValidation validate_certificate(const std::vector<double>& Q, int m);

/// Euclidean-distortion lower bound from a PSD zero-row-sum matrix Q over the
/// given point subset:
///   sqrt( sum max(q_ij, 0) d_ij^2  /  sum max(-q_ij, 0) d_ij^2 ).
/// Returns +inf when the denominator vanishes with a positive numerator.
double llr_bound(const FiniteMetricSpace& space, const std::vector<int>& subset,
                 const std::vector<double>& Q);

struct LLRCertificate {
  std::vector<int> subset;
  std::vector<double> Q;  // |subset| x |subset|
  double bound = 0.0;
};

LLRCertificate make_certificate(const FiniteMetricSpace& space, const std::vector<int>& subset,
                                const std::vector<double>& Q);

struct LLRCheck {
  double bound = 0.0;
  double measured_distortion = 0.0;
  bool consistent = false;  // measured >= bound (within tolerance)
};

/// Cross-checks a Euclidean embedding of the subset against the certificate:
/// its measured distortion relative to the subset metric must dominate bound.
/// embedding is |subset| x dim, row-major.
LLRCheck llr_verify_embedding(const FiniteMetricSpace& space, const std::vector<int>& subset,
                              const std::vector<double>& Q, const std::vector<double>& embedding,
                              int dim);

}  // namespace snowflake
