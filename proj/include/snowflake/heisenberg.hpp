#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snowflake/metric_space.hpp"

namespace snowflake {

/// Element (z, t) of the n'th Heisenberg group; z carried as parallel
/// real/imaginary arrays.
struct HeisPoint {
  std::vector<double> re, im;
  double t = 0.0;

  int n() const { return static_cast<int>(re.size()); }
};

HeisPoint heis_identity(int n);
HeisPoint heis_point(double re0, double im0, double t);  // n = 1 convenience

/// (w,s) * (z,t) = (w + z, s + t + 2 sum Im(w_j conj(z_j)))
HeisPoint group_mul(const HeisPoint& a, const HeisPoint& b);
HeisPoint group_inv(const HeisPoint& a);

/// Koranyi quasi-norm (|z|^4 + t^2)^(1/4).
double koranyi(const HeisPoint& p);

/// M_p(z,t) = (|z|^4+t^2)^(1/4) (cos((p/2) arccos(|z|^2 / sqrt(|z|^4+t^2))))^(1/p),
/// p in [1,2); 0 at the identity.
double mp_norm(const HeisPoint& point, double p);

/// delta_theta(z, t) = (theta z, theta^2 t)
HeisPoint dilate(const HeisPoint& point, double theta);

double dist_koranyi(const HeisPoint& g, const HeisPoint& h);       // N0(h^-1 g)
double dist_mp(const HeisPoint& g, const HeisPoint& h, double p);  // Mp(h^-1 g)

struct HeisSample {
  int n = 1;
  double epsilon = 0.25;
  double p = 1.5;  // 2 (1 - epsilon)
  std::vector<HeisPoint> points;
  std::vector<double> d_n0;  // m x m
  std::vector<double> d_mp;  // m x m
};

/// Random sample: z components uniform in [-2, 2], t uniform in [-8, 8].
HeisSample make_heis_sample(int n, int count, double epsilon, std::uint64_t seed);

struct HeisEmbedding {
  int m = 0, dim = 0;
  std::vector<double> coords;  // m x dim
  double kernel_min_eigenvalue = 0.0;
  double kernel_trace = 0.0;
  double max_distance_error = 0.0;  // max | ||f(x)-f(y)|| - d_mp^(p/2) |
  double ratio_min = 0.0, ratio_max = 0.0;  // ||f(x)-f(y)|| / d_n0^(1-eps)
};

/// Factors the centered kernel of d_mp^p into Euclidean coordinates whose
/// pairwise distances equal d_mp^(p/2). Throws KernelNotPSD when the minimum
/// eigenvalue falls below -1e-8 * trace.
HeisEmbedding sample_embed(const HeisSample& sample, double epsilon);

struct LatticeBall {
  int m = 0;
  std::vector<std::array<long, 3>> members;  // (u, v, t) with N0 <= m, n = 1
};

LatticeBall lattice_ball(int m);  // MTooLarge above the enumeration guard

/// sqrt( sum_{k=1}^{m^2} k^(-(1+epsilon)) )
double lower_bound_series(double epsilon, long m);

}  // namespace snowflake
