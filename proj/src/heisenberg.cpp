#include "snowflake/heisenberg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "snowflake/error.hpp"
#include "snowflake/rng.hpp"

namespace snowflake {

HeisPoint heis_identity(int n) {
  HeisPoint p;
  p.re.assign(n, 0.0);
  p.im.assign(n, 0.0);
  p.t = 0.0;
  return p;
}

HeisPoint heis_point(double re0, double im0, double t) {
  HeisPoint p;
  p.re = {re0};
  p.im = {im0};
  p.t = t;
  return p;
}

HeisPoint group_mul(const HeisPoint& a, const HeisPoint& b) {
  if (a.n() != b.n()) fail(Errc::DimensionMismatch, "group elements of different n");
  HeisPoint out;
  int n = a.n();
  out.re.resize(n);
  out.im.resize(n);
  double twist = 0.0;
  for (int j = 0; j < n; ++j) {
    out.re[j] = a.re[j] + b.re[j];
    out.im[j] = a.im[j] + b.im[j];
    // Im(w conj(z)) = im(w) re(z) - re(w) im(z)
    twist += a.im[j] * b.re[j] - a.re[j] * b.im[j];
  }
  out.t = a.t + b.t + 2.0 * twist;
  return out;
}

HeisPoint group_inv(const HeisPoint& a) {
  HeisPoint out = a;
  for (auto& x : out.re) x = -x;
  for (auto& x : out.im) x = -x;
  out.t = -out.t;
  return out;
}

namespace {

double z_norm_sq(const HeisPoint& p) {
  double s = 0.0;
  for (int j = 0; j < p.n(); ++j) s += p.re[j] * p.re[j] + p.im[j] * p.im[j];
  return s;
}

}  // namespace

double koranyi(const HeisPoint& p) {
  double z2 = z_norm_sq(p);
  return std::pow(z2 * z2 + p.t * p.t, 0.25);
}

double mp_norm(const HeisPoint& point, double p) {
  if (!(p >= 1.0 && p < 2.0)) fail(Errc::InvalidArgument, "p must be in [1, 2)");
  double z2 = z_norm_sq(point);
  double n0_sq = std::sqrt(z2 * z2 + point.t * point.t);  // |z|^4 + t^2 under sqrt
  if (n0_sq == 0.0) return 0.0;                           // identity, by continuity
  double cosine_arg = std::clamp(z2 / n0_sq, -1.0, 1.0);
  double angle = std::acos(cosine_arg);
  double factor = std::pow(std::cos(0.5 * p * angle), 1.0 / p);
  return std::sqrt(n0_sq) * factor;
}

HeisPoint dilate(const HeisPoint& point, double theta) {
  if (!(theta > 0.0)) fail(Errc::ThetaNonpositive, "dilation factor must be positive");
  HeisPoint out = point;
  for (auto& x : out.re) x *= theta;
  for (auto& x : out.im) x *= theta;
  out.t *= theta * theta;
  return out;
}

double dist_koranyi(const HeisPoint& g, const HeisPoint& h) {
  return koranyi(group_mul(group_inv(h), g));
}

double dist_mp(const HeisPoint& g, const HeisPoint& h, double p) {
  return mp_norm(group_mul(group_inv(h), g), p);
}

HeisSample make_heis_sample(int n, int count, double epsilon, std::uint64_t seed) {
  if (n < 1) fail(Errc::InvalidArgument, "n must be >= 1");
  if (count < 2) fail(Errc::TooFewPoints, "sample needs at least 2 points");
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    fail(Errc::EpsilonOutOfRange, "epsilon must be in (0, 1/2]");

  HeisSample sample;
  sample.n = n;
  sample.epsilon = epsilon;
  sample.p = 2.0 * (1.0 - epsilon);
  SeedStream root = SeedStream(seed).child(kTagHeis);
  for (int idx = 0; idx < count; ++idx) {
    SeedStream ps = root.child(static_cast<std::uint64_t>(idx));
    HeisPoint point = heis_identity(n);
    std::uint64_t counter = 0;
    for (int j = 0; j < n; ++j) {
      point.re[j] = 4.0 * ps.uniform(counter++) - 2.0;
      point.im[j] = 4.0 * ps.uniform(counter++) - 2.0;
    }
    point.t = 16.0 * ps.uniform(counter++) - 8.0;
    sample.points.push_back(std::move(point));
  }

  int m = count;
  sample.d_n0.assign(static_cast<std::size_t>(m) * m, 0.0);
  sample.d_mp.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      HeisPoint g = group_mul(group_inv(sample.points[j]), sample.points[i]);
      double dn0 = koranyi(g);
      double dmp = mp_norm(g, sample.p);
      if (dn0 == 0.0) fail(Errc::InvalidArgument, "sample contains duplicate points");
      sample.d_n0[static_cast<std::size_t>(i) * m + j] = dn0;
      sample.d_n0[static_cast<std::size_t>(j) * m + i] = dn0;
      sample.d_mp[static_cast<std::size_t>(i) * m + j] = dmp;
      sample.d_mp[static_cast<std::size_t>(j) * m + i] = dmp;
    }
  }
  return sample;
}

HeisEmbedding sample_embed(const HeisSample& sample, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    fail(Errc::EpsilonOutOfRange, "epsilon must be in (0, 1/2]");
  if (std::abs(2.0 * (1.0 - epsilon) - sample.p) > 1e-12)
    fail(Errc::InvalidArgument, "sample was built for a different epsilon");
  int m = static_cast<int>(sample.points.size());
  double p = sample.p;

  // centered kernel of d_mp^p against basepoint 0
  Eigen::MatrixXd G(m, m);
  auto dmp_p = [&](int i, int j) {
    if (i == j) return 0.0;
    return std::pow(sample.d_mp[static_cast<std::size_t>(i) * m + j], p);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = 0.5 * (dmp_p(0, i) + dmp_p(0, j) - dmp_p(i, j));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G);
  HeisEmbedding emb;
  emb.m = m;
  emb.dim = m;
  emb.kernel_trace = G.trace();
  emb.kernel_min_eigenvalue = solver.eigenvalues().minCoeff();
  double tol = 1e-8 * std::max(1.0, emb.kernel_trace);
  if (emb.kernel_min_eigenvalue < -tol) {
    int which = 0;
    solver.eigenvalues().minCoeff(&which);
    fail(Errc::KernelNotPSD,
         "kernel min eigenvalue " + std::to_string(emb.kernel_min_eigenvalue) +
             " below -1e-8 * trace (witness eigenvector index " + std::to_string(which) + ")");
  }

  Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd coords = solver.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  emb.coords.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) emb.coords[static_cast<std::size_t>(i) * m + k] = coords(i, k);

  emb.ratio_min = std::numeric_limits<double>::infinity();
  emb.ratio_max = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double dist = (coords.row(i) - coords.row(j)).norm();
      double expected = std::pow(sample.d_mp[static_cast<std::size_t>(i) * m + j], p / 2.0);
      emb.max_distance_error = std::max(emb.max_distance_error, std::abs(dist - expected));
      double ratio =
          dist / std::pow(sample.d_n0[static_cast<std::size_t>(i) * m + j], 1.0 - epsilon);
      emb.ratio_min = std::min(emb.ratio_min, ratio);
      emb.ratio_max = std::max(emb.ratio_max, ratio);
    }
  }
  return emb;
}

LatticeBall lattice_ball(int m) {
  if (m < 1) fail(Errc::InvalidArgument, "m must be >= 1");
  if (m > 32) fail(Errc::MTooLarge, "lattice enumeration capped at m = 32");
  LatticeBall ball;
  ball.m = m;
  long m4 = static_cast<long>(m) * m * m * m;
  for (long u = -m; u <= m; ++u) {
    for (long v = -m; v <= m; ++v) {
      long z2 = u * u + v * v;
      long z4 = z2 * z2;
      if (z4 > m4) continue;
      long t_budget = m4 - z4;
      long t_max = static_cast<long>(std::floor(std::sqrt(static_cast<double>(t_budget))));
      while (t_max * t_max > t_budget) --t_max;
      while ((t_max + 1) * (t_max + 1) <= t_budget) ++t_max;
      for (long t = -t_max; t <= t_max; ++t) ball.members.push_back({u, v, t});
    }
  }
  return ball;
}

double lower_bound_series(double epsilon, long m) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    fail(Errc::EpsilonOutOfRange, "epsilon must be in (0, 1/2)");
  if (m < 1) fail(Errc::InvalidArgument, "m must be >= 1");
  long terms = m * m;
  // ascending magnitudes with Neumaier compensation
  double sum = 0.0, comp = 0.0;
  for (long k = terms; k >= 1; --k) {
    double term = std::pow(static_cast<double>(k), -(1.0 + epsilon));
    double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) comp += (sum - t) + term;
    else comp += (term - t) + sum;
    sum = t;
  }
  return std::sqrt(sum + comp);
}

}  // namespace snowflake
