#include "snowflake/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "snowflake/error.hpp"
#include "snowflake/parallel.hpp"
#include "snowflake/partition.hpp"
#include "snowflake/rng.hpp"

namespace snowflake {

double SnowflakeParams::scale(int i) const { return std::pow(tau, i / (1.0 - epsilon)); }
double SnowflakeParams::weight(int i) const { return std::pow(tau, static_cast<double>(i)); }
double SnowflakeParams::slope(int i) const {
  return 64.0 * kappa * std::pow(tau, -i * epsilon / (1.0 - epsilon) - 1.0);
}
double SnowflakeParams::cert_mesh(int i) const {
  return std::pow(tau, (i + 2) / (1.0 - epsilon)) *
         std::pow(4.0 * epsilon / (c_star * kappa), 1.0 / (1.0 - epsilon));
}
double SnowflakeParams::truncation_error() const { return weight(i_max + 1) / (1.0 - tau); }

SnowflakeParams derive_params(double K, double epsilon, double theta, double c, double c_star,
                              double d_min, double tail_tol, int dimension_override) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    fail(Errc::EpsilonOutOfRange, "epsilon must be in (0, 1/2), got " + std::to_string(epsilon));
  if (!(theta > 0.0 && theta <= 1.0))
    fail(Errc::ThetaOutOfRange, "theta must be in (0, 1], got " + std::to_string(theta));
  if (!(K >= 2.0)) fail(Errc::KTooSmall, "K must be >= 2, got " + std::to_string(K));
  if (!(c > 0.0) || !(c_star > 0.0)) fail(Errc::InvalidArgument, "c and c_star must be positive");
  if (!(d_min > 0.0 && d_min <= 1.0))
    fail(Errc::InvalidArgument, "d_min must be in (0, 1] (normalized space)");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) fail(Errc::InvalidArgument, "tail_tol must be in (0,1)");

  SnowflakeParams p;
  p.epsilon = epsilon;
  p.theta = theta;
  p.K = K;
  p.kappa = std::log(K);
  p.c = c;
  p.c_star = c_star;
  p.tail_tol = tail_tol;
  p.d_min = d_min;
  p.tau = std::pow(epsilon, theta) / (32.0 * std::pow(p.kappa, theta));

  if (dimension_override > 0) {
    p.N = dimension_override;
    p.dimension_overridden = true;
  } else {
    double x = c * p.kappa / theta;
    double r = std::round(x);
    // snap to the integer when x sits on it up to rounding noise
    p.N = (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) ? static_cast<int>(r)
                                                                 : static_cast<int>(std::ceil(x));
  }

  double rhs = tail_tol * std::pow(d_min, 1.0 - epsilon);
  int i = 1;
  while (p.weight(i) > rhs && i < 400) ++i;
  p.i_max = i;
  return p;
}

ScaleHierarchy build_hierarchy(const FiniteMetricSpace& space, const SnowflakeParams& params) {
  ScaleHierarchy h;
  h.carve_nets.reserve(params.i_max);
  h.cert_nets.reserve(params.i_max);
  for (int i = 1; i <= params.i_max; ++i) {
    h.carve_nets.push_back(greedy_net(space, params.scale(i) / 4.0));
    double delta = params.cert_mesh(i);
    if (!(delta >= space.d_min)) {
      Net all;
      all.mesh = delta;
      all.members.resize(space.n);
      for (int x = 0; x < space.n; ++x) all.members[x] = x;
      h.cert_nets.push_back(std::move(all));
    } else {
      h.cert_nets.push_back(greedy_net(space, delta));
    }
  }
  for (int i = 1; i <= params.i_max; ++i) {
    const auto& members = h.cert_nets[i - 1].members;
    double lo = params.scale(i);
    double hi = 3.0 * params.scale(i - 1);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        double duv = space.d(members[a], members[b]);
        if (duv > lo && duv <= hi) h.events.push_back({i, members[a], members[b]});
      }
    }
  }
  return h;
}

std::uint64_t cluster_hash(const std::vector<int>& members) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int m : members) h = mix64(h ^ (static_cast<std::uint64_t>(m) + 0x9e3779b97f4a7c15ULL));
  return h;
}

namespace {

double radius_uniform(std::uint64_t seed, int i, int k, int j, int epoch) {
  return SeedStream(seed)
      .child(kTagRadius)
      .child(static_cast<std::uint64_t>(i))
      .child(static_cast<std::uint64_t>(k))
      .child(static_cast<std::uint64_t>(j))
      .uniform(static_cast<std::uint64_t>(epoch));
}

double shift_uniform(std::uint64_t seed, int i, int k, std::uint64_t hash, int round) {
  return SeedStream(seed)
      .child(kTagShift)
      .child(static_cast<std::uint64_t>(i))
      .child(static_cast<std::uint64_t>(k))
      .child(hash)
      .uniform(static_cast<std::uint64_t>(round));
}

// number of resample rounds at scale i whose region touches the cluster
int shift_round(const FiniteMetricSpace& space, const SnowflakeParams& params,
                const std::vector<ResampleRegion>& rounds, int i,
                const std::vector<int>& members) {
  if (rounds.empty()) return 0;
  double reach = 2.0 * params.scale(i);
  int count = 0;
  for (const auto& region : rounds) {
    bool touched = false;
    for (int z : members) {
      if (space.d(z, region.u) <= reach || space.d(z, region.v) <= reach) {
        touched = true;
        break;
      }
    }
    if (touched) ++count;
  }
  return count;
}

// carve scale i, coordinate k from the current state and write the f slice
void compute_scale_slice(const FiniteMetricSpace& space, const SnowflakeParams& params,
                         const ScaleHierarchy& hierarchy, EmbeddingResult& result, int i, int k) {
  const Net& net = hierarchy.carve_nets[i - 1];
  const auto& radii = result.state.radii[i - 1][k];
  Partition part = build_partition(space, net.members, radii);
  std::vector<double> bdist = boundary_distances(space, part);

  std::vector<double> cluster_shift(part.clusters.size());
  auto& shift_map = result.state.shifts[i - 1][k];
  shift_map.clear();
  for (std::size_t cid = 0; cid < part.clusters.size(); ++cid) {
    std::uint64_t h = cluster_hash(part.clusters[cid]);
    int round = shift_round(space, params, result.state.rounds[i - 1], i, part.clusters[cid]);
    double u = shift_uniform(result.state.seed, i, k, h, round);
    cluster_shift[cid] = u;
    shift_map[h] = u;
  }

  double w = params.weight(i);
  double a = params.slope(i);
  double* slice = &result.f[(static_cast<std::size_t>(i - 1) * params.N + k) * result.n];
  for (int x = 0; x < result.n; ++x) {
    double reach = std::isinf(bdist[x]) ? w : std::min(w, a * bdist[x]);
    slice[x] = cluster_shift[part.assignment[x]] * reach;
  }
}

void refresh_sums(EmbeddingResult& result) {
  int n = result.n;
  int N = result.params.N;
  result.coord_sums.assign(static_cast<std::size_t>(n) * N, 0.0);
  for (int i = 1; i <= result.params.i_max; ++i) {
    for (int k = 0; k < N; ++k) {
      const double* slice = &result.f[(static_cast<std::size_t>(i - 1) * N + k) * n];
      for (int x = 0; x < n; ++x) result.coord_sums[static_cast<std::size_t>(x) * N + k] += slice[x];
    }
  }
  double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(N));
  result.F.resize(result.coord_sums.size());
  for (std::size_t idx = 0; idx < result.F.size(); ++idx)
    result.F[idx] = result.coord_sums[idx] * inv_sqrt;
}

}  // namespace

double EmbeddingResult::partial_sum(int x, int k, int upto) const {
  double s = 0.0;
  for (int i = 1; i <= upto; ++i) s += f_at(i, k, x);
  return s;
}

double EmbeddingResult::pair_distance(int x, int y) const {
  double s = 0.0;
  for (int k = 0; k < params.N; ++k) {
    double diff = F[static_cast<std::size_t>(x) * params.N + k] -
                  F[static_cast<std::size_t>(y) * params.N + k];
    s += diff * diff;
  }
  return std::sqrt(s);
}

EmbeddingResult sample_embedding(const FiniteMetricSpace& space, const SnowflakeParams& params,
                                 std::uint64_t seed, int threads) {
  return sample_embedding(space, params, build_hierarchy(space, params), seed, threads);
}

EmbeddingResult sample_embedding(const FiniteMetricSpace& space, const SnowflakeParams& params,
                                 const ScaleHierarchy& hierarchy, std::uint64_t seed, int threads) {
  EmbeddingResult result;
  result.params = params;
  result.hierarchy = hierarchy;
  result.n = space.n;
  result.truncation_error = params.truncation_error();
  result.state.seed = seed;

  int N = params.N;
  result.state.radii.resize(params.i_max);
  result.state.shifts.resize(params.i_max);
  result.state.radius_epochs.resize(params.i_max);
  result.state.rounds.assign(params.i_max, {});
  for (int i = 1; i <= params.i_max; ++i) {
    std::size_t n_i = hierarchy.carve_nets[i - 1].members.size();
    result.state.radius_epochs[i - 1].assign(n_i, 0);
    result.state.radii[i - 1].assign(N, std::vector<double>(n_i, 0.0));
    result.state.shifts[i - 1].resize(N);
    RadiusDistribution dist{params.scale(i), params.K};
    for (int k = 0; k < N; ++k)
      for (std::size_t j = 0; j < n_i; ++j)
        result.state.radii[i - 1][k][j] =
            dist.inverse_cdf(radius_uniform(seed, i, k, static_cast<int>(j), 0));
  }

  result.f.assign(static_cast<std::size_t>(params.i_max) * N * space.n, 0.0);
  parallel_for(params.i_max * N, threads, [&](int idx) {
    int i = idx / N + 1;
    int k = idx % N;
    compute_scale_slice(space, params, hierarchy, result, i, k);
  });
  refresh_sums(result);
  return result;
}

int l_count(const EmbeddingResult& result, const EventKey& e) {
  double threshold = 2.0 * result.params.weight(e.i + 1);
  int count = 0;
  for (int k = 0; k < result.params.N; ++k) {
    double diff = result.partial_sum(e.u, k, e.i) - result.partial_sum(e.v, k, e.i);
    if (std::abs(diff) >= threshold) ++count;
  }
  return count;
}

int g_count(const EmbeddingResult& result, const EventKey& e) {
  double threshold = result.params.weight(e.i + 1) / 2.0;
  int count = 0;
  for (int k = 0; k < result.params.N; ++k) {
    double diff = result.coord_sum(e.u, k) - result.coord_sum(e.v, k);
    if (std::abs(diff) >= threshold) ++count;
  }
  return count;
}

HolderReport holder_check(const FiniteMetricSpace& space, const EmbeddingResult& result) {
  const SnowflakeParams& p = result.params;
  HolderReport report;
  double holder_scale = std::pow(p.kappa / p.epsilon, 1.0 + p.theta);
  for (int x = 0; x < space.n; ++x) {
    for (int y = x + 1; y < space.n; ++y) {
      double dxy = space.d(x, y);
      double max_col = 0.0;
      for (int k = 0; k < p.N; ++k) {
        double col = 0.0;
        for (int i = 1; i <= p.i_max; ++i) {
          double diff = std::abs(result.f_at(i, k, x) - result.f_at(i, k, y));
          double bound = std::min(p.weight(i), p.slope(i) * dxy);
          if (diff > bound * (1.0 + 1e-12))
            fail(Errc::UpperMinViolation, "pair (" + std::to_string(x) + "," + std::to_string(y) +
                                              ") scale " + std::to_string(i) + " coordinate " +
                                              std::to_string(k));
          if (bound > 0.0) report.max_ratio_to_bound = std::max(report.max_ratio_to_bound, diff / bound);
          col += diff;
        }
        max_col = std::max(max_col, col);
      }
      double dist = result.pair_distance(x, y);
      if (dist > max_col * (1.0 + 1e-12) + 1e-300)
        fail(Errc::UpperMinViolation, "norm inequality violated for pair (" + std::to_string(x) +
                                          "," + std::to_string(y) + ")");
      report.c_emp =
          std::max(report.c_emp, dist / (holder_scale * std::pow(dxy, 1.0 - p.epsilon)));
      ++report.pairs_checked;
    }
  }
  report.norm_inequality_ok = true;
  return report;
}

DegreeStats dependency_degree_stats(const FiniteMetricSpace& space, const SnowflakeParams& params,
                                    const ScaleHierarchy& hierarchy, long exact_limit) {
  DegreeStats stats;
  double degree_sum = 0.0;
  // events grouped by scale; hierarchy.events is ordered by i
  std::size_t begin = 0;
  while (begin < hierarchy.events.size()) {
    std::size_t end = begin;
    int i = hierarchy.events[begin].i;
    while (end < hierarchy.events.size() && hierarchy.events[end].i == i) ++end;
    std::size_t count = end - begin;
    std::size_t probe = count;
    if (exact_limit >= 0 && static_cast<long>(count) > exact_limit) {
      probe = 2000;  // sampled prefix; full scan only at desk-scale event counts
      stats.exhaustive = false;
    }
    double reach = 4.0 * params.scale(i);
    double ball_radius = 4.0 * params.scale(i - 1);
    const auto& net = hierarchy.cert_nets[i - 1].members;
    for (std::size_t a = begin; a < begin + probe; ++a) {
      const EventKey& e = hierarchy.events[a];
      int degree = 0;
      for (std::size_t b = begin; b < end; ++b) {
        if (a == b) continue;
        const EventKey& o = hierarchy.events[b];
        double d = std::min(std::min(space.d(e.u, o.u), space.d(e.u, o.v)),
                            std::min(space.d(e.v, o.u), space.d(e.v, o.v)));
        if (d <= reach) ++degree;
      }
      long in_ball = 0;
      for (int m : net)
        if (space.d(e.u, m) <= ball_radius) ++in_ball;
      if (degree > in_ball * in_ball) ++stats.bound_violations;
      stats.max_degree = std::max(stats.max_degree, degree);
      degree_sum += degree;
      ++stats.events_checked;
    }
    begin = end;
  }
  if (stats.events_checked > 0) stats.mean_degree = degree_sum / stats.events_checked;
  return stats;
}

std::pair<EmbeddingResult, CertificationReport> certify(const FiniteMetricSpace& space,
                                                        const SnowflakeParams& params,
                                                        std::uint64_t seed, int resample_budget,
                                                        int threads) {
  return certify_with_hierarchy(space, params, build_hierarchy(space, params), seed,
                                resample_budget, threads);
}

std::pair<EmbeddingResult, CertificationReport> certify_with_hierarchy(
    const FiniteMetricSpace& space, const SnowflakeParams& params, const ScaleHierarchy& hierarchy,
    std::uint64_t seed, int resample_budget, int threads) {
  if (resample_budget < 0) fail(Errc::InvalidArgument, "resample budget must be >= 0");
  EmbeddingResult result = sample_embedding(space, params, hierarchy, seed, threads);
  CertificationReport report;

  const auto& events = result.hierarchy.events;
  std::vector<char> failing(events.size(), 0);
  auto evaluate = [&](std::size_t idx) {
    failing[idx] = 2 * l_count(result, events[idx]) < params.N ? 1 : 0;
  };
  for (std::size_t idx = 0; idx < events.size(); ++idx) evaluate(idx);

  auto first_failing = [&]() -> long {
    for (std::size_t idx = 0; idx < events.size(); ++idx)
      if (failing[idx]) return static_cast<long>(idx);
    return -1;
  };

  long target = first_failing();
  while (target >= 0 && report.resamples < resample_budget) {
    const EventKey& e = events[target];
    ++report.resamples;
    int i = e.i;
    double reach = 2.0 * params.scale(i);
    const Net& net = result.hierarchy.carve_nets[i - 1];
    RadiusDistribution dist{params.scale(i), params.K};

    // fresh radii for the carve-net points near the failing pair, all coordinates
    for (std::size_t j = 0; j < net.members.size(); ++j) {
      int xj = net.members[j];
      if (space.d(xj, e.u) <= reach || space.d(xj, e.v) <= reach) {
        int epoch = ++result.state.radius_epochs[i - 1][j];
        for (int k = 0; k < params.N; ++k)
          result.state.radii[i - 1][k][j] =
              dist.inverse_cdf(radius_uniform(seed, i, k, static_cast<int>(j), epoch));
      }
    }
    // fresh shifts for the clusters meeting B(u, 2 s_i) or B(v, 2 s_i)
    result.state.rounds[i - 1].push_back({e.u, e.v});

    parallel_for(params.N, threads,
                 [&](int k) { compute_scale_slice(space, params, hierarchy, result, i, k); });

    // re-evaluate events whose inputs may have moved: scales >= i near the pair
    double affected = 4.0 * params.scale(i);
    for (std::size_t idx = 0; idx < events.size(); ++idx) {
      const EventKey& o = events[idx];
      if (o.i < i) continue;
      double d = std::min(std::min(space.d(o.u, e.u), space.d(o.u, e.v)),
                          std::min(space.d(o.v, e.u), space.d(o.v, e.v)));
      if (d <= affected) evaluate(idx);
    }
    target = first_failing();
    if (target < 0) {
      // authoritative sweep before declaring success
      for (std::size_t idx = 0; idx < events.size(); ++idx) evaluate(idx);
      target = first_failing();
    }
  }

  refresh_sums(result);
  report.status = (first_failing() < 0) ? CertStatus::Certified : CertStatus::BudgetExhausted;
  report.events.reserve(events.size());
  for (std::size_t idx = 0; idx < events.size(); ++idx) {
    EventRecord record;
    record.key = events[idx];
    record.L_count = l_count(result, events[idx]);
    record.passed = 2 * record.L_count >= params.N;
    report.events.push_back(record);
  }
  report.degrees = dependency_degree_stats(space, params, result.hierarchy);
  report.lll.q = std::pow(params.epsilon / params.kappa, params.theta * params.N / 2.0);
  report.lll.degree = report.degrees.max_degree;
  report.lll.e_q_d1 = std::exp(1.0) * report.lll.q * (report.lll.degree + 1);
  report.lll.holds = report.lll.e_q_d1 <= 1.0;
  return {std::move(result), std::move(report)};
}

DistortionReport measure_distortion(const FiniteMetricSpace& space,
                                    const EmbeddingResult& result) {
  const SnowflakeParams& p = result.params;
  DistortionReport report;
  double best_exp = 0.0;
  double best_con = 0.0;
  for (int x = 0; x < space.n; ++x) {
    for (int y = x + 1; y < space.n; ++y) {
      double target = std::pow(space.d(x, y), 1.0 - p.epsilon);
      double image = result.pair_distance(x, y);
      if (image == 0.0) {
        report.degenerate = true;
        report.contraction_pair = {x, y};
        continue;
      }
      if (image / target > best_exp) {
        best_exp = image / target;
        report.expansion_pair = {x, y};
      }
      if (target / image > best_con) {
        best_con = target / image;
        report.contraction_pair = {x, y};
      }
    }
  }
  report.expansion = best_exp;
  report.contraction =
      report.degenerate ? std::numeric_limits<double>::infinity() : best_con;
  report.distortion = report.degenerate ? std::numeric_limits<double>::infinity()
                                        : report.expansion * report.contraction;
  report.ceiling_constant = report.expansion / std::pow(p.kappa / p.epsilon, 1.0 + p.theta);
  report.floor_constant =
      (1.0 / report.contraction) / std::pow(p.epsilon / p.kappa, 2.0 * p.theta);
  return report;
}

}  // namespace snowflake
