#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "snowflake/metric_space.hpp"

namespace snowflake {

/// Derived parameters of the multi-scale construction. For a space with
/// doubling constant K and target exponent 1-epsilon:
///   kappa = log K,  tau = eps^theta / (32 kappa^theta),  N = ceil(c kappa / theta).
/// Distance scales are s_i = tau^(i/(1-eps)); coordinate weights are tau^i.
struct SnowflakeParams {
  double epsilon = 0.25;
  double theta = 0.5;
  double K = 2.0;
  double kappa = 0.0;
  double c = 8.0;
  double c_star = 4096.0;
  double tau = 0.0;
  double tail_tol = 1e-6;
  double d_min = 0.0;  // of the normalized space the params were derived for
  int N = 0;
  int i_max = 0;
  bool dimension_overridden = false;

  double scale(int i) const;   // s_i, with scale(0) = 1
  double weight(int i) const;  // tau^i
  double slope(int i) const;   // 64 kappa tau^(-i eps/(1-eps) - 1)
  double cert_mesh(int i) const;
  double truncation_error() const;  // tau^(i_max+1) / (1 - tau)
};

SnowflakeParams derive_params(double K, double epsilon, double theta, double c, double c_star,
                              double d_min, double tail_tol, int dimension_override = 0);

/// One certification event: a pair (u, v) of scale-i net points whose distance
/// falls in (s_i, 3 s_{i-1}].
struct EventKey {
  int i = 0;
  int u = 0;
  int v = 0;  // u < v
};

struct ScaleHierarchy {
  std::vector<Net> carve_nets;  // index i-1, mesh s_i/4
  std::vector<Net> cert_nets;   // index i-1, mesh delta_i (whole space if delta_i < d_min)
  std::vector<EventKey> events; // ordered by (i, u, v)
};

ScaleHierarchy build_hierarchy(const FiniteMetricSpace& space, const SnowflakeParams& params);

struct ResampleRegion {
  int u = -1, v = -1;
};

/// Everything random about one embedding: materialized radii, the cluster
/// shifts actually drawn, and the resample history that makes replays exact.
struct RandomState {
  std::uint64_t seed = 0;
  // radii[i-1][k][j]: radius of carve-net point j at scale i, coordinate k
  std::vector<std::vector<std::vector<double>>> radii;
  // shifts[i-1][k]: cluster content hash -> drawn uniform
  std::vector<std::vector<std::map<std::uint64_t, double>>> shifts;
  // resample bookkeeping (shared across coordinates)
  std::vector<std::vector<int>> radius_epochs;      // [i-1][j]
  std::vector<std::vector<ResampleRegion>> rounds;  // [i-1]
};

std::uint64_t cluster_hash(const std::vector<int>& members);

struct EmbeddingResult {
  SnowflakeParams params;
  ScaleHierarchy hierarchy;
  RandomState state;
  int n = 0;
  std::vector<double> f;           // ((i-1)*N + k)*n + x
  std::vector<double> coord_sums;  // x*N + k
  std::vector<double> F;           // x*N + k, includes the 1/sqrt(N) factor
  double truncation_error = 0.0;

  double f_at(int i, int k, int x) const {
    return f[(static_cast<std::size_t>(i - 1) * params.N + k) * n + x];
  }
  double coord_sum(int x, int k) const { return coord_sums[static_cast<std::size_t>(x) * params.N + k]; }
  double partial_sum(int x, int k, int upto) const;
  double pair_distance(int x, int y) const;  // ||F(x) - F(y)||_2
};

EmbeddingResult sample_embedding(const FiniteMetricSpace& space, const SnowflakeParams& params,
                                 std::uint64_t seed, int threads = 1);
EmbeddingResult sample_embedding(const FiniteMetricSpace& space, const SnowflakeParams& params,
                                 const ScaleHierarchy& hierarchy, std::uint64_t seed,
                                 int threads = 1);

/// |L(i,u,v)|: coordinates whose scale-(<=i) partial sums differ by >= 2 tau^(i+1).
int l_count(const EmbeddingResult& result, const EventKey& e);
/// |G(i,u,v)|: coordinates whose full sums differ by >= tau^(i+1) / 2.
int g_count(const EmbeddingResult& result, const EventKey& e);

struct HolderReport {
  long pairs_checked = 0;
  double max_ratio_to_bound = 0.0;  // max |df| / min{tau^i, slope_i d(x,y)}
  bool norm_inequality_ok = false;  // ||F(x)-F(y)|| <= max_k sum_i |df|
  double c_emp = 0.0;               // max ||F(x)-F(y)|| / ((kappa/eps)^(1+theta) d^(1-eps))
};

/// Deterministic per-coordinate difference bound; throws on any violation.
HolderReport holder_check(const FiniteMetricSpace& space, const EmbeddingResult& result);

struct EventRecord {
  EventKey key;
  int L_count = 0;
  bool passed = false;
};

struct DegreeStats {
  int max_degree = 0;
  double mean_degree = 0.0;
  long bound_violations = 0;  // events whose degree exceeds |B(u, 4 s_{i-1}) cap N_i|^2
  bool exhaustive = true;
  long events_checked = 0;
};

struct LLLInfo {
  double q = 0.0;      // (eps / kappa)^(theta N / 2)
  int degree = 0;      // max dependency degree used
  double e_q_d1 = 0.0; // e * q * (degree + 1)
  bool holds = false;
};

enum class CertStatus { Certified, BudgetExhausted };

struct CertificationReport {
  CertStatus status = CertStatus::Certified;
  int resamples = 0;
  std::vector<EventRecord> events;
  DegreeStats degrees;
  LLLInfo lll;
};

/// Samples an embedding and resamples the variables local to failing events
/// until every event holds or the budget runs out.
std::pair<EmbeddingResult, CertificationReport> certify(const FiniteMetricSpace& space,
                                                        const SnowflakeParams& params,
                                                        std::uint64_t seed, int resample_budget,
                                                        int threads = 1);
std::pair<EmbeddingResult, CertificationReport> certify_with_hierarchy(
    const FiniteMetricSpace& space, const SnowflakeParams& params, const ScaleHierarchy& hierarchy,
    std::uint64_t seed, int resample_budget, int threads = 1);

DegreeStats dependency_degree_stats(const FiniteMetricSpace& space, const SnowflakeParams& params,
                                    const ScaleHierarchy& hierarchy, long exact_limit = 20000);

struct DistortionReport {
  double expansion = 0.0;    // max ||F(x)-F(y)|| / d(x,y)^(1-eps)
  double contraction = 0.0;  // max d(x,y)^(1-eps) / ||F(x)-F(y)||
  double distortion = 0.0;   // expansion * contraction
  std::array<int, 2> expansion_pair{-1, -1};
  std::array<int, 2> contraction_pair{-1, -1};
  bool degenerate = false;  // equal images of distinct points
  double ceiling_constant = 0.0;  // expansion / (kappa/eps)^(1+theta)
  double floor_constant = 0.0;    // (1 / contraction) / (eps/kappa)^(2 theta)
};

DistortionReport measure_distortion(const FiniteMetricSpace& space, const EmbeddingResult& result);

}  // namespace snowflake
