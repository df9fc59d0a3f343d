// snowflake: embeddings of snowflaked finite doubling metric spaces, with
// partition demos, certificates, and Heisenberg-group utilities.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "snowflake/embedding.hpp"
#include "snowflake/error.hpp"
#include "snowflake/heisenberg.hpp"
#include "snowflake/io.hpp"
#include "snowflake/llr.hpp"
#include "snowflake/metric_space.hpp"
#include "snowflake/parallel.hpp"
#include "snowflake/partition.hpp"
#include "snowflake/version.hpp"

namespace {

using nlohmann::json;
using namespace snowflake;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInternal = 3;

std::uint64_t env_seed() {
  if (const char* env = std::getenv("SNOWFLAKE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(Errc::InvalidArgument, "SNOWFLAKE_SEED is not an integer");
    }
  }
  return 0;
}

void emit(const json& report, const std::string& path) {
  std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path);
  out << text;
}

json base_report(const json& config) {
  json j;
  j["version"] = kVersion;
  j["config"] = config;
  return j;
}

json doubling_json(const DoublingEstimate& est) {
  return {{"value", est.K_est},
          {"source", est.method == DoublingMethod::UserSupplied ? "user" : "estimated"},
          {"probes", est.probes}};
}

std::vector<int> parse_subset(const std::string& text, int n) {
  if (text.empty()) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<int> subset;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    try {
      subset.push_back(std::stoi(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      fail(Errc::InvalidArgument, "bad subset entry '" + text.substr(pos, comma - pos) + "'");
    }
    pos = comma + 1;
  }
  return subset;
}

struct EmbedArgs {
  std::string input, out, report;
  double epsilon = 0.25, theta = 0.5, c = 8.0, c_star = 4096.0, tail_tol = 1e-6;
  std::optional<double> K;
  int dim = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int budget = 10000;
  int threads = default_threads();
};

int run_embed(const EmbedArgs& args) {
  FiniteMetricSpace space = load_space(args.input);
  DoublingEstimate est = args.K ? user_doubling(*args.K) : estimate_doubling(space);
  std::uint64_t seed = args.seed_set ? args.seed : env_seed();

  SnowflakeParams params = derive_params(est.K_est, args.epsilon, args.theta, args.c, args.c_star,
                                         space.d_min, args.tail_tol, args.dim);
  auto [result, cert] = certify(space, params, seed, args.budget, args.threads);
  HolderReport holder = holder_check(space, result);
  DistortionReport dist = measure_distortion(space, result);

  if (!args.out.empty()) write_matrix_csv(args.out, result.F, space.n, params.N);

  json config = {{"input", args.input},       {"epsilon", args.epsilon},
                 {"theta", args.theta},       {"c", args.c},
                 {"c_star", args.c_star},     {"tail_tol", args.tail_tol},
                 {"seed", seed},              {"budget", args.budget},
                 {"dim_override", args.dim},  {"out", args.out},
                 {"subcommand", "embed"}};
  json j = base_report(config);
  j["K"] = doubling_json(est);
  j["n"] = space.n;
  j["params"] = {{"K", params.K},     {"kappa", params.kappa}, {"tau", params.tau},
                 {"N", params.N},     {"i_max", params.i_max}, {"epsilon", params.epsilon},
                 {"theta", params.theta}};
  int failed = 0;
  for (const auto& rec : cert.events)
    if (!rec.passed) ++failed;
  j["certification"] = {
      {"status", cert.status == CertStatus::Certified ? "certified" : "budget-exhausted"},
      {"resamples", cert.resamples},
      {"events", cert.events.size()},
      {"failed_events", failed},
      {"degree", {{"max", cert.degrees.max_degree},
                  {"mean", cert.degrees.mean_degree},
                  {"exhaustive", cert.degrees.exhaustive},
                  {"bound_violations", cert.degrees.bound_violations}}},
      {"lll", {{"q", cert.lll.q}, {"e_q_d1", cert.lll.e_q_d1}, {"holds", cert.lll.holds}}}};
  j["holder"] = {{"c_emp", holder.c_emp},
                 {"max_ratio_to_bound", holder.max_ratio_to_bound},
                 {"pairs_checked", holder.pairs_checked}};
  j["distortion"] = {{"expansion", dist.expansion},
                     {"contraction", dist.contraction},
                     {"distortion", dist.distortion},
                     {"degenerate", dist.degenerate},
                     {"expansion_pair", dist.expansion_pair},
                     {"contraction_pair", dist.contraction_pair},
                     {"ceiling_constant", dist.ceiling_constant},
                     {"floor_constant", dist.floor_constant}};
  j["truncation_error"] = result.truncation_error;
  emit(j, args.report);
  return cert.status == CertStatus::Certified ? kExitOk : kExitBudget;
}

struct AuditArgs {
  std::string input, q_path, subset, report;
};

int run_audit(const AuditArgs& args) {
  FiniteMetricSpace space = load_space(args.input);
  int m = 0;
  std::vector<double> Q = load_square_matrix_json(args.q_path, m);
  std::vector<int> subset = parse_subset(args.subset, space.n);
  if (static_cast<int>(subset.size()) != m)
    fail(Errc::InvalidArgument, "subset size does not match Q");
  QValidation validation = validate_certificate(Q, m);
  double bound = llr_bound(space, subset, Q);

  json config = {{"input", args.input}, {"Q", args.q_path}, {"subset", subset},
                 {"subcommand", "audit"}};
  json j = base_report(config);
  j["bound"] = bound;
  j["valid"] = true;
  j["details"] = {{"min_eigenvalue", validation.min_eigenvalue},
                  {"trace", validation.trace},
                  {"subset_size", subset.size()},
                  {"unbounded", !std::isfinite(bound)}};
  emit(j, args.report);
  return kExitOk;
}

struct PartitionArgs {
  std::string input, report;
  double scale = 0.0, beta = 1.0 / 64.0;
  std::optional<double> K;
  int trials = 1000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = default_threads();
};

int run_partition_demo(const PartitionArgs& args) {
  FiniteMetricSpace space = load_space(args.input);
  DoublingEstimate est = args.K ? user_doubling(*args.K) : estimate_doubling(space);
  std::uint64_t seed = args.seed_set ? args.seed : env_seed();
  // --scale is in the input's units; the space is normalized to diam 1
  double s = args.scale / space.scale_factor;
  if (!(s > 0.0 && s <= 2.0))
    fail(Errc::InvalidArgument, "scale " + std::to_string(args.scale) +
                                    " is outside (0, 2*diam] of the input space");
  PaddingAuditReport audit = padding_audit(space, s, est.K_est, args.beta, args.trials, seed,
                                           args.threads);

  json config = {{"input", args.input}, {"scale", args.scale}, {"beta", args.beta},
                 {"trials", args.trials}, {"seed", seed}, {"subcommand", "partition-demo"}};
  json j = base_report(config);
  j["K"] = doubling_json(est);
  j["empirical"] = audit.min_probability;
  j["bound"] = audit.bound;
  j["stderr"] = audit.std_error;
  j["per_point"] = audit.per_point;
  emit(j, args.report);
  return kExitOk;
}

struct HeisArgs {
  std::string report;
  int n = 1;
  double epsilon = 0.25;
  int sample_size = 64;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int m = 8;
};

int run_heisenberg(const HeisArgs& args) {
  std::uint64_t seed = args.seed_set ? args.seed : env_seed();
  HeisSample sample = make_heis_sample(args.n, args.sample_size, args.epsilon, seed);
  HeisEmbedding emb = sample_embed(sample, args.epsilon);

  std::vector<std::vector<double>> pts(emb.m, std::vector<double>(emb.dim));
  for (int i = 0; i < emb.m; ++i)
    for (int k = 0; k < emb.dim; ++k) pts[i][k] = emb.coords[static_cast<std::size_t>(i) * emb.dim + k];
  DoublingEstimate est = estimate_doubling(space_from_points(pts));

  json config = {{"n", args.n}, {"epsilon", args.epsilon}, {"sample_size", args.sample_size},
                 {"seed", seed}, {"m", args.m}, {"subcommand", "heisenberg"}};
  json j = base_report(config);
  j["ratios"] = {{"min", emb.ratio_min}, {"max", emb.ratio_max}};
  j["kernel_min_eig"] = emb.kernel_min_eigenvalue;
  j["kernel_trace"] = emb.kernel_trace;
  j["max_distance_error"] = emb.max_distance_error;
  j["doubling_estimate"] = est.K_est;
  j["series_value"] = lower_bound_series(args.epsilon, args.m);
  if (args.n == 1) j["lattice_ball_count"] = lattice_ball(args.m).members.size();
  emit(j, args.report);
  return kExitOk;
}

struct NetArgs {
  std::string input, report;
  double delta = 0.0;
};

int run_net(const NetArgs& args) {
  FiniteMetricSpace space = load_space(args.input);
  double mesh = args.delta / space.scale_factor;
  Net net = greedy_net(space, mesh);
  json config = {{"input", args.input}, {"delta", args.delta}, {"subcommand", "net"}};
  json j = base_report(config);
  j["members"] = net.members;
  j["count"] = net.members.size();
  j["mesh_normalized"] = mesh;
  emit(j, args.report);
  return kExitOk;
}

struct DoublingArgs {
  std::string input, report;
  long budget = -1;
};

int run_doubling(const DoublingArgs& args) {
  FiniteMetricSpace space = load_space(args.input);
  DoublingEstimate est = estimate_doubling(space, args.budget);
  json config = {{"input", args.input}, {"budget", args.budget}, {"subcommand", "doubling"}};
  json j = base_report(config);
  j["K"] = doubling_json(est);
  emit(j, args.report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-dimensional Euclidean embeddings of snowflaked doubling metrics"};
  app.require_subcommand(1);

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "sample and certify a snowflake embedding");
  embed->add_option("--input", embed_args.input, "distance matrix (CSV) or JSON input")->required();
  embed->add_option("--epsilon", embed_args.epsilon, "snowflake parameter in (0, 1/2)");
  embed->add_option("--theta", embed_args.theta, "dimension/distortion tradeoff in (0, 1]");
  embed->add_option("--K", embed_args.K, "doubling constant (estimated when omitted)");
  embed->add_option("--c", embed_args.c, "dimension constant");
  embed->add_option("--c-star", embed_args.c_star, "certification net constant");
  embed->add_option("--dim", embed_args.dim, "dimension override");
  auto* embed_seed = embed->add_option("--seed", embed_args.seed, "random seed");
  embed->add_option("--budget", embed_args.budget, "resample budget");
  embed->add_option("--tail-tol", embed_args.tail_tol, "scale truncation tolerance");
  embed->add_option("--out", embed_args.out, "embedding CSV output path");
  embed->add_option("--report", embed_args.report, "JSON report path (stdout when omitted)");
  embed->add_option("--threads", embed_args.threads, "worker threads");

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "evaluate a distortion lower-bound certificate");
  audit->add_option("--input", audit_args.input)->required();
  audit->add_option("--Q", audit_args.q_path, "JSON matrix file")->required();
  audit->add_option("--subset", audit_args.subset, "comma-separated indices (default: all)");
  audit->add_option("--report", audit_args.report);

  PartitionArgs part_args;
  auto* part = app.add_subcommand("partition-demo", "Monte-Carlo padding audit of random carves");
  part->add_option("--input", part_args.input)->required();
  part->add_option("--scale", part_args.scale, "carve scale, in input units")->required();
  part->add_option("--K", part_args.K, "doubling constant (estimated when omitted)");
  part->add_option("--beta", part_args.beta, "padding radius factor in (0, 1/40)");
  part->add_option("--trials", part_args.trials);
  auto* part_seed = part->add_option("--seed", part_args.seed);
  part->add_option("--threads", part_args.threads);
  part->add_option("--report", part_args.report);

  HeisArgs heis_args;
  auto* heis = app.add_subcommand("heisenberg", "Heisenberg snowflake sample embedding");
  heis->add_option("--n", heis_args.n, "group dimension");
  heis->add_option("--epsilon", heis_args.epsilon);
  heis->add_option("--sample-size", heis_args.sample_size);
  auto* heis_seed = heis->add_option("--seed", heis_args.seed);
  heis->add_option("--m", heis_args.m, "lattice ball / series parameter");
  heis->add_option("--report", heis_args.report);

  NetArgs net_args;
  auto* net = app.add_subcommand("net", "greedy net of an input space");
  net->add_option("--input", net_args.input)->required();
  net->add_option("--delta", net_args.delta, "net mesh, in input units")->required();
  net->add_option("--report", net_args.report);

  DoublingArgs doub_args;
  auto* doub = app.add_subcommand("doubling", "greedy doubling-constant estimate");
  doub->add_option("--input", doub_args.input)->required();
  doub->add_option("--budget", doub_args.budget, "probe budget (-1 = unlimited)");
  doub->add_option("--report", doub_args.report);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed) {
      embed_args.seed_set = embed_seed->count() > 0;
      return run_embed(embed_args);
    }
    if (*audit) return run_audit(audit_args);
    if (*part) {
      part_args.seed_set = part_seed->count() > 0;
      return run_partition_demo(part_args);
    }
    if (*heis) {
      heis_args.seed_set = heis_seed->count() > 0;
      return run_heisenberg(heis_args);
    }
    if (*net) return run_net(net_args);
    if (*doub) return run_doubling(doub_args);
  } catch (const Error& e) {
    if (e.code() == Errc::UpperMinViolation) {
      std::cerr << "internal invariant violation: " << e.what() << "\n";
      return kExitInternal;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
