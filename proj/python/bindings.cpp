#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snowflake/embedding.hpp"
#include "snowflake/error.hpp"
#include "snowflake/heisenberg.hpp"
#include "snowflake/llr.hpp"
#include "snowflake/metric_space.hpp"
#include "snowflake/partition.hpp"
#include "snowflake/version.hpp"

namespace py = pybind11;
using namespace snowflake;

namespace {

std::vector<std::vector<double>> matrix_rows(const std::vector<double>& flat, int rows, int cols) {
  std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out[r][c] = flat[static_cast<std::size_t>(r) * cols + c];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Euclidean embeddings of snowflaked finite doubling metric spaces";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "SnowflakeError");

  py::class_<FiniteMetricSpace>(m, "MetricSpace")
      .def_readonly("n", &FiniteMetricSpace::n)
      .def_readonly("d_min", &FiniteMetricSpace::d_min)
      .def_readonly("diam", &FiniteMetricSpace::diam)
      .def_readonly("scale_factor", &FiniteMetricSpace::scale_factor)
      .def_readonly("labels", &FiniteMetricSpace::labels)
      .def("d", &FiniteMetricSpace::d)
      .def("distances",
           [](const FiniteMetricSpace& s) { return matrix_rows(s.dist, s.n, s.n); });

  m.def("validate_metric",
        [](const std::vector<std::vector<double>>& matrix, std::vector<std::string> labels) {
          return validate_metric(matrix, std::move(labels));
        },
        py::arg("matrix"), py::arg("labels") = std::vector<std::string>{});
  m.def("space_from_points",
        [](const std::vector<std::vector<double>>& pts, std::vector<std::string> labels) {
          return space_from_points(pts, std::move(labels));
        },
        py::arg("points"), py::arg("labels") = std::vector<std::string>{});
  m.def("snowflake_metric", &snowflake_metric, py::arg("space"), py::arg("alpha"));

  py::class_<Net>(m, "Net")
      .def_readonly("mesh", &Net::mesh)
      .def_readonly("members", &Net::members);
  m.def("greedy_net", &greedy_net, py::arg("space"), py::arg("delta"));

  py::class_<DoublingEstimate>(m, "DoublingEstimate")
      .def_readonly("K_est", &DoublingEstimate::K_est)
      .def_readonly("probes", &DoublingEstimate::probes)
      .def_property_readonly("method", [](const DoublingEstimate& e) {
        return e.method == DoublingMethod::UserSupplied ? "user" : "greedy-cover";
      });
  m.def("estimate_doubling", &estimate_doubling, py::arg("space"), py::arg("probe_budget") = -1);
  m.def("user_doubling", &user_doubling, py::arg("K"));

  m.def("sample_radius",
        [](double s, double K, double u) { return sample_radius(RadiusDistribution{s, K}, u); },
        py::arg("s"), py::arg("K"), py::arg("u"));
  m.def("radius_cdf",
        [](double s, double K, double r) { return RadiusDistribution{s, K}.cdf(r); });

  py::class_<Partition>(m, "Partition")
      .def_readonly("centers", &Partition::centers)
      .def_readonly("radii", &Partition::radii)
      .def_readonly("assignment", &Partition::assignment)
      .def_readonly("clusters", &Partition::clusters);
  m.def("build_partition", &build_partition, py::arg("space"), py::arg("centers"),
        py::arg("radii"));

  py::class_<PaddingAuditReport>(m, "PaddingAuditReport")
      .def_readonly("bound", &PaddingAuditReport::bound)
      .def_readonly("min_probability", &PaddingAuditReport::min_probability)
      .def_readonly("std_error", &PaddingAuditReport::std_error)
      .def_readonly("per_point", &PaddingAuditReport::per_point);
  m.def("padding_audit", &padding_audit, py::arg("space"), py::arg("s"), py::arg("K"),
        py::arg("beta"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);

  py::class_<BoundaryAuditReport>(m, "BoundaryAuditReport")
      .def_readonly("a", &BoundaryAuditReport::a)
      .def_readonly("b", &BoundaryAuditReport::b)
      .def_readonly("exact_holds", &BoundaryAuditReport::exact_holds)
      .def_readonly("cut_empirical", &BoundaryAuditReport::cut_empirical)
      .def_readonly("meets_empirical", &BoundaryAuditReport::meets_empirical)
      .def_property_readonly("cut_exact",
                             [](const BoundaryAuditReport& r) { return r.exact.cut; })
      .def_property_readonly("meets_exact",
                             [](const BoundaryAuditReport& r) { return r.exact.meets; })
      .def_property_readonly("rhs_exact",
                             [](const BoundaryAuditReport& r) { return r.exact.rhs; });
  m.def("boundary_audit", &boundary_audit, py::arg("space"), py::arg("s"), py::arg("K"),
        py::arg("beta"), py::arg("x"), py::arg("y"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 1);

  py::class_<SnowflakeParams>(m, "SnowflakeParams")
      .def_readonly("epsilon", &SnowflakeParams::epsilon)
      .def_readonly("theta", &SnowflakeParams::theta)
      .def_readonly("K", &SnowflakeParams::K)
      .def_readonly("kappa", &SnowflakeParams::kappa)
      .def_readonly("tau", &SnowflakeParams::tau)
      .def_readonly("N", &SnowflakeParams::N)
      .def_readonly("i_max", &SnowflakeParams::i_max)
      .def("scale", &SnowflakeParams::scale)
      .def("weight", &SnowflakeParams::weight);
  m.def("derive_params", &derive_params, py::arg("K"), py::arg("epsilon"), py::arg("theta"),
        py::arg("c") = 8.0, py::arg("c_star") = 4096.0, py::arg("d_min") = 0.01,
        py::arg("tail_tol") = 1e-6, py::arg("dimension_override") = 0);

  py::class_<EmbeddingResult>(m, "EmbeddingResult")
      .def_readonly("n", &EmbeddingResult::n)
      .def_readonly("truncation_error", &EmbeddingResult::truncation_error)
      .def("matrix",
           [](const EmbeddingResult& r) { return matrix_rows(r.F, r.n, r.params.N); })
      .def("pair_distance", &EmbeddingResult::pair_distance)
      .def("f_at", &EmbeddingResult::f_at)
      .def_property_readonly("params", [](const EmbeddingResult& r) { return r.params; });
  m.def("sample_embedding",
        [](const FiniteMetricSpace& space, const SnowflakeParams& params, std::uint64_t seed,
           int threads) { return sample_embedding(space, params, seed, threads); },
        py::arg("space"), py::arg("params"), py::arg("seed"), py::arg("threads") = 1);

  py::class_<HolderReport>(m, "HolderReport")
      .def_readonly("pairs_checked", &HolderReport::pairs_checked)
      .def_readonly("c_emp", &HolderReport::c_emp)
      .def_readonly("max_ratio_to_bound", &HolderReport::max_ratio_to_bound);
  m.def("holder_check", &holder_check, py::arg("space"), py::arg("result"));

  py::class_<CertificationReport>(m, "CertificationReport")
      .def_readonly("resamples", &CertificationReport::resamples)
      .def_property_readonly("certified",
                             [](const CertificationReport& r) {
                               return r.status == CertStatus::Certified;
                             })
      .def_property_readonly("event_count",
                             [](const CertificationReport& r) { return r.events.size(); });
  m.def("certify",
        [](const FiniteMetricSpace& space, const SnowflakeParams& params, std::uint64_t seed,
           int budget, int threads) { return certify(space, params, seed, budget, threads); },
        py::arg("space"), py::arg("params"), py::arg("seed"), py::arg("resample_budget") = 10000,
        py::arg("threads") = 1);

  py::class_<DistortionReport>(m, "DistortionReport")
      .def_readonly("expansion", &DistortionReport::expansion)
      .def_readonly("contraction", &DistortionReport::contraction)
      .def_readonly("distortion", &DistortionReport::distortion)
      .def_readonly("degenerate", &DistortionReport::degenerate);
  m.def("measure_distortion", &measure_distortion, py::arg("space"), py::arg("result"));

  m.def("llr_bound",
        [](const FiniteMetricSpace& space, const std::vector<int>& subset,
           const std::vector<std::vector<double>>& Q) {
          std::vector<double> flat;
          for (const auto& row : Q) flat.insert(flat.end(), row.begin(), row.end());
          return llr_bound(space, subset, flat);
        },
        py::arg("space"), py::arg("subset"), py::arg("Q"));

  py::class_<HeisPoint>(m, "HeisPoint")
      .def_readonly("re", &HeisPoint::re)
      .def_readonly("im", &HeisPoint::im)
      .def_readonly("t", &HeisPoint::t);
  m.def("heis_point", &heis_point, py::arg("re"), py::arg("im"), py::arg("t"));
  m.def("heis_identity", &heis_identity, py::arg("n") = 1);
  m.def("group_mul", &group_mul);
  m.def("group_inv", &group_inv);
  m.def("koranyi", &koranyi);
  m.def("mp_norm", &mp_norm, py::arg("point"), py::arg("p"));
  m.def("dilate", &dilate, py::arg("point"), py::arg("theta"));
  m.def("dist_koranyi", &dist_koranyi);
  m.def("dist_mp", &dist_mp);

  py::class_<HeisSample>(m, "HeisSample")
      .def_readonly("n", &HeisSample::n)
      .def_readonly("epsilon", &HeisSample::epsilon)
      .def_readonly("p", &HeisSample::p)
      .def_property_readonly("size",
                             [](const HeisSample& s) { return s.points.size(); });
  m.def("make_heis_sample", &make_heis_sample, py::arg("n"), py::arg("count"), py::arg("epsilon"),
        py::arg("seed"));

  py::class_<HeisEmbedding>(m, "HeisEmbedding")
      .def_readonly("kernel_min_eigenvalue", &HeisEmbedding::kernel_min_eigenvalue)
      .def_readonly("kernel_trace", &HeisEmbedding::kernel_trace)
      .def_readonly("max_distance_error", &HeisEmbedding::max_distance_error)
      .def_readonly("ratio_min", &HeisEmbedding::ratio_min)
      .def_readonly("ratio_max", &HeisEmbedding::ratio_max)
      .def("matrix", [](const HeisEmbedding& e) { return matrix_rows(e.coords, e.m, e.dim); });
  m.def("heis_sample_embed", &sample_embed, py::arg("sample"), py::arg("epsilon"));

  m.def("lattice_ball_members", [](int mm) { return lattice_ball(mm).members; }, py::arg("m"));
  m.def("lower_bound_series", &lower_bound_series, py::arg("epsilon"), py::arg("m"));
}
