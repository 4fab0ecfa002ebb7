#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "nbpr/fault.hpp"
#include "nbpr/graph.hpp"
#include "nbpr/identical.hpp"
#include "nbpr/pagerank.hpp"
#include "nbpr/report.hpp"
#include "nbpr/rmat.hpp"

namespace py = pybind11;
using namespace nbpr;

namespace {

template <class T>
std::vector<T> copy(std::span<const T> s) {
  return {s.begin(), s.end()};
}

Variant variant_of(const std::string& name) {
  const auto v = parse_variant(name);
  if (!v) throw ValidationError("unknown variant: " + name);
  return *v;
}

RunConfig make_config(const std::string& variant, unsigned threads, double damping, double threshold,
                      std::uint64_t max_iters, bool perforation, bool identical) {
  RunConfig cfg;
  cfg.variant = variant_of(variant);
  cfg.threads = threads;
  cfg.damping = damping;
  cfg.threshold = threshold;
  cfg.max_iters = max_iters;
  cfg.perforation = perforation;
  cfg.identical_preproc = identical;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_nbpr, m) {
  m.doc() = "Parallel PageRank engine";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<EdgeList>(m, "EdgeList")
      .def(py::init<>())
      .def_readwrite("n", &EdgeList::n)
      .def_property(
          "edges",
          [](const EdgeList& el) {
            std::vector<std::pair<VertexId, VertexId>> out;
            out.reserve(el.edges.size());
            for (const Edge& e : el.edges) out.emplace_back(e.src, e.dst);
            return out;
          },
          [](EdgeList& el, const std::vector<std::pair<VertexId, VertexId>>& edges) {
            el.edges.clear();
            for (auto [s, d] : edges) el.edges.push_back({s, d});
          });

  py::class_<CsrGraph>(m, "CsrGraph")
      .def_property_readonly("num_vertices", &CsrGraph::num_vertices)
      .def_property_readonly("num_edges", &CsrGraph::num_edges)
      .def("out_neighbors", [](const CsrGraph& g, VertexId u) { return copy(g.out_neighbors(u)); })
      .def("in_neighbors", [](const CsrGraph& g, VertexId u) { return copy(g.in_neighbors(u)); })
      .def("out_degree", &CsrGraph::out_degree)
      .def_property_readonly("out_offsets", [](const CsrGraph& g) { return copy(g.out_offsets()); })
      .def_property_readonly("out_targets", [](const CsrGraph& g) { return copy(g.out_targets()); })
      .def_property_readonly("in_offsets", [](const CsrGraph& g) { return copy(g.in_offsets()); })
      .def_property_readonly("in_sources", [](const CsrGraph& g) { return copy(g.in_sources()); })
      .def_property_readonly("offset_list", [](const CsrGraph& g) { return copy(g.offset_list()); });

  m.def("load_edge_list", py::overload_cast<const std::filesystem::path&>(&load_edge_list), py::arg("path"));
  m.def(
      "parse_edge_list",
      [](const std::string& text) {
        std::istringstream in(text);
        return load_edge_list(in);
      },
      py::arg("text"));
  m.def("build_csr", &build_csr, py::arg("edges"), py::arg("dedup") = true);
  m.def("load_graph", &load_graph, py::arg("path"), py::arg("dedup") = true);
  m.def("save_csr", py::overload_cast<const CsrGraph&, const std::filesystem::path&>(&save_csr), py::arg("graph"),
        py::arg("path"));

  m.def(
      "rmat_generate",
      [](std::uint64_t edges, std::uint64_t seed, double a, double b, double c, double d, unsigned scale) {
        RmatParams p;
        p.target_edges = edges;
        p.seed = seed;
        p.a = a;
        p.b = b;
        p.c = c;
        p.d = d;
        p.scale = scale;
        return rmat_generate(p);
      },
      py::arg("edges"), py::arg("seed") = 1, py::arg("a") = 0.57, py::arg("b") = 0.19, py::arg("c") = 0.19,
      py::arg("d") = 0.05, py::arg("scale") = 0);
  m.def("rmat_scale_for", &rmat_scale_for, py::arg("edges"));

  py::class_<IdenticalClasses>(m, "IdenticalClasses")
      .def_readonly("representative", &IdenticalClasses::representative)
      .def_readonly("members", &IdenticalClasses::members)
      .def_property_readonly("num_classes", &IdenticalClasses::num_classes);
  m.def("detect_identical", &detect_identical, py::arg("graph"));

  py::class_<RunReport>(m, "RunReport")
      .def_property_readonly("variant", [](const RunReport& r) { return std::string(to_string(r.variant)); })
      .def_readonly("threads", &RunReport::threads)
      .def_readonly("wall_time_ns", &RunReport::wall_time_ns)
      .def_readonly("per_thread_iterations", &RunReport::per_thread_iterations)
      .def_property_readonly("iters_min", &RunReport::iters_min)
      .def_property_readonly("iters_max", &RunReport::iters_max)
      .def_readonly("final_error", &RunReport::final_error)
      .def_readonly("ranks", &RunReport::ranks)
      .def_readonly("l1_vs_oracle", &RunReport::l1_vs_oracle)
      .def_property_readonly("outcome", [](const RunReport& r) { return std::string(to_string(r.outcome)); })
      .def_property_readonly("converged", &RunReport::converged)
      .def_readonly("vertex_computations", &RunReport::vertex_computations)
      .def_readonly("frozen_at", &RunReport::frozen_at)
      .def_readonly("installs_per_iteration", &RunReport::installs_per_iteration)
      .def("csv_row", [](const RunReport& r) { return csv_row(r); });

  m.def(
      "run",
      [](const CsrGraph& g, const std::string& variant, unsigned threads, double damping, double threshold,
         std::uint64_t max_iters, bool perforation, bool identical) {
        const RunConfig cfg = make_config(variant, threads, damping, threshold, max_iters, perforation, identical);
        py::gil_scoped_release release;
        return run_pagerank(g, cfg);
      },
      py::arg("graph"), py::arg("variant") = "seq", py::arg("threads") = 1, py::arg("damping") = 0.85,
      py::arg("threshold") = 1e-16, py::arg("max_iters") = 10000, py::arg("perforation") = false,
      py::arg("identical") = false);

  m.def(
      "run_with_faults",
      [](const CsrGraph& g, const std::string& variant, unsigned threads, const std::vector<std::string>& sleeps,
         const std::vector<std::string>& kills, double watchdog_s, double threshold) {
        RunConfig cfg = make_config(variant, threads, 0.85, threshold, 10000, false, false);
        FaultPlan plan;
        for (const auto& s : sleeps) plan.sleeps.push_back(parse_sleep(s));
        for (const auto& k : kills) plan.kills.push_back(parse_kill(k));
        const auto watchdog = std::chrono::milliseconds(static_cast<std::int64_t>(watchdog_s * 1000.0));
        py::gil_scoped_release release;
        return run_with_faults(g, cfg, plan, watchdog);
      },
      py::arg("graph"), py::arg("variant"), py::arg("threads"), py::arg("sleeps") = std::vector<std::string>{},
      py::arg("kills") = std::vector<std::string>{}, py::arg("watchdog_s") = 60.0, py::arg("threshold") = 1e-16);

  m.def("l1_norm", [](const std::vector<double>& a, const std::vector<double>& b) { return l1_norm(a, b); },
        py::arg("a"), py::arg("b"));
  m.def("max_residual",
        [](const CsrGraph& g, const std::vector<double>& ranks, double damping) {
          return max_residual(g, ranks, damping);
        },
        py::arg("graph"), py::arg("ranks"), py::arg("damping") = 0.85);
  m.def(
      "partition_static",
      [](std::size_t n, unsigned p) {
        std::vector<std::pair<VertexId, VertexId>> out;
        for (const auto& r : partition_static(n, p).ranges) out.emplace_back(r.begin, r.end);
        return out;
      },
      py::arg("n"), py::arg("p"));
  m.def("variants", [] {
    std::vector<std::string> out;
    for (Variant v : all_variants()) out.emplace_back(to_string(v));
    return out;
  });
  m.attr("CSV_HEADER") = std::string(kCsvHeader);
}
