#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dergm/equivariance.hpp"
#include "dergm/estimation.hpp"
#include "dergm/io.hpp"
#include "dergm/model.hpp"
#include "dergm/oracle.hpp"
#include "dergm/sampling.hpp"

namespace py = pybind11;
using namespace dergm;

namespace {

FitOptions make_options(double tol, std::size_t max_iter) {
  FitOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return opts;
}

py::list diagnostics_list(const FitResult& fit) {
  py::list out;
  for (const auto& d : fit.diagnostics) out.append(py::make_tuple(d.code, d.detail));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dyadic-independent random graph models: exact likelihoods, sampling, "
            "maximum-likelihood fitting, and permutation-equivariance checks.";

  py::register_exception<NonexistentMleError>(m, "NonexistentMleError", PyExc_ValueError);
  py::register_exception<UnidentifiableError>(m, "UnidentifiableError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t, bool>(), py::arg("n"), py::arg("directed") = false)
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("directed", &Graph::directed)
      .def("set_edge", &Graph::set_edge, py::arg("i"), py::arg("j"), py::arg("present") = true)
      .def("has_edge", &Graph::has_edge)
      .def("edge_count", &Graph::edge_count)
      .def("edges", &Graph::edges)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        std::ostringstream os;
        os << "Graph(n=" << g.n() << ", directed=" << (g.directed() ? "True" : "False")
           << ", edges=" << g.edge_count() << ")";
        return os.str();
      });

  m.def("graph_from_edges",
        [](std::size_t n, bool directed, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
          Graph g(n, directed);
          for (auto [i, j] : edges) g.set_edge(i, j);
          return g;
        },
        py::arg("n"), py::arg("directed"), py::arg("edges"));

  m.def("degree_sequence", &degree_sequence);
  m.def("out_in_degrees", &out_in_degrees);
  m.def("permute_graph", [](const Graph& g, const std::vector<std::size_t>& pi) {
    return permute_graph(g, pi);
  });

  py::class_<BlockAssignment>(m, "BlockAssignment")
      .def(py::init<std::vector<std::size_t>>(), py::arg("labels"))
      .def_static("compacted",
                  [](const std::vector<std::size_t>& raw) { return BlockAssignment::compacted(raw); })
      .def_property_readonly("labels", &BlockAssignment::labels)
      .def_property_readonly("block_count", &BlockAssignment::block_count)
      .def("block_sizes", &BlockAssignment::block_sizes);

  m.def("block_edge_counts", [](const Graph& g, const BlockAssignment& blocks) {
    BlockEdgeCounts e = block_edge_counts(g, blocks);
    std::vector<std::vector<std::int64_t>> full(e.r, std::vector<std::int64_t>(e.r, 0));
    for (std::size_t k = 0; k < e.r; ++k)
      for (std::size_t l = 0; l < e.r; ++l) full[k][l] = e.at(k, l);
    return full;
  });
  m.def("block_degrees", [](const Graph& g, const BlockAssignment& blocks) {
    BlockDegrees d = block_degrees(g, blocks);
    if (d.directed) return py::make_tuple(d.degree, d.in_degree, d.within);
    return py::make_tuple(d.degree, d.within);
  });

  py::class_<LogitMatrix>(m, "LogitMatrix")
      .def(py::init<std::size_t, bool, std::vector<double>>(), py::arg("n"), py::arg("directed"),
           py::arg("values"))
      .def_property_readonly("n", &LogitMatrix::n)
      .def_property_readonly("directed", &LogitMatrix::directed)
      .def_property_readonly("values", &LogitMatrix::values)
      .def("at", &LogitMatrix::at);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_property_readonly("family", [](const ModelSpec& s) { return family_name(s.family()); })
      .def_property_readonly("directed", &ModelSpec::directed)
      .def_property_readonly("block_labels",
                             [](const ModelSpec& s) -> std::optional<std::vector<std::size_t>> {
                               if (const auto* b = s.blocks()) return b->labels();
                               return std::nullopt;
                             })
      .def("flat_params", &ModelSpec::flat_params)
      .def("__repr__", [](const ModelSpec& s) {
        return "ModelSpec(" + family_name(s.family()) + ")";
      });

  m.def("saturated", [](const LogitMatrix& t) { return ModelSpec(Saturated{t}); });
  m.def("erdos_renyi",
        [](double theta, bool directed) { return ModelSpec(ErdosRenyi{theta, directed}); },
        py::arg("theta"), py::arg("directed") = false);
  m.def("beta_model", [](std::vector<double> beta) { return ModelSpec(Beta{std::move(beta)}); });
  m.def("sbm", [](std::vector<std::size_t> labels, const std::vector<std::vector<double>>& eta) {
    BlockAssignment blocks(std::move(labels));
    std::size_t r = blocks.block_count();
    std::vector<double> tri(r * (r + 1) / 2, 0.0);
    if (eta.size() != r) throw std::invalid_argument("sbm: eta must be r x r");
    for (std::size_t k = 0; k < r; ++k) {
      if (eta[k].size() != r) throw std::invalid_argument("sbm: eta must be r x r");
      for (std::size_t l = k; l < r; ++l) tri[Sbm::eta_index(r, k, l)] = eta[k][l];
    }
    return ModelSpec(Sbm{std::move(blocks), std::move(tri)});
  });
  m.def("additive_sbm",
        [](std::vector<std::size_t> labels, std::vector<double> delta, std::vector<double> eta_diag) {
          return ModelSpec(
              AdditiveSbm{BlockAssignment(std::move(labels)), std::move(delta), std::move(eta_diag)});
        });
  m.def("p1_config", [](std::vector<double> alpha, std::vector<double> beta) {
    return ModelSpec(P1Config(std::move(alpha), std::move(beta)));
  });
  m.def("directed_additive_sbm",
        [](std::vector<std::size_t> labels, std::vector<double> delta, std::vector<double> lambda,
           std::vector<double> eta_diag) {
          return ModelSpec(DirectedAdditiveSbm(BlockAssignment(std::move(labels)), std::move(delta),
                                               std::move(lambda), std::move(eta_diag)));
        });

  m.def("logits", [](const ModelSpec& s, std::size_t n) { return logits(s, n); });
  m.def("log_partition", [](const ModelSpec& s, std::size_t n) { return log_partition(s, n); });
  m.def("log_likelihood",
        [](const ModelSpec& s, const Graph& g) { return log_likelihood(s, g); });
  m.def("dyad_probabilities",
        [](const ModelSpec& s, std::size_t n) { return dyad_probabilities(s, n); });
  m.def("sufficient_stats", [](const ModelSpec& s, const Graph& g) {
    SuffStats st = sufficient_stats(s, g);
    return py::make_tuple(family_name(st.family), st.values);
  });
  m.def("expected_stats", [](const ModelSpec& s, std::size_t n) {
    SuffStats st = expected_stats(s, n);
    return py::make_tuple(family_name(st.family), st.values);
  });

  m.def("sample",
        [](const ModelSpec& s, std::size_t n, std::size_t count, std::uint64_t seed) {
          return sample(s, n, SampleConfig{seed, count});
        },
        py::arg("model"), py::arg("n"), py::arg("count") = 1, py::arg("seed") = 0);
  m.def("empirical_dyad_frequencies", [](const std::vector<Graph>& samples) {
    return empirical_dyad_frequencies(samples);
  });

  py::class_<FitResult>(m, "FitResult")
      .def_property_readonly("params", [](const FitResult& f) { return f.params; })
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("max_moment_gap", &FitResult::max_moment_gap)
      .def_property_readonly("diagnostics", &diagnostics_list)
      .def("__repr__", [](const FitResult& f) {
        std::ostringstream os;
        os << "FitResult(" << family_name(f.params.family()) << ", converged="
           << (f.converged ? "True" : "False") << ", max_moment_gap=" << f.max_moment_gap << ")";
        return os.str();
      });

  m.def("fit_beta",
        [](const Graph& g, double tol, std::size_t max_iter) {
          return fit_beta(g, make_options(tol, max_iter));
        },
        py::arg("g"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000);
  m.def("fit_p1_config",
        [](const Graph& g, double tol, std::size_t max_iter) {
          return fit_p1_config(g, make_options(tol, max_iter));
        },
        py::arg("g"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000);
  m.def("fit_erdos_renyi",
        [](const Graph& g, double tol) { return fit_erdos_renyi(g, make_options(tol, 1)); },
        py::arg("g"), py::arg("tol") = 1e-10);
  m.def("fit_sbm",
        [](const Graph& g, const BlockAssignment& blocks, double tol) {
          return fit_sbm(g, blocks, make_options(tol, 1));
        },
        py::arg("g"), py::arg("blocks"), py::arg("tol") = 1e-10);
  m.def("fit_additive_sbm",
        [](const Graph& g, const BlockAssignment& blocks, double tol, std::size_t max_iter) {
          return fit_additive_sbm(g, blocks, make_options(tol, max_iter));
        },
        py::arg("g"), py::arg("blocks"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000);
  m.def("fit_directed_additive_sbm",
        [](const Graph& g, const BlockAssignment& blocks, double tol, std::size_t max_iter) {
          return fit_directed_additive_sbm(g, blocks, make_options(tol, max_iter));
        },
        py::arg("g"), py::arg("blocks"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000);
  m.def("existence_screen", [](const ModelSpec& s, const Graph& g) {
    SuffStats st = sufficient_stats(s, g);
    py::list out;
    for (const auto& v : existence_screen(st, g.n(), s.blocks()))
      out.append(py::make_tuple(v.stat, v.index, v.value, v.lo, v.hi));
    return out;
  });

  py::class_<ParametrizationProbe>(m, "ParametrizationProbe")
      .def_readonly("n", &ParametrizationProbe::n)
      .def_readonly("directed", &ParametrizationProbe::directed)
      .def_property_readonly("box",
                             [](const ParametrizationProbe& p) {
                               return py::make_tuple(p.box.lo, p.box.hi);
                             })
      .def("__call__", [](const ParametrizationProbe& p, std::size_t i, std::size_t j, double u,
                          double v) { return p(i, j, u, v); });

  m.def("shared_probe",
        [](std::size_t n, bool directed, double lo, double hi,
           std::function<double(double, double)> f) {
          return shared_probe(n, directed, DomainBox{lo, hi}, std::move(f));
        },
        py::arg("n"), py::arg("directed"), py::arg("lo"), py::arg("hi"), py::arg("f"));
  m.def("builtin_probe",
        [](const std::string& name, std::size_t n) {
          auto b = builtin_probe(name, n);
          if (!b) throw std::invalid_argument("unknown builtin probe: " + name);
          return b->probe;
        },
        py::arg("name"), py::arg("n") = 4);
  m.def("builtin_probe_names", [](std::size_t n) {
    std::vector<std::string> names;
    for (const auto& b : builtin_probes(n)) names.push_back(b.name);
    return names;
  }, py::arg("n") = 4);

  py::class_<EquivarianceReport>(m, "EquivarianceReport")
      .def_readonly("equivariant", &EquivarianceReport::equivariant)
      .def_readonly("max_discrepancy", &EquivarianceReport::max_discrepancy)
      .def_property_readonly("witness", [](const EquivarianceReport& r) -> py::object {
        if (!r.witness) return py::none();
        const auto& w = *r.witness;
        return py::make_tuple(w.pi, py::make_tuple(w.i, w.j), py::make_tuple(w.u, w.v),
                              py::make_tuple(w.source_value, w.image_value));
      });

  py::class_<DecompositionReport>(m, "DecompositionReport")
      .def_readonly("applicable", &DecompositionReport::applicable)
      .def_readonly("additive", &DecompositionReport::additive)
      .def_readonly("symmetric_additive", &DecompositionReport::symmetric_additive)
      .def_readonly("max_mixed_partial", &DecompositionReport::max_mixed_partial)
      .def_readonly("grid", &DecompositionReport::grid)
      .def_readonly("recovered_g", &DecompositionReport::recovered_g)
      .def_readonly("recovered_h", &DecompositionReport::recovered_h)
      .def_readonly("reconstruction_residual", &DecompositionReport::reconstruction_residual);

  py::class_<ReductionReport>(m, "ReductionReport")
      .def_readonly("passed", &ReductionReport::passed)
      .def_readonly("max_loglik_gap", &ReductionReport::max_loglik_gap);

  m.def("check_equivariance",
        [](const ParametrizationProbe& p, std::size_t trials, std::uint64_t seed) {
          return check_equivariance(p, trials, seed);
        },
        py::arg("probe"), py::arg("trials") = 200, py::arg("seed") = 0x5EED);
  m.def("check_additivity",
        [](const ParametrizationProbe& p, std::size_t grid, double tol) {
          return check_additivity(p, grid, tol);
        },
        py::arg("probe"), py::arg("grid") = 17, py::arg("tol") = 1e-6);
  m.def("verify_reduction",
        [](const ParametrizationProbe& p, double tol, std::uint64_t seed) {
          return verify_reduction(p, p.n, tol, seed);
        },
        py::arg("probe"), py::arg("tol") = 1e-9, py::arg("seed") = 0x5EED);

  m.def("brute_log_partition", &oracle::brute_log_partition);
  m.def("brute_normalization_sum", &oracle::brute_normalization_sum);
  m.def("brute_expected_stats", [](const ModelSpec& s, std::size_t n) {
    SuffStats st = oracle::brute_expected_stats(s, n);
    return py::make_tuple(family_name(st.family), st.values);
  });
  m.def("enumerate_graphs", &oracle::enumerate_graphs, py::arg("n"), py::arg("directed"));
  m.def("certify_mle",
        [](const Graph& g, const ModelSpec& fitted, std::size_t trials, std::uint64_t seed) {
          return oracle::certify_mle(g, fitted, trials, seed);
        },
        py::arg("g"), py::arg("fitted"), py::arg("trials") = 1000, py::arg("seed") = 0x5EED);

  m.def("params_dumps", [](const ModelSpec& s, std::optional<std::size_t> n) {
    std::ostringstream os;
    io::write_params(os, s, n);
    return os.str();
  }, py::arg("model"), py::arg("n") = std::nullopt);
  m.def("params_loads", [](const std::string& text) {
    std::istringstream is(text);
    io::ParamsDoc doc = io::read_params(is);
    return py::make_tuple(doc.spec, doc.n);
  });

#ifdef VERSION_INFO
#define DERGM_STR2(x) #x
#define DERGM_STR(x) DERGM_STR2(x)
  m.attr("__version__") = DERGM_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
