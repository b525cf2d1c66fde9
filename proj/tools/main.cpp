// dergm: fit, sample, and evaluate dyadic-independent random-graph models,
// and check candidate nodal parametrizations for permutation equivariance.
//
// Exit codes: 0 success / check passed, 1 input or validation error,
// 2 nonexistent MLE, 3 unidentifiable parameters, 4 check failed.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dergm/equivariance.hpp"
#include "dergm/estimation.hpp"
#include "dergm/io.hpp"
#include "dergm/model.hpp"
#include "dergm/oracle.hpp"
#include "dergm/sampling.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_nonexistent = 2;
constexpr int exit_unidentifiable = 3;
constexpr int exit_check_failed = 4;

struct FitArgs {
  std::string model;
  std::string graph_path;
  std::string blocks_path;
  std::string out_path;
  double tol = 1e-10;
  std::size_t max_iter = 5000;
};

struct SampleArgs {
  std::string params_path;
  std::string out_dir;
  std::size_t n = 0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

struct LoglikArgs {
  std::string params_path;
  std::string graph_path;
};

struct VerifyArgs {
  std::string probe;
  std::string check;
  std::size_t n = 4;
  std::size_t grid = 17;
  double tol = 0.0;  // 0 = per-check default
  std::size_t trials = 200;
  std::uint64_t seed = 0x5EED;
};

struct OracleArgs {
  std::string params_path;
  std::string check;
  std::size_t n = 0;
};

void print_params_line(const char* name, const std::vector<double>& v) {
  std::printf("%s:", name);
  for (double x : v) std::printf(" %.17g", x);
  std::printf("\n");
}

std::size_t resolve_n(const dergm::io::ParamsDoc& doc, std::size_t flag_n, const char* what) {
  if (doc.n) {
    if (flag_n != 0 && flag_n != *doc.n)
      throw std::invalid_argument(std::string(what) + ": --n contradicts the parameter file");
    return *doc.n;
  }
  if (flag_n == 0)
    throw std::invalid_argument(std::string(what) +
                                ": the parameter file does not pin n; pass --n");
  return flag_n;
}

int run_fit(const FitArgs& args) {
  auto family = dergm::family_from_name(args.model);
  if (!family) throw std::invalid_argument("unknown model: " + args.model);

  dergm::io::LoadedGraph loaded = dergm::io::read_edge_list_file(args.graph_path);
  const dergm::Graph& g = loaded.graph;

  std::optional<dergm::BlockAssignment> blocks;
  const bool needs_blocks = *family == dergm::Family::sbm ||
                            *family == dergm::Family::additive_sbm ||
                            *family == dergm::Family::directed_additive_sbm;
  if (needs_blocks) {
    if (args.blocks_path.empty())
      throw std::invalid_argument(args.model + " requires --blocks");
    blocks = dergm::io::read_blocks_file(args.blocks_path, loaded);
  } else if (!args.blocks_path.empty()) {
    throw std::invalid_argument(args.model + " does not take --blocks");
  }

  dergm::FitOptions opts;
  opts.tol = args.tol;
  opts.max_iter = args.max_iter;

  dergm::FitResult fit = [&]() {
    switch (*family) {
      case dergm::Family::beta: return dergm::fit_beta(g, opts);
      case dergm::Family::p1_config: return dergm::fit_p1_config(g, opts);
      case dergm::Family::erdos_renyi: return dergm::fit_erdos_renyi(g, opts);
      case dergm::Family::sbm: return dergm::fit_sbm(g, *blocks, opts);
      case dergm::Family::additive_sbm: return dergm::fit_additive_sbm(g, *blocks, opts);
      case dergm::Family::directed_additive_sbm:
        return dergm::fit_directed_additive_sbm(g, *blocks, opts);
      case dergm::Family::saturated: {
        // Each dyad bit is at its own achievable extreme; no finite logits.
        auto stats = dergm::sufficient_stats(dergm::Family::saturated, nullptr, g);
        throw dergm::NonexistentMleError(
            "saturated MLE does not exist for a single observed graph: every dyad statistic is "
            "at its boundary",
            dergm::existence_screen(stats, g.n(), nullptr));
      }
    }
    throw std::logic_error("unhandled family");
  }();

  dergm::io::write_params_file(args.out_path, fit.params, g.n());
  {
    std::ofstream map_out(args.out_path + ".nodes");
    dergm::io::write_node_map(map_out, loaded.node_tokens);
  }

  std::printf("model: %s\n", args.model.c_str());
  std::printf("n: %zu\n", g.n());
  std::printf("iterations: %zu\n", fit.iterations);
  std::printf("converged: %s\n", fit.converged ? "true" : "false");
  std::printf("max_moment_gap: %.17g\n", fit.max_moment_gap);
  for (const auto& d : fit.diagnostics)
    std::printf("note[%s]: %s\n", d.code.c_str(), d.detail.c_str());
  std::printf("wrote: %s\n", args.out_path.c_str());
  std::printf("wrote: %s.nodes\n", args.out_path.c_str());
  return fit.converged ? exit_ok : exit_input;
}

int run_sample(const SampleArgs& args) {
  dergm::io::ParamsDoc doc = dergm::io::read_params_file(args.params_path);
  const std::size_t n = resolve_n(doc, args.n, "sample");
  if (args.count < 1) throw std::invalid_argument("sample: --count must be >= 1");

  std::filesystem::create_directories(args.out_dir);
  dergm::SampleConfig cfg{args.seed, args.count};
  std::vector<dergm::Graph> draws = dergm::sample(doc.spec, n, cfg);
  for (std::size_t s = 0; s < draws.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%06zu.txt", s);
    dergm::io::write_edge_list_file((std::filesystem::path(args.out_dir) / name).string(),
                                    draws[s]);
  }
  std::printf("wrote %zu samples to %s\n", draws.size(), args.out_dir.c_str());
  return exit_ok;
}

int run_loglik(const LoglikArgs& args) {
  dergm::io::ParamsDoc doc = dergm::io::read_params_file(args.params_path);
  dergm::io::LoadedGraph loaded = dergm::io::read_edge_list_file(args.graph_path);
  if (doc.spec.directed() != loaded.graph.directed())
    throw std::invalid_argument("loglik: graph directedness does not match the model");
  if (doc.n && *doc.n != loaded.graph.n())
    throw std::invalid_argument("loglik: graph node count does not match the parameters");
  std::printf("%.16g\n", dergm::log_likelihood(doc.spec, loaded.graph));
  return exit_ok;
}

dergm::ParametrizationProbe resolve_probe(const std::string& name_or_path, std::size_t n) {
  if (auto builtin = dergm::builtin_probe(name_or_path, n)) return builtin->probe;
  if (std::filesystem::exists(name_or_path))
    return dergm::io::read_probe_grid_file(name_or_path);
  throw std::invalid_argument("verify: no builtin probe or probe file named " + name_or_path);
}

void print_permutation(const std::vector<std::size_t>& pi) {
  std::printf("witness permutation:");
  for (std::size_t v : pi) std::printf(" %zu", v);
  std::printf("\n");
}

int run_verify(const VerifyArgs& args) {
  dergm::ParametrizationProbe probe = resolve_probe(args.probe, args.n);
  std::printf("probe: %s (n=%zu, %s)\n", args.probe.c_str(), probe.n,
              probe.directed ? "directed" : "undirected");

  if (args.check == "equivariance") {
    auto report = dergm::check_equivariance(probe, args.trials, args.seed);
    std::printf("max_discrepancy: %.17g\n", report.max_discrepancy);
    if (report.equivariant) {
      std::printf("PASS equivariance\n");
      return exit_ok;
    }
    if (report.witness) {
      const auto& w = *report.witness;
      print_permutation(w.pi);
      std::printf("witness dyad: (%zu,%zu) -> (%zu,%zu)\n", w.i, w.j, w.pi[w.i], w.pi[w.j]);
      std::printf("witness values: u=%.17g v=%.17g\n", w.u, w.v);
      std::printf("f_source=%.17g f_image=%.17g\n", w.source_value, w.image_value);
    }
    std::printf("FAIL equivariance\n");
    return exit_check_failed;
  }
  if (args.check == "additivity") {
    const double tol = args.tol > 0 ? args.tol : 1e-6;
    auto report = dergm::check_additivity(probe, args.grid, tol);
    if (!report.applicable) {
      std::printf("FAIL additivity: not applicable, probe is not permutation equivariant\n");
      return exit_check_failed;
    }
    std::printf("max_mixed_partial: %.17g (tolerance %.17g)\n", report.max_mixed_partial,
                report.tolerance_used);
    if (report.additive) {
      std::printf("symmetric_additive: %s\n", report.symmetric_additive ? "true" : "false");
      std::printf("reconstruction_residual: %.17g\n", report.reconstruction_residual);
      std::printf("PASS additivity\n");
      return exit_ok;
    }
    std::printf("FAIL additivity\n");
    return exit_check_failed;
  }
  if (args.check == "reduction") {
    const double tol = args.tol > 0 ? args.tol : 1e-9;
    auto report = dergm::verify_reduction(probe, probe.n, tol, args.seed);
    std::printf("max_loglik_gap: %.17g\n", report.max_loglik_gap);
    std::printf("%s reduction\n", report.passed ? "PASS" : "FAIL");
    return report.passed ? exit_ok : exit_check_failed;
  }
  throw std::invalid_argument("verify: unknown check " + args.check);
}

int run_oracle(const OracleArgs& args) {
  dergm::io::ParamsDoc doc = dergm::io::read_params_file(args.params_path);
  const std::size_t n = resolve_n(doc, args.n, "oracle");
  if (!dergm::oracle::enumerable(n, doc.spec.directed()))
    throw std::invalid_argument("oracle: n exceeds the enumeration limit");
  const double tol = 1e-10;

  if (args.check == "normalization") {
    double total = dergm::oracle::brute_normalization_sum(doc.spec, n);
    std::printf("sum_of_probabilities: %.17g\n", total);
    std::printf("expected: 1\n");
    bool ok = std::abs(total - 1.0) <= tol;
    std::printf("%s normalization\n", ok ? "PASS" : "FAIL");
    return ok ? exit_ok : exit_check_failed;
  }
  if (args.check == "partition") {
    double closed = dergm::log_partition(doc.spec, n);
    double brute = dergm::oracle::brute_log_partition(doc.spec, n);
    std::printf("%.16g\n%.16g\n", closed, brute);
    bool ok = std::abs(closed - brute) <= tol;
    std::printf("%s partition\n", ok ? "PASS" : "FAIL");
    return ok ? exit_ok : exit_check_failed;
  }
  if (args.check == "moments") {
    auto closed = dergm::expected_stats(doc.spec, n);
    auto brute = dergm::oracle::brute_expected_stats(doc.spec, n);
    print_params_line("expected_stats", closed.values);
    print_params_line("enumerated_stats", brute.values);
    double gap = 0.0;
    for (std::size_t t = 0; t < closed.values.size(); ++t)
      gap = std::max(gap, std::abs(closed.values[t] - brute.values[t]));
    std::printf("max_gap: %.17g\n", gap);
    bool ok = gap <= tol;
    std::printf("%s moments\n", ok ? "PASS" : "FAIL");
    return ok ? exit_ok : exit_check_failed;
  }
  throw std::invalid_argument("oracle: unknown check " + args.check);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic-independent random graph models: exact likelihoods, sampling, MLE, "
               "and parametrization-equivariance checks"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of a model family to a graph");
  fit->add_option("--model", fit_args.model,
                  "saturated|erdos-renyi|beta|sbm|additive-sbm|p1-config|directed-additive-sbm")
      ->required();
  fit->add_option("--graph", fit_args.graph_path, "edge-list file")->required();
  fit->add_option("--blocks", fit_args.blocks_path, "blocks file (block families only)");
  fit->add_option("--tol", fit_args.tol, "moment-gap tolerance");
  fit->add_option("--max-iter", fit_args.max_iter, "iteration cap");
  fit->add_option("--out", fit_args.out_path, "output parameter file")->required();

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "draw graphs from a model");
  sample->add_option("--params", sample_args.params_path, "parameter file")->required();
  sample->add_option("--n", sample_args.n, "node count (required when the file does not pin it)");
  sample->add_option("--count", sample_args.count, "number of graphs")->required();
  sample->add_option("--seed", sample_args.seed, "random seed");
  sample->add_option("--out-dir", sample_args.out_dir, "output directory")->required();

  LoglikArgs loglik_args;
  auto* loglik = app.add_subcommand("loglik", "log-likelihood of a graph under a model");
  loglik->add_option("--params", loglik_args.params_path, "parameter file")->required();
  loglik->add_option("--graph", loglik_args.graph_path, "edge-list file")->required();

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "equivariance / additivity / reduction checks");
  verify->add_option("--probe", verify_args.probe, "builtin probe name or probe grid file")
      ->required();
  verify->add_option("--check", verify_args.check, "equivariance|additivity|reduction")
      ->required();
  verify->add_option("--n", verify_args.n, "node count for builtin probes (default 4)");
  verify->add_option("--grid", verify_args.grid, "additivity lattice size (default 17)");
  verify->add_option("--tol", verify_args.tol, "check tolerance (default per check)");
  verify->add_option("--trials", verify_args.trials, "random trials (default 200)");
  verify->add_option("--seed", verify_args.seed, "random seed");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "brute-force enumeration cross-checks");
  oracle->add_option("--params", oracle_args.params_path, "parameter file")->required();
  oracle->add_option("--n", oracle_args.n, "node count (required when the file does not pin it)");
  oracle->add_option("--check", oracle_args.check, "normalization|partition|moments")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*fit) return run_fit(fit_args);
    if (*sample) return run_sample(sample_args);
    if (*loglik) return run_loglik(loglik_args);
    if (*verify) return run_verify(verify_args);
    if (*oracle) return run_oracle(oracle_args);
  } catch (const dergm::NonexistentMleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& v : e.violations()) std::cerr << "  " << dergm::describe(v) << "\n";
    if (!e.diverged_indices().empty()) {
      std::cerr << "  diverged parameter indices:";
      for (std::size_t i : e.diverged_indices()) std::cerr << " " << i;
      std::cerr << "\n";
    }
    return exit_nonexistent;
  } catch (const dergm::UnidentifiableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "  null direction:";
    for (double v : e.null_direction()) std::cerr << " " << v;
    std::cerr << "\n";
    return exit_unidentifiable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
