#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dergm/errors.hpp"
#include "dergm/graph.hpp"
#include "dergm/model.hpp"

namespace dergm {

struct FitOptions {
  double tol = 1e-10;             // on the moment gap, infinity norm
  std::size_t max_iter = 5000;
  double divergence_bound = 50.0; // |parameter| beyond this means no MLE
  bool record_loglik_path = false;
};

struct Diagnostic {
  std::string code;
  std::string detail;
};

struct FitResult {
  ModelSpec params;
  std::size_t iterations = 0;
  bool converged = false;
  double max_moment_gap = 0.0;  // re-verified after fitting, not trusted from the loop
  std::vector<Diagnostic> diagnostics;
  std::vector<double> loglik_path;  // filled only when record_loglik_path is set
};

// Lists every sufficient statistic sitting at its achievable extreme. An
// empty list does not guarantee the MLE exists; it is a necessary-condition
// screen only.
std::vector<BoundaryViolation> existence_screen(const SuffStats& stats, std::size_t n,
                                                const BlockAssignment* blocks);

// Degree-sequence MLE by fixed-point iteration on the moment equations
// d_i = sum_j sigmoid(beta_i + beta_j). Throws NonexistentMleError when a
// degree is at the boundary or the iteration escapes the divergence bound.
FitResult fit_beta(const Graph& g, const FitOptions& opts = {});

// Directed analogue: (alpha, beta) matching out- and in-degrees, reported
// in the sum(beta) = 0 gauge.
FitResult fit_p1_config(const Graph& g, const FitOptions& opts = {});

// Closed form: theta_hat = logit(edge count / dyad count).
FitResult fit_erdos_renyi(const Graph& g, const FitOptions& opts = {});

// Closed form per block pair: eta_hat_kl = logit(e_kl / N_kl). Pairs with
// no dyads get eta 0 and a diagnostic. Throws for saturated/empty pairs.
FitResult fit_sbm(const Graph& g, const BlockAssignment& blocks, const FitOptions& opts = {});

// Damped Newton on the concave between-block likelihood; within-block
// diagonal in closed form. Throws UnidentifiableError when the block design
// is rank deficient (e.g. r = 2), with the null direction.
FitResult fit_additive_sbm(const Graph& g, const BlockAssignment& blocks,
                           const FitOptions& opts = {});
FitResult fit_directed_additive_sbm(const Graph& g, const BlockAssignment& blocks,
                                    const FitOptions& opts = {});

}  // namespace dergm
