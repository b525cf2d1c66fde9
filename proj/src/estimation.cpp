#include "dergm/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dergm/detail/linalg.hpp"

namespace dergm {

namespace {

double logsumexp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

double reverified_gap(const ModelSpec& params, const Graph& g) {
  SuffStats expected = expected_stats(params, g.n());
  SuffStats observed = sufficient_stats(params, g);
  double gap = 0.0;
  for (std::size_t t = 0; t < expected.values.size(); ++t)
    gap = std::max(gap, std::abs(expected.values[t] - observed.values[t]));
  return gap;
}

void throw_if_boundary(const char* family, const std::vector<BoundaryViolation>& violations) {
  if (!violations.empty())
    throw NonexistentMleError(std::string(family) +
                                  " MLE does not exist: sufficient statistics at the boundary",
                              violations);
}

std::vector<std::size_t> diverged_indices(const std::vector<double>& params, double bound) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (std::abs(params[i]) > bound) out.push_back(i);
  return out;
}

void throw_if_diverged(const char* family, const std::vector<double>& params, double bound) {
  auto idx = diverged_indices(params, bound);
  if (!idx.empty())
    throw NonexistentMleError(std::string(family) +
                                  " MLE does not exist: parameters escaped the divergence bound",
                              {}, idx);
}

}  // namespace

std::vector<BoundaryViolation> existence_screen(const SuffStats& stats, std::size_t n,
                                                const BlockAssignment* blocks) {
  std::vector<BoundaryViolation> out;
  auto check = [&](const char* name, std::vector<std::size_t> index, double value, double lo,
                   double hi) {
    if (value <= lo || value >= hi) out.push_back({name, std::move(index), value, lo, hi});
  };
  const double nodal_max = static_cast<double>(n - 1);
  switch (stats.family) {
    case Family::saturated: {
      for (std::size_t d = 0; d < stats.values.size(); ++d) {
        auto [i, j] = dyad_at(n, stats.directed, d);
        check("dyad", {i, j}, stats.values[d], 0.0, 1.0);
      }
      return out;
    }
    case Family::erdos_renyi: {
      check("edges", {}, stats.values[0], 0.0,
            static_cast<double>(dyad_count(n, stats.directed)));
      return out;
    }
    case Family::beta: {
      for (std::size_t i = 0; i < stats.values.size(); ++i)
        check("degree", {i}, stats.values[i], 0.0, nodal_max);
      return out;
    }
    case Family::p1_config: {
      for (std::size_t i = 0; i < n; ++i) check("out_degree", {i}, stats.values[i], 0.0, nodal_max);
      for (std::size_t i = 0; i < n; ++i)
        check("in_degree", {i}, stats.values[n + i], 0.0, nodal_max);
      return out;
    }
    case Family::sbm: {
      if (!blocks) throw std::invalid_argument("existence_screen: sbm requires blocks");
      std::size_t r = blocks->block_count();
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k; l < r; ++l)
          check("block_pair", {k, l}, stats.values[Sbm::eta_index(r, k, l)], 0.0,
                static_cast<double>(block_pair_capacity(*blocks, k, l, stats.directed)));
      return out;
    }
    case Family::additive_sbm:
    case Family::directed_additive_sbm: {
      if (!blocks) throw std::invalid_argument("existence_screen: family requires blocks");
      std::size_t r = blocks->block_count();
      bool dir = stats.family == Family::directed_additive_sbm;
      std::vector<double> between_cap(r, 0.0);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l)
          if (l != k)
            between_cap[k] += static_cast<double>(block_pair_capacity(*blocks, k, l, dir));
      if (!dir) {
        for (std::size_t k = 0; k < r; ++k)
          check("block_degree", {k}, stats.values[k], 0.0, between_cap[k]);
        for (std::size_t k = 0; k < r; ++k)
          check("within_edges", {k}, stats.values[r + k], 0.0,
                static_cast<double>(block_pair_capacity(*blocks, k, k, dir)));
      } else {
        for (std::size_t k = 0; k < r; ++k)
          check("block_out_degree", {k}, stats.values[k], 0.0, between_cap[k]);
        for (std::size_t k = 0; k < r; ++k)
          check("block_in_degree", {k}, stats.values[r + k], 0.0, between_cap[k]);
        for (std::size_t k = 0; k < r; ++k)
          check("within_edges", {k}, stats.values[2 * r + k], 0.0,
                static_cast<double>(block_pair_capacity(*blocks, k, k, dir)));
      }
      return out;
    }
  }
  throw std::logic_error("existence_screen: bad family");
}

FitResult fit_beta(const Graph& g, const FitOptions& opts) {
  const auto deg = degree_sequence(g);
  const std::size_t n = g.n();
  SuffStats observed{Family::beta, false, std::vector<double>(deg.begin(), deg.end())};
  throw_if_boundary("beta", existence_screen(observed, n, nullptr));

  const double cap = opts.divergence_bound;
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i)
    beta[i] = clamp(logit(static_cast<double>(deg[i]) / static_cast<double>(n - 1)), -cap / 2,
                    cap / 2);

  std::vector<double> next(n), terms(n - 1);
  std::size_t iterations = 0;
  bool converged = false;
  double mid_norm = 0.0;
  for (std::size_t t = 1; t <= opts.max_iter; ++t) {
    iterations = t;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t w = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        terms[w++] = beta[j] - log1p_exp(beta[i] + beta[j]);
      }
      next[i] = std::log(static_cast<double>(deg[i])) - logsumexp(terms);
    }
    beta.swap(next);
    throw_if_diverged("beta", beta, cap);
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double expected = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) expected += sigmoid(beta[i] + beta[j]);
      gap = std::max(gap, std::abs(expected - static_cast<double>(deg[i])));
    }
    if (t == opts.max_iter / 2)
      mid_norm = std::abs(*std::max_element(beta.begin(), beta.end(),
                                            [](double a, double b) { return std::abs(a) < std::abs(b); }));
    if (gap <= opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged && opts.max_iter >= 10) {
    double end_norm = std::abs(*std::max_element(
        beta.begin(), beta.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
    if (end_norm > mid_norm + 0.1)
      throw NonexistentMleError("beta MLE does not exist: parameters still growing at max_iter",
                                {}, diverged_indices(beta, end_norm - 1e-12));
  }

  FitResult out{ModelSpec(Beta{std::move(beta)}), iterations, converged, 0.0, {}, {}};
  out.max_moment_gap = reverified_gap(out.params, g);
  out.converged = converged && out.max_moment_gap <= opts.tol;
  if (!out.converged) out.diagnostics.push_back({"max-iter", "fixed point did not reach tol"});
  return out;
}

FitResult fit_p1_config(const Graph& g, const FitOptions& opts) {
  const auto [outdeg, indeg] = out_in_degrees(g);
  const std::size_t n = g.n();
  SuffStats observed{Family::p1_config, true, {}};
  observed.values.assign(outdeg.begin(), outdeg.end());
  observed.values.insert(observed.values.end(), indeg.begin(), indeg.end());
  throw_if_boundary("p1-config", existence_screen(observed, n, nullptr));

  const double cap = opts.divergence_bound;
  std::vector<double> alpha(n), beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = clamp(logit(static_cast<double>(outdeg[i]) / static_cast<double>(n - 1)), -cap / 2,
                     cap / 2);
    beta[i] = clamp(logit(static_cast<double>(indeg[i]) / static_cast<double>(n - 1)), -cap / 2,
                    cap / 2);
  }

  std::vector<double> terms(n - 1), joint(2 * n);
  std::size_t iterations = 0;
  bool converged = false;
  double mid_norm = 0.0;
  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  for (std::size_t t = 1; t <= opts.max_iter; ++t) {
    iterations = t;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t w = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        terms[w++] = beta[j] - log1p_exp(alpha[i] + beta[j]);
      }
      alpha[i] = std::log(static_cast<double>(outdeg[i])) - logsumexp(terms);
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t w = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        terms[w++] = alpha[i] - log1p_exp(alpha[i] + beta[j]);
      }
      beta[j] = std::log(static_cast<double>(indeg[j])) - logsumexp(terms);
    }
    // Re-gauge each sweep; leaves every logit alpha_i + beta_j unchanged.
    double c = 0.0;
    for (double b : beta) c += b;
    c /= static_cast<double>(n);
    for (double& b : beta) b -= c;
    for (double& a : alpha) a += c;

    std::copy(alpha.begin(), alpha.end(), joint.begin());
    std::copy(beta.begin(), beta.end(), joint.begin() + static_cast<std::ptrdiff_t>(n));
    throw_if_diverged("p1-config", joint, cap);

    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ea = 0.0, eb = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        ea += sigmoid(alpha[i] + beta[j]);
        eb += sigmoid(alpha[j] + beta[i]);
      }
      gap = std::max(gap, std::abs(ea - static_cast<double>(outdeg[i])));
      gap = std::max(gap, std::abs(eb - static_cast<double>(indeg[i])));
    }
    if (t == opts.max_iter / 2) mid_norm = inf_norm(joint);
    if (gap <= opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged && opts.max_iter >= 10 && inf_norm(joint) > mid_norm + 0.1)
    throw NonexistentMleError("p1-config MLE does not exist: parameters still growing at max_iter",
                              {}, diverged_indices(joint, inf_norm(joint) - 1e-12));

  FitResult out{ModelSpec(P1Config(std::move(alpha), std::move(beta))), iterations, converged,
                0.0,
                {{"gauge", "parameters reported in the sum(beta) = 0 gauge"}},
                {}};
  out.max_moment_gap = reverified_gap(out.params, g);
  out.converged = converged && out.max_moment_gap <= opts.tol;
  if (!out.converged) out.diagnostics.push_back({"max-iter", "fixed point did not reach tol"});
  return out;
}

FitResult fit_erdos_renyi(const Graph& g, const FitOptions& opts) {
  const double edges = static_cast<double>(g.edge_count());
  SuffStats observed{Family::erdos_renyi, g.directed(), {edges}};
  throw_if_boundary("erdos-renyi", existence_screen(observed, g.n(), nullptr));
  double theta = logit(edges / static_cast<double>(g.dyads()));
  FitResult out{ModelSpec(ErdosRenyi{theta, g.directed()}), 0, true, 0.0, {}, {}};
  out.max_moment_gap = reverified_gap(out.params, g);
  out.converged = out.max_moment_gap <= opts.tol;
  return out;
}

FitResult fit_sbm(const Graph& g, const BlockAssignment& blocks, const FitOptions& opts) {
  if (g.directed()) throw std::invalid_argument("fit_sbm: graph must be undirected");
  if (blocks.n() != g.n()) throw std::invalid_argument("fit_sbm: block assignment length != n");
  const BlockEdgeCounts e = block_edge_counts(g, blocks);
  const std::size_t r = blocks.block_count();

  std::vector<BoundaryViolation> violations;
  std::vector<Diagnostic> diagnostics;
  std::vector<double> eta(r * (r + 1) / 2, 0.0);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = k; l < r; ++l) {
      const auto cap = block_pair_capacity(blocks, k, l, false);
      const auto observed = e.at(k, l);
      if (cap == 0) {
        diagnostics.push_back({"no-dyads", "block pair (" + std::to_string(k) + "," +
                                               std::to_string(l) + ") has no dyads; eta set to 0"});
        continue;
      }
      if (observed == 0 || observed == cap) {
        violations.push_back({"block_pair", {k, l}, static_cast<double>(observed), 0.0,
                              static_cast<double>(cap)});
        continue;
      }
      eta[Sbm::eta_index(r, k, l)] =
          logit(static_cast<double>(observed) / static_cast<double>(cap));
    }
  }
  throw_if_boundary("sbm", violations);

  FitResult out{ModelSpec(Sbm{blocks, std::move(eta)}), 0, true, 0.0, std::move(diagnostics), {}};
  out.max_moment_gap = reverified_gap(out.params, g);
  out.converged = out.max_moment_gap <= opts.tol;
  return out;
}

namespace {

// Shared damped-Newton core for the between-block part of the additive
// families. The design matrix maps reduced coordinates to per-group logits;
// the objective sum_g [e_g * theta_g - N_g * log(1+exp(theta_g))] is
// concave. stat_map sends per-group residuals e_g - N_g p_g to the family's
// sufficient-statistic residuals, whose infinity norm is the moment gap.
struct GroupDesign {
  std::vector<double> observed;   // e_g
  std::vector<double> capacity;   // N_g
  detail::Matrix design;          // groups x reduced-parameter count
  detail::Matrix stat_map;        // sufficient stats x groups
};

struct NewtonOutcome {
  std::vector<double> params;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> loglik_path;
};

NewtonOutcome newton_fit(const char* family, const GroupDesign& gd, const FitOptions& opts) {
  const std::size_t dim = gd.design.cols;
  const std::size_t groups = gd.design.rows;
  std::vector<double> params(dim, 0.0);

  auto thetas = [&](const std::vector<double>& p) {
    std::vector<double> th(groups, 0.0);
    for (std::size_t gidx = 0; gidx < groups; ++gidx)
      for (std::size_t c = 0; c < dim; ++c) th[gidx] += gd.design.at(gidx, c) * p[c];
    return th;
  };
  auto loglik = [&](const std::vector<double>& p) {
    auto th = thetas(p);
    double ll = 0.0;
    for (std::size_t gidx = 0; gidx < groups; ++gidx)
      ll += gd.observed[gidx] * th[gidx] - gd.capacity[gidx] * log1p_exp(th[gidx]);
    return ll;
  };

  NewtonOutcome out;
  double current_ll = loglik(params);
  if (opts.record_loglik_path) out.loglik_path.push_back(current_ll);

  std::vector<double> resid(groups);
  for (std::size_t t = 1; t <= opts.max_iter; ++t) {
    out.iterations = t;
    auto th = thetas(params);
    std::vector<double> grad(dim, 0.0);
    detail::Matrix hess(dim, dim);
    for (std::size_t gidx = 0; gidx < groups; ++gidx) {
      const double p = sigmoid(th[gidx]);
      resid[gidx] = gd.observed[gidx] - gd.capacity[gidx] * p;
      const double w = gd.capacity[gidx] * p * (1.0 - p);
      for (std::size_t c = 0; c < dim; ++c) {
        const double a = gd.design.at(gidx, c);
        if (a == 0.0) continue;
        grad[c] += a * resid[gidx];
        for (std::size_t c2 = 0; c2 < dim; ++c2) hess.at(c, c2) += w * a * gd.design.at(gidx, c2);
      }
    }
    double gap = 0.0;
    for (std::size_t s = 0; s < gd.stat_map.rows; ++s) {
      double acc = 0.0;
      for (std::size_t gidx = 0; gidx < groups; ++gidx)
        acc += gd.stat_map.at(s, gidx) * resid[gidx];
      gap = std::max(gap, std::abs(acc));
    }
    if (gap <= opts.tol) {
      out.converged = true;
      break;
    }

    std::vector<double> step;
    if (!detail::cholesky_solve(hess, grad, step))
      throw NonexistentMleError(std::string(family) +
                                    " MLE fit diverged: Newton system not positive definite",
                                {});
    // Accept a step once the log-likelihood does not decrease; the epsilon
    // absorbs evaluation rounding when the remaining ascent is below it.
    const double accept_eps = 1e-10 * (1.0 + std::abs(current_ll));
    double scale = 1.0;
    std::vector<double> candidate(dim);
    std::size_t halvings = 0;
    for (;; ++halvings) {
      if (halvings >= 40)
        throw NonexistentMleError(std::string(family) +
                                      " MLE fit diverged: no ascent after 40 step halvings",
                                  {});
      for (std::size_t c = 0; c < dim; ++c) candidate[c] = params[c] + scale * step[c];
      if (loglik(candidate) >= current_ll - accept_eps) break;
      scale /= 2.0;
    }
    params.swap(candidate);
    current_ll = loglik(params);
    if (opts.record_loglik_path) out.loglik_path.push_back(current_ll);
    throw_if_diverged(family, params, opts.divergence_bound);
  }
  out.params = std::move(params);
  return out;
}

// Within-block diagonal: separate Bernoulli families, closed form.
std::vector<double> fit_diagonal(const char* family, const BlockAssignment& blocks,
                                 const std::vector<std::int64_t>& within, bool directed,
                                 std::vector<BoundaryViolation>& violations,
                                 std::vector<Diagnostic>& diagnostics) {
  const std::size_t r = blocks.block_count();
  std::vector<double> eta(r, 0.0);
  (void)family;
  for (std::size_t k = 0; k < r; ++k) {
    const auto cap = block_pair_capacity(blocks, k, k, directed);
    if (cap == 0) {
      diagnostics.push_back({"no-dyads", "block " + std::to_string(k) +
                                             " has no within-block dyads; eta_diag set to 0"});
      continue;
    }
    if (within[k] == 0 || within[k] == cap) {
      violations.push_back({"within_edges", {k}, static_cast<double>(within[k]), 0.0,
                            static_cast<double>(cap)});
      continue;
    }
    eta[k] = logit(static_cast<double>(within[k]) / static_cast<double>(cap));
  }
  return eta;
}

}  // namespace

FitResult fit_additive_sbm(const Graph& g, const BlockAssignment& blocks, const FitOptions& opts) {
  if (g.directed()) throw std::invalid_argument("fit_additive_sbm: graph must be undirected");
  if (blocks.n() != g.n())
    throw std::invalid_argument("fit_additive_sbm: block assignment length != n");
  const std::size_t r = blocks.block_count();
  const BlockEdgeCounts e = block_edge_counts(g, blocks);
  const BlockDegrees bd = block_degrees(g, blocks);

  std::vector<BoundaryViolation> violations;
  std::vector<Diagnostic> diagnostics;
  std::vector<double> eta_diag =
      fit_diagonal("additive-sbm", blocks, bd.within, false, violations, diagnostics);

  std::vector<double> delta(r, 0.0);
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<double> loglik_path;
  if (r == 1) {
    diagnostics.push_back({"degenerate", "single block: no between-block dyads, delta fixed at 0"});
    throw_if_boundary("additive-sbm", violations);
  } else {
    for (std::size_t k = 0; k < r; ++k) {
      double cap = 0.0;
      for (std::size_t l = 0; l < r; ++l)
        if (l != k) cap += static_cast<double>(block_pair_capacity(blocks, k, l, false));
      const double dk = static_cast<double>(bd.degree[k]);
      if (dk <= 0.0 || dk >= cap)
        violations.push_back({"block_degree", {k}, dk, 0.0, cap});
    }
    throw_if_boundary("additive-sbm", violations);

    GroupDesign gd;
    gd.design = detail::Matrix(r * (r - 1) / 2, r);
    gd.stat_map = detail::Matrix(r, r * (r - 1) / 2);
    std::size_t row = 0;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t l = k + 1; l < r; ++l, ++row) {
        gd.design.at(row, k) = 1.0;
        gd.design.at(row, l) = 1.0;
        gd.stat_map.at(k, row) = 1.0;
        gd.stat_map.at(l, row) = 1.0;
        gd.observed.push_back(static_cast<double>(e.at(k, l)));
        gd.capacity.push_back(static_cast<double>(block_pair_capacity(blocks, k, l, false)));
      }
    }
    auto rank = detail::rank_and_null_direction(gd.design, 1e-9);
    if (rank.rank < r)
      throw UnidentifiableError(
          "additive-sbm delta parameters are not identified: between-block design is rank " +
              std::to_string(rank.rank) + " < " + std::to_string(r),
          *rank.null_direction);

    NewtonOutcome newton = newton_fit("additive-sbm", gd, opts);
    delta = std::move(newton.params);
    iterations = newton.iterations;
    converged = newton.converged;
    loglik_path = std::move(newton.loglik_path);
  }

  FitResult out{ModelSpec(AdditiveSbm{blocks, std::move(delta), std::move(eta_diag)}), iterations,
                converged, 0.0, std::move(diagnostics), std::move(loglik_path)};
  out.max_moment_gap = reverified_gap(out.params, g);
  out.converged = converged && out.max_moment_gap <= opts.tol;
  if (!out.converged) out.diagnostics.push_back({"max-iter", "Newton did not reach tol"});
  return out;
}

FitResult fit_directed_additive_sbm(const Graph& g, const BlockAssignment& blocks,
                                    const FitOptions& opts) {
  if (!g.directed())
    throw std::invalid_argument("fit_directed_additive_sbm: graph must be directed");
  if (blocks.n() != g.n())
    throw std::invalid_argument("fit_directed_additive_sbm: block assignment length != n");
  const std::size_t r = blocks.block_count();
  const BlockEdgeCounts e = block_edge_counts(g, blocks);
  const BlockDegrees bd = block_degrees(g, blocks);

  std::vector<BoundaryViolation> violations;
  std::vector<Diagnostic> diagnostics;
  std::vector<double> eta_diag =
      fit_diagonal("directed-additive-sbm", blocks, bd.within, true, violations, diagnostics);

  std::vector<double> delta(r, 0.0), lambda(r, 0.0);
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<double> loglik_path;
  if (r == 1) {
    diagnostics.push_back({"degenerate", "single block: no between-block dyads, delta/lambda fixed at 0"});
    throw_if_boundary("directed-additive-sbm", violations);
  } else {
    for (std::size_t k = 0; k < r; ++k) {
      double cap = 0.0;
      for (std::size_t l = 0; l < r; ++l)
        if (l != k) cap += static_cast<double>(block_pair_capacity(blocks, k, l, true));
      const double ak = static_cast<double>(bd.degree[k]);
      const double bk = static_cast<double>(bd.in_degree[k]);
      if (ak <= 0.0 || ak >= cap) violations.push_back({"block_out_degree", {k}, ak, 0.0, cap});
      if (bk <= 0.0 || bk >= cap) violations.push_back({"block_in_degree", {k}, bk, 0.0, cap});
    }
    throw_if_boundary("directed-additive-sbm", violations);

    // Reduced coordinates [delta_0..delta_{r-1}, lambda_0..lambda_{r-2}],
    // with lambda_{r-1} = -sum of the others fixing the gauge.
    const std::size_t dim = 2 * r - 1;
    GroupDesign gd;
    gd.design = detail::Matrix(r * (r - 1), dim);
    gd.stat_map = detail::Matrix(2 * r, r * (r - 1));
    std::size_t row = 0;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t l = 0; l < r; ++l) {
        if (l == k) continue;
        gd.design.at(row, k) = 1.0;
        if (l < r - 1) {
          gd.design.at(row, r + l) += 1.0;
        } else {
          for (std::size_t m = 0; m < r - 1; ++m) gd.design.at(row, r + m) -= 1.0;
        }
        gd.stat_map.at(k, row) = 1.0;      // block out-degree a_k
        gd.stat_map.at(r + l, row) = 1.0;  // block in-degree b_l
        gd.observed.push_back(static_cast<double>(e.at(k, l)));
        gd.capacity.push_back(static_cast<double>(block_pair_capacity(blocks, k, l, true)));
        ++row;
      }
    }
    auto rank = detail::rank_and_null_direction(gd.design, 1e-9);
    if (rank.rank < dim) {
      // Report the null direction over the full (delta, lambda) layout.
      const auto& y = *rank.null_direction;
      std::vector<double> dir(2 * r, 0.0);
      for (std::size_t k = 0; k < r; ++k) dir[k] = y[k];
      double tail = 0.0;
      for (std::size_t l = 0; l + 1 < r; ++l) {
        dir[r + l] = y[r + l];
        tail += y[r + l];
      }
      dir[2 * r - 1] = -tail;
      for (double v : dir) {
        if (std::abs(v) > 1e-12) {
          for (double& w : dir) w /= v;
          break;
        }
      }
      throw UnidentifiableError(
          "directed-additive-sbm (delta, lambda) not identified beyond the gauge: design rank " +
              std::to_string(rank.rank) + " < " + std::to_string(dim),
          dir);
    }

    NewtonOutcome newton = newton_fit("directed-additive-sbm", gd, opts);
    iterations = newton.iterations;
    converged = newton.converged;
    loglik_path = std::move(newton.loglik_path);
    for (std::size_t k = 0; k < r; ++k) delta[k] = newton.params[k];
    double tail = 0.0;
    for (std::size_t l = 0; l + 1 < r; ++l) {
      lambda[l] = newton.params[r + l];
      tail += lambda[l];
    }
    lambda[r - 1] = -tail;
  }
  diagnostics.push_back({"gauge", "parameters reported in the sum(lambda) = 0 gauge"});

  FitResult out{
      ModelSpec(DirectedAdditiveSbm(blocks, std::move(delta), std::move(lambda), std::move(eta_diag))),
      iterations, converged, 0.0, std::move(diagnostics), std::move(loglik_path)};
  out.max_moment_gap = reverified_gap(out.params, g);
  out.converged = converged && out.max_moment_gap <= opts.tol;
  if (!out.converged) out.diagnostics.push_back({"max-iter", "Newton did not reach tol"});
  return out;
}

}  // namespace dergm
