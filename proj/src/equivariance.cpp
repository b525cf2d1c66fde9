#include "dergm/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dergm/detail/rng.hpp"
#include "dergm/model.hpp"
#include "dergm/oracle.hpp"

namespace dergm {

double ParametrizationProbe::operator()(std::size_t i, std::size_t j, double u, double v) const {
  if (i >= n || j >= n || i == j)
    throw std::invalid_argument("probe: not a dyad");
  if (!directed && i > j)
    throw std::invalid_argument("probe: undirected dyads are queried in canonical order");
  if (!box.contains(u) || !box.contains(v))
    throw std::invalid_argument("probe: evaluation outside the domain box");
  double f = eval(i, j, u, v);
  if (!std::isfinite(f)) throw std::invalid_argument("probe: non-finite evaluation");
  return f;
}

ParametrizationProbe shared_probe(std::size_t n, bool directed, DomainBox box,
                                  std::function<double(double, double)> f) {
  ParametrizationProbe p;
  p.n = n;
  p.directed = directed;
  p.box = box;
  p.eval = [f = std::move(f)](std::size_t, std::size_t, double u, double v) { return f(u, v); };
  return p;
}

namespace {

struct Comparison {
  double source = 0, image = 0;
};

// Value of the source dyad's function against the function sitting at the
// permutation image of that dyad, both at the same endpoint values. For
// undirected probes the image pair is canonicalized, swapping the value
// order along with it.
Comparison compare_at(const ParametrizationProbe& p, const std::vector<std::size_t>& pi,
                      std::size_t i, std::size_t j, double u, double v) {
  Comparison c;
  c.source = p(i, j, u, v);
  std::size_t a = pi[i], b = pi[j];
  if (!p.directed && a > b)
    c.image = p(b, a, v, u);
  else
    c.image = p(a, b, u, v);
  return c;
}

std::vector<std::size_t> random_permutation(std::size_t n, detail::Rng& rng) {
  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = i;
  for (std::size_t i = n; i-- > 1;) std::swap(pi[i], pi[rng.below(i + 1)]);
  return pi;
}

}  // namespace

EquivarianceReport check_equivariance(const ParametrizationProbe& p, std::size_t trials,
                                      std::uint64_t seed) {
  if (p.n < 3)
    throw std::invalid_argument("check_equivariance: need at least 3 nodes");
  EquivarianceReport report;
  report.max_discrepancy = 0.0;

  auto consider = [&](const std::vector<std::size_t>& pi, std::size_t i, std::size_t j, double u,
                      double v) {
    Comparison c = compare_at(p, pi, i, j, u, v);
    double disc = std::abs(c.source - c.image);
    if (disc > report.max_discrepancy) {
      report.max_discrepancy = disc;
      if (disc > equivariance_tolerance)
        report.witness = PermutationWitness{pi, i, j, u, v, c.source, c.image};
    }
  };

  detail::Rng rng(seed);
  const std::size_t dyads = dyad_count(p.n, p.directed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto pi = random_permutation(p.n, rng);
    auto [i, j] = dyad_at(p.n, p.directed, rng.below(dyads));
    double u = rng.uniform(p.box.lo, p.box.hi);
    double v = rng.uniform(p.box.lo, p.box.hi);
    consider(pi, i, j, u, v);
  }

  // Deterministic sweep: transpositions generate the whole permutation
  // group, so disagreement anywhere shows up on some transposition.
  std::vector<double> grid(5);
  for (std::size_t t = 0; t < 5; ++t)
    grid[t] = p.box.lo + p.box.width() * static_cast<double>(t) / 4.0;
  std::vector<std::size_t> pi(p.n);
  for (std::size_t a = 0; a < p.n; ++a) {
    for (std::size_t b = a + 1; b < p.n; ++b) {
      for (std::size_t i = 0; i < p.n; ++i) pi[i] = i;
      std::swap(pi[a], pi[b]);
      for (std::size_t d = 0; d < dyads; ++d) {
        auto [i, j] = dyad_at(p.n, p.directed, d);
        for (double u : grid)
          for (double v : grid) consider(pi, i, j, u, v);
      }
    }
  }

  report.equivariant = report.max_discrepancy <= equivariance_tolerance;
  if (report.equivariant) report.witness.reset();
  return report;
}

DecompositionReport check_additivity(const ParametrizationProbe& p, std::size_t grid, double tol) {
  if (grid < 3) throw std::invalid_argument("check_additivity: need grid >= 3");
  if (tol <= 0) throw std::invalid_argument("check_additivity: tol must be positive");

  DecompositionReport report;
  EquivarianceReport eq = check_equivariance(p, 200, 0x5EEDULL);
  if (!eq.equivariant) {
    report.applicable = false;
    return report;
  }
  report.applicable = true;

  const double w = p.box.width();
  const double h = w / (4.0 * static_cast<double>(grid));
  report.grid.resize(grid);
  for (std::size_t t = 0; t < grid; ++t)
    report.grid[t] = p.box.lo + (static_cast<double>(t) + 0.5) * w / static_cast<double>(grid);

  const std::size_t dyads = dyad_count(p.n, p.directed);
  double max_mixed = 0.0, max_abs_f = 0.0;
  for (std::size_t d = 0; d < dyads; ++d) {
    auto [i, j] = dyad_at(p.n, p.directed, d);
    for (double u : report.grid) {
      for (double v : report.grid) {
        double fpp = p(i, j, u + h, v + h);
        double fpm = p(i, j, u + h, v - h);
        double fmp = p(i, j, u - h, v + h);
        double fmm = p(i, j, u - h, v - h);
        max_abs_f = std::max({max_abs_f, std::abs(fpp), std::abs(fpm), std::abs(fmp), std::abs(fmm)});
        double mixed = ((fpp - fpm) - (fmp - fmm)) / (4.0 * h * h);
        max_mixed = std::max(max_mixed, std::abs(mixed));
      }
    }
  }
  report.max_mixed_partial = max_mixed;
  report.tolerance_used = tol * std::max(1.0, max_abs_f);
  report.additive = max_mixed <= report.tolerance_used;
  if (!report.additive) return report;

  // Tabulate g and h from axis slices through the box center; constants are
  // anchored so g and h split f(center, center) equally.
  auto [i0, j0] = dyad_at(p.n, p.directed, 0);
  const double c = p.box.center();
  const double f_cc = p(i0, j0, c, c);
  report.recovered_g.resize(grid);
  report.recovered_h.resize(grid);
  for (std::size_t t = 0; t < grid; ++t) {
    report.recovered_g[t] = p(i0, j0, report.grid[t], c) - f_cc / 2.0;
    report.recovered_h[t] = p(i0, j0, c, report.grid[t]) - f_cc / 2.0;
  }

  double sym_gap = 0.0, residual = 0.0;
  for (std::size_t a = 0; a < grid; ++a) {
    sym_gap = std::max(sym_gap, std::abs(report.recovered_g[a] - report.recovered_h[a]));
    for (std::size_t b = 0; b < grid; ++b) {
      double f = p(i0, j0, report.grid[a], report.grid[b]);
      residual = std::max(residual,
                          std::abs(f - (report.recovered_g[a] + report.recovered_h[b])));
    }
  }
  report.symmetric_additive = sym_gap <= report.tolerance_used;
  report.reconstruction_residual = residual;
  return report;
}

ReductionReport verify_reduction(const ParametrizationProbe& p, std::size_t n, double tol,
                                 std::uint64_t seed) {
  if (n != p.n) throw std::invalid_argument("verify_reduction: n must match the probe");
  if (!oracle::enumerable(n, p.directed))
    throw std::invalid_argument("verify_reduction: n exceeds the enumeration limit");
  EquivarianceReport eq = check_equivariance(p, 200, seed ^ 0xA5A5A5A5ULL);
  if (!eq.equivariant)
    throw std::invalid_argument("verify_reduction: probe is not equivariant");
  const std::size_t grid = 17;
  DecompositionReport dec = check_additivity(p, grid, 1e-6);
  if (!dec.additive)
    throw std::invalid_argument("verify_reduction: probe is not additive");

  // Nodal values drawn on the tabulation grid so the recovered g/h apply
  // exactly, with no interpolation error in the comparison.
  detail::Rng rng(seed);
  std::vector<std::size_t> idx(n);
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = static_cast<std::size_t>(rng.below(grid));
    theta[i] = dec.grid[idx[i]];
  }

  std::vector<double> induced(dyad_count(n, p.directed));
  for (std::size_t d = 0; d < induced.size(); ++d) {
    auto [i, j] = dyad_at(n, p.directed, d);
    induced[d] = p(i, j, theta[i], theta[j]);
  }
  ModelSpec saturated{Saturated{LogitMatrix(n, p.directed, induced)}};

  ModelSpec reduced = [&]() -> ModelSpec {
    if (p.directed) {
      std::vector<double> alpha(n), beta(n);
      for (std::size_t i = 0; i < n; ++i) {
        alpha[i] = dec.recovered_g[idx[i]];
        beta[i] = dec.recovered_h[idx[i]];
      }
      return ModelSpec(P1Config(std::move(alpha), std::move(beta)));
    }
    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = dec.recovered_g[idx[i]];
    return ModelSpec(Beta{std::move(beta)});
  }();

  const LogitMatrix theta_sat = logits(saturated, n);
  const LogitMatrix theta_red = logits(reduced, n);
  ReductionReport out;
  const std::uint64_t total = oracle::graph_count(n, p.directed);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Graph g = oracle::graph_from_bitmask(n, p.directed, mask);
    double gap = std::abs(log_likelihood(theta_sat, g) - log_likelihood(theta_red, g));
    out.max_loglik_gap = std::max(out.max_loglik_gap, gap);
  }
  out.passed = out.max_loglik_gap <= tol;
  return out;
}

std::vector<BuiltinProbe> builtin_probes(std::size_t n) {
  const DomainBox box{-1.0, 1.0};
  std::vector<BuiltinProbe> out;

  out.push_back({"beta-additive", "f(u,v) = u + v; the degree-parameter shape",
                 shared_probe(n, false, box, [](double u, double v) { return u + v; }), true, true,
                 true});
  out.push_back({"p1-additive", "f(u,v) = exp(u) + 2v; directed, additive with g != h",
                 shared_probe(n, true, box, [](double u, double v) { return std::exp(u) + 2.0 * v; }),
                 true, true, false});
  out.push_back({"multiplicative", "f(u,v) = u * v; equivariant but not additive",
                 shared_probe(n, false, box, [](double u, double v) { return u * v; }), true, false,
                 std::nullopt});
  out.push_back({"max", "f(u,v) = max(u,v); equivariant, not additive (kink on the diagonal)",
                 shared_probe(n, false, box, [](double u, double v) { return std::max(u, v); }),
                 true, false, std::nullopt});

  // Nodal but not equivariant: dyads through node 0 return the second
  // endpoint's value, all remaining dyads a frozen constant (the slice of
  // the classic counterexample at a fixed value for node 0's parameter).
  ParametrizationProbe counter;
  counter.n = n;
  counter.directed = false;
  counter.box = box;
  const double frozen = box.center();
  counter.eval = [frozen](std::size_t i, std::size_t, double, double v) {
    return i == 0 ? v : frozen;
  };
  out.push_back({"paper-counterexample",
                 "dyads at node 0 take the far endpoint's value, others a constant; nodal yet "
                 "not permutation equivariant",
                 std::move(counter), false, std::nullopt, std::nullopt});
  return out;
}

std::optional<BuiltinProbe> builtin_probe(const std::string& name, std::size_t n) {
  for (auto& b : builtin_probes(n))
    if (b.name == name) return std::move(b);
  return std::nullopt;
}

}  // namespace dergm
