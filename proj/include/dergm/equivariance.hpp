#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dergm/graph.hpp"

namespace dergm {

struct DomainBox {
  double lo = -1.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// A candidate parametrization of dyad logits by nodal (or block) values:
// one function f_(ij)(u, v) per canonical dyad, where u and v are the
// values attached to the dyad's endpoints. Undirected probes are queried
// with the unordered pair in canonical order (u for the smaller label).
// eval must be pure and finite on the domain box.
struct ParametrizationProbe {
  std::size_t n = 0;
  bool directed = false;
  DomainBox box;
  std::function<double(std::size_t i, std::size_t j, double u, double v)> eval;

  double operator()(std::size_t i, std::size_t j, double u, double v) const;
};

// Probe whose dyad functions are all one shared function of (u, v).
ParametrizationProbe shared_probe(std::size_t n, bool directed, DomainBox box,
                                  std::function<double(double, double)> f);

struct PermutationWitness {
  std::vector<std::size_t> pi;
  std::size_t i = 0, j = 0;  // source dyad; pi maps it to the compared dyad
  double u = 0, v = 0;
  double source_value = 0, image_value = 0;
};

struct EquivarianceReport {
  bool equivariant = false;
  double max_discrepancy = 0.0;
  std::optional<PermutationWitness> witness;  // present when the check fails
};

inline constexpr double equivariance_tolerance = 1e-9;

// Tests whether relabeling nodes maps the dyad-function family onto itself:
// the function at the image dyad must agree pointwise with the source
// dyad's function. Runs `trials` random (permutation, dyad, value-pair)
// probes plus a deterministic sweep of all transpositions over a fixed 5x5
// value grid. Requires n >= 3.
EquivarianceReport check_equivariance(const ParametrizationProbe& p, std::size_t trials,
                                      std::uint64_t seed);

struct DecompositionReport {
  bool applicable = false;         // false when the probe is not equivariant
  bool additive = false;
  bool symmetric_additive = false; // g == h on the grid
  double max_mixed_partial = 0.0;
  double tolerance_used = 0.0;
  std::vector<double> grid;        // evaluation abscissae
  std::vector<double> recovered_g; // tabulated on `grid`, up to a constant
  std::vector<double> recovered_h;
  double reconstruction_residual = 0.0;
};

// Estimates the mixed partial d2 f / du dv by central differences on a
// grid x grid lattice (step = box width / (4 * grid)); the probe is
// additive exactly when the mixed partial vanishes. On success tabulates
// g and h with f(u,v) ~ g(u) + h(v), anchored so g and h split f at the
// box center equally. `tol` is scaled by the probe's magnitude.
DecompositionReport check_additivity(const ParametrizationProbe& p, std::size_t grid, double tol);

struct ReductionReport {
  bool passed = false;
  double max_loglik_gap = 0.0;
};

// Draws nodal values on the tabulation grid, induces the saturated model
// with logits f(theta_i, theta_j), and compares its exhaustive likelihood
// table against the additive family built from the recovered g (and h):
// degree-parameter model when undirected, out/in-parameter model when
// directed. Requires an equivariant, additive probe and enumerable n.
ReductionReport verify_reduction(const ParametrizationProbe& p, std::size_t n, double tol,
                                 std::uint64_t seed = 0x5EED);

struct BuiltinProbe {
  std::string name;
  std::string summary;
  ParametrizationProbe probe;
  bool expect_equivariant = false;
  std::optional<bool> expect_additive;   // unset when not applicable
  std::optional<bool> expect_symmetric;
};

// Named probe catalog: beta-additive, p1-additive, multiplicative, max,
// and the nodal-but-not-equivariant counterexample "paper-counterexample"
// (dyads through node 0 take the second endpoint's value, every other dyad
// a frozen constant).
std::vector<BuiltinProbe> builtin_probes(std::size_t n);
std::optional<BuiltinProbe> builtin_probe(const std::string& name, std::size_t n);

}  // namespace dergm
