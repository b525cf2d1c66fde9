#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dergm/graph.hpp"

namespace dergm {

// Numerically safe log(1 + exp(x)) and logistic function.
double log1p_exp(double x);
double sigmoid(double x);
double logit(double p);

// Dyad-indexed log-odds; the saturated parameter space. Undirected matrices
// hold one value per unordered pair. All entries must be finite.
class LogitMatrix {
 public:
  LogitMatrix(std::size_t n, bool directed, std::vector<double> values);

  static LogitMatrix constant(std::size_t n, bool directed, double theta);

  std::size_t n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  double at(std::size_t i, std::size_t j) const { return values_[dyad_index(n_, directed_, i, j)]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t n_;
  bool directed_;
  std::vector<double> values_;
};

enum class Family {
  saturated,
  erdos_renyi,
  beta,
  sbm,
  additive_sbm,
  p1_config,
  directed_additive_sbm,
};

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct Saturated {
  LogitMatrix logits;
};

struct ErdosRenyi {
  double theta = 0.0;
  bool directed = false;
};

// theta_ij = beta[i] + beta[j]; undirected.
struct Beta {
  std::vector<double> beta;
};

// theta_ij = eta(b(i), b(j)); undirected. eta is symmetric, stored as the
// upper triangle including the diagonal in (k<=l) lexicographic order.
struct Sbm {
  BlockAssignment blocks;
  std::vector<double> eta;

  double eta_at(std::size_t k, std::size_t l) const;
  static std::size_t eta_index(std::size_t r, std::size_t k, std::size_t l);
};

// theta_ij = delta[b(i)] + delta[b(j)] between blocks, eta_diag[k] within
// block k; undirected.
struct AdditiveSbm {
  BlockAssignment blocks;
  std::vector<double> delta;
  std::vector<double> eta_diag;
};

// theta_ij = alpha[i] + beta[j]; directed. Stored in the sum(beta) = 0
// gauge; construction renormalizes, which leaves all logits unchanged.
struct P1Config {
  P1Config(std::vector<double> alpha_in, std::vector<double> beta_in);

  std::vector<double> alpha;
  std::vector<double> beta;
};

// Directed blocks: theta_ij = delta[b(i)] + lambda[b(j)] between blocks,
// eta_diag[k] within. Stored in the sum(lambda) = 0 gauge.
struct DirectedAdditiveSbm {
  DirectedAdditiveSbm(BlockAssignment blocks_in, std::vector<double> delta_in,
                      std::vector<double> lambda_in, std::vector<double> eta_diag_in);

  BlockAssignment blocks;
  std::vector<double> delta;
  std::vector<double> lambda;
  std::vector<double> eta_diag;
};

// Sufficient statistics in the family's canonical flat layout, pairing
// exactly with ModelSpec::flat_params():
//   saturated             dyad vector (canonical dyad order)
//   erdos_renyi           [edge count]
//   beta                  degrees d_0..d_{n-1}
//   sbm                   e_kl, (k<=l) lexicographic
//   additive_sbm          [d_0..d_{r-1}, e_00..e_{r-1,r-1}]
//   p1_config             [a_0..a_{n-1}, b_0..b_{n-1}]
//   directed_additive_sbm [a_0..a_{r-1}, b_0..b_{r-1}, e_00..e_{r-1,r-1}]
struct SuffStats {
  Family family;
  bool directed = false;
  std::vector<double> values;
};

// One of the seven dyadic-independent families. Immutable after
// construction; all parameters validated finite.
class ModelSpec {
 public:
  using Variant =
      std::variant<Saturated, ErdosRenyi, Beta, Sbm, AdditiveSbm, P1Config, DirectedAdditiveSbm>;

  ModelSpec(Saturated m);               // NOLINT(google-explicit-constructor)
  ModelSpec(ErdosRenyi m);              // NOLINT
  ModelSpec(Beta m);                    // NOLINT
  ModelSpec(Sbm m);                     // NOLINT
  ModelSpec(AdditiveSbm m);             // NOLINT
  ModelSpec(P1Config m);                // NOLINT
  ModelSpec(DirectedAdditiveSbm m);     // NOLINT

  Family family() const noexcept;
  bool directed() const noexcept;
  // Node count implied by the parameters; empty for erdos_renyi.
  std::optional<std::size_t> pinned_n() const noexcept;
  const BlockAssignment* blocks() const noexcept;

  const Variant& value() const noexcept { return v_; }
  template <class T>
  const T& as() const { return std::get<T>(v_); }

  // Canonical flat parameter vector (layouts match SuffStats above).
  std::vector<double> flat_params() const;
  std::size_t param_dim(std::size_t n) const;

  // Rebuilds a spec of the same shape from a flat parameter vector.
  static ModelSpec from_flat(Family family, std::size_t n, bool directed,
                             const BlockAssignment* blocks, const std::vector<double>& flat);

 private:
  Variant v_;
};

// theta_ij for every canonical dyad under the family's parametrization.
LogitMatrix logits(const ModelSpec& m, std::size_t n);

// Log-partition: sum over canonical dyads of log(1 + exp(theta_ij)),
// evaluated with the overflow-safe branch.
double log_partition(const LogitMatrix& theta);
double log_partition(const ModelSpec& m, std::size_t n);

// Observed sufficient statistics of g in the family of m.
SuffStats sufficient_stats(const ModelSpec& m, const Graph& g);
SuffStats sufficient_stats(Family family, const BlockAssignment* blocks, const Graph& g);

// Dyad-form log density: sum x_ij * theta_ij - psi(theta). Always <= 0.
double log_likelihood(const LogitMatrix& theta, const Graph& g);
double log_likelihood(const ModelSpec& m, const Graph& g);

// sigmoid(theta_ij) per canonical dyad, strictly inside (0,1).
std::vector<double> dyad_probabilities(const LogitMatrix& theta);
std::vector<double> dyad_probabilities(const ModelSpec& m, std::size_t n);

// Expected sufficient statistics: dyad probabilities pushed through the
// same aggregation as sufficient_stats.
SuffStats expected_stats(const ModelSpec& m, std::size_t n);

}  // namespace dergm
