#include "dergm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace dergm {

double log1p_exp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("logit: argument must be in (0,1)");
  return std::log(p) - std::log1p(-p);
}

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

LogitMatrix::LogitMatrix(std::size_t n, bool directed, std::vector<double> values)
    : n_(n), directed_(directed), values_(std::move(values)) {
  if (values_.size() != dyad_count(n, directed))
    throw std::invalid_argument("LogitMatrix: value count != dyad count");
  require_finite(values_, "LogitMatrix");
}

LogitMatrix LogitMatrix::constant(std::size_t n, bool directed, double theta) {
  return LogitMatrix(n, directed, std::vector<double>(dyad_count(n, directed), theta));
}

std::string family_name(Family f) {
  switch (f) {
    case Family::saturated: return "saturated";
    case Family::erdos_renyi: return "erdos-renyi";
    case Family::beta: return "beta";
    case Family::sbm: return "sbm";
    case Family::additive_sbm: return "additive-sbm";
    case Family::p1_config: return "p1-config";
    case Family::directed_additive_sbm: return "directed-additive-sbm";
  }
  throw std::logic_error("family_name: bad enum");
}

std::optional<Family> family_from_name(const std::string& name) {
  for (Family f : {Family::saturated, Family::erdos_renyi, Family::beta, Family::sbm,
                   Family::additive_sbm, Family::p1_config, Family::directed_additive_sbm})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

std::size_t Sbm::eta_index(std::size_t r, std::size_t k, std::size_t l) {
  if (k > l) std::swap(k, l);
  return k * r - k * (k - 1) / 2 + (l - k);
}

double Sbm::eta_at(std::size_t k, std::size_t l) const {
  return eta[eta_index(blocks.block_count(), k, l)];
}

namespace {

// Shift (head += c, tail -= c) onto the sum(tail) = 0 gauge slice. Skips
// shifts at rounding level so already-normalized vectors pass through
// bit-identically (write-then-read stability).
void normalize_gauge(std::vector<double>& head, std::vector<double>& tail) {
  double c = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
  double scale = 0.0;
  for (double t : tail) scale = std::max(scale, std::abs(t));
  if (std::abs(c) <= 1e-14 * (1.0 + scale)) return;
  for (double& t : tail) t -= c;
  for (double& h : head) h += c;
}

}  // namespace

P1Config::P1Config(std::vector<double> alpha_in, std::vector<double> beta_in)
    : alpha(std::move(alpha_in)), beta(std::move(beta_in)) {
  if (alpha.size() != beta.size()) throw std::invalid_argument("P1Config: alpha/beta length mismatch");
  if (alpha.empty()) throw std::invalid_argument("P1Config: empty parameter vectors");
  require_finite(alpha, "P1Config.alpha");
  require_finite(beta, "P1Config.beta");
  normalize_gauge(alpha, beta);
}

DirectedAdditiveSbm::DirectedAdditiveSbm(BlockAssignment blocks_in, std::vector<double> delta_in,
                                         std::vector<double> lambda_in,
                                         std::vector<double> eta_diag_in)
    : blocks(std::move(blocks_in)),
      delta(std::move(delta_in)),
      lambda(std::move(lambda_in)),
      eta_diag(std::move(eta_diag_in)) {
  std::size_t r = blocks.block_count();
  if (delta.size() != r || lambda.size() != r || eta_diag.size() != r)
    throw std::invalid_argument("DirectedAdditiveSbm: parameter length != block count");
  require_finite(delta, "DirectedAdditiveSbm.delta");
  require_finite(lambda, "DirectedAdditiveSbm.lambda");
  require_finite(eta_diag, "DirectedAdditiveSbm.eta_diag");
  normalize_gauge(delta, lambda);
}

ModelSpec::ModelSpec(Saturated m) : v_(std::move(m)) {}

ModelSpec::ModelSpec(ErdosRenyi m) : v_(std::move(m)) {
  require_finite(std::get<ErdosRenyi>(v_).theta, "ErdosRenyi.theta");
}

ModelSpec::ModelSpec(Beta m) : v_(std::move(m)) {
  const auto& b = std::get<Beta>(v_);
  if (b.beta.empty()) throw std::invalid_argument("Beta: empty parameter vector");
  require_finite(b.beta, "Beta.beta");
}

ModelSpec::ModelSpec(Sbm m) : v_(std::move(m)) {
  const auto& s = std::get<Sbm>(v_);
  std::size_t r = s.blocks.block_count();
  if (s.eta.size() != r * (r + 1) / 2)
    throw std::invalid_argument("Sbm: eta length != r(r+1)/2 upper triangle");
  require_finite(s.eta, "Sbm.eta");
}

ModelSpec::ModelSpec(AdditiveSbm m) : v_(std::move(m)) {
  const auto& s = std::get<AdditiveSbm>(v_);
  std::size_t r = s.blocks.block_count();
  if (s.delta.size() != r || s.eta_diag.size() != r)
    throw std::invalid_argument("AdditiveSbm: parameter length != block count");
  require_finite(s.delta, "AdditiveSbm.delta");
  require_finite(s.eta_diag, "AdditiveSbm.eta_diag");
}

ModelSpec::ModelSpec(P1Config m) : v_(std::move(m)) {}

ModelSpec::ModelSpec(DirectedAdditiveSbm m) : v_(std::move(m)) {}

Family ModelSpec::family() const noexcept {
  return static_cast<Family>(v_.index());
}

bool ModelSpec::directed() const noexcept {
  switch (family()) {
    case Family::saturated: return as<Saturated>().logits.directed();
    case Family::erdos_renyi: return as<ErdosRenyi>().directed;
    case Family::beta:
    case Family::sbm:
    case Family::additive_sbm: return false;
    case Family::p1_config:
    case Family::directed_additive_sbm: return true;
  }
  return false;
}

std::optional<std::size_t> ModelSpec::pinned_n() const noexcept {
  switch (family()) {
    case Family::saturated: return as<Saturated>().logits.n();
    case Family::erdos_renyi: return std::nullopt;
    case Family::beta: return as<Beta>().beta.size();
    case Family::sbm: return as<Sbm>().blocks.n();
    case Family::additive_sbm: return as<AdditiveSbm>().blocks.n();
    case Family::p1_config: return as<P1Config>().alpha.size();
    case Family::directed_additive_sbm: return as<DirectedAdditiveSbm>().blocks.n();
  }
  return std::nullopt;
}

const BlockAssignment* ModelSpec::blocks() const noexcept {
  switch (family()) {
    case Family::sbm: return &as<Sbm>().blocks;
    case Family::additive_sbm: return &as<AdditiveSbm>().blocks;
    case Family::directed_additive_sbm: return &as<DirectedAdditiveSbm>().blocks;
    default: return nullptr;
  }
}

std::vector<double> ModelSpec::flat_params() const {
  switch (family()) {
    case Family::saturated: return as<Saturated>().logits.values();
    case Family::erdos_renyi: return {as<ErdosRenyi>().theta};
    case Family::beta: return as<Beta>().beta;
    case Family::sbm: return as<Sbm>().eta;
    case Family::additive_sbm: {
      const auto& s = as<AdditiveSbm>();
      std::vector<double> out = s.delta;
      out.insert(out.end(), s.eta_diag.begin(), s.eta_diag.end());
      return out;
    }
    case Family::p1_config: {
      const auto& s = as<P1Config>();
      std::vector<double> out = s.alpha;
      out.insert(out.end(), s.beta.begin(), s.beta.end());
      return out;
    }
    case Family::directed_additive_sbm: {
      const auto& s = as<DirectedAdditiveSbm>();
      std::vector<double> out = s.delta;
      out.insert(out.end(), s.lambda.begin(), s.lambda.end());
      out.insert(out.end(), s.eta_diag.begin(), s.eta_diag.end());
      return out;
    }
  }
  throw std::logic_error("flat_params: bad family");
}

std::size_t ModelSpec::param_dim(std::size_t n) const {
  switch (family()) {
    case Family::saturated: return dyad_count(n, directed());
    case Family::erdos_renyi: return 1;
    case Family::beta: return n;
    case Family::sbm: {
      std::size_t r = as<Sbm>().blocks.block_count();
      return r * (r + 1) / 2;
    }
    case Family::additive_sbm: return 2 * as<AdditiveSbm>().blocks.block_count();
    case Family::p1_config: return 2 * n;
    case Family::directed_additive_sbm:
      return 3 * as<DirectedAdditiveSbm>().blocks.block_count();
  }
  throw std::logic_error("param_dim: bad family");
}

ModelSpec ModelSpec::from_flat(Family family, std::size_t n, bool directed,
                               const BlockAssignment* blocks, const std::vector<double>& flat) {
  auto need_blocks = [&]() -> const BlockAssignment& {
    if (!blocks) throw std::invalid_argument("from_flat: family requires a block assignment");
    return *blocks;
  };
  auto slice = [&](std::size_t from, std::size_t count) {
    return std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(from),
                               flat.begin() + static_cast<std::ptrdiff_t>(from + count));
  };
  switch (family) {
    case Family::saturated:
      return ModelSpec(Saturated{LogitMatrix(n, directed, flat)});
    case Family::erdos_renyi:
      if (flat.size() != 1) throw std::invalid_argument("from_flat: erdos-renyi expects 1 value");
      return ModelSpec(ErdosRenyi{flat[0], directed});
    case Family::beta:
      if (flat.size() != n) throw std::invalid_argument("from_flat: beta expects n values");
      return ModelSpec(Beta{flat});
    case Family::sbm: {
      const auto& b = need_blocks();
      return ModelSpec(Sbm{b, flat});
    }
    case Family::additive_sbm: {
      const auto& b = need_blocks();
      std::size_t r = b.block_count();
      if (flat.size() != 2 * r) throw std::invalid_argument("from_flat: additive-sbm expects 2r values");
      return ModelSpec(AdditiveSbm{b, slice(0, r), slice(r, r)});
    }
    case Family::p1_config:
      if (flat.size() != 2 * n) throw std::invalid_argument("from_flat: p1-config expects 2n values");
      return ModelSpec(P1Config(slice(0, n), slice(n, n)));
    case Family::directed_additive_sbm: {
      const auto& b = need_blocks();
      std::size_t r = b.block_count();
      if (flat.size() != 3 * r)
        throw std::invalid_argument("from_flat: directed-additive-sbm expects 3r values");
      return ModelSpec(DirectedAdditiveSbm(b, slice(0, r), slice(r, r), slice(2 * r, r)));
    }
  }
  throw std::logic_error("from_flat: bad family");
}

namespace {

void check_n(const ModelSpec& m, std::size_t n) {
  if (n < 2) throw std::invalid_argument("model ops: need n >= 2");
  if (auto pinned = m.pinned_n(); pinned && *pinned != n)
    throw std::invalid_argument("model ops: n does not match the parameter dimensions");
  if (const auto* b = m.blocks(); b && b->n() != n)
    throw std::invalid_argument("model ops: block assignment length != n");
}

}  // namespace

LogitMatrix logits(const ModelSpec& m, std::size_t n) {
  check_n(m, n);
  const bool dir = m.directed();
  if (m.family() == Family::saturated) return m.as<Saturated>().logits;
  std::vector<double> values(dyad_count(n, dir));
  for (std::size_t d = 0; d < values.size(); ++d) {
    auto [i, j] = dyad_at(n, dir, d);
    double theta = 0.0;
    switch (m.family()) {
      case Family::erdos_renyi:
        theta = m.as<ErdosRenyi>().theta;
        break;
      case Family::beta: {
        const auto& b = m.as<Beta>().beta;
        theta = b[i] + b[j];
        break;
      }
      case Family::sbm: {
        const auto& s = m.as<Sbm>();
        theta = s.eta_at(s.blocks.label(i), s.blocks.label(j));
        break;
      }
      case Family::additive_sbm: {
        const auto& s = m.as<AdditiveSbm>();
        std::size_t k = s.blocks.label(i), l = s.blocks.label(j);
        theta = k == l ? s.eta_diag[k] : s.delta[k] + s.delta[l];
        break;
      }
      case Family::p1_config: {
        const auto& s = m.as<P1Config>();
        theta = s.alpha[i] + s.beta[j];
        break;
      }
      case Family::directed_additive_sbm: {
        const auto& s = m.as<DirectedAdditiveSbm>();
        std::size_t k = s.blocks.label(i), l = s.blocks.label(j);
        theta = k == l ? s.eta_diag[k] : s.delta[k] + s.lambda[l];
        break;
      }
      case Family::saturated:
        break;  // handled above
    }
    values[d] = theta;
  }
  return LogitMatrix(n, dir, std::move(values));
}

double log_partition(const LogitMatrix& theta) {
  double psi = 0.0;
  for (double t : theta.values()) psi += log1p_exp(t);
  return psi;
}

double log_partition(const ModelSpec& m, std::size_t n) {
  return log_partition(logits(m, n));
}

namespace {

// Shared aggregation: both observed statistics (dyad bits) and expected
// statistics (dyad probabilities) are linear images of per-dyad weights.
template <class WeightFn>
SuffStats aggregate_dyads(Family family, std::size_t n, bool directed,
                          const BlockAssignment* blocks, WeightFn&& weight) {
  SuffStats out{family, directed, {}};
  const std::size_t dyads = dyad_count(n, directed);
  switch (family) {
    case Family::saturated: {
      out.values.resize(dyads);
      for (std::size_t d = 0; d < dyads; ++d) out.values[d] = weight(d);
      return out;
    }
    case Family::erdos_renyi: {
      double total = 0.0;
      for (std::size_t d = 0; d < dyads; ++d) total += weight(d);
      out.values = {total};
      return out;
    }
    case Family::beta: {
      out.values.assign(n, 0.0);
      for (std::size_t d = 0; d < dyads; ++d) {
        auto [i, j] = dyad_at(n, directed, d);
        double w = weight(d);
        out.values[i] += w;
        out.values[j] += w;
      }
      return out;
    }
    case Family::sbm: {
      std::size_t r = blocks->block_count();
      out.values.assign(r * (r + 1) / 2, 0.0);
      for (std::size_t d = 0; d < dyads; ++d) {
        auto [i, j] = dyad_at(n, directed, d);
        out.values[Sbm::eta_index(r, blocks->label(i), blocks->label(j))] += weight(d);
      }
      return out;
    }
    case Family::additive_sbm: {
      std::size_t r = blocks->block_count();
      out.values.assign(2 * r, 0.0);
      for (std::size_t d = 0; d < dyads; ++d) {
        auto [i, j] = dyad_at(n, directed, d);
        std::size_t k = blocks->label(i), l = blocks->label(j);
        double w = weight(d);
        if (k == l) {
          out.values[r + k] += w;
        } else {
          out.values[k] += w;
          out.values[l] += w;
        }
      }
      return out;
    }
    case Family::p1_config: {
      out.values.assign(2 * n, 0.0);
      for (std::size_t d = 0; d < dyads; ++d) {
        auto [i, j] = dyad_at(n, directed, d);
        double w = weight(d);
        out.values[i] += w;
        out.values[n + j] += w;
      }
      return out;
    }
    case Family::directed_additive_sbm: {
      std::size_t r = blocks->block_count();
      out.values.assign(3 * r, 0.0);
      for (std::size_t d = 0; d < dyads; ++d) {
        auto [i, j] = dyad_at(n, directed, d);
        std::size_t k = blocks->label(i), l = blocks->label(j);
        double w = weight(d);
        if (k == l) {
          out.values[2 * r + k] += w;
        } else {
          out.values[k] += w;
          out.values[r + l] += w;
        }
      }
      return out;
    }
  }
  throw std::logic_error("aggregate_dyads: bad family");
}

}  // namespace

SuffStats sufficient_stats(Family family, const BlockAssignment* blocks, const Graph& g) {
  if ((family == Family::beta || family == Family::sbm || family == Family::additive_sbm) &&
      g.directed())
    throw std::invalid_argument("sufficient_stats: family requires an undirected graph");
  if ((family == Family::p1_config || family == Family::directed_additive_sbm) && !g.directed())
    throw std::invalid_argument("sufficient_stats: family requires a directed graph");
  if ((family == Family::sbm || family == Family::additive_sbm ||
       family == Family::directed_additive_sbm)) {
    if (!blocks) throw std::invalid_argument("sufficient_stats: family requires blocks");
    if (blocks->n() != g.n())
      throw std::invalid_argument("sufficient_stats: block assignment length != n");
  }
  return aggregate_dyads(family, g.n(), g.directed(), blocks,
                         [&](std::size_t d) { return g.bit(d) ? 1.0 : 0.0; });
}

SuffStats sufficient_stats(const ModelSpec& m, const Graph& g) {
  if (m.directed() != g.directed())
    throw std::invalid_argument("sufficient_stats: graph directedness does not match the model");
  check_n(m, g.n());
  return sufficient_stats(m.family(), m.blocks(), g);
}

double log_likelihood(const LogitMatrix& theta, const Graph& g) {
  if (theta.n() != g.n() || theta.directed() != g.directed())
    throw std::invalid_argument("log_likelihood: logit matrix does not match the graph");
  double linear = 0.0;
  for (std::size_t d = 0; d < g.dyads(); ++d)
    if (g.bit(d)) linear += theta.values()[d];
  return linear - log_partition(theta);
}

double log_likelihood(const ModelSpec& m, const Graph& g) {
  if (m.directed() != g.directed())
    throw std::invalid_argument("log_likelihood: graph directedness does not match the model");
  return log_likelihood(logits(m, g.n()), g);
}

std::vector<double> dyad_probabilities(const LogitMatrix& theta) {
  // Rounded into the open interval: finite logits never report 0 or 1 even
  // when sigmoid saturates in double precision.
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  std::vector<double> p(theta.values().size());
  for (std::size_t d = 0; d < p.size(); ++d)
    p[d] = std::min(std::max(sigmoid(theta.values()[d]), lo), hi);
  return p;
}

std::vector<double> dyad_probabilities(const ModelSpec& m, std::size_t n) {
  return dyad_probabilities(logits(m, n));
}

SuffStats expected_stats(const ModelSpec& m, std::size_t n) {
  check_n(m, n);
  std::vector<double> p = dyad_probabilities(m, n);
  return aggregate_dyads(m.family(), n, m.directed(), m.blocks(),
                         [&](std::size_t d) { return p[d]; });
}

}  // namespace dergm
