#include "dergm/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dergm/detail/rng.hpp"

namespace dergm::oracle {

bool enumerable(std::size_t n, bool directed) {
  return directed ? n <= max_directed_n : n <= max_undirected_n;
}

namespace {

void check_enumerable(std::size_t n, bool directed) {
  if (n < 2) throw std::invalid_argument("oracle: need n >= 2");
  if (!enumerable(n, directed))
    throw std::invalid_argument("oracle: n exceeds the enumeration limit");
}

}  // namespace

std::uint64_t graph_count(std::size_t n, bool directed) {
  check_enumerable(n, directed);
  return std::uint64_t{1} << dyad_count(n, directed);
}

Graph graph_from_bitmask(std::size_t n, bool directed, std::uint64_t mask) {
  check_enumerable(n, directed);
  Graph g(n, directed);
  for (std::size_t d = 0; d < g.dyads(); ++d) g.set_bit(d, (mask >> d) & 1U);
  return g;
}

std::vector<Graph> enumerate_graphs(std::size_t n, bool directed) {
  std::uint64_t total = graph_count(n, directed);
  std::vector<Graph> out;
  out.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask)
    out.push_back(graph_from_bitmask(n, directed, mask));
  return out;
}

double brute_log_partition(const ModelSpec& m, std::size_t n) {
  check_enumerable(n, m.directed());
  const LogitMatrix theta = logits(m, n);
  const std::size_t dyads = theta.values().size();
  const std::uint64_t total = std::uint64_t{1} << dyads;

  // Log-sum-exp with a running max; exponents can reach +-(bound * dyads).
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double linear = 0.0;
    for (std::size_t d = 0; d < dyads; ++d)
      if ((mask >> d) & 1U) linear += theta.values()[d];
    terms[mask] = linear;
    if (linear > max_term) max_term = linear;
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

double brute_normalization_sum(const ModelSpec& m, std::size_t n) {
  check_enumerable(n, m.directed());
  const LogitMatrix theta = logits(m, n);
  const double psi = log_partition(theta);
  const std::uint64_t total = std::uint64_t{1} << theta.values().size();
  double acc = 0.0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double linear = 0.0;
    for (std::size_t d = 0; d < theta.values().size(); ++d)
      if ((mask >> d) & 1U) linear += theta.values()[d];
    acc += std::exp(linear - psi);
  }
  return acc;
}

SuffStats brute_expected_stats(const ModelSpec& m, std::size_t n) {
  check_enumerable(n, m.directed());
  const LogitMatrix theta = logits(m, n);
  const double psi = log_partition(theta);
  const std::uint64_t total = std::uint64_t{1} << theta.values().size();
  SuffStats acc{m.family(), m.directed(), std::vector<double>(m.param_dim(n), 0.0)};
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Graph g = graph_from_bitmask(n, m.directed(), mask);
    double linear = 0.0;
    for (std::size_t d = 0; d < theta.values().size(); ++d)
      if ((mask >> d) & 1U) linear += theta.values()[d];
    double weight = std::exp(linear - psi);
    SuffStats s = sufficient_stats(m, g);
    for (std::size_t t = 0; t < s.values.size(); ++t) acc.values[t] += weight * s.values[t];
  }
  return acc;
}

bool certify_mle(const Graph& g, const ModelSpec& fitted, std::size_t trials,
                 std::uint64_t seed) {
  check_enumerable(g.n(), g.directed());
  const double slack = 1e-9;
  const double fitted_ll = log_likelihood(fitted, g);
  const std::vector<double> center = fitted.flat_params();

  auto ll_at = [&](const std::vector<double>& flat) {
    ModelSpec candidate =
        ModelSpec::from_flat(fitted.family(), g.n(), g.directed(), fitted.blocks(), flat);
    return log_likelihood(candidate, g);
  };

  detail::Rng rng(seed);
  std::vector<double> point(center.size());
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t d = 0; d < center.size(); ++d) point[d] = rng.uniform(center[d] - 2.0, center[d] + 2.0);
    if (ll_at(point) > fitted_ll + slack) return false;
  }
  for (std::size_t d = 0; d < center.size(); ++d) {
    for (double step : {0.01, -0.01}) {
      point = center;
      point[d] += step;
      if (ll_at(point) > fitted_ll + slack) return false;
    }
  }
  return true;
}

}  // namespace dergm::oracle
