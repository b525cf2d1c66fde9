#include "dergm/sampling.hpp"

#include <stdexcept>

#include "dergm/detail/rng.hpp"

namespace dergm {

std::vector<Graph> sample(const ModelSpec& m, std::size_t n, const SampleConfig& cfg) {
  if (cfg.count < 1) throw std::invalid_argument("sample: count must be >= 1");
  const std::vector<double> p = dyad_probabilities(m, n);  // once per model
  const bool directed = m.directed();
  std::vector<Graph> out;
  out.reserve(cfg.count);
  for (std::size_t gi = 0; gi < cfg.count; ++gi) {
    Graph g(n, directed);
    for (std::size_t d = 0; d < p.size(); ++d)
      g.set_bit(d, detail::dyad_uniform(cfg.seed, gi, d) < p[d]);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<double> empirical_dyad_frequencies(std::span<const Graph> samples) {
  if (samples.empty())
    throw std::invalid_argument("empirical_dyad_frequencies: empty sample set");
  const Graph& first = samples.front();
  for (const Graph& g : samples)
    if (g.n() != first.n() || g.directed() != first.directed())
      throw std::invalid_argument("empirical_dyad_frequencies: heterogeneous samples");
  std::vector<double> freq(first.dyads(), 0.0);
  for (const Graph& g : samples)
    for (std::size_t d = 0; d < freq.size(); ++d)
      if (g.bit(d)) freq[d] += 1.0;
  for (double& f : freq) f /= static_cast<double>(samples.size());
  return freq;
}

}  // namespace dergm
