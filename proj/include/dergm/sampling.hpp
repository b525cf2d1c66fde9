#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dergm/graph.hpp"
#include "dergm/model.hpp"

namespace dergm {

struct SampleConfig {
  std::uint64_t seed = 0;
  std::size_t count = 1;
};

// Exact sampling: one independent Bernoulli(p_ij) draw per canonical dyad,
// from a per-(graph, dyad) keyed stream. Identical (seed, m, n) produce
// bit-identical output on every platform, independent of evaluation order.
std::vector<Graph> sample(const ModelSpec& m, std::size_t n, const SampleConfig& cfg);

// Per-dyad mean of adjacency bits over a homogeneous sample set.
std::vector<double> empirical_dyad_frequencies(std::span<const Graph> samples);

}  // namespace dergm
