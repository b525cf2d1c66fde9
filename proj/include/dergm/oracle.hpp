#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dergm/graph.hpp"
#include "dergm/model.hpp"

namespace dergm::oracle {

// Exhaustive enumeration stays cheap up to these sizes (at most 2^15
// undirected, 2^12 directed graphs).
inline constexpr std::size_t max_undirected_n = 6;
inline constexpr std::size_t max_directed_n = 4;

bool enumerable(std::size_t n, bool directed);
std::uint64_t graph_count(std::size_t n, bool directed);

// Graph number `mask` in the fixed enumeration order: bit d of the mask is
// the adjacency bit of canonical dyad d (little-endian over dyad index).
Graph graph_from_bitmask(std::size_t n, bool directed, std::uint64_t mask);

// All 2^(dyad count) graphs, each exactly once, in bitmask order.
std::vector<Graph> enumerate_graphs(std::size_t n, bool directed);

// log sum over all graphs of exp(sum of x_ij * theta_ij); the enumeration
// ground truth for the closed-form log_partition.
double brute_log_partition(const ModelSpec& m, std::size_t n);

// Sum over all graphs of exp(log_likelihood); should be 1.
double brute_normalization_sum(const ModelSpec& m, std::size_t n);

// Expectation of the sufficient statistics by full enumeration.
SuffStats brute_expected_stats(const ModelSpec& m, std::size_t n);

// True iff the fitted parameters beat `trials` random parameter draws and
// +-0.01 coordinate perturbations of the fitted point, up to 1e-9 slack.
// Random draws are uniform in a +-2 box around the fitted coordinates.
bool certify_mle(const Graph& g, const ModelSpec& fitted, std::size_t trials,
                 std::uint64_t seed);

}  // namespace dergm::oracle
