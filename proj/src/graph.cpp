#include "dergm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dergm {

std::size_t dyad_count(std::size_t n, bool directed) {
  return directed ? n * (n - 1) : n * (n - 1) / 2;
}

std::size_t dyad_index(std::size_t n, bool directed, std::size_t i, std::size_t j) {
  if (i >= n || j >= n) throw std::invalid_argument("dyad_index: node out of range");
  if (i == j) throw std::invalid_argument("dyad_index: self-loops are not dyads");
  if (directed) return i * (n - 1) + (j > i ? j - 1 : j);
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> dyad_at(std::size_t n, bool directed, std::size_t index) {
  if (index >= dyad_count(n, directed)) throw std::invalid_argument("dyad_at: index out of range");
  if (directed) {
    std::size_t i = index / (n - 1);
    std::size_t rem = index % (n - 1);
    std::size_t j = rem < i ? rem : rem + 1;
    return {i, j};
  }
  std::size_t i = 0;
  std::size_t row = n - 1;
  while (index >= row) {
    index -= row;
    --row;
    ++i;
  }
  return {i, i + 1 + index};
}

Graph::Graph(std::size_t n, bool directed)
    : n_(n), directed_(directed), bits_(dyad_count(n, directed), 0) {
  if (n < 1) throw std::invalid_argument("Graph: need at least one node");
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  return bits_[dyad_index(n_, directed_, i, j)] != 0;
}

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
  bits_[dyad_index(n_, directed_, i, j)] = present ? 1 : 0;
}

std::int64_t Graph::edge_count() const {
  return std::accumulate(bits_.begin(), bits_.end(), std::int64_t{0});
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t d = 0; d < bits_.size(); ++d)
    if (bits_[d]) out.push_back(dyad_at(n_, directed_, d));
  return out;
}

std::vector<std::int64_t> degree_sequence(const Graph& g) {
  if (g.directed()) throw std::invalid_argument("degree_sequence: graph must be undirected");
  std::vector<std::int64_t> deg(g.n(), 0);
  for (std::size_t d = 0; d < g.dyads(); ++d) {
    if (!g.bit(d)) continue;
    auto [i, j] = dyad_at(g.n(), false, d);
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> out_in_degrees(const Graph& g) {
  if (!g.directed()) throw std::invalid_argument("out_in_degrees: graph must be directed");
  std::vector<std::int64_t> out(g.n(), 0), in(g.n(), 0);
  for (std::size_t d = 0; d < g.dyads(); ++d) {
    if (!g.bit(d)) continue;
    auto [i, j] = dyad_at(g.n(), true, d);
    ++out[i];
    ++in[j];
  }
  return {std::move(out), std::move(in)};
}

Graph permute_graph(const Graph& g, std::span<const std::size_t> pi) {
  if (pi.size() != g.n()) throw std::invalid_argument("permute_graph: permutation length mismatch");
  std::vector<std::uint8_t> seen(g.n(), 0);
  for (std::size_t v : pi) {
    if (v >= g.n() || seen[v]) throw std::invalid_argument("permute_graph: not a bijection");
    seen[v] = 1;
  }
  Graph out(g.n(), g.directed());
  for (std::size_t d = 0; d < g.dyads(); ++d) {
    if (!g.bit(d)) continue;
    auto [i, j] = dyad_at(g.n(), g.directed(), d);
    out.set_edge(pi[i], pi[j]);
  }
  return out;
}

BlockAssignment::BlockAssignment(std::vector<std::size_t> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("BlockAssignment: empty label vector");
  r_ = *std::max_element(labels_.begin(), labels_.end()) + 1;
  if (r_ > labels_.size()) throw std::invalid_argument("BlockAssignment: more blocks than nodes");
  std::vector<std::size_t> counts(r_, 0);
  for (std::size_t l : labels_) ++counts[l];
  for (std::size_t k = 0; k < r_; ++k)
    if (counts[k] == 0)
      throw std::invalid_argument("BlockAssignment: block " + std::to_string(k) +
                                  " is empty; compact labels first");
}

BlockAssignment BlockAssignment::compacted(std::span<const std::size_t> raw_labels) {
  std::vector<std::size_t> distinct(raw_labels.begin(), raw_labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> dense(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    dense[i] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), raw_labels[i]) - distinct.begin());
  }
  return BlockAssignment(std::move(dense));
}

std::vector<std::size_t> BlockAssignment::block_sizes() const {
  std::vector<std::size_t> sizes(r_, 0);
  for (std::size_t l : labels_) ++sizes[l];
  return sizes;
}

std::size_t BlockEdgeCounts::entry_index(std::size_t k, std::size_t l) const {
  if (k >= r || l >= r) throw std::invalid_argument("BlockEdgeCounts: block out of range");
  if (directed) return k * r + l;
  if (k > l) std::swap(k, l);
  return k * r - k * (k - 1) / 2 + (l - k);
}

std::int64_t BlockEdgeCounts::at(std::size_t k, std::size_t l) const {
  return counts[entry_index(k, l)];
}

std::int64_t BlockEdgeCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

BlockEdgeCounts block_edge_counts(const Graph& g, const BlockAssignment& blocks) {
  if (blocks.n() != g.n())
    throw std::invalid_argument("block_edge_counts: label vector length != node count");
  BlockEdgeCounts out;
  out.r = blocks.block_count();
  out.directed = g.directed();
  out.counts.assign(g.directed() ? out.r * out.r : out.r * (out.r + 1) / 2, 0);
  for (std::size_t d = 0; d < g.dyads(); ++d) {
    if (!g.bit(d)) continue;
    auto [i, j] = dyad_at(g.n(), g.directed(), d);
    ++out.counts[out.entry_index(blocks.label(i), blocks.label(j))];
  }
  return out;
}

BlockDegrees block_degrees(const Graph& g, const BlockAssignment& blocks) {
  BlockEdgeCounts e = block_edge_counts(g, blocks);
  BlockDegrees out;
  out.directed = g.directed();
  out.degree.assign(e.r, 0);
  out.within.assign(e.r, 0);
  if (g.directed()) out.in_degree.assign(e.r, 0);
  for (std::size_t k = 0; k < e.r; ++k) {
    out.within[k] = e.at(k, k);
    for (std::size_t l = 0; l < e.r; ++l) {
      if (l == k) continue;
      out.degree[k] += e.at(k, l);
      if (g.directed()) out.in_degree[k] += e.at(l, k);
    }
  }
  return out;
}

std::int64_t block_pair_capacity(const BlockAssignment& blocks, std::size_t k, std::size_t l,
                                 bool directed) {
  auto sizes = blocks.block_sizes();
  if (k >= sizes.size() || l >= sizes.size())
    throw std::invalid_argument("block_pair_capacity: block out of range");
  auto sk = static_cast<std::int64_t>(sizes[k]);
  auto sl = static_cast<std::int64_t>(sizes[l]);
  if (k == l) return directed ? sk * (sk - 1) : sk * (sk - 1) / 2;
  return directed ? sk * sl : sk * sl;
}

}  // namespace dergm
