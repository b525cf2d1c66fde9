#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dergm {

// Canonical dyad indexing over n labeled nodes.
//
// Undirected: unordered pairs {i,j} stored under i<j, lexicographic:
//   (0,1),(0,2),...,(0,n-1),(1,2),...
// Directed: ordered pairs (i,j), i != j, lexicographic with the diagonal
//   skipped: (0,1),...,(0,n-1),(1,0),(1,2),...
//
// Every statistics vector in the library follows this enumeration order.
std::size_t dyad_count(std::size_t n, bool directed);
std::size_t dyad_index(std::size_t n, bool directed, std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> dyad_at(std::size_t n, bool directed, std::size_t index);

// Simple labeled graph, directed or undirected. No self-loops, no weights.
// Undirected edges are stored once under the i<j canonical index; queries
// with (j,i) resolve to the same bit. Value semantics; treat as immutable
// after construction for concurrent reads.
class Graph {
 public:
  Graph(std::size_t n, bool directed);

  std::size_t n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  std::size_t dyads() const noexcept { return bits_.size(); }

  bool has_edge(std::size_t i, std::size_t j) const;
  void set_edge(std::size_t i, std::size_t j, bool present = true);

  bool bit(std::size_t dyad) const { return bits_[dyad] != 0; }
  void set_bit(std::size_t dyad, bool present) { bits_[dyad] = present ? 1 : 0; }

  std::int64_t edge_count() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  bool operator==(const Graph& other) const = default;

 private:
  std::size_t n_;
  bool directed_;
  std::vector<std::uint8_t> bits_;
};

// Degree sequence of an undirected graph; rejects directed input.
std::vector<std::int64_t> degree_sequence(const Graph& g);

// (out-degrees, in-degrees) of a directed graph; rejects undirected input.
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> out_in_degrees(const Graph& g);

// Relabels nodes by pi: edge (i,j) maps to (pi[i], pi[j]). pi must be a
// bijection on 0..n-1.
Graph permute_graph(const Graph& g, std::span<const std::size_t> pi);

// Node-to-block map with dense labels 0..r-1; every block non-empty.
class BlockAssignment {
 public:
  explicit BlockAssignment(std::vector<std::size_t> labels);

  // Renumbers arbitrary labels to dense 0..r-1, dropping empty blocks.
  // Relative order of distinct labels is preserved.
  static BlockAssignment compacted(std::span<const std::size_t> raw_labels);

  std::size_t n() const noexcept { return labels_.size(); }
  std::size_t block_count() const noexcept { return r_; }
  std::size_t label(std::size_t node) const { return labels_[node]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  std::vector<std::size_t> block_sizes() const;

  bool operator==(const BlockAssignment& other) const = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t r_;
};

// Edge counts per block pair. Undirected: entries for k<=l, e_kk counting
// within-block edges. Directed: full r x r, entry (k,l) counting edges from
// block k to block l; the diagonal counts ordered within-block edges.
struct BlockEdgeCounts {
  std::size_t r = 0;
  bool directed = false;
  std::vector<std::int64_t> counts;

  std::int64_t at(std::size_t k, std::size_t l) const;
  std::size_t entry_index(std::size_t k, std::size_t l) const;
  std::int64_t total() const;
};

// Between-block degrees plus within-block edge counts.
// Undirected: degree[k] = sum over l != k of e_kl (within-block edges are
// excluded; they only enter through within[k]).
// Directed: degree[k] = out-edges of block k to other blocks, in_degree[k]
// the mirror image.
struct BlockDegrees {
  bool directed = false;
  std::vector<std::int64_t> degree;
  std::vector<std::int64_t> in_degree;  // empty for undirected graphs
  std::vector<std::int64_t> within;
};

BlockEdgeCounts block_edge_counts(const Graph& g, const BlockAssignment& blocks);
BlockDegrees block_degrees(const Graph& g, const BlockAssignment& blocks);

// Number of dyads available between blocks k and l (k == l gives the
// within-block dyad count).
std::int64_t block_pair_capacity(const BlockAssignment& blocks, std::size_t k, std::size_t l,
                                 bool directed);

}  // namespace dergm
