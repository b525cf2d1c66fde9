#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dergm/equivariance.hpp"
#include "dergm/graph.hpp"
#include "dergm/model.hpp"

namespace dergm::io {

// Edge-list text format:
//   #directed | #undirected     (required, first non-empty line)
//   #nodes N                    (optional, declares isolated nodes)
//   u v                         (one edge per line)
// Tokens that are all numeric are used as node ids directly; otherwise
// tokens map to dense ids in first-appearance order. Duplicate edges and
// self-loops are rejected.
struct LoadedGraph {
  Graph graph;
  std::vector<std::string> node_tokens;  // index -> external token
};

LoadedGraph read_edge_list(std::istream& in);
LoadedGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

// Blocks file: one "token block" line per node; labels are compacted.
BlockAssignment read_blocks(std::istream& in, const LoadedGraph& g);
BlockAssignment read_blocks_file(const std::string& path, const LoadedGraph& g);

// Node-token mapping table: "index token" per line.
void write_node_map(std::ostream& out, const std::vector<std::string>& tokens);

// Parameter document (JSON): field "model" selects the family, parameter
// arrays mirror the model structs, "blocks" carries the assignment for the
// block families. "n" is required only where the parameters do not pin it.
// Finite parameters round-trip bit-exactly through write-then-read.
struct ParamsDoc {
  ModelSpec spec;
  std::optional<std::size_t> n;
};

ParamsDoc read_params(std::istream& in);
ParamsDoc read_params_file(const std::string& path);
void write_params(std::ostream& out, const ModelSpec& spec,
                  std::optional<std::size_t> n = std::nullopt);
void write_params_file(const std::string& path, const ModelSpec& spec,
                       std::optional<std::size_t> n = std::nullopt);

// Tabulated probe: header "n rows cols lo hi", then one row-major rows x
// cols table of f values per canonical dyad (u varies along rows, v along
// columns, both on the inclusive uniform grid over [lo,hi]). Directedness
// is inferred from the table count. Evaluation is bilinear.
ParametrizationProbe read_probe_grid(std::istream& in);
ParametrizationProbe read_probe_grid_file(const std::string& path);
void write_probe_grid(std::ostream& out, const ParametrizationProbe& p, std::size_t rows,
                      std::size_t cols);

}  // namespace dergm::io
