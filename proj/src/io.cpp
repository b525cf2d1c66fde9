#include "dergm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dergm::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

bool numeric_token(const std::string& t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open file for writing: " + path);
  return out;
}

}  // namespace

LoadedGraph read_edge_list(std::istream& in) {
  std::optional<bool> directed;
  std::optional<std::size_t> declared_nodes;
  std::vector<std::pair<std::string, std::string>> edges;

  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first[0] == '#') {
      if (first == "#directed" || first == "#undirected") {
        if (directed) fail("edge list: duplicate directedness header");
        directed = (first == "#directed");
        std::string extra;
        if (ls >> extra) fail("edge list: trailing tokens after " + first);
      } else if (first == "#nodes") {
        if (declared_nodes) fail("edge list: duplicate #nodes header");
        std::size_t n = 0;
        if (!(ls >> n) || n == 0) fail("edge list: #nodes needs a positive count");
        declared_nodes = n;
      } else {
        fail("edge list: unknown directive " + first);
      }
      continue;
    }
    if (!directed) fail("edge list: #directed or #undirected must precede edges");
    std::string second, extra;
    if (!(ls >> second)) fail("edge list: edge line needs two tokens: " + line);
    if (ls >> extra) fail("edge list: edge line has trailing tokens: " + line);
    if (first == second) fail("edge list: self-loop rejected: " + line);
    edges.emplace_back(std::move(first), std::move(second));
  }
  if (!directed) fail("edge list: missing #directed or #undirected header");

  bool all_numeric = std::all_of(edges.begin(), edges.end(), [](const auto& e) {
    return numeric_token(e.first) && numeric_token(e.second);
  });

  std::vector<std::string> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> ids;
  ids.reserve(edges.size());
  if (all_numeric) {
    constexpr std::size_t sane_bound = 10'000'000;
    std::size_t max_id = 0;
    for (const auto& [a, b] : edges) {
      std::size_t ia = std::stoull(a), ib = std::stoull(b);
      if (ia >= sane_bound || ib >= sane_bound) fail("edge list: node id too large");
      max_id = std::max({max_id, ia, ib});
      ids.emplace_back(ia, ib);
    }
    std::size_t n = edges.empty() ? declared_nodes.value_or(1) : max_id + 1;
    if (declared_nodes) {
      if (*declared_nodes < n) fail("edge list: #nodes smaller than the largest node id + 1");
      n = *declared_nodes;
    }
    tokens.resize(n);
    for (std::size_t i = 0; i < n; ++i) tokens[i] = std::to_string(i);
  } else {
    std::map<std::string, std::size_t> index;
    auto intern = [&](const std::string& t) {
      auto [it, inserted] = index.emplace(t, tokens.size());
      if (inserted) tokens.push_back(t);
      return it->second;
    };
    for (const auto& [a, b] : edges) {
      std::size_t ia = intern(a);
      std::size_t ib = intern(b);
      ids.emplace_back(ia, ib);
    }
    if (declared_nodes) {
      if (*declared_nodes < tokens.size())
        fail("edge list: #nodes smaller than the distinct token count");
      for (std::size_t i = tokens.size(); i < *declared_nodes; ++i)
        tokens.push_back("node" + std::to_string(i));
    }
  }

  Graph g(tokens.size(), *directed);
  for (auto [i, j] : ids) {
    if (g.has_edge(i, j)) fail("edge list: duplicate edge");
    g.set_edge(i, j);
  }
  return {std::move(g), std::move(tokens)};
}

LoadedGraph read_edge_list_file(const std::string& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << (g.directed() ? "#directed" : "#undirected") << "\n";
  out << "#nodes " << g.n() << "\n";
  for (auto [i, j] : g.edges()) out << i << " " << j << "\n";
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  auto out = open_output(path);
  write_edge_list(out, g);
}

BlockAssignment read_blocks(std::istream& in, const LoadedGraph& g) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.node_tokens.size(); ++i) index[g.node_tokens[i]] = i;

  std::vector<std::optional<std::size_t>> raw(g.graph.n());
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;
    if (token[0] == '#') continue;
    std::size_t label = 0;
    std::string extra;
    if (!(ls >> label)) fail("blocks file: line needs \"token block\": " + line);
    if (ls >> extra) fail("blocks file: trailing tokens: " + line);
    auto it = index.find(token);
    if (it == index.end()) fail("blocks file: unknown node token: " + token);
    if (raw[it->second]) fail("blocks file: node assigned twice: " + token);
    raw[it->second] = label;
  }
  std::vector<std::size_t> labels(g.graph.n());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!raw[i]) fail("blocks file: node not assigned: " + g.node_tokens[i]);
    labels[i] = *raw[i];
  }
  return BlockAssignment::compacted(labels);
}

BlockAssignment read_blocks_file(const std::string& path, const LoadedGraph& g) {
  auto in = open_input(path);
  return read_blocks(in, g);
}

void write_node_map(std::ostream& out, const std::vector<std::string>& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) out << i << " " << tokens[i] << "\n";
}

namespace {

std::vector<double> require_number_array(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) fail("params: missing array field \"" + key + "\"");
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number()) fail("params: non-numeric entry in \"" + key + "\"");
    out.push_back(x.get<double>());
  }
  return out;
}

BlockAssignment require_blocks(const json& j) {
  if (!j.contains("blocks") || !j["blocks"].is_array())
    fail("params: block family needs a \"blocks\" array");
  std::vector<std::size_t> labels;
  for (const auto& x : j["blocks"]) {
    if (!x.is_number_unsigned()) fail("params: block labels must be non-negative integers");
    labels.push_back(x.get<std::size_t>());
  }
  return BlockAssignment::compacted(labels);
}

json eta_matrix(const Sbm& s) {
  const std::size_t r = s.blocks.block_count();
  json rows = json::array();
  for (std::size_t k = 0; k < r; ++k) {
    json row = json::array();
    for (std::size_t l = 0; l < r; ++l) row.push_back(s.eta_at(k, l));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> eta_from_matrix(const json& j, std::size_t r) {
  if (!j.is_array() || j.size() != r) fail("params: eta must be an r x r matrix");
  std::vector<double> eta(r * (r + 1) / 2, 0.0);
  for (std::size_t k = 0; k < r; ++k) {
    if (!j[k].is_array() || j[k].size() != r) fail("params: eta must be an r x r matrix");
    for (std::size_t l = 0; l < r; ++l) {
      double v = j[k][l].get<double>();
      if (l >= k) {
        eta[Sbm::eta_index(r, k, l)] = v;
      } else if (v != j[l][k].get<double>()) {
        fail("params: eta matrix must be symmetric");
      }
    }
  }
  return eta;
}

}  // namespace

ParamsDoc read_params(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(std::string("params: invalid JSON: ") + e.what());
  }
  if (!j.contains("model") || !j["model"].is_string()) fail("params: missing \"model\" field");
  auto family = family_from_name(j["model"].get<std::string>());
  if (!family) fail("params: unknown model \"" + j["model"].get<std::string>() + "\"");

  std::optional<std::size_t> n;
  if (j.contains("n")) {
    if (!j["n"].is_number_unsigned()) fail("params: \"n\" must be a non-negative integer");
    n = j["n"].get<std::size_t>();
  }
  bool directed = false;
  if (j.contains("directed")) {
    if (!j["directed"].is_boolean()) fail("params: \"directed\" must be a boolean");
    directed = j["directed"].get<bool>();
  } else if (*family == Family::p1_config || *family == Family::directed_additive_sbm) {
    directed = true;
  }

  auto finish = [&](ModelSpec spec) {
    if (auto pinned = spec.pinned_n(); pinned && n && *pinned != *n)
      fail("params: \"n\" contradicts the parameter dimensions");
    if (auto pinned = spec.pinned_n(); pinned) n = *pinned;
    return ParamsDoc{std::move(spec), n};
  };

  switch (*family) {
    case Family::saturated: {
      if (!n) fail("params: saturated model needs \"n\"");
      return finish(ModelSpec(Saturated{LogitMatrix(*n, directed, require_number_array(j, "logits"))}));
    }
    case Family::erdos_renyi: {
      if (!j.contains("theta") || !j["theta"].is_number()) fail("params: erdos-renyi needs \"theta\"");
      return finish(ModelSpec(ErdosRenyi{j["theta"].get<double>(), directed}));
    }
    case Family::beta:
      if (directed) fail("params: beta model is undirected");
      return finish(ModelSpec(Beta{require_number_array(j, "beta")}));
    case Family::sbm: {
      if (directed) fail("params: sbm is undirected");
      BlockAssignment blocks = require_blocks(j);
      if (!j.contains("eta")) fail("params: sbm needs \"eta\"");
      auto eta = eta_from_matrix(j["eta"], blocks.block_count());
      return finish(ModelSpec(Sbm{std::move(blocks), std::move(eta)}));
    }
    case Family::additive_sbm: {
      if (directed) fail("params: additive-sbm is undirected");
      BlockAssignment blocks = require_blocks(j);
      return finish(ModelSpec(AdditiveSbm{std::move(blocks), require_number_array(j, "delta"),
                                          require_number_array(j, "eta_diag")}));
    }
    case Family::p1_config:
      if (!directed) fail("params: p1-config is directed");
      return finish(ModelSpec(
          P1Config(require_number_array(j, "alpha"), require_number_array(j, "beta"))));
    case Family::directed_additive_sbm: {
      if (!directed) fail("params: directed-additive-sbm is directed");
      BlockAssignment blocks = require_blocks(j);
      return finish(ModelSpec(DirectedAdditiveSbm(
          std::move(blocks), require_number_array(j, "delta"), require_number_array(j, "lambda"),
          require_number_array(j, "eta_diag"))));
    }
  }
  fail("params: unhandled family");
}

ParamsDoc read_params_file(const std::string& path) {
  auto in = open_input(path);
  return read_params(in);
}

void write_params(std::ostream& out, const ModelSpec& spec, std::optional<std::size_t> n) {
  json j;
  j["model"] = family_name(spec.family());
  j["directed"] = spec.directed();
  if (auto pinned = spec.pinned_n())
    j["n"] = *pinned;
  else if (n)
    j["n"] = *n;
  if (const auto* blocks = spec.blocks()) j["blocks"] = blocks->labels();

  switch (spec.family()) {
    case Family::saturated:
      j["logits"] = spec.as<Saturated>().logits.values();
      break;
    case Family::erdos_renyi:
      j["theta"] = spec.as<ErdosRenyi>().theta;
      break;
    case Family::beta:
      j["beta"] = spec.as<Beta>().beta;
      break;
    case Family::sbm:
      j["eta"] = eta_matrix(spec.as<Sbm>());
      break;
    case Family::additive_sbm:
      j["delta"] = spec.as<AdditiveSbm>().delta;
      j["eta_diag"] = spec.as<AdditiveSbm>().eta_diag;
      break;
    case Family::p1_config:
      j["alpha"] = spec.as<P1Config>().alpha;
      j["beta"] = spec.as<P1Config>().beta;
      break;
    case Family::directed_additive_sbm:
      j["delta"] = spec.as<DirectedAdditiveSbm>().delta;
      j["lambda"] = spec.as<DirectedAdditiveSbm>().lambda;
      j["eta_diag"] = spec.as<DirectedAdditiveSbm>().eta_diag;
      break;
  }
  out << j.dump(2) << "\n";
}

void write_params_file(const std::string& path, const ModelSpec& spec,
                       std::optional<std::size_t> n) {
  auto out = open_output(path);
  write_params(out, spec, n);
}

ParametrizationProbe read_probe_grid(std::istream& in) {
  std::size_t n = 0, rows = 0, cols = 0;
  double lo = 0, hi = 0;
  if (!(in >> n >> rows >> cols >> lo >> hi))
    fail("probe grid: header must be \"n rows cols lo hi\"");
  if (n < 2) fail("probe grid: need n >= 2");
  if (rows < 2 || cols < 2) fail("probe grid: need at least a 2x2 table");
  if (!(lo < hi)) fail("probe grid: need lo < hi");

  std::vector<double> values;
  double x = 0;
  while (in >> x) values.push_back(x);
  const std::size_t per_dyad = rows * cols;
  const std::size_t und = dyad_count(n, false), dir = dyad_count(n, true);
  bool directed;
  if (values.size() == und * per_dyad) {
    directed = false;
  } else if (values.size() == dir * per_dyad) {
    directed = true;
  } else {
    fail("probe grid: value count matches neither " + std::to_string(und) + " nor " +
         std::to_string(dir) + " dyad tables of " + std::to_string(per_dyad) + " entries");
  }
  for (double v : values)
    if (!std::isfinite(v)) fail("probe grid: non-finite table entry");

  struct Table {
    std::size_t n, rows, cols;
    bool directed;
    double lo, hi;
    std::vector<double> values;

    double eval(std::size_t dyad, double u, double v) const {
      auto cell = [&](double t, std::size_t count) {
        double s = (t - lo) / (hi - lo) * static_cast<double>(count - 1);
        auto i0 = static_cast<std::size_t>(std::min(
            std::max(std::floor(s), 0.0), static_cast<double>(count - 2)));
        return std::pair<std::size_t, double>{i0, s - static_cast<double>(i0)};
      };
      auto [r0, fu] = cell(u, rows);
      auto [c0, fv] = cell(v, cols);
      const double* t = values.data() + dyad * rows * cols;
      auto f = [&](std::size_t rr, std::size_t cc) { return t[rr * cols + cc]; };
      return (1 - fu) * (1 - fv) * f(r0, c0) + fu * (1 - fv) * f(r0 + 1, c0) +
             (1 - fu) * fv * f(r0, c0 + 1) + fu * fv * f(r0 + 1, c0 + 1);
    }
  };
  auto table = std::make_shared<Table>(Table{n, rows, cols, directed, lo, hi, std::move(values)});

  ParametrizationProbe p;
  p.n = n;
  p.directed = directed;
  p.box = {lo, hi};
  p.eval = [table](std::size_t i, std::size_t j, double u, double v) {
    return table->eval(dyad_index(table->n, table->directed, i, j), u, v);
  };
  return p;
}

ParametrizationProbe read_probe_grid_file(const std::string& path) {
  auto in = open_input(path);
  return read_probe_grid(in);
}

void write_probe_grid(std::ostream& out, const ParametrizationProbe& p, std::size_t rows,
                      std::size_t cols) {
  out << p.n << " " << rows << " " << cols << " ";
  out << std::setprecision(17) << p.box.lo << " " << p.box.hi << "\n";
  const std::size_t dyads = dyad_count(p.n, p.directed);
  for (std::size_t d = 0; d < dyads; ++d) {
    auto [i, j] = dyad_at(p.n, p.directed, d);
    for (std::size_t rr = 0; rr < rows; ++rr) {
      for (std::size_t cc = 0; cc < cols; ++cc) {
        double u = p.box.lo + p.box.width() * static_cast<double>(rr) / static_cast<double>(rows - 1);
        double v = p.box.lo + p.box.width() * static_cast<double>(cc) / static_cast<double>(cols - 1);
        out << (cc ? " " : "") << p(i, j, u, v);
      }
      out << "\n";
    }
  }
}

}  // namespace dergm::io
