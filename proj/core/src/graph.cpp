#include "gdkd/graph.hpp"

#include "gdkd/kv.hpp"
#include "gdkd/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace gdkd {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

[[noreturn]] void parse_error(const std::string& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

int Graph::num_classes() const {
  int c = 0;
  for (int l : labels) c = std::max(c, l + 1);
  return c;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= n_nodes || v >= n_nodes) return false;
  const auto& adj = adjacency[u].size() <= adjacency[v].size() ? adjacency[u] : adjacency[v];
  const NodeId other = adjacency[u].size() <= adjacency[v].size() ? v : u;
  return std::find(adj.begin(), adj.end(), other) != adj.end();
}

Graph Graph::build(std::size_t n_nodes, std::vector<Edge> raw_edges, Matrix features,
                   std::vector<int> labels) {
  require(features.rows() == n_nodes, "Graph: feature rows != node count");
  require(labels.empty() || labels.size() == n_nodes, "Graph: label count != node count");

  Graph g;
  g.n_nodes = n_nodes;
  g.features = std::move(features);
  g.labels = std::move(labels);

  std::set<std::uint64_t> seen;
  for (auto [u, v] : raw_edges) {
    require(u < n_nodes && v < n_nodes, "Graph: edge endpoint out of range");
    if (u == v) continue;  // self-loops dropped on construction
    if (u > v) std::swap(u, v);
    if (seen.insert(edge_key(u, v)).second) g.edges.emplace_back(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());

  g.adjacency.assign(n_nodes, {});
  for (auto [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::optional<std::string>& label_path) {
  // Features first: they fix the node count.
  std::ifstream fs(feature_path);
  if (!fs) throw std::runtime_error("cannot open feature file " + feature_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(fs, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) parse_error(feature_path, lineno, "invalid float");
    if (width == 0)
      width = row.size();
    else if (row.size() != width)
      parse_error(feature_path, lineno,
                  "ragged row: got " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(width));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(feature_path + ": no feature rows");

  const std::size_t n = rows.size();
  Matrix features(n, width);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(rows[i].begin(), rows[i].end(), features.row(i).begin());

  std::ifstream es(edge_path);
  if (!es) throw std::runtime_error("cannot open edge file " + edge_path);
  std::vector<Edge> edges;
  lineno = 0;
  while (std::getline(es, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u >> v)) parse_error(edge_path, lineno, "expected 'u v'");
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      parse_error(edge_path, lineno,
                  "node id out of range [0, " + std::to_string(n) + ")");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }

  std::vector<int> labels;
  if (label_path) {
    std::ifstream lf(*label_path);
    if (!lf) throw std::runtime_error("cannot open label file " + *label_path);
    lineno = 0;
    while (std::getline(lf, line)) {
      ++lineno;
      if (line.empty()) continue;
      int lab;
      auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), lab);
      if (ec != std::errc{}) parse_error(*label_path, lineno, "invalid integer label");
      labels.push_back(lab);
    }
    if (labels.size() != n)
      throw std::runtime_error(*label_path + ": " + std::to_string(labels.size()) +
                               " labels for " + std::to_string(n) + " nodes");
  }

  return Graph::build(n, std::move(edges), std::move(features), std::move(labels));
}

DatasetPaths load_dataset_manifest(const std::string& path) {
  const KvFile kv = KvFile::load(path);
  const auto dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };
  DatasetPaths d;
  d.edge_file = resolve(kv.get_or_throw("edge_file"));
  d.feature_file = resolve(kv.get_or_throw("feature_file"));
  if (auto l = kv.get("label_file")) d.label_file = resolve(*l);
  if (auto s = kv.get("split_file")) d.split_file = resolve(*s);
  return d;
}

Graph load_graph(const DatasetPaths& paths) {
  return load_graph(paths.edge_file, paths.feature_file, paths.label_file);
}

double homophily_rate(const Graph& g) {
  if (!g.has_labels()) throw std::runtime_error("homophily_rate: graph has no labels");
  if (g.edges.empty()) throw std::runtime_error("homophily_rate: graph has no edges");
  std::size_t same = 0;
  for (auto [u, v] : g.edges)
    if (g.labels[u] == g.labels[v]) ++same;
  return static_cast<double>(same) / static_cast<double>(g.edges.size());
}

Graph generate_sbm(const SbmConfig& cfg) {
  require(cfg.p_in >= 0.0 && cfg.p_in <= 1.0 && cfg.p_out >= 0.0 && cfg.p_out <= 1.0,
          "generate_sbm: probabilities must lie in [0,1]");
  const std::size_t n = cfg.nodes_per_block * cfg.blocks;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / cfg.nodes_per_block);

  Rng edge_rng(cfg.seed, Rng::mix(0x5b3u, 0));
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = labels[u] == labels[v] ? cfg.p_in : cfg.p_out;
      if (edge_rng.uniform() < p) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }

  Rng mean_rng(cfg.seed, Rng::mix(0x5b3u, 1));
  Matrix class_means(cfg.blocks, cfg.feature_dim);
  for (std::size_t i = 0; i < class_means.size(); ++i)
    class_means.data()[i] = cfg.class_signal * mean_rng.normal();

  Matrix features(n, cfg.feature_dim);
  for (std::size_t v = 0; v < n; ++v) {
    Rng node_rng(cfg.seed, Rng::mix(0x5b3u, 2 + v));
    auto out = features.row(v);
    auto mean = class_means.row(labels[v]);
    for (std::size_t j = 0; j < cfg.feature_dim; ++j) out[j] = mean[j] + node_rng.normal();
  }

  return Graph::build(n, std::move(edges), std::move(features), std::move(labels));
}

namespace {

std::vector<Edge> sample_non_edges(const Graph& g, std::size_t count, Rng& rng,
                                   std::unordered_set<std::uint64_t>& taken) {
  std::vector<Edge> out;
  const auto n = static_cast<NodeId>(g.n_nodes);
  require(g.n_nodes >= 2, "sample_non_edges: need at least two nodes");
  while (out.size() < count) {
    NodeId u = static_cast<NodeId>(rng.below(n));
    NodeId v = static_cast<NodeId>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = edge_key(u, v);
    if (g.has_edge(u, v) || taken.count(key)) continue;
    taken.insert(key);
    out.emplace_back(u, v);
  }
  return out;
}

}  // namespace

EdgeSplit split_edges(const Graph& g, double train_fraction, std::uint64_t seed) {
  if (g.edges.size() < 10)
    throw std::runtime_error("split_edges: need at least 10 edges, got " +
                             std::to_string(g.edges.size()));
  require(train_fraction > 0.0 && train_fraction < 1.0, "split_edges: train fraction in (0,1)");

  std::vector<Edge> shuffled = g.edges;
  Rng rng(seed, Rng::mix(0xed6e5u, 0));
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);

  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(shuffled.size())));
  const std::size_t rest = shuffled.size() - n_train;
  const std::size_t n_val = rest / 3;  // val : test = 1 : 2

  EdgeSplit split;
  split.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val_pos.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                       shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test_pos.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                        shuffled.end());

  std::unordered_set<std::uint64_t> taken;
  Rng neg_rng(seed, Rng::mix(0xed6e5u, 1));
  split.val_neg = sample_non_edges(g, split.val_pos.size(), neg_rng, taken);
  split.test_neg = sample_non_edges(g, split.test_pos.size(), neg_rng, taken);
  return split;
}

void save_edge_split(const std::string& path, const EdgeSplit& split) {
  std::ostringstream os;
  auto dump = [&](const char* tag, const std::vector<Edge>& edges) {
    for (auto [u, v] : edges) os << tag << " " << u << " " << v << "\n";
  };
  dump("train", split.train);
  dump("valpos", split.val_pos);
  dump("valneg", split.val_neg);
  dump("testpos", split.test_pos);
  dump("testneg", split.test_neg);
  write_text_file(path, os.str());
}

EdgeSplit load_edge_split(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open edge split " + path);
  EdgeSplit split;
  std::string tag, line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    NodeId u, v;
    if (!(ls >> tag >> u >> v)) parse_error(path, lineno, "expected '<tag> u v'");
    Edge e{std::min(u, v), std::max(u, v)};
    if (tag == "train")
      split.train.push_back(e);
    else if (tag == "valpos")
      split.val_pos.push_back(e);
    else if (tag == "valneg")
      split.val_neg.push_back(e);
    else if (tag == "testpos")
      split.test_pos.push_back(e);
    else if (tag == "testneg")
      split.test_neg.push_back(e);
    else
      parse_error(path, lineno, "unknown tag '" + tag + "'");
  }
  return split;
}

LabelSplit stratified_label_split(const Graph& g, std::uint64_t seed, double train_fraction,
                                  double val_fraction) {
  if (!g.has_labels()) throw std::runtime_error("stratified_label_split: graph has no labels");
  require(train_fraction > 0 && val_fraction >= 0 && train_fraction + val_fraction < 1.0,
          "stratified_label_split: bad fractions");

  std::vector<std::vector<NodeId>> by_class(g.num_classes());
  for (NodeId v = 0; v < g.n_nodes; ++v) by_class[g.labels[v]].push_back(v);

  LabelSplit split;
  Rng rng(seed, Rng::mix(0x57a7u, 0));
  for (auto& nodes : by_class) {
    for (std::size_t i = nodes.size(); i > 1; --i) std::swap(nodes[i - 1], nodes[rng.below(i)]);
    const auto n = nodes.size();
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * n));
    const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * n));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < n_train)
        split.train.push_back(nodes[i]);
      else if (i < n_train + n_val)
        split.val.push_back(nodes[i]);
      else
        split.test.push_back(nodes[i]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

LabelSplit load_label_split(const std::string& path, std::size_t n_nodes) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open split file " + path);
  LabelSplit split;
  std::string line, role;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long node;
    if (!(ls >> node >> role)) parse_error(path, lineno, "expected '<node> <train|val|test>'");
    if (node < 0 || static_cast<std::size_t>(node) >= n_nodes)
      parse_error(path, lineno, "node id out of range");
    const auto id = static_cast<NodeId>(node);
    if (role == "train")
      split.train.push_back(id);
    else if (role == "val")
      split.val.push_back(id);
    else if (role == "test")
      split.test.push_back(id);
    else
      parse_error(path, lineno, "unknown role '" + role + "'");
  }
  return split;
}

void save_label_split(const std::string& path, const LabelSplit& split) {
  std::ostringstream os;
  for (auto v : split.train) os << v << " train\n";
  for (auto v : split.val) os << v << " val\n";
  for (auto v : split.test) os << v << " test\n";
  write_text_file(path, os.str());
}

std::pair<NodeSplit, Graph> split_nodes_inductive(const Graph& g, double unobserved_fraction,
                                                  std::uint64_t seed) {
  if (!g.has_labels()) throw std::runtime_error("split_nodes_inductive: graph has no labels");
  require(unobserved_fraction >= 0.0 && unobserved_fraction <= 1.0,
          "split_nodes_inductive: fraction in [0,1]");

  NodeSplit split;
  split.labels = stratified_label_split(g, seed);

  std::vector<NodeId> test = split.labels.test;
  Rng rng(seed, Rng::mix(0x1d0cu, 0));
  for (std::size_t i = test.size(); i > 1; --i) std::swap(test[i - 1], test[rng.below(i)]);
  const auto n_unobs =
      static_cast<std::size_t>(std::llround(unobserved_fraction * static_cast<double>(test.size())));
  split.unobserved.assign(test.begin(), test.begin() + static_cast<std::ptrdiff_t>(n_unobs));
  std::sort(split.unobserved.begin(), split.unobserved.end());

  std::vector<bool> unobs(g.n_nodes, false);
  for (auto v : split.unobserved) unobs[v] = true;
  for (NodeId v = 0; v < g.n_nodes; ++v)
    if (!unobs[v]) split.observed.push_back(v);

  std::vector<Edge> kept;
  for (auto [u, v] : g.edges)
    if (!unobs[u] && !unobs[v]) kept.emplace_back(u, v);

  Graph pruned = Graph::build(g.n_nodes, std::move(kept), g.features, g.labels);
  return {std::move(split), std::move(pruned)};
}

}  // namespace gdkd
