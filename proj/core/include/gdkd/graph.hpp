#pragma once

#include "gdkd/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gdkd {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // canonical: first < second

/// Undirected attributed graph. Edges are deduplicated, self-loop free and
/// stored once with u < v; adjacency lists are symmetric.
struct Graph {
  std::size_t n_nodes = 0;
  std::vector<Edge> edges;
  Matrix features;               // n_nodes x f
  std::vector<int> labels;       // empty when absent
  std::vector<std::vector<NodeId>> adjacency;

  bool has_labels() const { return !labels.empty(); }
  std::size_t feature_dim() const { return features.cols(); }
  int num_classes() const;
  bool has_edge(NodeId u, NodeId v) const;

  /// Canonicalizes, deduplicates, drops self-loops, rebuilds adjacency.
  static Graph build(std::size_t n_nodes, std::vector<Edge> raw_edges, Matrix features,
                     std::vector<int> labels = {});
};

/// Edge file: "u v" per line, 0-indexed. Feature file: one float row per
/// node. Label file: one integer per line. Parse errors name the line.
Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::optional<std::string>& label_path = std::nullopt);

/// Dataset manifest: key=value naming edge_file, feature_file and optional
/// label_file / split_file, resolved relative to the manifest's directory.
struct DatasetPaths {
  std::string edge_file, feature_file;
  std::optional<std::string> label_file, split_file;
};
DatasetPaths load_dataset_manifest(const std::string& path);
Graph load_graph(const DatasetPaths& paths);

/// Fraction of edges whose endpoints share a label. Requires labels and at
/// least one edge.
double homophily_rate(const Graph& g);

struct SbmConfig {
  std::size_t nodes_per_block = 250;
  std::size_t blocks = 2;
  double p_in = 0.05;
  double p_out = 0.005;
  std::size_t feature_dim = 16;
  double class_signal = 1.0;  // scale of the per-class feature mean
  std::uint64_t seed = 1;
};

/// Stochastic block model; features are the block's mean vector plus unit
/// Gaussian noise, labels are block ids.
Graph generate_sbm(const SbmConfig& cfg);

struct EdgeSplit {
  std::vector<Edge> train;
  std::vector<Edge> val_pos, val_neg;
  std::vector<Edge> test_pos, test_neg;
};

/// Shuffles edges into train / val / test positives (train_fraction, then
/// the remainder split val:test = 1:2) and samples an equal number of
/// non-edge negatives per evaluation split. Graphs under 10 edges throw.
EdgeSplit split_edges(const Graph& g, double train_fraction, std::uint64_t seed);

void save_edge_split(const std::string& path, const EdgeSplit& split);
EdgeSplit load_edge_split(const std::string& path);

struct LabelSplit {
  std::vector<NodeId> train, val, test;
};

/// Stratified by class: per class 60/20/20 train/val/test, seeded.
LabelSplit stratified_label_split(const Graph& g, std::uint64_t seed, double train_fraction = 0.6,
                                  double val_fraction = 0.2);

/// Split file: one "<node> <train|val|test>" line per labeled node.
LabelSplit load_label_split(const std::string& path, std::size_t n_nodes);
void save_label_split(const std::string& path, const LabelSplit& split);

struct NodeSplit {
  std::vector<NodeId> observed, unobserved;
  LabelSplit labels;
};

/// Inductive protocol: carve `unobserved_fraction` of the test split out as
/// unseen nodes and drop every edge touching them from the training graph.
std::pair<NodeSplit, Graph> split_nodes_inductive(const Graph& g, double unobserved_fraction,
                                                  std::uint64_t seed);

}  // namespace gdkd
