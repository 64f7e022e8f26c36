#pragma once

#include "gdkd/graph.hpp"
#include "gdkd/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gdkd {

struct WalkConfig {
  int walks_per_node = 3;
  int walk_length = 20;  // nodes per walk, including the start
  std::uint64_t seed = 1;
};

/// Uniform random walks, walks_per_node per source. Every transition is an
/// edge of g; isolated nodes yield single-node walks.
std::vector<std::vector<NodeId>> random_walks(const Graph& g, const WalkConfig& cfg);

struct SkipgramConfig {
  std::size_t dim = 64;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;  // linearly decayed over all pairs
  std::uint64_t seed = 1;
};

struct PositionalFeatures {
  Matrix values;  // n_nodes x dim
  WalkConfig walk;
  SkipgramConfig skipgram;
};

/// Skip-gram with negative sampling over the walk corpus (negatives from the
/// unigram^0.75 distribution). epoch_loss, when given, receives the mean
/// per-pair loss of each epoch.
PositionalFeatures train_skipgram(const std::vector<std::vector<NodeId>>& walks,
                                  std::size_t n_nodes, const SkipgramConfig& cfg,
                                  std::vector<double>* epoch_loss = nullptr);

/// random_walks + train_skipgram with matching seeds.
PositionalFeatures deepwalk(const Graph& g, const WalkConfig& wcfg, const SkipgramConfig& scfg);

/// Replace each unobserved node's row by the mean of its observed
/// neighbors' rows (zero row when it has none). Observed rows pass through.
PositionalFeatures inductive_positional(const PositionalFeatures& pf, const Graph& g,
                                        std::span<const NodeId> unobserved);

}  // namespace gdkd
