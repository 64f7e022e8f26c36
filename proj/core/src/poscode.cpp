#include "gdkd/poscode.hpp"

#include "gdkd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gdkd {

std::vector<std::vector<NodeId>> random_walks(const Graph& g, const WalkConfig& cfg) {
  require(cfg.walk_length >= 1, "random_walks: walk_length must be >= 1");
  require(cfg.walks_per_node >= 0, "random_walks: walks_per_node must be >= 0");

  std::vector<std::vector<NodeId>> walks;
  walks.reserve(g.n_nodes * static_cast<std::size_t>(cfg.walks_per_node));
  for (NodeId v = 0; v < g.n_nodes; ++v) {
    for (int k = 0; k < cfg.walks_per_node; ++k) {
      // One stream per (node, repeat) pair keeps walks independent of
      // iteration order.
      Rng rng(cfg.seed, Rng::mix(0xdee9u, v * static_cast<std::uint64_t>(cfg.walks_per_node) + k));
      std::vector<NodeId> walk{v};
      NodeId cur = v;
      for (int step = 1; step < cfg.walk_length; ++step) {
        const auto& nbrs = g.adjacency[cur];
        if (nbrs.empty()) break;
        cur = nbrs[rng.below(nbrs.size())];
        walk.push_back(cur);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Cumulative unigram^0.75 table for negative sampling.
struct NegativeTable {
  std::vector<double> cumulative;

  explicit NegativeTable(const std::vector<std::vector<NodeId>>& walks, std::size_t n_nodes) {
    std::vector<double> weight(n_nodes, 0.0);
    for (const auto& w : walks)
      for (NodeId v : w) weight[v] += 1.0;
    cumulative.resize(n_nodes);
    double acc = 0.0;
    for (std::size_t v = 0; v < n_nodes; ++v) {
      acc += std::pow(weight[v], 0.75);
      cumulative[v] = acc;
    }
    require(acc > 0.0, "train_skipgram: empty walk corpus");
  }

  NodeId sample(Rng& rng) const {
    const double x = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return static_cast<NodeId>(std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1));
  }
};

}  // namespace

PositionalFeatures train_skipgram(const std::vector<std::vector<NodeId>>& walks,
                                  std::size_t n_nodes, const SkipgramConfig& cfg,
                                  std::vector<double>* epoch_loss) {
  bool has_pair = false;
  std::size_t pairs_per_epoch = 0;
  for (const auto& w : walks) {
    if (w.size() >= 2) has_pair = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t lo = i >= static_cast<std::size_t>(cfg.window) ? i - cfg.window : 0;
      const std::size_t hi = std::min(w.size() - 1, i + static_cast<std::size_t>(cfg.window));
      pairs_per_epoch += hi - lo;  // window positions minus the center itself
    }
  }
  require(has_pair, "train_skipgram: need at least one walk of length >= 2");

  Rng rng(cfg.seed, Rng::mix(0x5697u, 0));
  PositionalFeatures pf;
  pf.skipgram = cfg;
  pf.values = Matrix(n_nodes, cfg.dim);
  for (std::size_t i = 0; i < pf.values.size(); ++i)
    pf.values.data()[i] = (rng.uniform() - 0.5) / static_cast<double>(cfg.dim);
  Matrix context(n_nodes, cfg.dim);  // zero-initialized output vectors

  if (cfg.epochs <= 0) return pf;

  const NegativeTable neg_table(walks, n_nodes);
  const double total_pairs = static_cast<double>(pairs_per_epoch) * cfg.epochs;
  std::size_t processed = 0;
  Vec grad_center(cfg.dim);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (const auto& w : walks) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        const std::size_t lo = i >= static_cast<std::size_t>(cfg.window) ? i - cfg.window : 0;
        const std::size_t hi = std::min(w.size() - 1, i + static_cast<std::size_t>(cfg.window));
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const double lr =
              cfg.lr * std::max(1e-4, 1.0 - static_cast<double>(processed) / total_pairs);
          ++processed;

          const NodeId center = w[i];
          auto wc = pf.values.row(center);
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          double pair_loss = 0.0;
          for (int s = 0; s < cfg.negatives + 1; ++s) {
            NodeId target;
            double label;
            if (s == 0) {
              target = w[j];
              label = 1.0;
            } else {
              target = neg_table.sample(rng);
              if (target == w[j]) continue;
              label = 0.0;
            }
            auto ct = context.row(target);
            const double f = sigmoid(dot(wc, ct));
            pair_loss += label > 0.5 ? -std::log(std::max(f, 1e-12))
                                     : -std::log(std::max(1.0 - f, 1e-12));
            const double g = (label - f) * lr;
            axpy(g, ct, grad_center);
            axpy(g, wc, ct);
          }
          axpy(1.0, grad_center, wc);
          loss_sum += pair_loss;
          ++loss_count;
        }
      }
    }
    if (epoch_loss) epoch_loss->push_back(loss_sum / static_cast<double>(loss_count));
  }
  require(pf.values.all_finite(), "train_skipgram: non-finite embedding");
  return pf;
}

PositionalFeatures deepwalk(const Graph& g, const WalkConfig& wcfg, const SkipgramConfig& scfg) {
  const auto walks = random_walks(g, wcfg);
  PositionalFeatures pf = train_skipgram(walks, g.n_nodes, scfg);
  pf.walk = wcfg;
  return pf;
}

PositionalFeatures inductive_positional(const PositionalFeatures& pf, const Graph& g,
                                        std::span<const NodeId> unobserved) {
  require(pf.values.rows() == g.n_nodes, "inductive_positional: row count mismatch");
  std::vector<bool> unobs(g.n_nodes, false);
  for (auto v : unobserved) {
    require(v < g.n_nodes, "inductive_positional: node out of range");
    unobs[v] = true;
  }

  PositionalFeatures out = pf;
  for (auto v : unobserved) {
    auto row = out.values.row(v);
    std::fill(row.begin(), row.end(), 0.0);
    std::size_t count = 0;
    for (NodeId nbr : g.adjacency[v]) {
      if (unobs[nbr]) continue;
      axpy(1.0, pf.values.row(nbr), row);
      ++count;
    }
    if (count > 0)
      for (double& x : row) x /= static_cast<double>(count);
  }
  return out;
}

}  // namespace gdkd
