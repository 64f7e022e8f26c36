#include "gdkd/teacher.hpp"

#include "gdkd/checkpoint.hpp"
#include "gdkd/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace gdkd {

NormalizedAdjacency NormalizedAdjacency::build(const Graph& g) {
  const std::size_t n = g.n_nodes;
  std::vector<double> degree(n, 1.0);  // self-loop contributes 1
  for (auto [u, v] : g.edges) {
    degree[u] += 1.0;
    degree[v] += 1.0;
  }
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);

  NormalizedAdjacency adj;
  adj.row_ptr.assign(n + 1, 0);
  for (NodeId u = 0; u < n; ++u) adj.row_ptr[u + 1] = adj.row_ptr[u] + g.adjacency[u].size() + 1;
  adj.col.resize(adj.row_ptr.back());
  adj.value.resize(adj.row_ptr.back());
  for (NodeId u = 0; u < n; ++u) {
    std::size_t pos = adj.row_ptr[u];
    bool self_written = false;
    for (NodeId v : g.adjacency[u]) {  // adjacency is sorted
      if (!self_written && v > u) {
        adj.col[pos] = u;
        adj.value[pos] = inv_sqrt[u] * inv_sqrt[u];
        ++pos;
        self_written = true;
      }
      adj.col[pos] = v;
      adj.value[pos] = inv_sqrt[u] * inv_sqrt[v];
      ++pos;
    }
    if (!self_written) {
      adj.col[pos] = u;
      adj.value[pos] = inv_sqrt[u] * inv_sqrt[u];
      ++pos;
    }
  }
  return adj;
}

Matrix NormalizedAdjacency::multiply(const Matrix& x) const {
  require(x.rows() == n_rows(), "NormalizedAdjacency::multiply: row mismatch");
  const std::size_t d = x.cols();
  Matrix y(x.rows(), d);
  for (std::size_t r = 0; r < n_rows(); ++r) {
    auto out = y.row(r);
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      axpy(value[k], x.row(col[k]), out);
  }
  return y;
}

GcnEncoder::GcnEncoder(const Graph& g, std::size_t input_dim, const GcnConfig& cfg) {
  require(cfg.layers >= 1, "GcnEncoder: need at least one layer");
  adj_ = NormalizedAdjacency::build(g);
  Rng rng(cfg.seed, Rng::mix(0x9c4u, 0));
  std::vector<std::size_t> dims{input_dim};
  for (int l = 0; l + 1 < cfg.layers; ++l) dims.push_back(cfg.hidden_dim);
  dims.push_back(cfg.output_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l], dims[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = (2.0 * rng.uniform() - 1.0) * limit;
    weights_.push_back(std::move(w));
  }
}

Matrix GcnEncoder::forward(const Matrix& x, Tape& tape) const {
  require(x.cols() == input_dim(), "GcnEncoder::forward: feature dim mismatch");
  require(x.rows() == adj_.n_rows(), "GcnEncoder::forward: node count mismatch");
  tape.layer_inputs.clear();
  tape.activations.clear();
  Matrix cur = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Matrix propagated = adj_.multiply(cur);
    Matrix z = matmul(propagated, weights_[l]);
    tape.layer_inputs.push_back(std::move(propagated));
    if (l + 1 < weights_.size()) {
      for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] = z.data()[i] > 0.0 ? z.data()[i] : 0.0;
      tape.activations.push_back(z);
    }
    cur = std::move(z);
  }
  return cur;
}

Matrix GcnEncoder::forward(const Matrix& x) const {
  Tape tape;
  return forward(x, tape);
}

GcnEncoder::Grads GcnEncoder::backward(const Tape& tape, const Matrix& upstream) const {
  require(tape.layer_inputs.size() == weights_.size(), "GcnEncoder::backward: malformed tape");
  require(upstream.cols() == output_dim(), "GcnEncoder::backward: upstream dim mismatch");

  Grads grads;
  grads.weight.resize(weights_.size());
  Matrix delta = upstream;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    grads.weight[l] = matmul(tape.layer_inputs[l], delta, /*transpose_a=*/true);
    if (l == 0) break;
    Matrix dprop = matmul(delta, weights_[l], false, /*transpose_b=*/true);
    // A_hat is symmetric, so the adjoint of propagate is propagate.
    Matrix dact = adj_.multiply(dprop);
    const Matrix& act = tape.activations[l - 1];
    for (std::size_t i = 0; i < dact.size(); ++i)
      if (act.data()[i] <= 0.0) dact.data()[i] = 0.0;
    delta = std::move(dact);
  }
  return grads;
}

std::vector<std::span<double>> GcnEncoder::param_blocks() {
  std::vector<std::span<double>> blocks;
  for (auto& w : weights_) blocks.emplace_back(w.data(), w.size());
  return blocks;
}

std::vector<std::span<const double>> GcnEncoder::param_blocks() const {
  std::vector<std::span<const double>> blocks;
  for (const auto& w : weights_) blocks.emplace_back(w.data(), w.size());
  return blocks;
}

std::vector<std::string> GcnEncoder::param_names() const {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < weights_.size(); ++l)
    names.push_back("gcn.layer" + std::to_string(l) + ".weight");
  return names;
}

void save_gcn_checkpoint(const std::string& path, const GcnEncoder& enc) {
  // Reuse the MLP checkpoint layout; GCN layers have no biases, stored as
  // zeros.
  std::vector<std::size_t> dims{enc.weight(0).rows()};
  for (std::size_t l = 0; l < enc.layer_count(); ++l) dims.push_back(enc.weight(l).cols());
  Rng rng(0);
  Mlp shell(dims, rng);
  for (std::size_t l = 0; l < enc.layer_count(); ++l) {
    shell.mutable_weight(l) = enc.weight(l);
    std::fill(shell.mutable_bias(l).begin(), shell.mutable_bias(l).end(), 0.0);
  }
  save_checkpoint(path, shell);
}

GcnEncoder load_gcn_checkpoint(const std::string& path, const Graph& g, const GcnConfig& cfg) {
  const Mlp shell = load_checkpoint(path);
  GcnEncoder enc(g, shell.input_dim(), cfg);
  require(shell.layer_count() == enc.layer_count(), "gcn checkpoint: layer count mismatch");
  for (std::size_t l = 0; l < enc.layer_count(); ++l) {
    require(shell.weight(l).rows() == enc.weight(l).rows() &&
                shell.weight(l).cols() == enc.weight(l).cols(),
            "gcn checkpoint: layer shape mismatch");
    enc.mutable_weight(l) = shell.weight(l);
  }
  return enc;
}

GaeResult train_gae(const Graph& g, const GaeConfig& cfg) {
  if (g.edges.empty()) throw std::runtime_error("train_gae: graph has no edges");
  const std::vector<Edge>& train = cfg.train_edges.empty() ? g.edges : cfg.train_edges;

  GaeResult result;
  result.encoder = GcnEncoder(g, g.feature_dim(), cfg.gcn);
  Optimizer opt = Optimizer::adam(cfg.lr, cfg.weight_decay);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    GcnEncoder::Tape tape;
    Matrix h = result.encoder.forward(g.features, tape);

    Rng neg_rng(cfg.seed, Rng::mix(0x6aeu, static_cast<std::uint64_t>(epoch)));
    std::vector<Edge> negatives;
    negatives.reserve(train.size());
    const auto n = static_cast<NodeId>(g.n_nodes);
    while (negatives.size() < train.size()) {
      NodeId u = static_cast<NodeId>(neg_rng.below(n));
      NodeId v = static_cast<NodeId>(neg_rng.below(n));
      if (u == v || g.has_edge(u, v)) continue;
      negatives.emplace_back(u, v);
    }

    Matrix dh(h.rows(), h.cols());
    double loss = 0.0;
    const double scale = 1.0 / static_cast<double>(train.size() + negatives.size());
    auto accumulate = [&](const Edge& e, double label) {
      auto hu = h.row(e.first);
      auto hv = h.row(e.second);
      const double score = dot(hu, hv);
      const double p = 1.0 / (1.0 + std::exp(-score));
      loss -= scale * (label > 0.5 ? std::log(std::max(p, 1e-15))
                                   : std::log(std::max(1.0 - p, 1e-15)));
      const double coeff = scale * (p - label);
      axpy(coeff, hv, dh.row(e.first));
      axpy(coeff, hu, dh.row(e.second));
    };
    for (const Edge& e : train) accumulate(e, 1.0);
    for (const Edge& e : negatives) accumulate(e, 0.0);

    if (!std::isfinite(loss))
      throw std::runtime_error("train_gae: loss diverged (NaN/inf) at epoch " +
                               std::to_string(epoch) + "; try a smaller learning rate");
    result.epoch_loss.push_back(loss);

    GcnEncoder::Grads grads = result.encoder.backward(tape, dh);
    std::vector<std::span<const double>> gblocks;
    for (const auto& w : grads.weight) gblocks.emplace_back(w.data(), w.size());
    opt.step(result.encoder.param_blocks(), std::move(gblocks), result.encoder.param_names());
  }

  result.embeddings.values = result.encoder.forward(g.features);
  result.embeddings.tag = Provenance::teacher;
  require(result.embeddings.values.all_finite(), "train_gae: non-finite embeddings");
  return result;
}

}  // namespace gdkd
