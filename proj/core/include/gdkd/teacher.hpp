#pragma once

#include "gdkd/embedding.hpp"
#include "gdkd/graph.hpp"
#include "gdkd/matrix.hpp"
#include "gdkd/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gdkd {

/// Symmetric-normalized adjacency with self-loops, D^{-1/2} (A+I) D^{-1/2},
/// in CSR form.
struct NormalizedAdjacency {
  std::vector<std::size_t> row_ptr;
  std::vector<NodeId> col;
  std::vector<double> value;

  static NormalizedAdjacency build(const Graph& g);
  /// y = A_hat * x for a dense n x d matrix.
  Matrix multiply(const Matrix& x) const;
  std::size_t n_rows() const { return row_ptr.size() - 1; }
};

struct GcnConfig {
  std::size_t hidden_dim = 256;
  std::size_t output_dim = 64;
  int layers = 3;
  std::uint64_t seed = 1;
};

/// Graph-convolution encoder H = A_hat ReLU(A_hat ReLU(A_hat X W1) W2) W3
/// (one A_hat·W block per layer, ReLU between, identity output). No biases.
class GcnEncoder {
 public:
  struct Tape {
    std::vector<Matrix> layer_inputs;  // A_hat * (previous activation)
    std::vector<Matrix> activations;   // post-ReLU per hidden layer
  };
  struct Grads {
    std::vector<Matrix> weight;
  };

  GcnEncoder() = default;
  GcnEncoder(const Graph& g, std::size_t input_dim, const GcnConfig& cfg);

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, Tape& tape) const;
  Grads backward(const Tape& tape, const Matrix& upstream) const;

  std::size_t layer_count() const { return weights_.size(); }
  const Matrix& weight(std::size_t l) const { return weights_[l]; }
  Matrix& mutable_weight(std::size_t l) { return weights_[l]; }
  std::size_t input_dim() const { return weights_.front().rows(); }
  std::size_t output_dim() const { return weights_.back().cols(); }

  std::vector<std::span<double>> param_blocks();
  std::vector<std::span<const double>> param_blocks() const;
  std::vector<std::string> param_names() const;

 private:
  NormalizedAdjacency adj_;
  std::vector<Matrix> weights_;
};

void save_gcn_checkpoint(const std::string& path, const GcnEncoder& enc);
GcnEncoder load_gcn_checkpoint(const std::string& path, const Graph& g, const GcnConfig& cfg);

struct GaeConfig {
  int epochs = 200;
  double lr = 0.01;
  double weight_decay = 0.0;
  std::uint64_t seed = 1;
  GcnConfig gcn;
  /// Train on these edges when non-empty, else on every edge of the graph.
  std::vector<Edge> train_edges;
};

struct GaeResult {
  GcnEncoder encoder;
  EmbeddingSet embeddings;  // raw (not standardized), tagged teacher
  std::vector<double> epoch_loss;
};

/// Graph autoencoder: inner-product decoder, binary cross-entropy over the
/// train edges against an equal number of uniformly resampled non-edges per
/// epoch. NaN loss aborts with a smaller-learning-rate hint.
GaeResult train_gae(const Graph& g, const GaeConfig& cfg);

}  // namespace gdkd
