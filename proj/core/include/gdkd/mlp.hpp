#pragma once

#include "gdkd/matrix.hpp"
#include "gdkd/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gdkd {

/// Parameter gradients shaped like an Mlp's parameters.
struct MlpGrads {
  std::vector<Matrix> weight;
  std::vector<Vec> bias;

  void zero();
  void scale(double s);
  void add_scaled(double s, const MlpGrads& other);
  double max_abs() const;
};

/// Fully connected network: ReLU on hidden layers, identity output.
/// Forward records an activation tape; backward consumes it and produces
/// parameter gradients plus the gradient with respect to the input.
class Mlp {
 public:
  /// Activation record for one (batched) forward pass. Invalidated by any
  /// parameter mutation.
  struct Tape {
    const Mlp* owner = nullptr;
    std::uint64_t revision = 0;
    std::vector<Matrix> layer_inputs;  // input to each layer, n x in_l
  };

  Mlp() = default;
  /// dims = {input, hidden..., output}. Glorot-uniform weights, zero biases.
  Mlp(const std::vector<std::size_t>& dims, Rng& rng);

  std::size_t input_dim() const { return dims_.front(); }
  std::size_t output_dim() const { return dims_.back(); }
  std::size_t layer_count() const { return weights_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t parameter_count() const;

  Vec forward(const Vec& x) const;
  Vec forward(const Vec& x, Tape& tape) const;
  Matrix forward_batch(const Matrix& x) const;
  Matrix forward_batch(const Matrix& x, Tape& tape) const;

  /// upstream is n x output_dim. Returns parameter grads; if input_grad is
  /// non-null it receives the n x input_dim gradient. Stale tapes throw.
  MlpGrads backward(const Tape& tape, const Matrix& upstream, Matrix* input_grad = nullptr) const;
  std::pair<MlpGrads, Vec> backward(const Tape& tape, const Vec& upstream) const;

  MlpGrads zero_grads() const;

  const Matrix& weight(std::size_t layer) const { return weights_[layer]; }
  const Vec& bias(std::size_t layer) const { return biases_[layer]; }
  Matrix& mutable_weight(std::size_t layer);
  Vec& mutable_bias(std::size_t layer);

  /// Flat views over every parameter block, ordered layer0.weight,
  /// layer0.bias, layer1.weight, ... Mutable access bumps the revision and
  /// invalidates outstanding tapes.
  std::vector<std::span<double>> param_blocks();
  std::vector<std::span<const double>> param_blocks() const;
  std::vector<std::string> param_names() const;

  std::uint64_t revision() const { return revision_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<Matrix> weights_;  // in x out
  std::vector<Vec> biases_;
  std::uint64_t revision_ = 0;
};

}  // namespace gdkd
