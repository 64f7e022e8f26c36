#include "gdkd/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace gdkd {

void MlpGrads::zero() {
  for (auto& w : weight) w.fill(0.0);
  for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
}

void MlpGrads::scale(double s) {
  for (auto& w : weight) w.scale(s);
  for (auto& b : bias)
    for (double& v : b) v *= s;
}

void MlpGrads::add_scaled(double s, const MlpGrads& other) {
  require(weight.size() == other.weight.size(), "MlpGrads::add_scaled: layer count mismatch");
  for (std::size_t l = 0; l < weight.size(); ++l) {
    weight[l].axpy(s, other.weight[l]);
    axpy(s, other.bias[l], bias[l]);
  }
}

double MlpGrads::max_abs() const {
  double m = 0.0;
  for (const auto& w : weight)
    for (std::size_t i = 0; i < w.size(); ++i) m = std::max(m, std::abs(w.data()[i]));
  for (const auto& b : bias)
    for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

Mlp::Mlp(const std::vector<std::size_t>& dims, Rng& rng) : dims_(dims) {
  require(dims.size() >= 2, "Mlp: need at least input and output dims");
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t fan_in = dims[l], fan_out = dims[l + 1];
    Matrix w(fan_in, fan_out);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = (2.0 * rng.uniform() - 1.0) * limit;
    weights_.push_back(std::move(w));
    biases_.emplace_back(fan_out, 0.0);
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

Matrix Mlp::forward_batch(const Matrix& x, Tape& tape) const {
  require(x.cols() == input_dim(), "Mlp::forward: input dim " + std::to_string(x.cols()) +
                                       " != expected " + std::to_string(input_dim()));
  tape.owner = this;
  tape.revision = revision_;
  tape.layer_inputs.clear();
  Matrix cur = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    tape.layer_inputs.push_back(cur);
    Matrix z = matmul(cur, weights_[l]);
    for (std::size_t r = 0; r < z.rows(); ++r) axpy(1.0, biases_[l], z.row(r));
    if (l + 1 < weights_.size())
      for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] = z.data()[i] > 0.0 ? z.data()[i] : 0.0;
    cur = std::move(z);
  }
  return cur;
}

Matrix Mlp::forward_batch(const Matrix& x) const {
  Tape tape;
  return forward_batch(x, tape);
}

Vec Mlp::forward(const Vec& x, Tape& tape) const {
  Matrix xm(1, x.size());
  std::copy(x.begin(), x.end(), xm.data());
  Matrix y = forward_batch(xm, tape);
  return Vec(y.data(), y.data() + y.cols());
}

Vec Mlp::forward(const Vec& x) const {
  Tape tape;
  return forward(x, tape);
}

MlpGrads Mlp::backward(const Tape& tape, const Matrix& upstream, Matrix* input_grad) const {
  require(tape.owner == this && tape.revision == revision_,
          "Mlp::backward: stale tape (parameters changed since forward)");
  require(tape.layer_inputs.size() == weights_.size(), "Mlp::backward: malformed tape");
  require(upstream.cols() == output_dim(), "Mlp::backward: upstream dim mismatch");
  require(upstream.rows() == tape.layer_inputs.front().rows(), "Mlp::backward: batch size mismatch");

  MlpGrads grads = zero_grads();
  Matrix delta = upstream;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    const Matrix& in = tape.layer_inputs[l];
    grads.weight[l] = matmul(in, delta, /*transpose_a=*/true);
    for (std::size_t r = 0; r < delta.rows(); ++r) axpy(1.0, delta.row(r), grads.bias[l]);
    Matrix dx = matmul(delta, weights_[l], false, /*transpose_b=*/true);
    if (l > 0) {
      // Hidden activations are ReLU: kill gradient where the input was clamped.
      for (std::size_t i = 0; i < dx.size(); ++i)
        if (in.data()[i] <= 0.0) dx.data()[i] = 0.0;
    }
    delta = std::move(dx);
  }
  if (input_grad) *input_grad = std::move(delta);
  return grads;
}

std::pair<MlpGrads, Vec> Mlp::backward(const Tape& tape, const Vec& upstream) const {
  Matrix up(1, upstream.size());
  std::copy(upstream.begin(), upstream.end(), up.data());
  Matrix ig;
  MlpGrads g = backward(tape, up, &ig);
  return {std::move(g), Vec(ig.data(), ig.data() + ig.cols())};
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads g;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    g.weight.emplace_back(weights_[l].rows(), weights_[l].cols());
    g.bias.emplace_back(biases_[l].size(), 0.0);
  }
  return g;
}

Matrix& Mlp::mutable_weight(std::size_t layer) {
  ++revision_;
  return weights_[layer];
}

Vec& Mlp::mutable_bias(std::size_t layer) {
  ++revision_;
  return biases_[layer];
}

std::vector<std::span<double>> Mlp::param_blocks() {
  ++revision_;
  std::vector<std::span<double>> blocks;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    blocks.emplace_back(weights_[l].data(), weights_[l].size());
    blocks.emplace_back(biases_[l].data(), biases_[l].size());
  }
  return blocks;
}

std::vector<std::span<const double>> Mlp::param_blocks() const {
  std::vector<std::span<const double>> blocks;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    blocks.emplace_back(weights_[l].data(), weights_[l].size());
    blocks.emplace_back(biases_[l].data(), biases_[l].size());
  }
  return blocks;
}

std::vector<std::string> Mlp::param_names() const {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    names.push_back("layer" + std::to_string(l) + ".weight");
    names.push_back("layer" + std::to_string(l) + ".bias");
  }
  return names;
}

}  // namespace gdkd
