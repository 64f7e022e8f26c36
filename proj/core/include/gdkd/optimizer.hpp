#pragma once

#include "gdkd/mlp.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gdkd {

/// SGD-with-weight-decay or bias-corrected Adam over named parameter blocks.
/// Moment buffers are allocated on first step and shape-checked afterwards.
class Optimizer {
 public:
  enum class Kind { Sgd, Adam };

  static Optimizer sgd(double lr, double weight_decay = 0.0);
  static Optimizer adam(double lr, double weight_decay = 0.0, double beta1 = 0.9,
                        double beta2 = 0.999, double epsilon = 1e-8);

  /// p <- p - lr * (g + wd * p) for SGD; standard bias-corrected update for
  /// Adam (weight decay added to the gradient). NaN gradients throw, naming
  /// the offending block.
  void step(std::vector<std::span<double>> params, std::vector<std::span<const double>> grads,
            const std::vector<std::string>& names = {});

  void step(Mlp& model, const MlpGrads& grads);

  Kind kind() const { return kind_; }
  std::int64_t step_count() const { return step_count_; }
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  Kind kind_ = Kind::Sgd;
  double lr_ = 0.0, weight_decay_ = 0.0;
  double beta1_ = 0.9, beta2_ = 0.999, epsilon_ = 1e-8;
  std::int64_t step_count_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace gdkd
