#include "gdkd/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace gdkd {

Optimizer Optimizer::sgd(double lr, double weight_decay) {
  Optimizer o;
  o.kind_ = Kind::Sgd;
  o.lr_ = lr;
  o.weight_decay_ = weight_decay;
  return o;
}

Optimizer Optimizer::adam(double lr, double weight_decay, double beta1, double beta2,
                          double epsilon) {
  Optimizer o;
  o.kind_ = Kind::Adam;
  o.lr_ = lr;
  o.weight_decay_ = weight_decay;
  o.beta1_ = beta1;
  o.beta2_ = beta2;
  o.epsilon_ = epsilon;
  return o;
}

void Optimizer::step(std::vector<std::span<double>> params,
                     std::vector<std::span<const double>> grads,
                     const std::vector<std::string>& names) {
  require(params.size() == grads.size(), "Optimizer::step: block count mismatch");
  if (m_.empty() && kind_ == Kind::Adam) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (std::size_t b = 0; b < params.size(); ++b) {
      m_[b].assign(params[b].size(), 0.0);
      v_[b].assign(params[b].size(), 0.0);
    }
  }
  if (kind_ == Kind::Adam)
    require(m_.size() == params.size(), "Optimizer::step: block count changed between steps");

  for (std::size_t b = 0; b < params.size(); ++b) {
    require(params[b].size() == grads[b].size(), "Optimizer::step: block shape mismatch");
    if (kind_ == Kind::Adam)
      require(m_[b].size() == params[b].size(), "Optimizer::step: moment shape mismatch");
    for (double g : grads[b]) {
      if (std::isnan(g)) {
        const std::string name = b < names.size() ? names[b] : ("block " + std::to_string(b));
        throw std::runtime_error("Optimizer::step: NaN gradient in " + name);
      }
    }
  }

  ++step_count_;
  const double t = static_cast<double>(step_count_);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    if (kind_ == Kind::Sgd) {
      for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr_ * (g[i] + weight_decay_ * p[i]);
    } else {
      auto& m = m_[b];
      auto& v = v_[b];
      const double bc1 = 1.0 - std::pow(beta1_, t);
      const double bc2 = 1.0 - std::pow(beta2_, t);
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double gi = g[i] + weight_decay_ * p[i];
        m[i] = beta1_ * m[i] + (1.0 - beta1_) * gi;
        v[i] = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr_ * mhat / (std::sqrt(vhat) + epsilon_);
      }
    }
  }
}

void Optimizer::step(Mlp& model, const MlpGrads& grads) {
  std::vector<std::span<const double>> gblocks;
  for (std::size_t l = 0; l < grads.weight.size(); ++l) {
    gblocks.emplace_back(grads.weight[l].data(), grads.weight[l].size());
    gblocks.emplace_back(grads.bias[l].data(), grads.bias[l].size());
  }
  step(model.param_blocks(), std::move(gblocks), model.param_names());
}

}  // namespace gdkd
