#pragma once

#include "gdkd/embedding.hpp"
#include "gdkd/graph.hpp"
#include "gdkd/mlp.hpp"
#include "gdkd/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gdkd {

/// How the cosine schedule turns the per-step factor f(t) = cos^2 of the
/// shifted linear ramp into alpha_t: `product` accumulates the running
/// product of f(k)/f(0) over k = 1..t; `ratio` uses f(t)/f(0) directly.
enum class ScheduleMode { product, ratio };

std::string to_string(ScheduleMode m);
ScheduleMode schedule_mode_from_string(const std::string& s);

/// Cosine noise schedule with offset. alpha[0] = 1, alpha strictly
/// decreases, alpha[T] vanishes.
struct DiffusionSchedule {
  int steps = 20;        // T
  double offset = 1e-3;  // s
  ScheduleMode mode = ScheduleMode::product;
  std::vector<double> alpha;  // T+1 entries

  static DiffusionSchedule build(int steps, double offset,
                                 ScheduleMode mode = ScheduleMode::product);

  /// Score-scale weight w(t) = -1 / sqrt(1 - alpha_t); defined for t >= 1.
  double weight(int t) const;
};

/// sqrt(alpha_t) * h + sqrt(1 - alpha_t) * eps.
Vec forward_noise(std::span<const double> h, int t, const DiffusionSchedule& sched,
                  std::span<const double> eps);

inline constexpr std::size_t kTimeEmbedDim = 16;

/// Sinusoidal embedding of t/T: eight sin entries then eight cos entries at
/// geometrically spaced frequencies. Distinct for every t in {0..T}.
Vec time_embed(int t, const DiffusionSchedule& sched);

/// Node attributes concatenated with positional features, one row per node.
Matrix augment_features(const Graph& g, const Matrix& positional);

/// Noise-prediction network: an MLP from (noisy representation, augmented
/// features, time embedding) back to the representation space.
class NoisePredictor {
 public:
  NoisePredictor() = default;
  NoisePredictor(std::size_t repr_dim, std::size_t aug_dim, std::vector<std::size_t> hidden,
                 Rng& rng);
  /// Wrap an existing network; dims must satisfy in = out + aug + 16.
  NoisePredictor(Mlp net, std::size_t aug_dim);

  std::size_t repr_dim() const { return net_.output_dim(); }
  std::size_t aug_dim() const { return aug_dim_; }

  Vec predict(std::span<const double> noisy, std::span<const double> aug, int t,
              const DiffusionSchedule& sched) const;
  /// Row-wise batch: rows of noisy/aug plus a per-row step index.
  Matrix predict_batch(const Matrix& noisy, const Matrix& aug, std::span<const int> t,
                       const DiffusionSchedule& sched) const;
  Matrix predict_batch(const Matrix& noisy, const Matrix& aug, std::span<const int> t,
                       const DiffusionSchedule& sched, Mlp::Tape& tape) const;

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
  std::size_t aug_dim_ = 0;
};

void save_noise_predictor(const std::string& path, const NoisePredictor& np);
NoisePredictor load_noise_predictor(const std::string& path);

/// One fixed (t, eps) draw per node, reused by the gradient oracle tests.
struct NoiseDraw {
  int t = 1;
  Vec eps;
};

std::vector<NoiseDraw> sample_noise_draws(std::size_t count, std::size_t dim,
                                          const DiffusionSchedule& sched, Rng rng);

/// Accumulated denoising gradient over nodes at fixed draws:
///   (1/n) sum_v w(t_v) (eps_hat - eps_v)^T d eps_hat / d phi.
/// Since w(t) < 0 this accumulation is the ascent direction of the weighted
/// denoising error; trainers feed its negation to the optimizer.
MlpGrads assistant_gradient(const NoisePredictor& np, const Matrix& teacher, const Matrix& aug,
                            const DiffusionSchedule& sched, std::span<const NoiseDraw> draws,
                            std::span<const NodeId> nodes = {}, double* mean_denoise_error = nullptr);

struct AssistantConfig {
  int epochs = 200;
  double lr = 5e-3;
  double weight_decay = 5e-4;
  std::vector<std::size_t> hidden{256, 256, 256};
  std::uint64_t seed = 1;
  std::vector<NodeId> node_subset;  // empty = every node
};

struct AssistantReport {
  std::vector<double> epoch_denoise_error;  // mean ||eps_hat - eps||^2
};

/// Stage one: fit the noise predictor on noisy teacher representations.
/// Teacher embeddings are expected to be standardized.
NoisePredictor train_assistant(const EmbeddingSet& teacher, const Matrix& aug,
                               const DiffusionSchedule& sched, const AssistantConfig& cfg,
                               AssistantReport* report = nullptr);

}  // namespace gdkd
