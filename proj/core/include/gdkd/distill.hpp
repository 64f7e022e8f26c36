#pragma once

#include "gdkd/diffusion.hpp"
#include "gdkd/embedding.hpp"
#include "gdkd/mlp.hpp"
#include "gdkd/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gdkd {

/// Student network over augmented features; `layers` weight layers with
/// ReLU between them (hidden width fixed), identity output.
Mlp make_student(std::size_t input_dim, Rng& rng, std::size_t hidden_dim = 128,
                 std::size_t output_dim = 64, int layers = 3);

struct DistillConfig {
  int epochs = 300;
  double lr = 5e-3;
  double weight_decay = 5e-4;
  int draws_per_node = 1;
  bool early_stop = true;
  double plateau_rel_improvement = 1e-5;
  int plateau_window = 20;
  std::uint64_t seed = 1;
  std::vector<NodeId> node_subset;  // empty = every node
};

struct DistillReport {
  std::vector<double> score_mismatch;      // mean ||eps_hat(stu) - eps_hat(tea)||^2
  std::vector<double> student_teacher_mse; // mean ||h_stu - h_tea||^2
  double wall_seconds = 0.0;

  /// CSV rows "epoch,score_mismatch,mse" with a header line.
  void write_csv(const std::string& path) const;
};

/// One node's distillation gradient: with a single (t, eps) draw shared by
/// the teacher and student noising, form
///   g = w(t) (eps_phi(h_stu_t, x, t) - eps_phi(h_tea_t, x, t))
/// and return its backpropagation through the student only; no gradient
/// flows through the predictor or the noising scale.
MlpGrads distill_step(const Mlp& student, const NoisePredictor& np,
                      std::span<const double> h_teacher, std::span<const double> x_aug,
                      const DiffusionSchedule& sched, Rng& rng, Vec* g_out = nullptr);

/// Stage two: full passes over the nodes accumulating the distillation
/// gradient (negated for the optimizer, matching stage one's convention),
/// one optimizer step per epoch. The predictor stays frozen throughout.
DistillReport train_student(Mlp& student, const NoisePredictor& np, const EmbeddingSet& teacher,
                            const Matrix& aug, const DiffusionSchedule& sched,
                            const DistillConfig& cfg);

struct MseBaselineConfig {
  int epochs = 300;
  double lr = 5e-3;
  double weight_decay = 5e-4;
  std::uint64_t seed = 1;
  std::vector<NodeId> node_subset;
  bool use_adam = true;  // plain SGD for convex fixtures in tests
};

/// Representation-regression baseline: minimize mean ||h_stu - h_tea||^2.
/// Returns the per-epoch mean squared error.
std::vector<double> train_student_mse_baseline(Mlp& student, const EmbeddingSet& teacher,
                                               const Matrix& aug, const MseBaselineConfig& cfg);

}  // namespace gdkd
