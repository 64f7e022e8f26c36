#include "gdkd/diffusion.hpp"

#include "gdkd/checkpoint.hpp"
#include "gdkd/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gdkd {

namespace {

double cosine_factor(double t, double steps, double offset) {
  const double arg = ((t / steps + offset) / (1.0 + offset)) * std::numbers::pi / 2.0;
  const double c = std::cos(arg);
  return c * c;
}

}  // namespace

std::string to_string(ScheduleMode m) {
  return m == ScheduleMode::product ? "product" : "ratio";
}

ScheduleMode schedule_mode_from_string(const std::string& s) {
  if (s == "product") return ScheduleMode::product;
  if (s == "ratio") return ScheduleMode::ratio;
  throw std::runtime_error("unknown schedule mode '" + s + "'");
}

DiffusionSchedule DiffusionSchedule::build(int steps, double offset, ScheduleMode mode) {
  require(steps >= 1, "DiffusionSchedule: steps must be >= 1");
  require(offset > 0.0, "DiffusionSchedule: offset must be > 0");
  DiffusionSchedule sched;
  sched.steps = steps;
  sched.offset = offset;
  sched.mode = mode;
  sched.alpha.resize(steps + 1);
  sched.alpha[0] = 1.0;
  const double f0 = cosine_factor(0.0, steps, offset);
  for (int t = 1; t <= steps; ++t) {
    const double factor = cosine_factor(t, steps, offset) / f0;
    sched.alpha[t] = mode == ScheduleMode::product ? sched.alpha[t - 1] * factor : factor;
  }
  return sched;
}

double DiffusionSchedule::weight(int t) const {
  require(t >= 1 && t <= steps, "DiffusionSchedule::weight: t must be in [1, T]");
  return -1.0 / std::sqrt(1.0 - alpha[t]);
}

Vec forward_noise(std::span<const double> h, int t, const DiffusionSchedule& sched,
                  std::span<const double> eps) {
  require(t >= 0 && t <= sched.steps, "forward_noise: t out of range");
  require(h.size() == eps.size(), "forward_noise: dim mismatch");
  const double sa = std::sqrt(sched.alpha[t]);
  const double sb = std::sqrt(1.0 - sched.alpha[t]);
  Vec out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = sa * h[i] + sb * eps[i];
  return out;
}

Vec time_embed(int t, const DiffusionSchedule& sched) {
  require(t >= 0 && t <= sched.steps, "time_embed: t out of range");
  const double tau = static_cast<double>(t) / static_cast<double>(sched.steps);
  Vec e(kTimeEmbedDim);
  double freq = std::numbers::pi / 2.0;
  for (std::size_t k = 0; k < kTimeEmbedDim / 2; ++k) {
    e[k] = std::sin(freq * tau);
    e[k + kTimeEmbedDim / 2] = std::cos(freq * tau);
    freq *= 2.0;
  }
  return e;
}

Matrix augment_features(const Graph& g, const Matrix& positional) {
  require(positional.rows() == g.n_nodes, "augment_features: positional row count mismatch");
  return hcat(g.features, positional);
}

NoisePredictor::NoisePredictor(std::size_t repr_dim, std::size_t aug_dim,
                               std::vector<std::size_t> hidden, Rng& rng)
    : aug_dim_(aug_dim) {
  std::vector<std::size_t> dims{repr_dim + aug_dim + kTimeEmbedDim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(repr_dim);
  net_ = Mlp(dims, rng);
}

NoisePredictor::NoisePredictor(Mlp net, std::size_t aug_dim) : net_(std::move(net)), aug_dim_(aug_dim) {
  require(net_.input_dim() == net_.output_dim() + aug_dim_ + kTimeEmbedDim,
          "NoisePredictor: dims do not chain (in != out + aug + time)");
}

Vec NoisePredictor::predict(std::span<const double> noisy, std::span<const double> aug, int t,
                            const DiffusionSchedule& sched) const {
  require(noisy.size() == repr_dim(), "NoisePredictor::predict: representation dim mismatch");
  require(aug.size() == aug_dim_, "NoisePredictor::predict: augmented feature dim mismatch");
  Vec input;
  input.reserve(net_.input_dim());
  input.insert(input.end(), noisy.begin(), noisy.end());
  input.insert(input.end(), aug.begin(), aug.end());
  const Vec te = time_embed(t, sched);
  input.insert(input.end(), te.begin(), te.end());
  return net_.forward(input);
}

Matrix NoisePredictor::predict_batch(const Matrix& noisy, const Matrix& aug,
                                     std::span<const int> t, const DiffusionSchedule& sched,
                                     Mlp::Tape& tape) const {
  require(noisy.rows() == aug.rows() && noisy.rows() == t.size(),
          "NoisePredictor::predict_batch: row count mismatch");
  require(noisy.cols() == repr_dim() && aug.cols() == aug_dim_,
          "NoisePredictor::predict_batch: dim mismatch");
  Matrix input(noisy.rows(), net_.input_dim());
  for (std::size_t r = 0; r < noisy.rows(); ++r) {
    auto out = input.row(r);
    auto nr = noisy.row(r);
    auto ar = aug.row(r);
    std::copy(nr.begin(), nr.end(), out.begin());
    std::copy(ar.begin(), ar.end(), out.begin() + static_cast<std::ptrdiff_t>(repr_dim()));
    const Vec te = time_embed(t[r], sched);
    std::copy(te.begin(), te.end(),
              out.begin() + static_cast<std::ptrdiff_t>(repr_dim() + aug_dim_));
  }
  return net_.forward_batch(input, tape);
}

Matrix NoisePredictor::predict_batch(const Matrix& noisy, const Matrix& aug,
                                     std::span<const int> t, const DiffusionSchedule& sched) const {
  Mlp::Tape tape;
  return predict_batch(noisy, aug, t, sched, tape);
}

void save_noise_predictor(const std::string& path, const NoisePredictor& np) {
  save_checkpoint(path, np.net());
}

NoisePredictor load_noise_predictor(const std::string& path) {
  Mlp net = load_checkpoint(path);
  if (net.input_dim() < net.output_dim() + kTimeEmbedDim)
    throw std::runtime_error(path + ": checkpoint is not a noise predictor");
  const std::size_t aug_dim = net.input_dim() - net.output_dim() - kTimeEmbedDim;
  return NoisePredictor(std::move(net), aug_dim);
}

std::vector<NoiseDraw> sample_noise_draws(std::size_t count, std::size_t dim,
                                          const DiffusionSchedule& sched, Rng rng) {
  std::vector<NoiseDraw> draws(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng node_rng = rng.stream(i);
    draws[i].eps = gaussian_vector(node_rng, dim);
    draws[i].t = node_rng.uniform_int(1, sched.steps);
  }
  return draws;
}

MlpGrads assistant_gradient(const NoisePredictor& np, const Matrix& teacher, const Matrix& aug,
                            const DiffusionSchedule& sched, std::span<const NoiseDraw> draws,
                            std::span<const NodeId> nodes, double* mean_denoise_error) {
  require(teacher.rows() == aug.rows(), "assistant_gradient: teacher/aug row mismatch");
  std::vector<NodeId> all;
  if (nodes.empty()) {
    all.resize(teacher.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
    nodes = all;
  }
  require(draws.size() == nodes.size(), "assistant_gradient: one draw per visited node");

  const std::size_t k = nodes.size();
  const std::size_t d = np.repr_dim();
  Matrix noisy(k, d);
  Matrix aug_rows(k, np.aug_dim());
  std::vector<int> t(k);
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId v = nodes[i];
    require(draws[i].eps.size() == d, "assistant_gradient: draw dim mismatch");
    const Vec h_t = forward_noise(teacher.row(v), draws[i].t, sched, draws[i].eps);
    std::copy(h_t.begin(), h_t.end(), noisy.row(i).begin());
    auto ar = aug.row(v);
    std::copy(ar.begin(), ar.end(), aug_rows.row(i).begin());
    t[i] = draws[i].t;
  }

  Mlp::Tape tape;
  const Matrix eps_hat = np.predict_batch(noisy, aug_rows, t, sched, tape);

  Matrix upstream(k, d);
  double err = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = sched.weight(t[i]) / static_cast<double>(k);
    auto up = upstream.row(i);
    auto pred = eps_hat.row(i);
    const Vec& eps = draws[i].eps;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = pred[j] - eps[j];
      up[j] = w * diff;
      err += diff * diff;
    }
  }
  if (mean_denoise_error) *mean_denoise_error = err / static_cast<double>(k);
  return np.net().backward(tape, upstream);
}

NoisePredictor train_assistant(const EmbeddingSet& teacher, const Matrix& aug,
                               const DiffusionSchedule& sched, const AssistantConfig& cfg,
                               AssistantReport* report) {
  require(teacher.values.rows() == aug.rows(), "train_assistant: teacher/aug row mismatch");
  const std::size_t d = teacher.dim();

  Rng init_rng(cfg.seed, Rng::mix(0xa551u, 0));
  NoisePredictor np(d, aug.cols(), cfg.hidden, init_rng);
  Optimizer opt = Optimizer::adam(cfg.lr, cfg.weight_decay);

  std::vector<NodeId> nodes = cfg.node_subset;
  if (nodes.empty()) {
    nodes.resize(teacher.values.rows());
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<NodeId>(i);
  }

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<NoiseDraw> draws(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Rng rng(cfg.seed, Rng::mix(0xa551u, Rng::mix(epoch + 1, nodes[i])));
      draws[i].eps = gaussian_vector(rng, d);
      draws[i].t = rng.uniform_int(1, sched.steps);
    }

    double err = 0.0;
    MlpGrads grads = assistant_gradient(np, teacher.values, aug, sched, draws, nodes, &err);
    if (!std::isfinite(err))
      throw std::runtime_error("train_assistant: loss diverged at epoch " + std::to_string(epoch));
    if (report) report->epoch_denoise_error.push_back(err);

    // w(t) < 0 makes the accumulation point uphill on the weighted
    // denoising error; descend its negation.
    grads.scale(-1.0);
    opt.step(np.net(), grads);
  }
  return np;
}

}  // namespace gdkd
