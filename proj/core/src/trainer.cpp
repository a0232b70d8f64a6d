#include "neurohjr/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "neurohjr/manifest.hpp"
#include "neurohjr/rng.hpp"

namespace neurohjr {

void TrainConfig::validate() const {
  if (epochs <= 0) throw std::invalid_argument("train: epochs must be > 0");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning_rate must be > 0");
  }
  if (minibatch < 1) throw std::invalid_argument("train: minibatch must be >= 1");
  if (weights.pde < 0.0 || weights.value < 0.0 || weights.obstacle < 0.0 ||
      weights.goal < 0.0) {
    throw std::invalid_argument("train: loss weights must be >= 0");
  }
  if (interior_count < 0 || boundary_count < 0) {
    throw std::invalid_argument("train: negative collocation counts");
  }
  if (interior_count + boundary_count == 0) {
    throw std::invalid_argument("train: no collocation points configured");
  }
  if (!(boundary_band > 0.0)) {
    throw std::invalid_argument("train: boundary_band must be > 0");
  }
}

namespace {

// Deterministic Fisher-Yates with the shared Rng.
void shuffle_indices(std::vector<int>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

struct EpochData {
  std::vector<Position> points;
  std::vector<double> targets;
};

EpochData sample_epoch_data(const Environment& env, const ValueField& composite,
                            const TrainConfig& cfg, std::uint64_t seed) {
  EpochData d;
  d.points = sample_interior(env, cfg.interior_count, mix_seed(seed, 1));
  if (cfg.boundary_count > 0 && !env.obstacles().empty()) {
    auto boundary = sample_boundary(env, cfg.boundary_count, mix_seed(seed, 2),
                                    cfg.boundary_band);
    d.points.insert(d.points.end(), boundary.begin(), boundary.end());
  }
  d.targets = oracle_targets(d.points, composite);
  return d;
}

}  // namespace

TrainResult train(const Environment& env, const ValueField& composite,
                  const TrainConfig& cfg) {
  cfg.validate();
  const InputScaler scaler{env.bounds()};

  TrainResult result;
  result.params = init_params(mix_seed(cfg.seed, 3));
  result.history.reserve(cfg.epochs);

  EpochData data = sample_epoch_data(env, composite, cfg, cfg.seed);
  const int n = static_cast<int>(data.points.size());

  std::vector<int> order(n);
  std::vector<Position> batch_points(std::min(cfg.minibatch, n));
  std::vector<double> batch_targets(batch_points.size());
  Rng shuffle_rng(mix_seed(cfg.seed, 4));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.resample_each_epoch && epoch > 0) {
      data = sample_epoch_data(env, composite, cfg,
                               mix_seed(cfg.seed, 100 + epoch));
    }
    for (int i = 0; i < n; ++i) order[i] = i;
    shuffle_indices(order, shuffle_rng);

    LossBreakdown epoch_loss;
    int processed = 0;
    for (int start = 0; start < n; start += cfg.minibatch) {
      const int len = std::min(cfg.minibatch, n - start);
      batch_points.resize(len);
      batch_targets.resize(len);
      for (int k = 0; k < len; ++k) {
        batch_points[k] = data.points[order[start + k]];
        batch_targets[k] = data.targets[order[start + k]];
      }
      LossGradients lg;
      try {
        lg = loss_param_gradients(result.params, scaler, env, batch_points,
                                  batch_targets, cfg.weights,
                                  cfg.residual_mode);
      } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(e.what()) + " (epoch " +
                              std::to_string(epoch + 1) + ")");
      }
      adam_update(result.params, lg.grads, result.adam, cfg.learning_rate);

      epoch_loss.pde += lg.losses.pde * len;
      epoch_loss.value += lg.losses.value * len;
      epoch_loss.obstacle += lg.losses.obstacle * len;
      epoch_loss.goal += lg.losses.goal * len;
      epoch_loss.total += lg.losses.total * len;
      processed += len;
    }
    const double inv = 1.0 / processed;
    epoch_loss.pde *= inv;
    epoch_loss.value *= inv;
    epoch_loss.obstacle *= inv;
    epoch_loss.goal *= inv;
    epoch_loss.total *= inv;
    result.history.push_back(epoch_loss);
  }
  return result;
}

void write_loss_history_csv(const std::string& path,
                            const std::vector<LossBreakdown>& history) {
  std::ostringstream out;
  out << "epoch,pde,value,obstacle,goal,total\n";
  char buf[160];
  for (std::size_t e = 0; e < history.size(); ++e) {
    const LossBreakdown& l = history[e];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  e + 1, l.pde, l.value, l.obstacle, l.goal, l.total);
    out << buf;
  }
  write_file_atomic(path, out.str());
}

}  // namespace neurohjr
