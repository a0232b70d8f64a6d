#include "neurohjr/gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "neurohjr/rng.hpp"

namespace neurohjr {

namespace {

constexpr double kInputStep = 1e-4;
constexpr double kInputTol = 1e-6;
constexpr double kParamStep = 1e-5;
constexpr double kParamTol = 1e-4;

double guarded_rel_error(double a, double b, double floor_scale) {
  const double denom = std::max({std::abs(a), std::abs(b), floor_scale});
  return std::abs(a - b) / denom;
}

/// Worst deviation over a coordinate sample, relative to the largest
/// gradient magnitude seen for the component (guards the near-zero
/// coordinates without weakening the scale of the comparison).
double sample_rel_error(const std::vector<double>& fd,
                        const std::vector<double>& an) {
  double scale = 1e-6;
  for (double x : fd) scale = std::max(scale, std::abs(x));
  for (double x : an) scale = std::max(scale, std::abs(x));
  double worst = 0.0;
  for (std::size_t k = 0; k < fd.size(); ++k) {
    worst = std::max(worst, std::abs(fd[k] - an[k]) / scale);
  }
  return worst;
}

double* flat_coord(MlpParameters& p, std::size_t flat) {
  double* out = nullptr;
  std::size_t seen = 0;
  p.for_each_tensor([&](const char*, double* data, std::size_t n) {
    if (out == nullptr && flat < seen + n) out = data + (flat - seen);
    seen += n;
  });
  return out;
}

const double* flat_coord(const MlpParameters& p, std::size_t flat) {
  return flat_coord(const_cast<MlpParameters&>(p), flat);
}

// A compact workspace keeps the input-normalization chain factor (and with
// it the PDE residual gradients) at a healthy scale for the checks.
Environment make_check_env() {
  return Environment({{0.0, 0.0}, {10.0, 10.0}}, {0.5, 0.5}, {9.0, 9.0},
                     {{{5.0, 5.5}, 1.0}, {{7.5, 3.0}, 1.0}}, 0.5, 0.5);
}

struct CheckData {
  std::vector<Position> points;
  std::vector<double> targets;
};

CheckData make_batch(const Environment& env, int batch_size, Rng& rng) {
  CheckData d;
  const Bounds& b = env.bounds();
  while (static_cast<int>(d.points.size()) < batch_size) {
    Position p{rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
    if (in_unsafe_region(p, env)) continue;
    d.points.push_back(p);
    d.targets.push_back(rng.uniform(-2.0, 4.0));
  }
  return d;
}

}  // namespace

GradCheckReport run_gradient_checks(std::uint64_t seed, int batch_size,
                                    int n_seeds, int coords_per_loss,
                                    bool corrupt) {
  GradCheckReport report;
  const Environment env = make_check_env();
  const InputScaler scaler{env.bounds()};

  double input_err = 0.0;
  struct ComponentCase {
    const char* name;
    LossWeights weights;
    ResidualMode mode;
    std::function<double(const MlpParameters&, const CheckData&)> eval;
  };
  const std::vector<ComponentCase> components = {
      {"pde(predicted)",
       {1, 0, 0, 0},
       ResidualMode::kPredictedControl,
       [&](const MlpParameters& p, const CheckData& d) {
         return loss_pde(p, scaler, d.points, ResidualMode::kPredictedControl);
       }},
      {"pde(analytic)",
       {1, 0, 0, 0},
       ResidualMode::kAnalyticHamiltonian,
       [&](const MlpParameters& p, const CheckData& d) {
         return loss_pde(p, scaler, d.points,
                         ResidualMode::kAnalyticHamiltonian);
       }},
      {"value",
       {0, 1, 0, 0},
       ResidualMode::kPredictedControl,
       [&](const MlpParameters& p, const CheckData& d) {
         return loss_value(p, scaler, d.points, d.targets);
       }},
      {"obstacle",
       {0, 0, 1, 0},
       ResidualMode::kPredictedControl,
       [&](const MlpParameters&, const CheckData& d) {
         return loss_obstacle(d.points, env);
       }},
      {"goal",
       {0, 0, 0, 1},
       ResidualMode::kPredictedControl,
       [&](const MlpParameters& p, const CheckData& d) {
         return loss_goal(p, scaler, d.points, env);
       }},
  };
  std::vector<double> component_err(components.size(), 0.0);

  for (int s = 0; s < n_seeds; ++s) {
    const std::uint64_t run_seed = mix_seed(seed, s);
    MlpParameters params = init_params(run_seed);
    // Boost the value head so dV/dP (and the PDE residuals built from it)
    // is well above finite-difference noise at init scale.
    for (double& w : params.wv.a) w *= 3.0;
    Rng rng(mix_seed(run_seed, 0xfd));
    CheckData data = make_batch(env, batch_size, rng);

    // Input gradient: dV/dn vs central differences on the normalized inputs.
    for (int k = 0; k < 4; ++k) {
      const Position p = data.points[k % data.points.size()];
      ForwardTrace tr;
      forward(params, scaler.normalize(p), &tr);
      Vec2 gn = input_gradient_normalized(params, tr);
      if (corrupt) gn.x += 1e-3;
      for (int axis = 0; axis < 2; ++axis) {
        Vec2 n_plus = scaler.normalize(p);
        Vec2 n_minus = n_plus;
        (axis == 0 ? n_plus.x : n_plus.y) += kInputStep;
        (axis == 0 ? n_minus.x : n_minus.y) -= kInputStep;
        const double fd = (forward(params, n_plus).value -
                           forward(params, n_minus).value) /
                          (2.0 * kInputStep);
        const double an = axis == 0 ? gn.x : gn.y;
        input_err = std::max(input_err, guarded_rel_error(fd, an, 1e-8));
      }
    }

    // Parameter gradients, one loss component at a time. The analytic side
    // comes from the fused reverse pass with a one-hot weight vector; the
    // finite differences run through the standalone loss evaluations.
    const std::size_t n_params = params.parameter_count();
    for (std::size_t c = 0; c < components.size(); ++c) {
      const ComponentCase& cc = components[c];
      const LossGradients lg = loss_param_gradients(
          params, scaler, env, data.points, data.targets, cc.weights, cc.mode);
      std::vector<double> fd_vals, an_vals;
      fd_vals.reserve(coords_per_loss);
      an_vals.reserve(coords_per_loss);
      for (int t = 0; t < coords_per_loss; ++t) {
        const std::size_t flat =
            static_cast<std::size_t>(rng.uniform_index(n_params));
        double an = *flat_coord(lg.grads, flat);
        if (corrupt) an += 1e-3;
        MlpParameters probe = params;
        double* coord = flat_coord(probe, flat);
        const double saved = *coord;
        *coord = saved + kParamStep;
        const double plus = cc.eval(probe, data);
        *coord = saved - kParamStep;
        const double minus = cc.eval(probe, data);
        fd_vals.push_back((plus - minus) / (2.0 * kParamStep));
        an_vals.push_back(an);
      }
      component_err[c] =
          std::max(component_err[c], sample_rel_error(fd_vals, an_vals));
    }
  }

  report.lines.push_back(
      {"input_gradient", input_err, kInputTol, input_err < kInputTol});
  for (std::size_t c = 0; c < components.size(); ++c) {
    report.lines.push_back({components[c].name, component_err[c], kParamTol,
                            component_err[c] < kParamTol});
  }
  return report;
}

std::string GradCheckReport::to_string() const {
  std::ostringstream out;
  char buf[160];
  for (const GradCheckLine& l : lines) {
    std::snprintf(buf, sizeof buf, "%-16s max_rel_error=%.3e tol=%.0e %s\n",
                  l.name.c_str(), l.max_rel_error, l.tolerance,
                  l.pass ? "PASS" : "FAIL");
    out << buf;
  }
  return out.str();
}

}  // namespace neurohjr
