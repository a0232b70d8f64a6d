#include "neurohjr/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "neurohjr/rng.hpp"

namespace neurohjr {

std::size_t MlpParameters::parameter_count() const {
  std::size_t n = 0;
  for_each_tensor([&](const char*, const double*, std::size_t s) { n += s; });
  return n;
}

void MlpParameters::fill(double value) {
  for_each_tensor([&](const char*, double* p, std::size_t s) {
    for (std::size_t k = 0; k < s; ++k) p[k] = value;
  });
}

bool MlpParameters::all_finite() const {
  bool ok = true;
  for_each_tensor([&](const char*, const double* p, std::size_t s) {
    for (std::size_t k = 0; k < s; ++k) {
      if (!std::isfinite(p[k])) ok = false;
    }
  });
  return ok;
}

namespace {

void glorot_fill(Matrix& w, Rng& rng) {
  const double bound = std::sqrt(6.0 / (w.rows + w.cols));
  for (double& x : w.a) x = rng.uniform(-bound, bound);
}

}  // namespace

MlpParameters init_params(std::uint64_t seed) {
  MlpParameters p;
  Rng rng(mix_seed(seed, 0x57e16475));
  glorot_fill(p.w1, rng);
  glorot_fill(p.w2, rng);
  glorot_fill(p.w3, rng);
  glorot_fill(p.wc, rng);
  glorot_fill(p.wv, rng);
  // biases stay zero
  return p;
}

NetOutput forward(const MlpParameters& params, Vec2 n, ForwardTrace* trace) {
  if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
    throw std::invalid_argument("forward: non-finite input");
  }
  std::array<double, kWidth> a1, a2, a3;
  for (int i = 0; i < kWidth; ++i) {
    const double* w = params.w1.row(i);
    a1[i] = std::tanh(w[0] * n.x + w[1] * n.y + params.b1[i]);
  }
  for (int i = 0; i < kWidth; ++i) {
    const double* w = params.w2.row(i);
    double z = params.b2[i];
    for (int j = 0; j < kWidth; ++j) z += w[j] * a1[j];
    a2[i] = std::tanh(z);
  }
  for (int i = 0; i < kWidth; ++i) {
    const double* w = params.w3.row(i);
    double z = params.b3[i];
    for (int j = 0; j < kWidth; ++j) z += w[j] * a2[j];
    a3[i] = std::tanh(z);
  }
  NetOutput out;
  {
    const double* w0 = params.wc.row(0);
    const double* w1 = params.wc.row(1);
    double z0 = params.bc[0], z1 = params.bc[1];
    for (int j = 0; j < kWidth; ++j) {
      z0 += w0[j] * a3[j];
      z1 += w1[j] * a3[j];
    }
    out.u.ux = std::tanh(z0);
    out.u.uy = std::tanh(z1);
  }
  {
    const double* w = params.wv.row(0);
    double z = params.bv;
    for (int j = 0; j < kWidth; ++j) z += w[j] * a3[j];
    out.value = z;
  }
  if (trace) {
    trace->input = n;
    trace->a1 = a1;
    trace->a2 = a2;
    trace->a3 = a3;
    trace->u = {out.u.ux, out.u.uy};
    trace->value = out.value;
  }
  return out;
}

std::vector<NetOutput> forward_batch(const MlpParameters& params,
                                     const std::vector<Vec2>& normalized) {
  std::vector<NetOutput> out(normalized.size());
  for (std::size_t k = 0; k < normalized.size(); ++k) {
    out[k] = forward(params, normalized[k]);
  }
  return out;
}

Vec2 input_gradient_normalized(const MlpParameters& params,
                               const ForwardTrace& trace) {
  // Reverse accumulation of dV/dn through the trunk:
  //   t3 = (1-a3^2) .* wv,  s2 = W3^T t3,  t2 = (1-a2^2) .* s2,
  //   s1 = W2^T t2,         t1 = (1-a1^2) .* s1,  gn = W1^T t1.
  std::array<double, kWidth> t3, s2, t2, s1, t1;
  const double* wv = params.wv.row(0);
  for (int i = 0; i < kWidth; ++i) {
    t3[i] = (1.0 - trace.a3[i] * trace.a3[i]) * wv[i];
  }
  s2.fill(0.0);
  for (int i = 0; i < kWidth; ++i) {
    const double* w = params.w3.row(i);
    const double ti = t3[i];
    for (int j = 0; j < kWidth; ++j) s2[j] += w[j] * ti;
  }
  for (int j = 0; j < kWidth; ++j) {
    t2[j] = (1.0 - trace.a2[j] * trace.a2[j]) * s2[j];
  }
  s1.fill(0.0);
  for (int i = 0; i < kWidth; ++i) {
    const double* w = params.w2.row(i);
    const double ti = t2[i];
    for (int j = 0; j < kWidth; ++j) s1[j] += w[j] * ti;
  }
  for (int j = 0; j < kWidth; ++j) {
    t1[j] = (1.0 - trace.a1[j] * trace.a1[j]) * s1[j];
  }
  Vec2 gn{0.0, 0.0};
  for (int i = 0; i < kWidth; ++i) {
    const double* w = params.w1.row(i);
    gn.x += w[0] * t1[i];
    gn.y += w[1] * t1[i];
  }
  return gn;
}

Vec2 input_gradient(const MlpParameters& params, const InputScaler& scaler,
                    Position p) {
  ForwardTrace trace;
  forward(params, scaler.normalize(p), &trace);
  const Vec2 gn = input_gradient_normalized(params, trace);
  const Vec2 c = scaler.chain();
  return {gn.x * c.x, gn.y * c.y};
}

}  // namespace neurohjr
