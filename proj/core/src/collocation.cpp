#include "neurohjr/collocation.hpp"

#include <cmath>
#include <numbers>

#include "neurohjr/rng.hpp"

namespace neurohjr {

std::vector<Position> sample_interior(const Environment& env, int count,
                                      std::uint64_t seed) {
  std::vector<Position> out;
  if (count <= 0) return out;
  out.reserve(count);
  Rng rng(mix_seed(seed, 0x1f7e1));
  const Bounds& b = env.bounds();
  const long long budget = 1000LL * count;
  long long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (attempts++ >= budget) {
      throw SamplingError("sample_interior: rejection budget exhausted");
    }
    Position p{rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
    if (!in_unsafe_region(p, env)) out.push_back(p);
  }
  return out;
}

std::vector<Position> sample_boundary(const Environment& env, int count,
                                      std::uint64_t seed, double band_width) {
  std::vector<Position> out;
  if (count <= 0) return out;
  if (env.obstacles().empty()) {
    throw SamplingError("sample_boundary: environment has no obstacles");
  }
  out.reserve(count);
  Rng rng(mix_seed(seed, 0xb0a2d));
  const long long budget = 1000LL * count;
  long long attempts = 0;
  const std::size_t n_obs = env.obstacles().size();
  while (static_cast<int>(out.size()) < count) {
    if (attempts++ >= budget) {
      throw SamplingError("sample_boundary: rejection budget exhausted");
    }
    const std::size_t k = static_cast<std::size_t>(rng.uniform_index(n_obs));
    const Obstacle& o = env.obstacles()[k];
    const double rd = env.unsafe_radius(k);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double radius = rng.uniform(rd, rd + band_width);
    Position p{o.center.x + radius * std::cos(angle),
               o.center.y + radius * std::sin(angle)};
    if (!env.bounds().contains(p)) continue;
    if (in_unsafe_region(p, env)) continue;  // grazed another obstacle's disk
    out.push_back(p);
  }
  return out;
}

std::vector<double> oracle_targets(std::span<const Position> points,
                                   const ValueField& composite) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Position& p : points) {
    out.push_back(sample_value(composite, p));
  }
  return out;
}

}  // namespace neurohjr
