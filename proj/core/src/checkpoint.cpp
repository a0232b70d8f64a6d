#include "neurohjr/checkpoint.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "neurohjr/manifest.hpp"

namespace neurohjr {

namespace {

constexpr char kMagic[5] = {'N', 'H', 'J', 'R', '1'};
constexpr std::array<std::uint32_t, 6> kTopology = {2, 128, 128, 128, 2, 1};

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.append(b, 4);
}

void put_u64(std::string& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.append(b, 8);
}

void put_f64(std::string& out, double v) {
  static_assert(sizeof(double) == 8);
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}

void put_bundle(std::string& out, const MlpParameters& p) {
  p.for_each_tensor([&](const char*, const double* data, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) put_f64(out, data[k]);
  });
}

struct Reader {
  const std::string& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) {
      throw CheckpointError("checkpoint: truncated file");
    }
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes[pos + i]))
           << (8 * i);
    }
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes[pos + i]))
           << (8 * i);
    }
    pos += 8;
    return v;
  }
  double f64() {
    need(8);
    double v;
    std::memcpy(&v, bytes.data() + pos, 8);
    pos += 8;
    return v;
  }
  void bundle(MlpParameters& p) {
    p.for_each_tensor([&](const char*, double* data, std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) data[k] = f64();
    });
  }
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::string out;
  out.reserve(16 + 3 * ck.params.parameter_count() * 8);
  out.append(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(kTopology.size()));
  for (std::uint32_t s : kTopology) put_u32(out, s);
  put_bundle(out, ck.params);
  put_bundle(out, ck.adam.m);
  put_bundle(out, ck.adam.v);
  put_f64(out, ck.adam.cfg.beta1);
  put_f64(out, ck.adam.cfg.beta2);
  put_f64(out, ck.adam.cfg.epsilon);
  put_u64(out, ck.adam.step);
  write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const std::exception& e) {
    throw CheckpointError(e.what());
  }
  Reader r{bytes};
  r.need(sizeof kMagic);
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw CheckpointError("checkpoint: bad magic (not an NHJR1 file)");
  }
  r.pos = sizeof kMagic;
  const std::uint32_t n_layers = r.u32();
  if (n_layers != kTopology.size()) {
    throw CheckpointError("checkpoint: topology mismatch (layer count)");
  }
  for (std::uint32_t expected : kTopology) {
    if (r.u32() != expected) {
      throw CheckpointError("checkpoint: topology mismatch (layer size)");
    }
  }
  Checkpoint ck;
  r.bundle(ck.params);
  r.bundle(ck.adam.m);
  r.bundle(ck.adam.v);
  ck.adam.cfg.beta1 = r.f64();
  ck.adam.cfg.beta2 = r.f64();
  ck.adam.cfg.epsilon = r.f64();
  ck.adam.step = r.u64();
  if (r.pos != bytes.size()) {
    throw CheckpointError("checkpoint: trailing bytes");
  }
  return ck;
}

}  // namespace neurohjr
