#include "neurohjr/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace neurohjr {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t hash_file(const std::string& path) {
  return fnv1a64(read_file(path));
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open file for writing: " + tmp);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + tmp + " -> " + path);
  }
}

namespace {
std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}
}  // namespace

void Manifest::add_input(const std::string& path) {
  inputs[path] = hex64(hash_file(path));
}

void Manifest::add_output(const std::string& path) {
  outputs[path] = hex64(hash_file(path));
}

void Manifest::write(const std::string& path) const {
  nlohmann::json j;
  j["command"] = command;
  j["resolved_config"] = resolved_config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["timings_s"] = timings_s;
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace neurohjr
