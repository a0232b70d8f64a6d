#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace neurohjr {

/// FNV-1a over a byte string; used for content hashes in run manifests.
std::uint64_t fnv1a64(const std::string& bytes);

/// Hash of a file's contents. Throws std::runtime_error if unreadable.
std::uint64_t hash_file(const std::string& path);

/// Writes content to a temporary file in the same directory, then renames it
/// over the destination.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Run manifest: command, resolved configuration text, content hashes of the
/// inputs/outputs, and wall-clock timings. Serialized as JSON.
struct Manifest {
  std::string command;
  std::string resolved_config;
  std::map<std::string, std::string> inputs;   // path -> hex hash
  std::map<std::string, std::string> outputs;  // path -> hex hash
  std::map<std::string, double> timings_s;

  void add_input(const std::string& path);
  void add_output(const std::string& path);
  void write(const std::string& path) const;
};

}  // namespace neurohjr
