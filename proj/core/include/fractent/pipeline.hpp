#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fractent/config.hpp"

namespace fractent {

struct Artifact {
  std::string name;
  std::string sha256;
};

struct RunReport {
  std::vector<Artifact> artifacts;  // sorted by name, manifest excluded
  std::filesystem::path manifest;
  std::vector<std::string> summary;  // one-line human-readable results
};

/// Validate, compute every requested task, write artifacts and manifest.txt into out_dir.
RunReport run(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Writes sites/bonds CSV, partition mask and images for every lattice in the config.
RunReport export_lattices(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Canned desk-scale config for a figure id; allow_large switches to the large orders.
RunConfig figure_config(const std::string& id, bool allow_large = false);
std::vector<std::string> figure_ids();
RunReport reproduce(const std::string& id, const std::filesystem::path& out_dir,
                    bool allow_large = false);

}  // namespace fractent
