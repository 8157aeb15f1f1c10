#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractent/analysis.hpp"
#include "fractent/efractal.hpp"
#include "fractent/models.hpp"
#include "fractent/partition.hpp"
#include "fractent/spectral.hpp"

namespace fractent {

enum class LatticeKind { kCarpet, kGeneralized, kSquare };
enum class Task { kEe, kContour, kEf, kProfiles, kDos, kGaps, kFits, kBaseline };

std::string to_string(LatticeKind k);
std::string to_string(Task t);
Task parse_task(const std::string& text);

inline constexpr int kDeskOrderCap = 4;

struct RunConfig {
  // [lattice]
  LatticeKind lattice = LatticeKind::kCarpet;
  std::vector<int> orders{2, 3, 4};
  int s = 1;
  int m = 3;
  int m_f = 1;
  std::vector<int> sizes;  // square lattices
  bool periodic = false;
  // [model]
  HoppingModel model;
  Filling filling = Filling::kFermiLevel;
  // [partition]
  PartitionKind partition = PartitionKind::kIV;
  std::string mask_path;
  // [tasks]
  std::vector<Task> tasks;
  // [ef]
  LaunchRule launch;
  bool exclude_b4 = true;
  int permutations = 100;
  // [profiles]
  ProfileWindow window;
  // [fits]
  AlphaGrid alpha_grid;
  // [dos]
  DosMethod dos_method = DosMethod::kExactHistogram;
  int dos_bins = 201;
  int dos_moments = 512;
  int dos_vectors = 50;
  std::optional<std::pair<double, double>> dos_range;
  // [baseline]
  std::vector<int> baseline_sizes{12, 18, 24, 30, 36, 42, 48};
  // [run]
  std::uint64_t seed = 1;
  std::size_t dense_limit = kDefaultDenseLimit;
  std::size_t site_limit = kDefaultSiteLimit;
  bool allow_large = false;
  int workers = 1;

  bool has(Task t) const;
};

/// key = value lines under [section] headers; '#' starts a comment.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);
/// Canonical text that parses back to the same config.
std::string serialize_config(const RunConfig& cfg);

/// Field-level checks (ValidationError) and size checks (CapacityError), before any work.
void validate(const RunConfig& cfg);

}  // namespace fractent
