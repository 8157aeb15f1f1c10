#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fractent/entanglement.hpp"
#include "fractent/lattice.hpp"
#include "fractent/partition.hpp"

namespace fractent {

/// Where billiard rays enter the W x W square.
struct LaunchRule {
  enum class Kind {
    kBlockCenters,  // centers of the 3^k triadic blocks along an edge, k = 0..levels
    kTriadicEdges,  // W/2 plus the triadic block edges W 3^-k and W (1 - 3^-k)
  };
  Kind kind = Kind::kBlockCenters;
  int levels = 1;
};

std::string to_string(LaunchRule::Kind k);
LaunchRule::Kind parse_launch_kind(const std::string& text);

struct Direction {
  int dx = 1;
  int dy = 1;
  bool operator==(const Direction&) const = default;
};

struct TrajectoryStep {
  Coord cell;
  Direction dir;
};

struct LoopFamily {
  std::string id;
  /// Twice the launch offset along the bottom edge, so half-integer offsets stay exact.
  int twice_offset = 0;
  /// Closed orbit sampled every half step; the last sample repeats the first.
  std::vector<TrajectoryStep> trajectory;
  /// Every W x W cell the two-wide stroke touches, present or not.
  std::vector<Coord> stroke_cells;
  std::vector<std::uint8_t> stroke_mask;  // per lattice site
  double hole_adjacent_fraction = 0.0;
  /// Stroke avoids every hole-adjacent site.
  bool b4_like = false;
};

std::vector<LoopFamily> ef_families(const Lattice& lattice, const LaunchRule& rule = {});

struct EFMask {
  std::vector<std::uint8_t> mask;
  std::vector<std::string> families_used;

  std::size_t count() const;
};

/// Union of strokes; families flagged b4_like are skipped when exclude_b4 is set.
EFMask ef_compose(const std::vector<LoopFamily>& families, bool exclude_b4 = true);

struct OverlapResult {
  double score = 0.0;
  std::size_t k = 0;
  std::size_t hits = 0;
  bool degenerate_ties = false;
};

OverlapResult ef_overlap(const ContourField& contour, const EFMask& ef, const Partition& p);

struct NullStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;
};

/// Overlap scores with contour values shuffled over A.
NullStats ef_overlap_null(const ContourField& contour, const EFMask& ef, const Partition& p,
                          int permutations, std::uint64_t seed);

struct SimilarityReport {
  double jaccard = 0.0;
  std::size_t coarse_on = 0;
  std::size_t reference_on = 0;
  std::size_t intersection = 0;
};

/// Block-coarse-grains the fine mask by `factor` (a cell is on if at least a third of its
/// present sites are on) and compares with the coarse mask.
SimilarityReport ef_self_similarity(const Lattice& fine, const EFMask& fine_mask,
                                    const Lattice& coarse, const EFMask& coarse_mask,
                                    int factor = 3);

}  // namespace fractent
