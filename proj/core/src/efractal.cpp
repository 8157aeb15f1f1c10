#include "fractent/efractal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

std::string to_string(LaunchRule::Kind k) {
  return k == LaunchRule::Kind::kBlockCenters ? "block-centers" : "triadic-edges";
}

LaunchRule::Kind parse_launch_kind(const std::string& text) {
  if (text == "block-centers") return LaunchRule::Kind::kBlockCenters;
  if (text == "triadic-edges") return LaunchRule::Kind::kTriadicEdges;
  throw ValidationError(
      fmt::format("ef.launch: unknown rule '{}' (expected block-centers or triadic-edges)", text));
}

namespace {

// Offsets along one edge, doubled. Integer offsets are nudged half a site toward
// the middle so every ray runs between lattice diagonals.
std::vector<long> edge_offsets(int W, const LaunchRule& rule, int order) {
  std::vector<long> twice;
  auto nudge = [W](long d) {
    if (d % 2 != 0) return d;
    return d < W ? d + 1 : d - 1;
  };
  if (rule.levels < 0) throw ValidationError("ef.levels must be >= 0");
  if (rule.kind == LaunchRule::Kind::kBlockCenters) {
    long blocks = 1;
    for (int k = 0; k <= rule.levels; ++k, blocks *= 3) {
      if (k > order || W % blocks != 0)
        throw ValidationError(fmt::format("ef.levels = {} too deep for width {}", rule.levels, W));
      const long size = W / blocks;
      for (long j = 0; j < blocks; ++j) twice.push_back(nudge((2 * j + 1) * size));
    }
  } else {
    twice.push_back(nudge(W));
    long p = 3;
    for (int k = 1; k < order; ++k, p *= 3) {
      if (W % p != 0) break;
      twice.push_back(nudge(2 * W / p));
      twice.push_back(nudge(2 * (W - W / p)));
    }
  }
  return twice;
}

long canonical(long twice_delta, int W) {
  const long period = 4L * W;
  long d = ((twice_delta % period) + period) % period;
  return std::min(d, period - d);
}

int fold_cell(long i, int W) {
  const long r = ((i % (2L * W)) + 2L * W) % (2L * W);
  return static_cast<int>(r < W ? r : 2L * W - 1 - r);
}

LoopFamily trace(const Lattice& lat, long D) {
  const int W = lat.width();
  LoopFamily f;
  f.twice_offset = static_cast<int>(D);
  f.id = fmt::format("orbit-{}.5", (D - 1) / 2);
  const double delta = 0.5 * static_cast<double>(D);
  auto fold = [W](double z, int& dir) {
    double r = std::fmod(z, 2.0 * W);
    if (r < 0) r += 2.0 * W;
    dir = r < W ? 1 : -1;
    return r < W ? r : 2.0 * W - r;
  };
  for (int k = 0; k <= 4 * W; ++k) {
    const double u = 0.5 * k + 0.25;
    TrajectoryStep s;
    const double x = fold(u + delta, s.dir.dx);
    const double y = fold(u, s.dir.dy);
    s.cell = {static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))};
    f.trajectory.push_back(s);
  }
  std::vector<Coord> cells;
  const long lo = (D - 1) / 2;
  for (long j = 0; j < 2L * W; ++j)
    for (long a : {lo, lo + 1}) cells.push_back({fold_cell(j + a, W), fold_cell(j, W)});
  std::sort(cells.begin(), cells.end(),
            [](Coord p, Coord q) { return std::pair(p.y, p.x) < std::pair(q.y, q.x); });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  f.stroke_cells = std::move(cells);
  f.stroke_mask.assign(lat.size(), 0);
  std::size_t present = 0, near_hole = 0;
  for (auto c : f.stroke_cells)
    if (auto i = lat.index_of(c)) {
      f.stroke_mask[*i] = 1;
      ++present;
      if (lat.hole_boundary(*i)) ++near_hole;
    }
  f.hole_adjacent_fraction = present ? static_cast<double>(near_hole) / static_cast<double>(present) : 0.0;
  f.b4_like = present > 0 && near_hole == 0;
  return f;
}

}  // namespace

std::vector<LoopFamily> ef_families(const Lattice& lattice, const LaunchRule& rule) {
  if (lattice.rule() && lattice.order() < 2)
    throw ValidationError("ef_families needs carpet order >= 2");
  const int W = lattice.width();
  const auto offsets = edge_offsets(W, rule, lattice.order());
  // Launch from every edge in both inward directions; in unfolded coordinates each
  // launch is a line x - y = delta.
  std::vector<long> deltas;
  for (long X : offsets) {
    const long twoW = 2L * W;
    deltas.push_back(X);              // bottom, moving right
    deltas.push_back(2 * twoW - X);   // bottom, moving left
    deltas.push_back(-X);             // left, moving up
    deltas.push_back(X - 2 * twoW);   // left, moving down
    deltas.push_back(X - twoW);       // top
    deltas.push_back(twoW - X);       // right
  }
  std::vector<long> keys;
  for (long d : deltas) keys.push_back(canonical(d, W));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<LoopFamily> out;
  for (long D : keys) {
    LoopFamily f = trace(lattice, D);
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const LoopFamily& g) { return g.stroke_cells == f.stroke_cells; });
    if (!dup) out.push_back(std::move(f));
  }
  return out;
}

std::size_t EFMask::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

EFMask ef_compose(const std::vector<LoopFamily>& families, bool exclude_b4) {
  if (families.empty()) throw ValidationError("ef_compose: empty family subset");
  EFMask m;
  for (const auto& f : families) {
    if (exclude_b4 && f.b4_like) continue;
    if (m.mask.empty()) m.mask.assign(f.stroke_mask.size(), 0);
    if (f.stroke_mask.size() != m.mask.size())
      throw ValidationError("ef_compose: families come from different lattices");
    for (std::size_t i = 0; i < m.mask.size(); ++i) m.mask[i] |= f.stroke_mask[i];
    m.families_used.push_back(f.id);
  }
  if (m.families_used.empty()) throw ValidationError("ef_compose: every family was excluded");
  return m;
}

namespace {

void check_same_lattice(const ContourField& contour, const EFMask& ef, const Partition& p) {
  if (ef.mask.size() != p.mask.size())
    throw ValidationError("ef_overlap: EF mask and partition differ in size");
  if (contour.sites != p.a_sites)
    throw ValidationError("ef_overlap: contour does not cover the partition's subsystem");
}

OverlapResult overlap_of(std::span<const double> values, const std::vector<std::size_t>& sites,
                         const EFMask& ef) {
  OverlapResult r;
  for (auto s : sites) r.k += ef.mask[s];
  if (r.k == 0) throw ValidationError("ef_overlap: EF mask does not meet subsystem A");
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  for (std::size_t i = 0; i < r.k; ++i) r.hits += ef.mask[sites[order[i]]];
  if (r.k < order.size()) {
    const double x = values[order[r.k - 1]];
    const double y = values[order[r.k]];
    r.degenerate_ties = std::abs(x - y) <= 1e-12 * std::max({std::abs(x), std::abs(y), 1e-300});
  }
  r.score = static_cast<double>(r.hits) / static_cast<double>(r.k);
  return r;
}

}  // namespace

OverlapResult ef_overlap(const ContourField& contour, const EFMask& ef, const Partition& p) {
  check_same_lattice(contour, ef, p);
  return overlap_of(contour.values, contour.sites, ef);
}

NullStats ef_overlap_null(const ContourField& contour, const EFMask& ef, const Partition& p,
                          int permutations, std::uint64_t seed) {
  check_same_lattice(contour, ef, p);
  if (permutations < 2) throw ValidationError("ef_overlap_null: need at least 2 permutations");
  std::mt19937_64 eng(seed);
  std::vector<double> values = contour.values;
  NullStats s;
  for (int k = 0; k < permutations; ++k) {
    for (std::size_t i = values.size(); i > 1; --i) std::swap(values[i - 1], values[eng() % i]);
    s.samples.push_back(overlap_of(values, contour.sites, ef).score);
  }
  const double n = static_cast<double>(s.samples.size());
  s.mean = std::accumulate(s.samples.begin(), s.samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : s.samples) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / (n - 1.0));
  return s;
}

SimilarityReport ef_self_similarity(const Lattice& fine, const EFMask& fine_mask,
                                    const Lattice& coarse, const EFMask& coarse_mask, int factor) {
  if (factor < 1) throw ValidationError("ef_self_similarity: factor must be >= 1");
  const int expected_gap = factor == 1 ? 0 : 1;
  if (fine.order() - coarse.order() != expected_gap || fine.width() != factor * coarse.width())
    throw ValidationError(fmt::format("ef_self_similarity: orders {} and {} do not differ by {}",
                                      fine.order(), coarse.order(), expected_gap));
  if (fine_mask.mask.size() != fine.size() || coarse_mask.mask.size() != coarse.size())
    throw ValidationError("ef_self_similarity: mask size does not match lattice");
  SimilarityReport r;
  std::size_t uni = 0;
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    const auto [X, Y] = coarse.coord(c);
    std::size_t present = 0, on = 0;
    for (int dy = 0; dy < factor; ++dy)
      for (int dx = 0; dx < factor; ++dx)
        if (auto i = fine.index_of({X * factor + dx, Y * factor + dy})) {
          ++present;
          on += fine_mask.mask[*i];
        }
    const bool a = present > 0 && 3 * on >= present;
    const bool b = coarse_mask.mask[c] != 0;
    r.coarse_on += a;
    r.reference_on += b;
    r.intersection += a && b;
    uni += a || b;
  }
  if (uni == 0) throw ValidationError("ef_self_similarity: both masks empty, Jaccard undefined");
  r.jaccard = static_cast<double>(r.intersection) / static_cast<double>(uni);
  return r;
}

}  // namespace fractent
