#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fractent/efractal.hpp"
#include "fractent/error.hpp"

using namespace fractent;

namespace {

const LoopFamily& diamond(const std::vector<LoopFamily>& fams, int W) {
  auto it = std::find_if(fams.begin(), fams.end(), [W](const LoopFamily& f) { return f.twice_offset == W; });
  if (it == fams.end()) throw std::runtime_error("no central orbit");
  return *it;
}

bool rotation_invariant(const Lattice& lat, const std::vector<std::uint8_t>& mask) {
  const int W = lat.width();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto c = lat.coord(i);
    if (mask[i] != mask[*lat.index_of({W - 1 - c.y, c.x})]) return false;
  }
  return true;
}

ContourField field(const Partition& p, std::vector<double> values) {
  ContourField c;
  c.sites = p.a_sites;
  c.values = std::move(values);
  for (double v : c.values) c.total += v;
  return c;
}

}  // namespace

TEST(Families, CentralDiamondIsRotationInvariant) {
  for (int n = 2; n <= 4; ++n) {
    const auto lat = build_carpet(n, 1);
    const auto fams = ef_families(lat);
    const auto& d = diamond(fams, lat.width());
    EXPECT_TRUE(rotation_invariant(lat, d.stroke_mask)) << n;
    EXPECT_TRUE(d.stroke_mask[*lat.index_of({(lat.width() - 1) / 2, 0})] ||
                d.stroke_mask[*lat.index_of({(lat.width() + 1) / 2, 0})]);
  }
}

TEST(Families, AtLeastThreeDistinctAtSecondOrder) {
  const auto fams = ef_families(build_carpet(2, 1));
  EXPECT_GE(fams.size(), 3u);
  std::set<std::vector<std::uint8_t>> masks;
  for (const auto& f : fams) masks.insert(f.stroke_mask);
  EXPECT_EQ(masks.size(), fams.size());
  EXPECT_GE(ef_families(build_carpet(3, 1), {LaunchRule::Kind::kTriadicEdges, 1}).size(), 3u);
}

TEST(Families, NeedSecondOrder) {
  EXPECT_THROW(ef_families(build_carpet(1, 1)), ValidationError);
  EXPECT_THROW(ef_families(build_carpet(2, 1), {LaunchRule::Kind::kBlockCenters, 3}), ValidationError);
  EXPECT_THROW(parse_launch_kind("random"), ValidationError);
}

TEST(Families, OrbitsClose) {
  for (auto kind : {LaunchRule::Kind::kBlockCenters, LaunchRule::Kind::kTriadicEdges})
    for (const auto& f : ef_families(build_carpet(3, 1), {kind, 1})) {
      ASSERT_GE(f.trajectory.size(), 2u);
      EXPECT_EQ(f.trajectory.front().cell, f.trajectory.back().cell) << f.id;
      EXPECT_EQ(f.trajectory.front().dir, f.trajectory.back().dir) << f.id;
    }
}

TEST(Families, ReflectionFlipsOneAxis) {
  const auto lat = build_carpet(3, 1);
  const int W = lat.width();
  for (const auto& f : ef_families(lat, {LaunchRule::Kind::kTriadicEdges, 1}))
    for (std::size_t k = 1; k < f.trajectory.size(); ++k) {
      const auto a = f.trajectory[k - 1], b = f.trajectory[k];
      const int flips = (a.dir.dx != b.dir.dx) + (a.dir.dy != b.dir.dy);
      EXPECT_LE(flips, 1);
      if (a.dir.dx != b.dir.dx) EXPECT_TRUE(a.cell.x == 0 || a.cell.x == W - 1) << f.id;
      if (a.dir.dy != b.dir.dy) EXPECT_TRUE(a.cell.y == 0 || a.cell.y == W - 1) << f.id;
      EXPECT_LE(std::max(std::abs(a.cell.x - b.cell.x), std::abs(a.cell.y - b.cell.y)), 1);
    }
}

TEST(Families, StrokeHugsTrajectory) {
  const auto lat = build_carpet(3, 1);
  for (const auto& f : ef_families(lat))
    for (auto c : f.stroke_cells) {
      int best = 1 << 20;
      for (const auto& s : f.trajectory)
        best = std::min(best, std::max(std::abs(c.x - s.cell.x), std::abs(c.y - s.cell.y)));
      EXPECT_LE(best, 1) << f.id;
    }
}

TEST(Compose, UnionAndExclusion) {
  const auto lat = build_carpet(3, 1);
  const auto fams = ef_families(lat);
  const auto& d = diamond(fams, lat.width());
  EXPECT_EQ(ef_compose({d}, false).mask, d.stroke_mask);
  std::size_t sum = 0;
  for (const auto& f : fams) sum += std::count(f.stroke_mask.begin(), f.stroke_mask.end(), 1);
  const auto all = ef_compose(fams, false);
  EXPECT_LE(all.count(), sum);
  EXPECT_EQ(all.families_used.size(), fams.size());
  EXPECT_TRUE(rotation_invariant(lat, all.mask));
  EXPECT_THROW(ef_compose({}), ValidationError);
  auto flagged = d;
  flagged.b4_like = true;
  EXPECT_THROW(ef_compose({flagged}, true), ValidationError);
}

TEST(Compose, DisjointFamiliesAdd) {
  const auto lat = build_carpet(3, 1);
  const auto fams = ef_families(lat);
  for (std::size_t a = 0; a < fams.size(); ++a)
    for (std::size_t b = a + 1; b < fams.size(); ++b) {
      bool disjoint = true;
      for (std::size_t i = 0; i < lat.size(); ++i) disjoint &= !(fams[a].stroke_mask[i] && fams[b].stroke_mask[i]);
      if (!disjoint) continue;
      EXPECT_EQ(ef_compose({fams[a], fams[b]}, false).count(),
                ef_compose({fams[a]}, false).count() + ef_compose({fams[b]}, false).count());
    }
}

TEST(Overlap, PerfectAndDegenerate) {
  const auto lat = build_carpet(3, 1);
  const auto p = partition_IV(lat);
  const auto ef = ef_compose(ef_families(lat));
  std::vector<double> v;
  for (auto s : p.a_sites) v.push_back(ef.mask[s] ? 2.0 + 0.001 * static_cast<double>(s) : 1.0);
  const auto r = ef_overlap(field(p, v), ef, p);
  EXPECT_DOUBLE_EQ(r.score, 1.0);
  EXPECT_FALSE(r.degenerate_ties);

  const auto flat = ef_overlap(field(p, std::vector<double>(p.a_sites.size(), 1.0)), ef, p);
  EXPECT_TRUE(flat.degenerate_ties);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < flat.k; ++i) hits += ef.mask[p.a_sites[i]];
  EXPECT_EQ(flat.hits, hits);
  EXPECT_GE(flat.score, 0.0);
  EXPECT_LE(flat.score, 1.0);
}

TEST(Overlap, EmptyIntersectionIsError) {
  const auto lat = build_carpet(2, 1);
  const auto p = partition_IV(lat);
  EFMask none;
  none.mask.assign(lat.size(), 0);
  EXPECT_THROW(ef_overlap(field(p, std::vector<double>(p.a_sites.size(), 1.0)), none, p), ValidationError);
}

TEST(Overlap, NullIsSeededAndNearChance) {
  const auto lat = build_carpet(3, 1);
  const auto p = partition_IV(lat);
  const auto ef = ef_compose(ef_families(lat));
  std::vector<double> v;
  for (auto s : p.a_sites) v.push_back(static_cast<double>((s * 7919) % 101));
  const auto c = field(p, v);
  const auto a = ef_overlap_null(c, ef, p, 200, 3);
  const auto b = ef_overlap_null(c, ef, p, 200, 3);
  EXPECT_EQ(a.samples, b.samples);
  const double chance = static_cast<double>(ef_overlap(c, ef, p).k) / static_cast<double>(p.a_sites.size());
  EXPECT_NEAR(a.mean, chance, 4 * a.stddev / std::sqrt(200.0) + 1e-9);
  EXPECT_THROW(ef_overlap_null(c, ef, p, 1, 3), ValidationError);
}

TEST(SelfSimilarity, DiamondCoarseGrainsToPreviousOrder) {
  for (int n = 3; n <= 4; ++n) {
    const auto fine = build_carpet(n, 1), coarse = build_carpet(n - 1, 1);
    const auto ff = ef_families(fine), cf = ef_families(coarse);
    const auto r = ef_self_similarity(fine, ef_compose({diamond(ff, fine.width())}, false), coarse,
                                      ef_compose({diamond(cf, coarse.width())}, false));
    EXPECT_GE(r.jaccard, 0.9) << n;
  }
}

TEST(SelfSimilarity, IdentityAndErrors) {
  const auto lat = build_carpet(3, 1);
  const auto m = ef_compose(ef_families(lat));
  EXPECT_DOUBLE_EQ(ef_self_similarity(lat, m, lat, m, 1).jaccard, 1.0);
  EFMask empty;
  empty.mask.assign(lat.size(), 0);
  EXPECT_THROW(ef_self_similarity(lat, empty, lat, empty, 1), ValidationError);
  EXPECT_THROW(ef_self_similarity(lat, m, lat, m, 3), ValidationError);
}
