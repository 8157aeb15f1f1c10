#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fractent/error.hpp"
#include "fractent/lattice.hpp"
#include "oracles.hpp"

using namespace fractent;

namespace {

std::set<std::pair<int, int>> coords(const Lattice& lat) {
  std::set<std::pair<int, int>> s;
  for (auto c : lat.sites()) s.insert({c.x, c.y});
  return s;
}

}  // namespace

TEST(Carpet, SizeAndWidth) {
  const auto lat = build_carpet(3, 1);
  EXPECT_EQ(lat.size(), 512u);
  EXPECT_EQ(lat.width(), 27);
  const auto unit = build_carpet(0, 1);
  EXPECT_EQ(unit.size(), 1u);
  EXPECT_EQ(unit.width(), 1);
  EXPECT_EQ(build_carpet(5, 1).size(), 32768u);
}

TEST(Carpet, CountMatchesClosedFormUpToFive) {
  for (int s = 1; s <= 3; ++s)
    for (int n = 0; n <= 5; ++n) {
      if (s > 1 && n > 4) continue;
      const auto lat = build_carpet(n, s);
      EXPECT_EQ(lat.size(), expected_site_count(IterationRule::carpet(), n, s)) << n << "," << s;
      EXPECT_EQ(lat.width(), s * static_cast<int>(std::pow(3, n)));
    }
}

TEST(Carpet, MatchesSubstitutionOracleExhaustively) {
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(coords(build_carpet(n, 1)), oracle::substitute(3, 1, n)) << n;
}

TEST(Carpet, RowMajorOrder) {
  const auto lat = build_carpet(2, 1);
  for (std::size_t i = 1; i < lat.size(); ++i) {
    const auto a = lat.coord(i - 1), b = lat.coord(i);
    EXPECT_TRUE(a.y < b.y || (a.y == b.y && a.x < b.x));
  }
  for (std::size_t i = 0; i < lat.size(); ++i) EXPECT_EQ(lat.index_of(lat.coord(i)), i);
}

TEST(Carpet, CapacityLimit) {
  EXPECT_THROW(build_carpet(4, 1, 4000), CapacityError);
  EXPECT_NO_THROW(build_carpet(4, 1, 4096));
  EXPECT_THROW(build_carpet(-1, 1), ValidationError);
  EXPECT_THROW(build_carpet(2, 0), ValidationError);
}

TEST(Generalized, Counts) {
  EXPECT_EQ(build_generalized({3, 0}, 3).size(), 729u);
  EXPECT_EQ(build_generalized({3, 0}, 3).width(), 27);
  EXPECT_EQ(coords(build_generalized({3, 1}, 2)), coords(build_carpet(2, 1)));
  const auto g = build_generalized({5, 3}, 2);
  EXPECT_EQ(g.size(), 256u);
  EXPECT_EQ(coords(g), oracle::substitute(5, 3, 2));
  EXPECT_EQ(coords(build_generalized({5, 3}, 3)), oracle::substitute(5, 3, 3));
  EXPECT_EQ(coords(build_generalized({5, 1}, 2)), oracle::substitute(5, 1, 2));
}

TEST(Generalized, InvalidRules) {
  EXPECT_THROW(IterationRule(3, 3), ValidationError);
  EXPECT_THROW(IterationRule(1, 0), ValidationError);
  EXPECT_THROW(IterationRule(4, 1), ValidationError);
  EXPECT_THROW(IterationRule(3, -1), ValidationError);
  EXPECT_NO_THROW(IterationRule(4, 2));
  EXPECT_NO_THROW(IterationRule(4, 0));
}

TEST(Dims, HausdorffAndBoxCounting) {
  const auto carpet = build_carpet(3, 1);
  EXPECT_NEAR(hausdorff_dims(carpet).d_f, 1.8928, 1e-4);
  EXPECT_NEAR(hausdorff_dims(carpet).d_f, std::log(8.0) / std::log(3.0), 1e-12);
  EXPECT_EQ(hausdorff_dims(carpet).d_s, 2);
  EXPECT_DOUBLE_EQ(hausdorff_dims(build_generalized({3, 0}, 2)).d_f, 2.0);
  const auto g = build_generalized({5, 3}, 3);
  EXPECT_NEAR(hausdorff_dims(g).d_f, 1.7227, 1e-4);
  EXPECT_NEAR(box_counting_dimension(g, 5), hausdorff_dims(g).d_f, 1e-9);
  EXPECT_NEAR(box_counting_dimension(carpet, 3), hausdorff_dims(carpet).d_f, 1e-9);
}

TEST(Neighbors, Examples) {
  const auto ring = build_carpet(1, 1);
  EXPECT_EQ(ring.neighbors(*ring.index_of({0, 0})).size(), 2u);
  EXPECT_EQ(ring.neighbors(*ring.index_of({1, 0})).size(), 2u);
  EXPECT_FALSE(ring.contains({1, 1}));
  const auto sq = build_square(5);
  EXPECT_EQ(sq.neighbors(*sq.index_of({2, 2})).size(), 4u);
  EXPECT_THROW(sq.neighbors(25), ValidationError);
}

TEST(Adjacency, SymmetricIrreflexiveUnitDistance) {
  for (const auto& lat : {build_carpet(3, 1), build_carpet(2, 2), build_generalized({5, 3}, 2)}) {
    for (std::size_t i = 0; i < lat.size(); ++i)
      for (auto j : lat.neighbors(i)) {
        EXPECT_NE(i, j);
        const auto a = lat.coord(i), b = lat.coord(j);
        EXPECT_EQ(std::abs(a.x - b.x) + std::abs(a.y - b.y), 1);
        const auto back = lat.neighbors(j);
        EXPECT_NE(std::find(back.begin(), back.end(), i), back.end());
      }
    std::size_t degree_sum = 0;
    for (std::size_t i = 0; i < lat.size(); ++i) degree_sum += lat.neighbors(i).size();
    EXPECT_EQ(degree_sum, 2 * lat.bonds().size());
  }
}

TEST(Symmetry, QuarterTurnIsAutomorphism) {
  for (int n = 1; n <= 4; ++n) {
    const auto lat = build_carpet(n, 1);
    const int W = lat.width();
    std::set<std::pair<std::size_t, std::size_t>> edges(lat.bonds().begin(), lat.bonds().end());
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const auto c = lat.coord(i);
      ASSERT_TRUE(lat.contains({W - 1 - c.y, c.x}));
    }
    for (auto [i, j] : lat.bonds()) {
      const auto a = lat.coord(i), b = lat.coord(j);
      auto ri = *lat.index_of({W - 1 - a.y, a.x});
      auto rj = *lat.index_of({W - 1 - b.y, b.x});
      EXPECT_TRUE(edges.count({std::min(ri, rj), std::max(ri, rj)}));
    }
  }
}

TEST(Symmetry, LowerLeftBlockIsPreviousOrder) {
  for (int n = 1; n <= 4; ++n) {
    const auto big = build_carpet(n, 1);
    const int w = big.width() / 3;
    std::set<std::pair<int, int>> block;
    for (auto c : big.sites())
      if (c.x < w && c.y < w) block.insert({c.x, c.y});
    EXPECT_EQ(block, coords(build_carpet(n - 1, 1)));
  }
}

TEST(Boundary, OuterAndHoleFlags) {
  const auto lat = build_carpet(2, 1);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto c = lat.coord(i);
    EXPECT_EQ(lat.outer_boundary(i), c.x == 0 || c.y == 0 || c.x == 8 || c.y == 8);
  }
  EXPECT_TRUE(lat.hole_boundary(*lat.index_of({1, 0})));
  EXPECT_TRUE(lat.hole_boundary(*lat.index_of({2, 3})));
  EXPECT_FALSE(lat.hole_boundary(*lat.index_of({0, 0})));
}

TEST(Square, PeriodicWrap) {
  const auto p = build_square(4, true);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.neighbors(i).size(), 4u);
  EXPECT_EQ(p.bonds().size(), 32u);
  EXPECT_THROW(build_square(2, true), ValidationError);
}

TEST(Export, CsvIsDeterministic) {
  const auto lat = build_carpet(1, 1);
  std::ostringstream a, b;
  write_sites_csv(a, lat);
  write_bonds_csv(b, lat);
  EXPECT_EQ(a.str().substr(0, 41), "index,x,y,outer_boundary\n0,0,0,1\n1,1,0,1\n");
  EXPECT_EQ(b.str(), "i,j\n0,1\n0,3\n1,2\n2,4\n3,5\n4,7\n5,6\n6,7\n");
}
