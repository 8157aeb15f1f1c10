#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fractent/error.hpp"
#include "fractent/spectral.hpp"

using namespace fractent;

namespace {

std::vector<std::size_t> all_sites(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST(Occupy, DegenerateShellSharesRemainder) {
  const auto ring = build_carpet(1, 1);
  auto eig = diagonalize(build_h1(ring, 1.0, 0.0));
  occupy(eig, 4);
  EXPECT_NEAR(eig.particles(), 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(eig.occupations[0], 1.0);
  EXPECT_DOUBLE_EQ(eig.occupations[2], 1.0);
  EXPECT_DOUBLE_EQ(eig.occupations[3], 0.5);
  EXPECT_DOUBLE_EQ(eig.occupations[4], 0.5);
  EXPECT_DOUBLE_EQ(eig.occupations[5], 0.0);
  EXPECT_THROW(occupy(eig, 9), ValidationError);
}

TEST(Occupy, FermiLevelFillsZeroModes) {
  const auto ring = build_carpet(1, 1);
  auto eig = diagonalize(build_h1(ring, 1.0, 0.0));
  apply_filling(eig, HoppingModel::h1(), ring.size(), Filling::kFermiLevel);
  EXPECT_NEAR(eig.particles(), 5.0, 1e-12);
  apply_filling(eig, HoppingModel::h1(), ring.size(), Filling::kUniformFraction);
  EXPECT_NEAR(eig.particles(), 4.0, 1e-12);
  EXPECT_EQ(half_filling_count(HoppingModel::h2(), 10), 10u);
  EXPECT_EQ(half_filling_count(HoppingModel::h1(), 9), 4u);
}

TEST(Correlation, FullSystemIsProjector) {
  const auto lat = build_carpet(2, 1);
  auto eig = diagonalize(build_h1(lat, 1.0, 0.0));
  fill_to_level(eig, 0.0);
  const auto C = correlation_matrix(eig, all_sites(lat.size()), 1);
  EXPECT_TRUE(C.block.isApprox(C.block.transpose(), 1e-14));
  EXPECT_LT((C.block * C.block - C.block).norm(), 1e-10);
  EXPECT_NEAR(C.trace(), eig.particles(), 1e-10);
  occupy(eig, 32);
  const auto mixed = correlation_matrix(eig, all_sites(lat.size()), 1);
  EXPECT_NEAR(mixed.trace(), 32.0, 1e-10);
}

TEST(Correlation, TwoSiteDimer) {
  const auto sq = build_square(2);
  auto eig = diagonalize(build_h1(sq, 1.0, 0.0));
  occupy(eig, 1);
  const std::vector<std::size_t> one{0};
  const auto C = correlation_matrix(eig, one, 1);
  EXPECT_NEAR(C.block(0, 0), 0.25, 1e-12);
}

TEST(Correlation, TracesAddUp) {
  const auto lat = build_carpet(3, 1);
  auto eig = diagonalize(build_h1(lat, 1.0, 0.0));
  apply_filling(eig, HoppingModel::h1(), lat.size(), Filling::kFermiLevel);
  const auto p = partition_IV(lat);
  const auto CA = correlation_matrix(eig, p, 1);
  const auto CB = correlation_matrix(eig, p.b_sites, 1);
  EXPECT_NEAR(CA.trace() + CB.trace(), eig.particles(), 1e-9);
  const Eigen::VectorXd xi = symmetric_eigenvalues(CA.block);
  EXPECT_GT(xi.minCoeff(), -1e-10);
  EXPECT_LT(xi.maxCoeff(), 1 + 1e-10);
}

TEST(Correlation, OrbitalsGroupBySite) {
  const auto lat = build_carpet(1, 1);
  auto eig = diagonalize(build_h2(lat, 1.0, 0.5));
  apply_filling(eig, HoppingModel::h2(), lat.size(), Filling::kFermiLevel);
  EXPECT_NEAR(eig.particles(), 8.0, 1e-12);
  const std::vector<std::size_t> sites{0, 3};
  const auto C = correlation_matrix(eig, sites, 2);
  EXPECT_EQ(C.block.rows(), 4);
  const auto full = correlation_matrix(eig, all_sites(8), 2);
  EXPECT_NEAR(C.block(2, 3), full.block(6, 7), 1e-12);
}

TEST(Diagonalize, DenseLimit) {
  const auto lat = build_carpet(2, 1);
  EXPECT_THROW(diagonalize(build_h1(lat, 1.0, 0.0), 63), CapacityError);
  const auto eig = diagonalize(build_h1(lat, 1.0, 0.0), 64);
  const Eigen::MatrixXd vtv = eig.eigenvectors.transpose() * eig.eigenvectors;
  EXPECT_LT((vtv - Eigen::MatrixXd::Identity(64, 64)).norm(), 1e-10);
}

TEST(Dos, ExactHistogramIntegratesToOne) {
  const auto h = build_h1(build_carpet(3, 1), 1.0, 0.0);
  DosOptions o;
  o.bins = 65;
  const auto d = dos(h, o);
  EXPECT_NEAR(d.integral(), 1.0, 1e-12);
  EXPECT_EQ(d.density.size(), 65u);
  EXPECT_EQ(d.bin_edges.size(), 66u);
  for (double v : d.density) EXPECT_GE(v, 0.0);
}

TEST(Dos, ChebyshevAgreesWithExact) {
  // 21 bins: each bin spans about 16 Jackson kernel widths at 512 moments
  const auto h = build_h1(build_carpet(3, 1), 1.0, 0.0);
  DosOptions o;
  o.bins = 21;
  const auto exact = dos(h, o);
  o.method = DosMethod::kStochasticChebyshev;
  o.moments = 512;
  o.random_vectors = 50;
  o.seed = 7;
  const auto kpm = dos(h, o);
  EXPECT_EQ(kpm.bin_edges, exact.bin_edges);
  EXPECT_LT(dos_l1_distance(kpm, exact), 0.05);
  EXPECT_NEAR(kpm.integral(), 1.0, 1e-6);
  const auto again = dos(h, o);
  EXPECT_EQ(again.density, kpm.density);
}

TEST(Dos, ChebyshevSharpensWithMoments) {
  const auto h = build_h1(build_carpet(3, 1), 1.0, 0.0);
  DosOptions o;
  o.bins = 65;
  const auto exact = dos(h, o);
  o.method = DosMethod::kStochasticChebyshev;
  o.random_vectors = 100;
  double last = 1e9;
  for (int m : {128, 512, 2048}) {
    o.moments = m;
    const double d = dos_l1_distance(dos(h, o), exact);
    EXPECT_LT(d, last) << m;
    last = d;
  }
  EXPECT_LT(last, 0.08);
  o.moments = 16;
  EXPECT_THROW(dos(h, o), ValidationError);
}

TEST(Dos, GershgorinBoundsContainSpectrum) {
  const auto h = build_h2(build_carpet(2, 1), 1.0, 0.5);
  const auto [lo, hi] = spectral_bounds(h);
  const auto ev = eigenvalues_only(h);
  EXPECT_LE(lo, ev.minCoeff());
  EXPECT_GE(hi, ev.maxCoeff());
}

TEST(Dos, GappedSquareIsEmptyInGap) {
  const auto h = build_h2(build_square(24, true), 1.0, 0.5);
  DosOptions o;
  o.bins = 200;
  o.range = std::pair{-5.0, 5.0};
  const auto d = dos(h, o);
  const auto c = d.centers();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) < 0.45) EXPECT_EQ(d.density[i], 0.0) << c[i];
}

TEST(Gaps, LevelGapMergesDegeneracies) {
  const std::vector<double> v{-1.0, -1.0 + 1e-12, 0.0, 0.5, 2.5};
  EXPECT_NEAR(*max_level_gap(v), 2.0, 1e-12);
  const std::vector<double> one{1.0};
  EXPECT_FALSE(max_level_gap(one).has_value());
}

TEST(Gaps, H1ShrinksH2Persists) {
  const std::vector<int> orders{1, 2, 3};
  const auto g1 = gap_scaling(HoppingModel::h1(), orders);
  ASSERT_EQ(g1.max_gap.size(), 3u);
  EXPECT_GT(*g1.max_gap[0], *g1.max_gap[1]);
  EXPECT_GT(*g1.max_gap[1], *g1.max_gap[2]);
  const auto g2 = gap_scaling(HoppingModel::h2(), orders);
  for (const auto& g : g2.max_gap) EXPECT_GE(*g, 1.0 - 1e-9);
}
