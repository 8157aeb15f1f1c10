#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fractent/entanglement.hpp"
#include "fractent/error.hpp"

using namespace fractent;

namespace {

CorrelationMatrix make_c(Eigen::MatrixXd block, int orbitals = 1) {
  CorrelationMatrix c;
  c.orbitals = orbitals;
  for (Eigen::Index i = 0; i < block.rows() / orbitals; ++i) c.sites.push_back(static_cast<std::size_t>(i));
  c.block = std::move(block);
  return c;
}

double h(double x) {
  if (x <= 0 || x >= 1) return 0;
  return -x * std::log(x) - (1 - x) * std::log(1 - x);
}

// diag of h(C) through an independent eigensolver
Eigen::VectorXd entropy_diag(const Eigen::MatrixXd& C) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  Eigen::VectorXd f = es.eigenvalues().unaryExpr([](double x) { return h(x); });
  return (es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose()).diagonal();
}

struct Ground {
  Lattice lat;
  EigenSystem eig;
  Partition p;
};

Ground ground(Lattice lat, const HoppingModel& m, PartitionKind kind) {
  auto eig = diagonalize(build_hamiltonian(lat, m));
  apply_filling(eig, m, lat.size(), Filling::kFermiLevel);
  auto p = builtin_partition(lat, kind);
  return {std::move(lat), std::move(eig), std::move(p)};
}

}  // namespace

TEST(Spectrum, HalfOccupiedModeIsMaximal) {
  const auto s = entanglement_spectrum(make_c(Eigen::MatrixXd::Constant(1, 1, 0.5)));
  EXPECT_NEAR(s.eh_levels[0], 0.0, 1e-14);
  EXPECT_NEAR(entanglement_entropy(s), std::log(2.0), 1e-14);
}

TEST(Spectrum, LevelFromOccupation) {
  const double xi = 1.0 / (1.0 + std::exp(1.0));
  const auto s = entanglement_spectrum(make_c(Eigen::MatrixXd::Constant(1, 1, xi)));
  EXPECT_NEAR(s.eh_levels[0], 1.0, 1e-12);
}

TEST(Spectrum, ClampsPureModes) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = -1e-15;
  const auto s = entanglement_spectrum(make_c(c));
  EXPECT_GE(s.xi.minCoeff(), kXiClamp);
  EXPECT_LE(s.xi.maxCoeff(), 1 - kXiClamp);
  EXPECT_TRUE(std::isfinite(s.eh_levels[0]));
  EXPECT_EQ(entanglement_entropy(s), 0.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.3), h(0.3), 1e-15);
}

TEST(Spectrum, RejectsNonHermitian) {
  Eigen::MatrixXd c(2, 2);
  c << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(entanglement_spectrum(make_c(c)), ValidationError);
}

TEST(Entropy, DimerBondGivesLog2) {
  const auto g = ground(build_square(2), HoppingModel::h1(), PartitionKind::kIV);
  // 4-ring at fermi level: 3 particles, A = bottom row
  const auto C = correlation_matrix(g.eig, g.p, 1);
  const double S = entanglement_entropy(C);
  EXPECT_NEAR(S, entropy_diag(C.block).sum(), 1e-12);
  EXPECT_GT(S, 0.0);
}

TEST(Entropy, PureStateSymmetry) {
  for (auto kind : {PartitionKind::kI, PartitionKind::kII, PartitionKind::kIII, PartitionKind::kIV}) {
    const auto g = ground(build_carpet(3, 1), HoppingModel::h1(), kind);
    const double SA = entanglement_entropy(correlation_matrix(g.eig, g.p, 1));
    const double SB = entanglement_entropy(correlation_matrix(g.eig, g.p.b_sites, 1));
    EXPECT_NEAR(SA, SB, 1e-8) << to_string(kind);
  }
}

TEST(Contour, EqualsDiagonalOfEntropyFunction) {
  const auto g = ground(build_carpet(2, 1), HoppingModel::h1(), PartitionKind::kIV);
  const auto C = correlation_matrix(g.eig, g.p, 1);
  const auto s = entanglement_spectrum(C);
  const auto c = entanglement_contour(s);
  const auto ref = entropy_diag(C.block);
  ASSERT_EQ(c.values.size(), static_cast<std::size_t>(ref.size()));
  for (std::size_t i = 0; i < c.values.size(); ++i) EXPECT_NEAR(c.values[i], ref[static_cast<Eigen::Index>(i)], 1e-9);
  EXPECT_NEAR(c.total, entanglement_entropy(s), 1e-10);
}

TEST(Contour, InvariantUnderDegenerateRemixing) {
  // C with a doubly degenerate eigenvalue built in a rotated basis
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(3, 3);
  const double th = 0.37;
  Q(0, 0) = std::cos(th);
  Q(0, 1) = -std::sin(th);
  Q(1, 0) = std::sin(th);
  Q(1, 1) = std::cos(th);
  Eigen::Vector3d d(0.3, 0.3, 0.8);
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(3, 3);
  R(1, 1) = std::cos(1.1);
  R(1, 2) = -std::sin(1.1);
  R(2, 1) = std::sin(1.1);
  R(2, 2) = std::cos(1.1);
  const Eigen::MatrixXd V = R * Q;
  const Eigen::MatrixXd C = V * d.asDiagonal() * V.transpose();
  const auto c = entanglement_contour(entanglement_spectrum(make_c(C)));
  const auto ref = entropy_diag(C);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(c.values[static_cast<std::size_t>(i)], ref[i], 1e-10);
}

TEST(Contour, NonNegativeAndSumsOverOrbitals) {
  const auto g = ground(build_carpet(2, 1), HoppingModel::h2(), PartitionKind::kIV);
  const auto C = correlation_matrix(g.eig, g.p, 2);
  const auto s = entanglement_spectrum(C);
  const auto c = entanglement_contour(s);
  EXPECT_EQ(c.values.size(), g.p.a_sites.size());
  const auto ref = entropy_diag(C.block);
  for (std::size_t k = 0; k < c.values.size(); ++k) {
    EXPECT_GE(c.values[k], 0.0);
    EXPECT_NEAR(c.values[k], ref[2 * static_cast<Eigen::Index>(k)] + ref[2 * static_cast<Eigen::Index>(k) + 1], 1e-9);
  }
  EXPECT_NEAR(c.total, entanglement_entropy(s), 1e-10);
}

TEST(Contour, GappedModelLocalizesAtInterface) {
  const auto g = ground(build_carpet(3, 1), HoppingModel::h2(), PartitionKind::kIV);
  const auto c = entanglement_contour(entanglement_spectrum(correlation_matrix(g.eig, g.p, 2)));
  double near = 1e300, far = 0;
  for (std::size_t k = 0; k < c.sites.size(); ++k) {
    const int iy = g.p.iy[c.sites[k]];
    if (iy == 1) near = std::min(near, c.values[k]);
    if (iy >= 5) far = std::max(far, c.values[k]);
  }
  EXPECT_GT(near, far);
}

TEST(Contour, CsvColumns) {
  const auto g = ground(build_carpet(1, 1), HoppingModel::h1(), PartitionKind::kIV);
  const auto c = entanglement_contour(entanglement_spectrum(correlation_matrix(g.eig, g.p, 1)));
  std::ostringstream os;
  write_contour_csv(os, g.lat, g.p, c);
  EXPECT_EQ(os.str().substr(0, 9), "x,y,i_y,s");
  EXPECT_NEAR(c.at_site(g.p.a_sites.front()), c.values.front(), 0.0);
}
