#include "fractent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <cblas.h>
#include <lapacke.h>

#include "fractent/error.hpp"

namespace fractent {

namespace {

void check_dense_limit(std::size_t dim, std::size_t limit) {
  if (dim > limit)
    throw CapacityError(
        fmt::format("dense eigensolver: dimension {} exceeds limit {}", dim, limit));
}

void check_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols())
    throw ValidationError(fmt::format("diagonalize: matrix is {}x{}, not square", a.rows(), a.cols()));
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw ValidationError(fmt::format("diagonalize: matrix not symmetric (max |A - A^T| = {:.3g})", asym));
}

Eigen::VectorXd run_dsyevd(Eigen::MatrixXd& a, char jobz) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(a.rows());
  if (n == 0) return w;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, w.data());
  if (info != 0)
    throw NumericalError(fmt::format("dsyevd failed with info = {}", static_cast<int>(info)));
  if (!w.allFinite()) throw NumericalError("eigensolver produced non-finite eigenvalues");
  return w;
}

}  // namespace

EigenSystem diagonalize(Eigen::MatrixXd symmetric, std::size_t dense_limit) {
  check_dense_limit(static_cast<std::size_t>(symmetric.rows()), dense_limit);
  check_symmetric(symmetric);
  EigenSystem eig;
  eig.eigenvalues = run_dsyevd(symmetric, 'V');
  eig.eigenvectors = std::move(symmetric);
  return eig;
}

EigenSystem diagonalize(const HamiltonianMatrix& h, std::size_t dense_limit) {
  check_dense_limit(h.dimension(), dense_limit);
  return diagonalize(h.dense(), dense_limit);
}

Eigen::VectorXd eigenvalues_only(const HamiltonianMatrix& h, std::size_t dense_limit) {
  check_dense_limit(h.dimension(), dense_limit);
  Eigen::MatrixXd a = h.dense();
  check_symmetric(a);
  return run_dsyevd(a, 'N');
}

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd symmetric) {
  check_symmetric(symmetric);
  return run_dsyevd(symmetric, 'N');
}

std::string to_string(Filling f) {
  return f == Filling::kFermiLevel ? "fermi-level" : "uniform-fraction";
}

Filling parse_filling(const std::string& text) {
  if (text == "fermi-level") return Filling::kFermiLevel;
  if (text == "uniform-fraction") return Filling::kUniformFraction;
  throw ValidationError(
      fmt::format("model.filling: unknown filling '{}' (expected fermi-level or uniform-fraction)", text));
}

void occupy(EigenSystem& eig, std::size_t n_particles, double degeneracy_tol) {
  const std::size_t dim = eig.dimension();
  if (n_particles > dim)
    throw ValidationError(fmt::format("occupy: {} particles exceed dimension {}", n_particles, dim));
  eig.occupations = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  eig.fermi_index = n_particles;
  if (n_particles == 0 || n_particles == dim) {
    eig.occupations.head(static_cast<Eigen::Index>(n_particles)).setOnes();
    return;
  }
  const auto& e = eig.eigenvalues;
  auto lo = static_cast<Eigen::Index>(n_particles) - 1;
  auto hi = static_cast<Eigen::Index>(n_particles);
  if (e[hi] - e[lo] > degeneracy_tol) {
    eig.occupations.head(hi).setOnes();
    return;
  }
  while (lo > 0 && e[lo] - e[lo - 1] <= degeneracy_tol) --lo;
  while (hi + 1 < e.size() && e[hi + 1] - e[hi] <= degeneracy_tol) ++hi;
  eig.occupations.head(lo).setOnes();
  const double share = static_cast<double>(static_cast<Eigen::Index>(n_particles) - lo) /
                       static_cast<double>(hi - lo + 1);
  eig.occupations.segment(lo, hi - lo + 1).setConstant(share);
  eig.fermi_index = static_cast<std::size_t>(hi + 1);
}

void fill_to_level(EigenSystem& eig, double fermi_energy, double tol) {
  const auto dim = eig.eigenvalues.size();
  eig.occupations = Eigen::VectorXd::Zero(dim);
  Eigen::Index k = 0;
  while (k < dim && eig.eigenvalues[k] <= fermi_energy + tol) ++k;
  eig.occupations.head(k).setOnes();
  eig.fermi_index = static_cast<std::size_t>(k);
}

std::size_t half_filling_count(const HoppingModel& model, std::size_t sites) {
  return model.kind == ModelKind::kH1 ? sites / 2 : sites;
}

void apply_filling(EigenSystem& eig, const HoppingModel& model, std::size_t sites, Filling filling) {
  if (filling == Filling::kFermiLevel)
    fill_to_level(eig, 0.0);
  else
    occupy(eig, half_filling_count(model, sites));
}

CorrelationMatrix correlation_matrix(const EigenSystem& eig, std::span<const std::size_t> sites,
                                     int orbitals) {
  if (!eig.occupied()) throw ValidationError("correlation_matrix: eigensystem has no filling");
  if (sites.empty()) throw ValidationError("correlation_matrix: empty subsystem");
  const auto rows = static_cast<Eigen::Index>(sites.size() * static_cast<std::size_t>(orbitals));
  const auto f = static_cast<Eigen::Index>(eig.fermi_index);
  Eigen::MatrixXd w(rows, f);
  for (std::size_t a = 0; a < sites.size(); ++a)
    for (int o = 0; o < orbitals; ++o) {
      const auto src = static_cast<Eigen::Index>(sites[a] * static_cast<std::size_t>(orbitals) +
                                                 static_cast<std::size_t>(o));
      if (src >= eig.eigenvectors.rows())
        throw ValidationError("correlation_matrix: site outside eigensystem");
      w.row(static_cast<Eigen::Index>(a) * orbitals + o) = eig.eigenvectors.row(src).head(f);
    }
  w *= eig.occupations.head(f).cwiseSqrt().asDiagonal();
  CorrelationMatrix c;
  c.block = Eigen::MatrixXd::Zero(rows, rows);
  if (f > 0)
    cblas_dsyrk(CblasColMajor, CblasLower, CblasNoTrans, static_cast<blasint>(rows), static_cast<blasint>(f), 1.0,
                w.data(), static_cast<blasint>(rows), 0.0, c.block.data(), static_cast<blasint>(rows));
  c.block = c.block.selfadjointView<Eigen::Lower>();
  c.sites.assign(sites.begin(), sites.end());
  c.orbitals = orbitals;
  return c;
}

CorrelationMatrix correlation_matrix(const EigenSystem& eig, const Partition& p, int orbitals) {
  auto c = correlation_matrix(eig, p.a_sites, orbitals);
  c.source = fmt::format("partition={}", to_string(p.kind));
  return c;
}

std::optional<double> max_level_gap(std::span<const double> sorted, double merge_tol) {
  std::optional<double> best;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i] - sorted[i - 1];
    if (d < merge_tol) continue;
    if (!best || d > *best) best = d;
  }
  return best;
}

GapScaling gap_scaling(const HoppingModel& model, std::span<const int> orders,
                       std::size_t dense_limit) {
  GapScaling g;
  for (int n : orders) {
    const Lattice lat = build_carpet(n, 1);
    const auto ev = eigenvalues_only(build_hamiltonian(lat, model), dense_limit);
    g.orders.push_back(n);
    g.max_gap.push_back(max_level_gap({ev.data(), static_cast<std::size_t>(ev.size())}));
  }
  return g;
}

void write_gaps_csv(std::ostream& os, const GapScaling& g) {
  os << "n,max_gap\n";
  for (std::size_t i = 0; i < g.orders.size(); ++i)
    os << g.orders[i] << ',' << (g.max_gap[i] ? fmt::format("{:.12g}", *g.max_gap[i]) : "nan")
       << '\n';
}

}  // namespace fractent
