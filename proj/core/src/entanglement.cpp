#include "fractent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

namespace {

constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

void check_hermitian(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols() || c.rows() == 0)
    throw ValidationError("entanglement_spectrum: correlation block must be square and nonempty");
  const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw ValidationError(
        fmt::format("entanglement_spectrum: correlation matrix not Hermitian (asymmetry {:.3g})", asym));
}

}  // namespace

double binary_entropy(double xi) {
  if (!std::isfinite(xi)) throw NumericalError("binary_entropy: non-finite argument");
  if (xi <= kXiClamp || xi >= 1.0 - kXiClamp) return 0.0;
  return -xi * std::log(xi) - (1.0 - xi) * std::log1p(-xi);
}

EntanglementSpectrum entanglement_spectrum(const CorrelationMatrix& c) {
  check_hermitian(c.block);
  EigenSystem eig = diagonalize(c.block, kNoLimit);
  EntanglementSpectrum s;
  s.raw_xi = eig.eigenvalues;
  s.xi = eig.eigenvalues.unaryExpr([](double x) { return std::clamp(x, kXiClamp, 1.0 - kXiClamp); });
  s.eh_levels = s.xi.unaryExpr([](double x) { return std::log(1.0 / x - 1.0); });
  s.schmidt_vectors = std::move(eig.eigenvectors);
  s.sites = c.sites;
  s.orbitals = c.orbitals;
  return s;
}

double entanglement_entropy(const EntanglementSpectrum& spec) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < spec.xi.size(); ++i) s += binary_entropy(spec.xi[i]);
  return s;
}

double entanglement_entropy(const CorrelationMatrix& c) {
  check_hermitian(c.block);
  const Eigen::VectorXd xi = symmetric_eigenvalues(c.block);
  double s = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) s += binary_entropy(std::clamp(xi[i], kXiClamp, 1.0 - kXiClamp));
  return s;
}

double ContourField::at_site(std::size_t site) const {
  const auto it = std::lower_bound(sites.begin(), sites.end(), site);
  if (it == sites.end() || *it != site)
    throw ValidationError(fmt::format("contour: site {} not in subsystem", site));
  return values[static_cast<std::size_t>(it - sites.begin())];
}

ContourField entanglement_contour(const EntanglementSpectrum& spec, double cluster_tol) {
  const Eigen::Index n = spec.xi.size();
  Eigen::VectorXd weight(n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && spec.xi[end] - spec.xi[end - 1] <= cluster_tol) ++end;
    double mean = 0.0;
    for (Eigen::Index k = start; k < end; ++k) mean += binary_entropy(spec.xi[k]);
    mean /= static_cast<double>(end - start);
    weight.segment(start, end - start).setConstant(mean);
    start = end;
  }
  const Eigen::VectorXd rows = spec.schmidt_vectors.cwiseAbs2() * weight;
  ContourField f;
  f.sites = spec.sites;
  f.values.assign(spec.sites.size(), 0.0);
  for (std::size_t a = 0; a < spec.sites.size(); ++a)
    for (int o = 0; o < spec.orbitals; ++o)
      f.values[a] += rows[static_cast<Eigen::Index>(a) * spec.orbitals + o];
  f.total = weight.sum();
  for (double v : f.values)
    if (!std::isfinite(v)) throw NumericalError("entanglement_contour: non-finite value");
  return f;
}

void write_contour_csv(std::ostream& os, const Lattice& lattice, const Partition& p,
                       const ContourField& contour) {
  os << "x,y,i_y,s\n";
  for (std::size_t a = 0; a < contour.sites.size(); ++a) {
    const auto site = contour.sites[a];
    const auto c = lattice.coord(site);
    os << c.x << ',' << c.y << ',' << p.iy.at(site) << ',' << fmt::format("{:.12g}", contour.values[a])
       << '\n';
  }
}

}  // namespace fractent
