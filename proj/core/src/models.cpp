#include "fractent/models.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

std::string to_string(ModelKind kind) { return kind == ModelKind::kH1 ? "H1" : "H2"; }

ModelKind parse_model_kind(const std::string& text) {
  if (text == "H1" || text == "h1") return ModelKind::kH1;
  if (text == "H2" || text == "h2") return ModelKind::kH2;
  throw ValidationError(fmt::format("model.kind: unknown model '{}' (expected H1 or H2)", text));
}

namespace {

void require_hopping(double t) {
  if (t == 0.0 || !std::isfinite(t))
    throw ValidationError(fmt::format("model.t: hopping must be finite and nonzero, got {}", t));
}

HamiltonianMatrix from_triplets(std::size_t dim, int orbitals,
                                const std::vector<Eigen::Triplet<double>>& trips) {
  HamiltonianMatrix h;
  h.orbitals = orbitals;
  h.entries.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.entries.setFromTriplets(trips.begin(), trips.end());
  h.entries.prune(0.0);
  h.entries.makeCompressed();
  return h;
}

}  // namespace

HamiltonianMatrix build_h1(const Lattice& lattice, double t, double mu) {
  require_hopping(t);
  std::vector<Eigen::Triplet<double>> trips;
  const std::size_t N = lattice.size();
  trips.reserve(N + 2 * lattice.bonds().size());
  for (std::size_t i = 0; i < N; ++i) {
    const auto r = static_cast<int>(i);
    trips.emplace_back(r, r, -mu);
  }
  for (auto [i, j] : lattice.bonds()) {
    trips.emplace_back(static_cast<int>(i), static_cast<int>(j), -t);
    trips.emplace_back(static_cast<int>(j), static_cast<int>(i), -t);
  }
  return from_triplets(N, 1, trips);
}

HamiltonianMatrix build_h2(const Lattice& lattice, double t, double t1) {
  require_hopping(t);
  std::vector<Eigen::Triplet<double>> trips;
  const std::size_t N = lattice.size();
  trips.reserve(2 * N + 4 * lattice.bonds().size());
  for (std::size_t i = 0; i < N; ++i) {
    const auto s = static_cast<int>(2 * i);
    trips.emplace_back(s, s + 1, t1);
    trips.emplace_back(s + 1, s, t1);
  }
  for (auto [i, j] : lattice.bonds()) {
    const auto a = static_cast<int>(2 * i);
    const auto b = static_cast<int>(2 * j);
    trips.emplace_back(a, b, t);
    trips.emplace_back(b, a, t);
    trips.emplace_back(a + 1, b + 1, -t);
    trips.emplace_back(b + 1, a + 1, -t);
  }
  return from_triplets(2 * N, 2, trips);
}

HamiltonianMatrix build_hamiltonian(const Lattice& lattice, const HoppingModel& model) {
  return model.kind == ModelKind::kH1 ? build_h1(lattice, model.t, model.mu)
                                      : build_h2(lattice, model.t, model.t1);
}

double dispersion_h1(double kx, double ky, double t, double mu) {
  return -2.0 * t * (std::cos(kx) + std::cos(ky)) - mu;
}

std::pair<double, double> dispersion_h2(double kx, double ky, double t, double t1) {
  const double c = std::cos(kx) + std::cos(ky);
  const double e = std::sqrt(4.0 * t * t * c * c + t1 * t1);
  return {-e, e};
}

void write_triplets(std::ostream& os, const HamiltonianMatrix& h) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> rm = h.entries;
  os << "row,col,value\n";
  for (Eigen::Index r = 0; r < rm.outerSize(); ++r)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it)
      os << it.row() << ',' << it.col() << ',' << fmt::format("{:.17g}", it.value()) << '\n';
}

}  // namespace fractent
