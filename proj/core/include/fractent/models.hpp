#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fractent/lattice.hpp"

namespace fractent {

enum class ModelKind { kH1, kH2 };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct HoppingModel {
  ModelKind kind = ModelKind::kH1;
  double t = 1.0;
  double mu = 0.0;   // H1 only
  double t1 = 0.5;   // H2 only

  static HoppingModel h1(double t = 1.0, double mu = 0.0) { return {ModelKind::kH1, t, mu, 0.5}; }
  static HoppingModel h2(double t = 1.0, double t1 = 0.5) { return {ModelKind::kH2, t, 0.0, t1}; }
  int orbitals() const { return kind == ModelKind::kH1 ? 1 : 2; }
};

/// Real symmetric Hamiltonian held as sparse triplets; row = orbitals*site + orbital.
struct HamiltonianMatrix {
  Eigen::SparseMatrix<double> entries;
  int orbitals = 1;

  std::size_t dimension() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t row(std::size_t site, int orbital) const {
    return static_cast<std::size_t>(orbitals) * site + static_cast<std::size_t>(orbital);
  }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries); }
};

HamiltonianMatrix build_h1(const Lattice& lattice, double t, double mu);
HamiltonianMatrix build_h2(const Lattice& lattice, double t, double t1);
HamiltonianMatrix build_hamiltonian(const Lattice& lattice, const HoppingModel& model);

double dispersion_h1(double kx, double ky, double t, double mu);
/// Lower and upper branch (E-, E+).
std::pair<double, double> dispersion_h2(double kx, double ky, double t, double t1);

/// `row,col,value` triplets, row-major, 1-to-1 with stored nonzeros.
void write_triplets(std::ostream& os, const HamiltonianMatrix& h);

}  // namespace fractent
