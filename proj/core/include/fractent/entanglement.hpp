#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "fractent/lattice.hpp"
#include "fractent/partition.hpp"
#include "fractent/spectral.hpp"

namespace fractent {

inline constexpr double kXiClamp = 1e-12;
inline constexpr double kClusterTol = 1e-10;

struct EntanglementSpectrum {
  Eigen::VectorXd raw_xi;           // eigenvalues of C before clamping, ascending
  Eigen::VectorXd xi;               // clamped to [delta, 1 - delta]
  Eigen::VectorXd eh_levels;        // log(1/xi - 1), descending as xi ascends
  Eigen::MatrixXd schmidt_vectors;  // columns, rows follow the correlation block
  std::vector<std::size_t> sites;
  int orbitals = 1;
};

EntanglementSpectrum entanglement_spectrum(const CorrelationMatrix& c);

/// -x ln x - (1-x) ln(1-x); values within the clamp of 0 or 1 count as pure.
double binary_entropy(double xi);
double entanglement_entropy(const EntanglementSpectrum& spec);
/// Entropy straight from C without keeping vectors.
double entanglement_entropy(const CorrelationMatrix& c);

struct ContourField {
  std::vector<std::size_t> sites;  // lattice sites of A, ascending
  std::vector<double> values;
  double total = 0.0;

  double at_site(std::size_t site) const;
};

/// Per-site weights of each degenerate xi cluster's projector times the cluster entropy.
ContourField entanglement_contour(const EntanglementSpectrum& spec,
                                  double cluster_tol = kClusterTol);

/// `x,y,i_y,s`
void write_contour_csv(std::ostream& os, const Lattice& lattice, const Partition& p,
                       const ContourField& contour);

}  // namespace fractent
