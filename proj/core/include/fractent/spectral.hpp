#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractent/models.hpp"
#include "fractent/partition.hpp"

namespace fractent {

inline constexpr std::size_t kDefaultDenseLimit = 10000;
inline constexpr double kDegeneracyTol = 1e-10;
inline constexpr double kGapMergeTol = 1e-9;

struct EigenSystem {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // one column per eigenvalue
  Eigen::VectorXd occupations;   // empty until a filling is applied
  std::size_t fermi_index = 0;   // states with nonzero occupation

  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }
  bool occupied() const { return occupations.size() == eigenvalues.size(); }
  double particles() const { return occupations.sum(); }
};

/// Full dense spectrum (LAPACK divide and conquer).
EigenSystem diagonalize(const HamiltonianMatrix& h, std::size_t dense_limit = kDefaultDenseLimit);
EigenSystem diagonalize(Eigen::MatrixXd symmetric, std::size_t dense_limit = kDefaultDenseLimit);
Eigen::VectorXd eigenvalues_only(const HamiltonianMatrix& h,
                                 std::size_t dense_limit = kDefaultDenseLimit);
/// Ascending eigenvalues of a dense symmetric matrix, no size limit.
Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd symmetric);

enum class Filling {
  kFermiLevel,       // every state with E <= E_F occupied, integer occupations
  kUniformFraction,  // exactly n particles, degenerate Fermi multiplet shares the remainder
};

std::string to_string(Filling f);
Filling parse_filling(const std::string& text);

/// n_particles states; a degenerate multiplet straddling the boundary gets
/// uniform fractional occupancy.
void occupy(EigenSystem& eig, std::size_t n_particles, double degeneracy_tol = kDegeneracyTol);
/// All states with E <= fermi_energy + tol.
void fill_to_level(EigenSystem& eig, double fermi_energy, double tol = kGapMergeTol);
/// Half filling for H1 (floor(N/2)), lower band for H2 (N of 2N).
std::size_t half_filling_count(const HoppingModel& model, std::size_t sites);
/// Default filling at zero energy for the given convention.
void apply_filling(EigenSystem& eig, const HoppingModel& model, std::size_t sites, Filling filling);

struct CorrelationMatrix {
  Eigen::MatrixXd block;
  std::vector<std::size_t> sites;  // lattice site of each block row group
  int orbitals = 1;
  std::string source;

  double trace() const { return block.trace(); }
};

/// C[a,b] = sum_k occ_k psi_k(a) psi_k(b) over the orbitals of the given sites.
CorrelationMatrix correlation_matrix(const EigenSystem& eig, std::span<const std::size_t> sites,
                                     int orbitals);
CorrelationMatrix correlation_matrix(const EigenSystem& eig, const Partition& p, int orbitals);

enum class DosMethod { kExactHistogram, kStochasticChebyshev };

std::string to_string(DosMethod m);
DosMethod parse_dos_method(const std::string& text);

struct DosHistogram {
  std::vector<double> bin_edges;
  std::vector<double> density;
  DosMethod method = DosMethod::kExactHistogram;
  std::vector<double> moments;

  std::vector<double> centers() const;
  double integral() const;
};

struct DosOptions {
  DosMethod method = DosMethod::kExactHistogram;
  int bins = 201;
  int moments = 512;
  int random_vectors = 50;
  std::uint64_t seed = 1;
  std::optional<std::pair<double, double>> range;
  std::size_t dense_limit = kDefaultDenseLimit;
};

/// Gershgorin bounds of the spectrum.
std::pair<double, double> spectral_bounds(const HamiltonianMatrix& h);
DosHistogram dos(const HamiltonianMatrix& h, const DosOptions& opts);
DosHistogram dos_histogram(std::span<const double> eigenvalues, int bins, double lo, double hi);
/// Sum of |bin mass difference|; both histograms must share edges.
double dos_l1_distance(const DosHistogram& a, const DosHistogram& b);
void write_dos_csv(std::ostream& os, const DosHistogram& d);

struct GapScaling {
  std::vector<int> orders;
  std::vector<std::optional<double>> max_gap;
};

/// Largest consecutive spacing ignoring splittings below merge_tol; empty for < 2 levels.
std::optional<double> max_level_gap(std::span<const double> sorted, double merge_tol = kGapMergeTol);
GapScaling gap_scaling(const HoppingModel& model, std::span<const int> orders,
                       std::size_t dense_limit = kDefaultDenseLimit);
void write_gaps_csv(std::ostream& os, const GapScaling& g);

}  // namespace fractent
