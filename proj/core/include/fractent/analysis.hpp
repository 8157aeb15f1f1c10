#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fractent/efractal.hpp"
#include "fractent/entanglement.hpp"
#include "fractent/models.hpp"
#include "fractent/partition.hpp"
#include "fractent/spectral.hpp"

namespace fractent {

enum class ScalingForm { kSuperArea, kPowerLaw };

std::string to_string(ScalingForm f);

struct ScalingPoint {
  double L = 0.0;
  double S = 0.0;
  int order = 0;
};

struct ScalingSeries {
  std::vector<ScalingPoint> points;
  ScalingForm form = ScalingForm::kSuperArea;
};

struct AlphaGrid {
  double lo = 0.3;
  double hi = 1.5;
  double step = 0.01;
  std::vector<double> values() const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit ols(std::span<const double> x, std::span<const double> y);

struct FitResult {
  ScalingForm form = ScalingForm::kSuperArea;
  double alpha = 0.0;
  double a = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  LinearFit unit_alpha;  // the alpha = 1 fit
  std::vector<std::pair<double, double>> alpha_grid;  // (alpha, R^2)
  bool interior_maximum = false;
};

/// S / ln L = a L^alpha + c over the grid; L = 1 points are dropped.
FitResult fit_superarea(const ScalingSeries& series, const AlphaGrid& grid = {});
/// S = a L^alpha + c over the grid.
FitResult fit_powerlaw_ee(const ScalingSeries& series, const AlphaGrid& grid = {});

struct ProfileEntry {
  int iy = 0;
  std::optional<double> on_mean;
  std::size_t on_count = 0;
  std::optional<double> off_mean;
  std::size_t off_count = 0;
  double p = 0.0;  // on_count / L_A
};

struct ContourProfiles {
  std::vector<ProfileEntry> rows;  // ascending i_y
  double L_A = 0.0;

  /// (i_y, mean) pairs for one class, skipping empty layers.
  std::vector<std::pair<int, double>> series(bool on_ef) const;
};

/// Layer means of s at fixed i_y; sites with i_y <= 0 are ignored.
ContourProfiles contour_profiles(const ContourField& contour, const Partition& p, const EFMask& ef);
/// Same, with no EF split: every A site in the off class.
ContourProfiles layer_profile(const ContourField& contour, const Partition& p);

struct ProfileWindow {
  int min_iy = 2;
  double keep_fraction = 0.9;  // drop i_y above floor(keep_fraction * max i_y)
};

struct ProfileFit {
  double beta = 0.0;
  double r_squared = 0.0;
  int iy_lo = 0;
  int iy_hi = 0;
  std::size_t points = 0;
};

/// OLS of ln s against ln i_y inside the window, beta = -slope.
ProfileFit fit_powerlaw_profile(std::span<const std::pair<int, double>> profile,
                                const ProfileWindow& window = {});

struct Reconstruction {
  double value = 0.0;   // L_A sum p s_on
  double ratio = 0.0;   // value / true S_A
  double min_p = 0.0;
  double lower = 0.0;   // min_p L_A sum s_on
  double upper = 0.0;   // L_A sum s_on
};

Reconstruction reconstruct_ee(const ContourProfiles& profiles, double true_entropy);

/// U(f) = int_0^1 (f(t) - t f(1)) / (t (1 - t)) dt by tanh-sinh quadrature.
double widom_U(const std::function<double(double)>& f, double tol = 1e-10);

struct BaselineOptions {
  Filling filling = Filling::kFermiLevel;
  std::size_t dense_limit = kDefaultDenseLimit;
};

/// Open L x L square lattices, half cut, S_A per L.
ScalingSeries square_lattice_baseline(std::span<const int> sizes, const HoppingModel& model,
                                      const BaselineOptions& opts = {});

void write_fit_report(std::ostream& os, const FitResult& fit);
void write_alpha_grid_csv(std::ostream& os, const FitResult& fit);
void write_profiles_csv(std::ostream& os, const ContourProfiles& profiles);
void write_scaling_csv(std::ostream& os, const ScalingSeries& series);

}  // namespace fractent
