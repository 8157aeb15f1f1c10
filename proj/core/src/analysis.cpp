#include "fractent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

std::string to_string(ScalingForm f) {
  return f == ScalingForm::kSuperArea ? "gapless-superarea" : "gapped-powerlaw";
}

std::vector<double> AlphaGrid::values() const {
  if (!(step > 0.0) || !(hi >= lo))
    throw ValidationError(fmt::format("alpha grid [{}, {}] step {} is invalid", lo, hi, step));
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v;
  for (long k = 0; k < n; ++k) v.push_back(lo + static_cast<double>(k) * step);
  return v;
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("ols: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw NumericalError("ols: regressor is constant");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  if (syy == 0.0)
    f.r_squared = ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  else
    f.r_squared = 1.0 - ss_res / syy;
  return f;
}

namespace {

FitResult grid_fit(const std::vector<double>& L, const std::vector<double>& y, ScalingForm form,
                   const AlphaGrid& grid) {
  if (L.size() < 3)
    throw ValidationError(fmt::format("scaling fit needs >= 3 usable points, got {}", L.size()));
  for (std::size_t i = 1; i < L.size(); ++i)
    if (!(L[i] > L[i - 1])) throw ValidationError("scaling series: L_A must be strictly increasing");
  FitResult best;
  best.form = form;
  best.r_squared = -std::numeric_limits<double>::infinity();
  const auto alphas = grid.values();
  std::size_t best_k = 0;
  std::vector<double> x(L.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    for (std::size_t i = 0; i < L.size(); ++i) x[i] = std::pow(L[i], alphas[k]);
    const auto f = ols(x, y);
    best.alpha_grid.emplace_back(alphas[k], f.r_squared);
    if (f.r_squared > best.r_squared) {
      best.r_squared = f.r_squared;
      best.alpha = alphas[k];
      best.a = f.slope;
      best.intercept = f.intercept;
      best_k = k;
    }
  }
  best.interior_maximum = best_k > 0 && best_k + 1 < alphas.size();
  best.unit_alpha = ols(L, y);
  return best;
}

}  // namespace

FitResult fit_superarea(const ScalingSeries& series, const AlphaGrid& grid) {
  std::vector<double> L, y;
  for (const auto& p : series.points) {
    if (p.L <= 1.0) continue;
    L.push_back(p.L);
    y.push_back(p.S / std::log(p.L));
  }
  return grid_fit(L, y, ScalingForm::kSuperArea, grid);
}

FitResult fit_powerlaw_ee(const ScalingSeries& series, const AlphaGrid& grid) {
  std::vector<double> L, y;
  for (const auto& p : series.points) {
    L.push_back(p.L);
    y.push_back(p.S);
  }
  return grid_fit(L, y, ScalingForm::kPowerLaw, grid);
}

std::vector<std::pair<int, double>> ContourProfiles::series(bool on_ef) const {
  std::vector<std::pair<int, double>> out;
  for (const auto& r : rows) {
    const auto& v = on_ef ? r.on_mean : r.off_mean;
    if (v) out.emplace_back(r.iy, *v);
  }
  return out;
}

namespace {

ContourProfiles build_profiles(const ContourField& contour, const Partition& p,
                               const std::vector<std::uint8_t>* ef) {
  if (contour.sites != p.a_sites)
    throw ValidationError("contour_profiles: contour does not cover the partition's subsystem");
  if (ef && ef->size() != p.mask.size())
    throw ValidationError("contour_profiles: EF mask size does not match lattice");
  struct Acc {
    double on = 0, off = 0;
    std::size_t n_on = 0, n_off = 0;
  };
  std::map<int, Acc> layers;
  for (std::size_t a = 0; a < contour.sites.size(); ++a) {
    const auto site = contour.sites[a];
    const int iy = p.iy[site];
    if (iy <= 0) continue;
    auto& acc = layers[iy];
    if (ef && (*ef)[site]) {
      acc.on += contour.values[a];
      ++acc.n_on;
    } else {
      acc.off += contour.values[a];
      ++acc.n_off;
    }
  }
  ContourProfiles out;
  out.L_A = p.L_A;
  for (const auto& [iy, acc] : layers) {
    ProfileEntry e;
    e.iy = iy;
    e.on_count = acc.n_on;
    e.off_count = acc.n_off;
    if (acc.n_on) e.on_mean = acc.on / static_cast<double>(acc.n_on);
    if (acc.n_off) e.off_mean = acc.off / static_cast<double>(acc.n_off);
    e.p = static_cast<double>(acc.n_on) / p.L_A;
    out.rows.push_back(e);
  }
  return out;
}

}  // namespace

ContourProfiles contour_profiles(const ContourField& contour, const Partition& p, const EFMask& ef) {
  return build_profiles(contour, p, &ef.mask);
}

ContourProfiles layer_profile(const ContourField& contour, const Partition& p) {
  return build_profiles(contour, p, nullptr);
}

ProfileFit fit_powerlaw_profile(std::span<const std::pair<int, double>> profile,
                                const ProfileWindow& window) {
  if (profile.empty()) throw ValidationError("fit_powerlaw_profile: empty profile");
  int max_iy = 0;
  for (const auto& [iy, v] : profile) max_iy = std::max(max_iy, iy);
  ProfileFit fit;
  fit.iy_lo = window.min_iy;
  fit.iy_hi = static_cast<int>(std::floor(window.keep_fraction * max_iy));
  std::vector<double> x, y;
  for (const auto& [iy, v] : profile) {
    if (iy < fit.iy_lo || iy > fit.iy_hi) continue;
    if (!(v > 0.0))
      throw NumericalError(fmt::format("fit_powerlaw_profile: nonpositive value {} at i_y = {}", v, iy));
    x.push_back(std::log(static_cast<double>(iy)));
    y.push_back(std::log(v));
  }
  fit.points = x.size();
  if (x.size() < 5)
    throw ValidationError(
        fmt::format("fit_powerlaw_profile: {} usable i_y points in [{}, {}], need 5", x.size(),
                    fit.iy_lo, fit.iy_hi));
  const auto f = ols(x, y);
  fit.beta = -f.slope;
  fit.r_squared = f.r_squared;
  return fit;
}

Reconstruction reconstruct_ee(const ContourProfiles& profiles, double true_entropy) {
  if (profiles.rows.empty()) throw ValidationError("reconstruct_ee: empty profile");
  Reconstruction r;
  double sum_on = 0.0;
  double weighted = 0.0;
  r.min_p = std::numeric_limits<double>::infinity();
  for (const auto& e : profiles.rows) {
    r.min_p = std::min(r.min_p, e.p);
    if (!e.on_mean) continue;
    sum_on += *e.on_mean;
    weighted += e.p * *e.on_mean;
  }
  r.value = profiles.L_A * weighted;
  r.upper = profiles.L_A * sum_on;
  r.lower = r.min_p * r.upper;
  r.ratio = true_entropy != 0.0 ? r.value / true_entropy : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double widom_U(const std::function<double(double)>& f, double tol) {
  const double f1 = f(1.0);
  if (!std::isfinite(f1)) throw NumericalError("widom_U: f(1) is not finite");
  auto g = [&](double t) {
    const double v = (f(t) - t * f1) / (t * (1.0 - t));
    if (!std::isfinite(v)) throw NumericalError(fmt::format("widom_U: integrand not finite at t = {}", t));
    return v;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0, l1 = 0.0;
  double value = 0.0;
  try {
    value = integrator.integrate(g, 0.0, 1.0, tol, &error, &l1);
  } catch (const NumericalError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(fmt::format("widom_U: quadrature failed: {}", e.what()));
  }
  if (!std::isfinite(value) || error > 1e3 * tol * std::max(1.0, l1))
    throw NumericalError(fmt::format("widom_U: quadrature did not converge (error estimate {:.3g})", error));
  return value;
}

ScalingSeries square_lattice_baseline(std::span<const int> sizes, const HoppingModel& model,
                                      const BaselineOptions& opts) {
  ScalingSeries s;
  s.form = model.kind == ModelKind::kH1 ? ScalingForm::kSuperArea : ScalingForm::kPowerLaw;
  for (int L : sizes) {
    const Lattice lat = build_square(L);
    auto eig = diagonalize(build_hamiltonian(lat, model), opts.dense_limit);
    apply_filling(eig, model, lat.size(), opts.filling);
    const Partition p = partition_IV(lat);
    const double S = entanglement_entropy(correlation_matrix(eig, p, model.orbitals()));
    s.points.push_back({static_cast<double>(L), S, 0});
  }
  return s;
}

void write_fit_report(std::ostream& os, const FitResult& fit) {
  os << "form = " << to_string(fit.form) << '\n'
     << fmt::format("alpha = {:.4f}\n", fit.alpha)
     << fmt::format("a = {:.10g}\n", fit.a)
     << fmt::format("intercept = {:.10g}\n", fit.intercept)
     << fmt::format("r_squared = {:.10g}\n", fit.r_squared)
     << fmt::format("interior_maximum = {}\n", fit.interior_maximum)
     << fmt::format("alpha1_slope = {:.10g}\n", fit.unit_alpha.slope)
     << fmt::format("alpha1_intercept = {:.10g}\n", fit.unit_alpha.intercept)
     << fmt::format("alpha1_r_squared = {:.10g}\n", fit.unit_alpha.r_squared);
}

void write_alpha_grid_csv(std::ostream& os, const FitResult& fit) {
  os << "alpha,r_squared\n";
  for (const auto& [a, r2] : fit.alpha_grid) os << fmt::format("{:.4f},{:.12g}\n", a, r2);
}

void write_profiles_csv(std::ostream& os, const ContourProfiles& profiles) {
  os << "iy,class,mean_s,count,p\n";
  for (const auto& e : profiles.rows) {
    if (e.on_mean)
      os << fmt::format("{},on,{:.12g},{},{:.10g}\n", e.iy, *e.on_mean, e.on_count, e.p);
    if (e.off_mean)
      os << fmt::format("{},off,{:.12g},{},{:.10g}\n", e.iy, *e.off_mean, e.off_count, e.p);
  }
}

void write_scaling_csv(std::ostream& os, const ScalingSeries& series) {
  os << "n,L_A,S_A\n";
  for (const auto& p : series.points) os << fmt::format("{},{:.10g},{:.12g}\n", p.order, p.L, p.S);
}

}  // namespace fractent
