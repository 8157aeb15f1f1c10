#include "fractent/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "fractent/analysis.hpp"
#include "fractent/efractal.hpp"
#include "fractent/entanglement.hpp"
#include "fractent/error.hpp"
#include "fractent/io.hpp"

namespace fractent {

namespace {

struct Instance {
  std::string label;
  int order = 0;
  Lattice lattice;
};

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void put(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    std::lock_guard lock(mu_);
    hashes_[name] = sha256_hex(content);
  }
  template <class Fn>
  void put_stream(const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    put(name, os.str());
  }
  const std::map<std::string, std::string>& hashes() const { return hashes_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, std::string> hashes_;
};

std::vector<Instance> make_instances(const RunConfig& cfg) {
  std::vector<Instance> out;
  if (cfg.lattice == LatticeKind::kSquare) {
    for (int L : cfg.sizes)
      out.push_back({fmt::format("L{}", L), L, build_square(L, cfg.periodic, cfg.site_limit)});
    return out;
  }
  for (int n : cfg.orders) {
    Lattice lat = cfg.lattice == LatticeKind::kCarpet
                      ? build_carpet(n, cfg.s, cfg.site_limit)
                      : build_generalized(IterationRule(cfg.m, cfg.m_f), n, cfg.site_limit);
    out.push_back({fmt::format("n{}", n), n, std::move(lat)});
  }
  return out;
}

Partition make_partition(const RunConfig& cfg, const Lattice& lat) {
  if (cfg.partition == PartitionKind::kCustom) return partition_from_mask_file(lat, cfg.mask_path);
  return builtin_partition(lat, cfg.partition);
}

std::string fixed(double v) { return std::isfinite(v) ? fmt::format("{:.12g}", v) : std::string("nan"); }

struct InstanceResult {
  bool has_ee = false;
  int order = 0;
  double L_A = 0, S_A = 0, S_B = 0, tr_A = 0, tr_B = 0, particles = 0;
  std::size_t nb = 0, nb_cut = 0;
  std::vector<std::string> summary;
};

std::vector<std::optional<double>> site_values(const Lattice& lat, const ContourField& f) {
  std::vector<std::optional<double>> v(lat.size());
  for (std::size_t a = 0; a < f.sites.size(); ++a) v[f.sites[a]] = f.values[a];
  return v;
}

void profile_outputs(const RunConfig& cfg, const Instance& inst, const ContourField& contour,
                     const Partition& p, const EFMask& ef, Outputs& out, InstanceResult& res) {
  const auto profiles = contour_profiles(contour, p, ef);
  out.put_stream(fmt::format("profiles_{}.csv", inst.label),
                 [&](std::ostream& os) { write_profiles_csv(os, profiles); });
  std::string report;
  std::optional<ProfileFit> on, off;
  for (bool is_on : {true, false}) {
    const auto series = profiles.series(is_on);
    const char* cls = is_on ? "on" : "off";
    try {
      const auto fit = fit_powerlaw_profile(series, cfg.window);
      (is_on ? on : off) = fit;
      report += fmt::format("beta_{} = {:.6f}\nr_squared_{} = {:.6f}\nwindow_{} = {}..{}\npoints_{} = {}\n", cls,
                            fit.beta, cls, fit.r_squared, cls, fit.iy_lo, fit.iy_hi, cls, fit.points);
    } catch (const ValidationError& e) {
      report += fmt::format("beta_{} = nan\nfit_{}_note = {}\n", cls, cls, e.what());
    }
  }
  if (on && off) {
    const bool ordered = off->beta - on->beta >= 1.0;
    report += fmt::format("ordering_off_minus_on_ge_1 = {}\n", ordered);
    res.summary.push_back(fmt::format("{}: beta_on = {:.3f}, beta_off = {:.3f}", inst.label, on->beta, off->beta));
  }
  const auto rec = reconstruct_ee(profiles, contour.total);
  report += fmt::format("reconstruction = {:.12g}\nreconstruction_ratio = {:.12g}\nmin_p = {:.12g}\n"
                        "bracket_lower = {:.12g}\nbracket_upper = {:.12g}\nS_A = {:.12g}\n",
                        rec.value, rec.ratio, rec.min_p, rec.lower, rec.upper, contour.total);
  out.put(fmt::format("profile_fit_{}.txt", inst.label), report);

  std::vector<PlotSeries> plot;
  for (bool is_on : {true, false}) {
    PlotSeries s;
    s.color = is_on ? Rgb{30, 90, 200} : Rgb{230, 160, 20};
    for (const auto& [iy, v] : profiles.series(is_on)) {
      s.x.push_back(iy);
      s.y.push_back(v);
    }
    plot.push_back(std::move(s));
  }
  out.put(fmt::format("profiles_{}.ppm", inst.label), render_plot(plot, true, true).to_ppm());
}

InstanceResult process(const RunConfig& cfg, const Instance& inst, Outputs& out) {
  InstanceResult res;
  res.order = inst.order;
  const Lattice& lat = inst.lattice;
  const bool need_eig = cfg.has(Task::kEe) || cfg.has(Task::kContour);
  const int orbitals = cfg.model.orbitals();

  std::optional<Partition> part;
  std::optional<ContourField> contour;
  if (need_eig) {
    part = make_partition(cfg, lat);
    auto eig = diagonalize(build_hamiltonian(lat, cfg.model), cfg.dense_limit);
    apply_filling(eig, cfg.model, lat.size(), cfg.filling);
    const auto cA = correlation_matrix(eig, *part, orbitals);
    if (cfg.has(Task::kEe)) {
      const auto cB = correlation_matrix(eig, part->b_sites, orbitals);
      res.has_ee = true;
      res.L_A = part->L_A;
      res.S_A = entanglement_entropy(cA);
      res.S_B = entanglement_entropy(cB);
      res.tr_A = cA.trace();
      res.tr_B = cB.trace();
      res.particles = eig.particles();
      res.nb = part->boundary_sites;
      res.nb_cut = part->cut_boundary_sites;
      res.summary.push_back(fmt::format("{}: L_A = {}, S_A = {:.6f}, S_B = {:.6f}", inst.label, res.L_A, res.S_A,
                                        res.S_B));
    }
    if (cfg.has(Task::kContour)) {
      const auto spec = entanglement_spectrum(cA);
      contour = entanglement_contour(spec);
      out.put_stream(fmt::format("contour_{}.csv", inst.label),
                     [&](std::ostream& os) { write_contour_csv(os, lat, *part, *contour); });
      out.put(fmt::format("contour_{}.ppm", inst.label), render_site_field(lat, site_values(lat, *contour)).to_ppm());
    }
  }

  if (cfg.has(Task::kEf)) {
    const auto families = ef_families(lat, cfg.launch);
    const auto ef = ef_compose(families, cfg.exclude_b4);
    out.put_stream(fmt::format("ef_families_{}.csv", inst.label), [&](std::ostream& os) {
      os << "id,twice_offset,stroke_sites,hole_adjacent_fraction,b4_like\n";
      for (const auto& f : families)
        os << fmt::format("{},{},{},{:.6f},{}\n", f.id, f.twice_offset,
                          std::count(f.stroke_mask.begin(), f.stroke_mask.end(), std::uint8_t{1}),
                          f.hole_adjacent_fraction, f.b4_like ? 1 : 0);
    });
    out.put_stream(fmt::format("ef_mask_{}.txt", inst.label), [&](std::ostream& os) { write_mask(os, ef.mask); });
    out.put(fmt::format("ef_mask_{}.ppm", inst.label), render_mask(lat, ef.mask).to_ppm());
    if (contour) {
      const auto ov = ef_overlap(*contour, ef, *part);
      const auto null = ef_overlap_null(*contour, ef, *part, cfg.permutations, cfg.seed);
      const double z = null.stddev > 0 ? (ov.score - null.mean) / null.stddev : 0.0;
      out.put(fmt::format("ef_overlap_{}.txt", inst.label),
              fmt::format("score = {:.12g}\nk = {}\nhits = {}\ndegenerate_ties = {}\nnull_mean = {:.12g}\n"
                          "null_stddev = {:.12g}\nnull_permutations = {}\nz = {:.6f}\n",
                          ov.score, ov.k, ov.hits, ov.degenerate_ties, null.mean, null.stddev, cfg.permutations, z));
      out.put(fmt::format("ef_overlay_{}.ppm", inst.label),
              render_site_field(lat, site_values(lat, *contour), 4, &ef.mask).to_ppm());
      res.summary.push_back(fmt::format("{}: EF overlap = {:.4f}, null = {:.4f} +- {:.4f}, z = {:.2f}", inst.label,
                                        ov.score, null.mean, null.stddev, z));
      if (cfg.has(Task::kProfiles)) profile_outputs(cfg, inst, *contour, *part, ef, out, res);
    }
  }

  if (cfg.has(Task::kDos)) {
    DosOptions opt;
    opt.method = cfg.dos_method;
    opt.bins = cfg.dos_bins;
    opt.moments = cfg.dos_moments;
    opt.random_vectors = cfg.dos_vectors;
    opt.seed = cfg.seed;
    opt.range = cfg.dos_range;
    opt.dense_limit = cfg.dense_limit;
    const auto d = dos(build_hamiltonian(lat, cfg.model), opt);
    out.put_stream(fmt::format("dos_{}.csv", inst.label), [&](std::ostream& os) { write_dos_csv(os, d); });
    PlotSeries s;
    s.line = true;
    s.color = {20, 60, 160};
    s.x = d.centers();
    s.y = d.density;
    out.put(fmt::format("dos_{}.ppm", inst.label), render_plot({s}).to_ppm());
    res.summary.push_back(fmt::format("{}: DOS {} with {} bins", inst.label, to_string(d.method), d.density.size()));
  }
  return res;
}

template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < count; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void fit_outputs(const RunConfig& cfg, const ScalingSeries& series, const std::string& stem, Outputs& out,
                 std::vector<std::string>& summary) {
  const auto fit = series.form == ScalingForm::kSuperArea ? fit_superarea(series, cfg.alpha_grid)
                                                          : fit_powerlaw_ee(series, cfg.alpha_grid);
  out.put_stream(stem + "_fit.txt", [&](std::ostream& os) { write_fit_report(os, fit); });
  out.put_stream(stem + "_alpha_grid.csv", [&](std::ostream& os) { write_alpha_grid_csv(os, fit); });
  PlotSeries pts, line;
  pts.color = {200, 40, 40};
  line.line = true;
  line.color = {40, 40, 40};
  for (const auto& p : series.points) {
    if (series.form == ScalingForm::kSuperArea && p.L <= 1.0) continue;
    const double y = series.form == ScalingForm::kSuperArea ? p.S / std::log(p.L) : p.S;
    pts.x.push_back(p.L);
    pts.y.push_back(y);
    line.x.push_back(p.L);
    line.y.push_back(fit.a * std::pow(p.L, fit.alpha) + fit.intercept);
  }
  out.put(stem + "_fit.ppm", render_plot({pts, line}).to_ppm());
  summary.push_back(fmt::format("{} fit ({}): best alpha = {:.2f}, R^2 = {:.6f}; alpha=1 slope = {:.6g}, "
                                "intercept = {:.6g}, R^2 = {:.6f}",
                                stem, to_string(fit.form), fit.alpha, fit.r_squared, fit.unit_alpha.slope,
                                fit.unit_alpha.intercept, fit.unit_alpha.r_squared));
}

void baseline_outputs(const RunConfig& cfg, Outputs& out, std::vector<std::string>& summary) {
  BaselineOptions opt;
  opt.filling = cfg.filling;
  opt.dense_limit = cfg.dense_limit;
  const auto series = square_lattice_baseline(cfg.baseline_sizes, cfg.model, opt);
  out.put_stream("baseline.csv", [&](std::ostream& os) { write_scaling_csv(os, series); });
  fit_outputs(cfg, series, "baseline", out, summary);

  const int L = cfg.baseline_sizes.back();
  const Lattice lat = build_square(L);
  auto eig = diagonalize(build_hamiltonian(lat, cfg.model), cfg.dense_limit);
  apply_filling(eig, cfg.model, lat.size(), cfg.filling);
  const Partition p = partition_IV(lat);
  const auto contour = entanglement_contour(entanglement_spectrum(correlation_matrix(eig, p, cfg.model.orbitals())));
  std::map<int, std::vector<std::pair<int, double>>> columns;
  for (std::size_t a = 0; a < contour.sites.size(); ++a) {
    const auto site = contour.sites[a];
    columns[p.ix[site]].emplace_back(p.iy[site], contour.values[a]);
  }
  std::string csv = "ix,beta,r_squared\n";
  double lo = INFINITY, hi = -INFINITY;
  for (auto& [ix, col] : columns) {
    std::sort(col.begin(), col.end());
    try {
      const auto fit = fit_powerlaw_profile(col, cfg.window);
      csv += fmt::format("{},{:.6f},{:.6f}\n", ix, fit.beta, fit.r_squared);
      lo = std::min(lo, fit.beta);
      hi = std::max(hi, fit.beta);
    } catch (const Error&) {
      csv += fmt::format("{},nan,nan\n", ix);
    }
  }
  out.put("baseline_columns.csv", csv);
  summary.push_back(fmt::format("baseline L = {} column exponents in [{:.3f}, {:.3f}]", L, lo, hi));
}

std::string conventions(const RunConfig& cfg) {
  return fmt::format(
      "[conventions]\nfilling = {}\ndegeneracy_tol = {}\ncontour_cluster_tol = {}\nxi_clamp = {}\n"
      "gap_merge_tol = {}\nprofile_window = {}..floor({} * max_iy)\niy_rule = {}\nlog = natural\n",
      to_string(cfg.filling), kDegeneracyTol, kClusterTol, kXiClamp, kGapMergeTol, cfg.window.min_iy,
      cfg.window.keep_fraction,
      (cfg.partition == PartitionKind::kIII || cfg.partition == PartitionKind::kIV) ? "vertical" : "bfs");
}

RunReport finish(const RunConfig& cfg, Outputs& out, std::vector<std::string> summary) {
  std::string manifest = "# fractent run manifest; re-runnable as a config\n";
  manifest += serialize_config(cfg);
  manifest += "\n" + conventions(cfg);
  manifest += "\n[artifacts]\n";
  RunReport report;
  for (const auto& [name, hash] : out.hashes()) {
    manifest += name + " = " + hash + "\n";
    report.artifacts.push_back({name, hash});
  }
  report.manifest = out.dir() / "manifest.txt";
  write_file_atomic(report.manifest, manifest);
  report.summary = std::move(summary);
  return report;
}

}  // namespace

RunReport run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  validate(cfg);
  std::filesystem::create_directories(out_dir);
  Outputs out(out_dir);
  const auto instances = make_instances(cfg);

  std::vector<InstanceResult> results(instances.size());
  parallel_for(instances.size(), cfg.workers, [&](std::size_t i) { results[i] = process(cfg, instances[i], out); });

  std::vector<std::string> summary;
  for (const auto& r : results) summary.insert(summary.end(), r.summary.begin(), r.summary.end());

  if (cfg.has(Task::kEe)) {
    std::string csv = "n,L_A,N_bA,N_bA_cut,S_A,S_B,trace_A,trace_B,particles\n";
    ScalingSeries series;
    series.form = cfg.model.kind == ModelKind::kH1 ? ScalingForm::kSuperArea : ScalingForm::kPowerLaw;
    for (const auto& r : results) {
      csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.order, fixed(r.L_A), r.nb, r.nb_cut, fixed(r.S_A),
                         fixed(r.S_B), fixed(r.tr_A), fixed(r.tr_B), fixed(r.particles));
      series.points.push_back({r.L_A, r.S_A, r.order});
    }
    out.put("ee.csv", csv);
    if (cfg.has(Task::kFits)) {
      out.put_stream("scaling.csv", [&](std::ostream& os) { write_scaling_csv(os, series); });
      fit_outputs(cfg, series, "ee", out, summary);
    }
  }

  if (cfg.has(Task::kGaps)) {
    const auto g = gap_scaling(cfg.model, cfg.orders, cfg.dense_limit);
    out.put_stream("gaps.csv", [&](std::ostream& os) { write_gaps_csv(os, g); });
    PlotSeries s;
    s.color = {200, 40, 40};
    for (std::size_t i = 0; i < g.orders.size(); ++i)
      if (g.max_gap[i]) {
        s.x.push_back(g.orders[i]);
        s.y.push_back(*g.max_gap[i]);
      }
    out.put("gaps.ppm", render_plot({s}, false, true).to_ppm());
    for (std::size_t i = 0; i < g.orders.size(); ++i)
      summary.push_back(fmt::format("n = {}: max gap = {}", g.orders[i], g.max_gap[i] ? fixed(*g.max_gap[i]) : "undefined"));
  }

  if (cfg.has(Task::kBaseline)) baseline_outputs(cfg, out, summary);
  return finish(cfg, out, std::move(summary));
}

RunReport export_lattices(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  Outputs out(out_dir);
  std::vector<std::string> summary;
  for (const auto& inst : make_instances(cfg)) {
    const auto& lat = inst.lattice;
    out.put_stream(fmt::format("sites_{}.csv", inst.label), [&](std::ostream& os) { write_sites_csv(os, lat); });
    out.put_stream(fmt::format("bonds_{}.csv", inst.label), [&](std::ostream& os) { write_bonds_csv(os, lat); });
    std::vector<std::uint8_t> all(lat.size(), 1);
    out.put(fmt::format("lattice_{}.ppm", inst.label), render_mask(lat, all).to_ppm());
    const auto dims = hausdorff_dims(lat);
    std::string line = fmt::format("{}: {} sites, width {}, {} bonds, d_f = {:.4f}", inst.label, lat.size(),
                                   lat.width(), lat.bonds().size(), dims.d_f);
    try {
      const auto p = make_partition(cfg, lat);
      out.put_stream(fmt::format("partition_{}.txt", inst.label), [&](std::ostream& os) { write_mask(os, p.mask); });
      out.put(fmt::format("partition_{}.ppm", inst.label), render_mask(lat, p.mask).to_ppm());
      line += fmt::format(", partition {}: |A| = {}, N_bA = {} (cut {}), L_A = {}", to_string(p.kind),
                          p.a_sites.size(), p.boundary_sites, p.cut_boundary_sites, p.L_A);
    } catch (const ValidationError& e) {
      line += fmt::format(", no partition ({})", e.what());
    }
    summary.push_back(line);
  }
  return finish(cfg, out, std::move(summary));
}

}  // namespace fractent
