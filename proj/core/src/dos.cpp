#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "fractent/error.hpp"
#include "fractent/spectral.hpp"

namespace fractent {

std::string to_string(DosMethod m) {
  return m == DosMethod::kExactHistogram ? "exact-histogram" : "stochastic-chebyshev";
}

DosMethod parse_dos_method(const std::string& text) {
  if (text == "exact-histogram" || text == "exact") return DosMethod::kExactHistogram;
  if (text == "stochastic-chebyshev" || text == "kpm") return DosMethod::kStochasticChebyshev;
  throw ValidationError(fmt::format("dos.method: unknown method '{}'", text));
}

std::vector<double> DosHistogram::centers() const {
  std::vector<double> c;
  for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i)
    c.push_back(0.5 * (bin_edges[i] + bin_edges[i + 1]));
  return c;
}

double DosHistogram::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) s += density[i] * (bin_edges[i + 1] - bin_edges[i]);
  return s;
}

std::pair<double, double> spectral_bounds(const HamiltonianMatrix& h) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> rm = h.entries;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (Eigen::Index r = 0; r < rm.outerSize(); ++r) {
    double diag = 0.0, radius = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it)
      if (it.col() == r)
        diag += it.value();
      else
        radius += std::abs(it.value());
    if (first || diag - radius < lo) lo = diag - radius;
    if (first || diag + radius > hi) hi = diag + radius;
    first = false;
  }
  return {lo, hi};
}

namespace {

std::vector<double> make_edges(int bins, double lo, double hi) {
  if (bins < 1) throw ValidationError(fmt::format("dos.bins must be >= 1, got {}", bins));
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ValidationError(fmt::format("dos.range: invalid [{}, {}]", lo, hi));
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) e[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  return e;
}

std::pair<double, double> default_range(const HamiltonianMatrix& h) {
  const auto [lo, hi] = spectral_bounds(h);
  double r = std::max(std::abs(lo), std::abs(hi));
  if (r == 0.0) r = 1.0;
  r = r * (1.0 + 1e-6) + 1e-9;
  return {-r, r};
}

double jackson(int m, int M) {
  const double q = std::numbers::pi / (M + 1);
  return ((M - m + 1) * std::cos(q * m) + std::sin(q * m) / std::tan(q)) / (M + 1);
}

DosHistogram kpm(const HamiltonianMatrix& h, const DosOptions& opts) {
  if (opts.moments < 32)
    throw ValidationError(fmt::format("dos.moments must be >= 32, got {}", opts.moments));
  if (opts.random_vectors < 1)
    throw ValidationError(fmt::format("dos.random_vectors must be >= 1, got {}", opts.random_vectors));
  const auto [lo, hi] = spectral_bounds(h);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw NumericalError(fmt::format("dos: cannot rescale spectrum with bounds [{}, {}]", lo, hi));
  const double a = (hi - lo) / (2.0 - 0.01);
  const double b = 0.5 * (hi + lo);
  Eigen::SparseMatrix<double> eye(h.entries.rows(), h.entries.cols());
  eye.setIdentity();
  const Eigen::SparseMatrix<double> ht = (h.entries - b * eye) / a;
  const auto dim = ht.rows();
  const int M = opts.moments;
  const int half = (M + 1) / 2;
  std::vector<double> mu(static_cast<std::size_t>(M), 0.0);
  for (int r = 0; r < opts.random_vectors; ++r) {
    std::mt19937_64 eng(opts.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(r + 1));
    Eigen::VectorXd v0(dim);
    std::uint64_t bits = 0;
    int left = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (left == 0) {
        bits = eng();
        left = 64;
      }
      v0[i] = (bits & 1u) ? 1.0 : -1.0;
      bits >>= 1;
      --left;
    }
    Eigen::VectorXd prev = v0;
    Eigen::VectorXd cur = ht * v0;
    const double m0 = v0.squaredNorm();
    const double m1 = v0.dot(cur);
    mu[0] += m0;
    if (M > 1) mu[1] += m1;
    for (int k = 1; k < half; ++k) {
      // cur = alpha_k, prev = alpha_{k-1}
      if (2 * k < M) mu[static_cast<std::size_t>(2 * k)] += 2.0 * cur.squaredNorm() - m0;
      Eigen::VectorXd next = 2.0 * (ht * cur) - prev;
      if (2 * k + 1 < M) mu[static_cast<std::size_t>(2 * k + 1)] += 2.0 * next.dot(cur) - m1;
      prev = std::move(cur);
      cur = std::move(next);
    }
  }
  const double norm = static_cast<double>(opts.random_vectors) * static_cast<double>(dim);
  for (auto& m : mu) m /= norm;
  for (double m : mu)
    if (!std::isfinite(m)) throw NumericalError("dos: Chebyshev moments diverged");

  auto [rlo, rhi] = opts.range ? *opts.range : default_range(h);
  DosHistogram out;
  out.method = DosMethod::kStochasticChebyshev;
  out.bin_edges = make_edges(opts.bins, rlo, rhi);
  out.moments = mu;
  std::vector<double> g(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) g[static_cast<std::size_t>(m)] = jackson(m, M) * mu[static_cast<std::size_t>(m)];
  auto theta = [&](double e) { return std::acos(std::clamp((e - b) / a, -1.0, 1.0)); };
  for (std::size_t i = 0; i + 1 < out.bin_edges.size(); ++i) {
    const double t_lo = theta(out.bin_edges[i]);
    const double t_hi = theta(out.bin_edges[i + 1]);
    double mass = g[0] * (t_lo - t_hi);
    for (int m = 1; m < M; ++m)
      mass += 2.0 * g[static_cast<std::size_t>(m)] * (std::sin(m * t_lo) - std::sin(m * t_hi)) / m;
    mass /= std::numbers::pi;
    out.density.push_back(std::max(0.0, mass) / (out.bin_edges[i + 1] - out.bin_edges[i]));
  }
  return out;
}

}  // namespace

DosHistogram dos_histogram(std::span<const double> eigenvalues, int bins, double lo, double hi) {
  DosHistogram out;
  out.method = DosMethod::kExactHistogram;
  out.bin_edges = make_edges(bins, lo, hi);
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  const double width = (hi - lo) / bins;
  for (double e : eigenvalues) {
    if (e < lo || e > hi) continue;
    auto k = static_cast<long>(std::floor((e - lo) / width));
    k = std::clamp<long>(k, 0, bins - 1);
    counts[static_cast<std::size_t>(k)] += 1.0;
  }
  const double total = static_cast<double>(eigenvalues.size());
  for (double c : counts) out.density.push_back(total > 0 ? c / (total * width) : 0.0);
  return out;
}

DosHistogram dos(const HamiltonianMatrix& h, const DosOptions& opts) {
  if (opts.method == DosMethod::kStochasticChebyshev) return kpm(h, opts);
  const auto ev = eigenvalues_only(h, opts.dense_limit);
  auto [lo, hi] = opts.range ? *opts.range : default_range(h);
  return dos_histogram({ev.data(), static_cast<std::size_t>(ev.size())}, opts.bins, lo, hi);
}

double dos_l1_distance(const DosHistogram& a, const DosHistogram& b) {
  if (a.bin_edges != b.bin_edges) throw ValidationError("dos_l1_distance: bin edges differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.density.size(); ++i)
    d += std::abs(a.density[i] - b.density[i]) * (a.bin_edges[i + 1] - a.bin_edges[i]);
  return d;
}

void write_dos_csv(std::ostream& os, const DosHistogram& d) {
  os << "bin_center,density\n";
  const auto c = d.centers();
  for (std::size_t i = 0; i < c.size(); ++i)
    os << fmt::format("{:.10g},{:.12g}\n", c[i], d.density[i]);
}

}  // namespace fractent
