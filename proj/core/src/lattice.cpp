#include "fractent/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

IterationRule::IterationRule(int m, int m_f) : m_(m), m_f_(m_f) {
  if (m < 2) throw ValidationError(fmt::format("rule: m must be >= 2, got {}", m));
  if (m_f < 0 || m_f >= m)
    throw ValidationError(fmt::format("rule: need 0 <= m_f < m, got m={} m_f={}", m, m_f));
  if (m_f > 0 && (m - m_f) % 2 != 0)
    throw ValidationError(
        fmt::format("rule: removed block m_f={} cannot be centered in m={}", m_f, m));
}

long long IterationRule::kept_blocks() const {
  return static_cast<long long>(m_) * m_ - static_cast<long long>(m_f_) * m_f_;
}

bool IterationRule::removes(int dx, int dy) const {
  const int lo = (m_ - m_f_) / 2;
  const int hi = lo + m_f_;
  return m_f_ > 0 && dx >= lo && dx < hi && dy >= lo && dy < hi;
}

std::size_t expected_site_count(const IterationRule& rule, int n, int s) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t count = static_cast<std::size_t>(s) * static_cast<std::size_t>(s);
  for (int k = 0; k < n; ++k) {
    const auto f = static_cast<std::size_t>(rule.kept_blocks());
    if (f != 0 && count > kMax / f) return kMax;
    count *= f;
  }
  return count;
}

std::optional<std::size_t> Lattice::index_of(Coord c) const {
  if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= width_) return std::nullopt;
  const auto v = grid_[static_cast<std::size_t>(c.y) * width_ + c.x];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

std::span<const std::size_t> Lattice::neighbors(std::size_t i) const {
  if (i >= sites_.size())
    throw ValidationError(fmt::format("site {} not in lattice of {} sites", i, sites_.size()));
  return {adj_.data() + adj_offsets_[i], adj_offsets_[i + 1] - adj_offsets_[i]};
}

class LatticeBuilder {
 public:
  template <class Keep>
  static Lattice build(int width, bool periodic, std::size_t site_limit, Keep keep) {
    Lattice L;
    L.width_ = width;
    L.periodic_ = periodic;
    const auto w = static_cast<std::size_t>(width);
    L.grid_.assign(w * w, -1);
    for (int y = 0; y < width; ++y)
      for (int x = 0; x < width; ++x)
        if (keep(x, y)) {
          if (L.sites_.size() >= site_limit)
            throw CapacityError(
                fmt::format("lattice exceeds site limit {}", site_limit));
          L.grid_[static_cast<std::size_t>(y) * w + x] =
              static_cast<std::int64_t>(L.sites_.size());
          L.sites_.push_back({x, y});
        }
    finish(L);
    return L;
  }

  static void set_meta(Lattice& L, int n, int s, std::optional<IterationRule> rule) {
    L.order_ = n;
    L.cell_width_ = s;
    L.rule_ = rule;
  }

 private:
  static void finish(Lattice& L) {
    const std::size_t N = L.sites_.size();
    const int W = L.width_;
    std::vector<std::vector<std::size_t>> nb(N);
    L.outer_.assign(N, 0);
    L.hole_.assign(N, 0);
    constexpr int kDx[4] = {1, -1, 0, 0};
    constexpr int kDy[4] = {0, 0, 1, -1};
    for (std::size_t i = 0; i < N; ++i) {
      const auto [x, y] = L.sites_[i];
      L.outer_[i] = (x == 0 || y == 0 || x == W - 1 || y == W - 1) ? 1 : 0;
      for (int d = 0; d < 4; ++d) {
        int nx = x + kDx[d];
        int ny = y + kDy[d];
        const bool inside = nx >= 0 && ny >= 0 && nx < W && ny < W;
        if (!inside) {
          if (!L.periodic_) continue;
          nx = (nx + W) % W;
          ny = (ny + W) % W;
        }
        const auto j = L.index_of({nx, ny});
        if (!j) {
          if (inside) L.hole_[i] = 1;
          continue;
        }
        if (*j != i) nb[i].push_back(*j);
      }
      std::sort(nb[i].begin(), nb[i].end());
      nb[i].erase(std::unique(nb[i].begin(), nb[i].end()), nb[i].end());
    }
    L.adj_offsets_.assign(N + 1, 0);
    for (std::size_t i = 0; i < N; ++i) L.adj_offsets_[i + 1] = L.adj_offsets_[i] + nb[i].size();
    L.adj_.reserve(L.adj_offsets_[N]);
    for (std::size_t i = 0; i < N; ++i) {
      for (auto j : nb[i]) {
        L.adj_.push_back(j);
        if (i < j) L.bonds_.emplace_back(i, j);
      }
    }
  }
};

namespace {

int checked_power(int base, int n) {
  long long w = 1;
  for (int k = 0; k < n; ++k) {
    w *= base;
    if (w > (1 << 20)) throw CapacityError(fmt::format("lattice width {}^{} too large", base, n));
  }
  return static_cast<int>(w);
}

Lattice build_rule(const IterationRule& rule, int n, int s, std::size_t site_limit) {
  if (n < 0) throw ValidationError(fmt::format("order n must be >= 0, got {}", n));
  if (s < 1) throw ValidationError(fmt::format("cell width s must be >= 1, got {}", s));
  const std::size_t expected = expected_site_count(rule, n, s);
  if (expected > site_limit)
    throw CapacityError(fmt::format("lattice would have {} sites, limit is {}", expected, site_limit));
  const int W = s * checked_power(rule.m(), n);
  const int m = rule.m();
  auto keep = [&](int x, int y) {
    int X = x / s;
    int Y = y / s;
    for (int k = 0; k < n; ++k) {
      if (rule.removes(X % m, Y % m)) return false;
      X /= m;
      Y /= m;
    }
    return true;
  };
  Lattice L = LatticeBuilder::build(W, false, site_limit, keep);
  LatticeBuilder::set_meta(L, n, s, rule);
  return L;
}

}  // namespace

Lattice build_carpet(int n, int s, std::size_t site_limit) {
  return build_rule(IterationRule::carpet(), n, s, site_limit);
}

Lattice build_generalized(const IterationRule& rule, int n, std::size_t site_limit) {
  return build_rule(rule, n, 1, site_limit);
}

Lattice build_square(int L, bool periodic, std::size_t site_limit) {
  if (L < 1) throw ValidationError(fmt::format("square lattice side must be >= 1, got {}", L));
  if (periodic && L < 3)
    throw ValidationError("periodic square lattice needs side >= 3");
  if (static_cast<std::size_t>(L) * L > site_limit)
    throw CapacityError(fmt::format("square lattice {}x{} exceeds site limit {}", L, L, site_limit));
  Lattice lat = LatticeBuilder::build(L, periodic, site_limit, [](int, int) { return true; });
  LatticeBuilder::set_meta(lat, 0, L, std::nullopt);
  return lat;
}

FractalDims hausdorff_dims(const Lattice& lattice) {
  FractalDims d;
  if (!lattice.rule()) {
    d.d_f = 2.0;
    return d;
  }
  const auto& r = *lattice.rule();
  d.d_f = std::log(static_cast<double>(r.kept_blocks())) / std::log(static_cast<double>(r.m()));
  return d;
}

double box_counting_dimension(const Lattice& lattice, int base) {
  if (base < 2) throw ValidationError("box counting base must be >= 2");
  std::vector<double> lx, ly;
  for (long long side = 1; side <= lattice.width(); side *= base) {
    const auto boxes = static_cast<std::size_t>((lattice.width() + side - 1) / side);
    std::vector<std::uint8_t> hit(boxes * boxes, 0);
    for (auto c : lattice.sites())
      hit[static_cast<std::size_t>(c.y / side) * boxes + static_cast<std::size_t>(c.x / side)] = 1;
    const auto count = std::count(hit.begin(), hit.end(), std::uint8_t{1});
    lx.push_back(std::log(static_cast<double>(lattice.width()) / static_cast<double>(side)));
    ly.push_back(std::log(static_cast<double>(count)));
  }
  if (lx.size() < 2) throw ValidationError("box counting needs at least two scales");
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

void write_sites_csv(std::ostream& os, const Lattice& lattice) {
  os << "index,x,y,outer_boundary\n";
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto c = lattice.coord(i);
    os << i << ',' << c.x << ',' << c.y << ',' << (lattice.outer_boundary(i) ? 1 : 0) << '\n';
  }
}

void write_bonds_csv(std::ostream& os, const Lattice& lattice) {
  os << "i,j\n";
  for (auto [i, j] : lattice.bonds()) os << i << ',' << j << '\n';
}

}  // namespace fractent
