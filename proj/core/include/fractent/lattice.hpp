#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fractent {

struct Coord {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Substitution rule F(m, m_f): every macro-cell of m x m sub-blocks loses a
/// centered m_f x m_f block.
class IterationRule {
 public:
  IterationRule(int m, int m_f);
  static IterationRule carpet() { return {3, 1}; }

  int m() const { return m_; }
  int m_f() const { return m_f_; }
  /// Surviving sub-blocks per macro-cell, m^2 - m_f^2.
  long long kept_blocks() const;
  /// True when the sub-block at digit position (dx, dy) is removed.
  bool removes(int dx, int dy) const;
  bool operator==(const IterationRule&) const = default;

 private:
  int m_;
  int m_f_;
};

inline constexpr std::size_t kDefaultSiteLimit = 1u << 20;

class Lattice {
 public:
  /// Number of sites.
  std::size_t size() const { return sites_.size(); }
  int width() const { return width_; }
  int order() const { return order_; }
  int cell_width() const { return cell_width_; }
  bool periodic() const { return periodic_; }
  /// Generating rule; empty for plain rectangular baselines.
  const std::optional<IterationRule>& rule() const { return rule_; }

  std::span<const Coord> sites() const { return sites_; }
  Coord coord(std::size_t i) const { return sites_.at(i); }
  std::optional<std::size_t> index_of(Coord c) const;
  bool contains(Coord c) const { return index_of(c).has_value(); }

  /// Sites adjacent to i, ascending. Throws ValidationError for unknown i.
  std::span<const std::size_t> neighbors(std::size_t i) const;
  /// Undirected bonds (i < j), sorted.
  std::span<const std::pair<std::size_t, std::size_t>> bonds() const { return bonds_; }

  bool outer_boundary(std::size_t i) const { return outer_.at(i) != 0; }
  /// In-bounds 4-neighbour coordinate missing from the site set.
  bool hole_boundary(std::size_t i) const { return hole_.at(i) != 0; }

 private:
  friend class LatticeBuilder;
  int order_ = 0;
  int cell_width_ = 1;
  int width_ = 0;
  bool periodic_ = false;
  std::optional<IterationRule> rule_;
  std::vector<Coord> sites_;
  std::vector<std::int64_t> grid_;  // width*width, -1 where absent
  std::vector<std::size_t> adj_offsets_;
  std::vector<std::size_t> adj_;
  std::vector<std::pair<std::size_t, std::size_t>> bonds_;
  std::vector<std::uint8_t> outer_;
  std::vector<std::uint8_t> hole_;
};

/// Sierpinski carpet SC(n, s).
Lattice build_carpet(int n, int s, std::size_t site_limit = kDefaultSiteLimit);
/// GSC lattice from an arbitrary centered rule, unit cell width 1.
Lattice build_generalized(const IterationRule& rule, int n,
                          std::size_t site_limit = kDefaultSiteLimit);
/// Full L x L square lattice, optionally periodic (needs L >= 3).
Lattice build_square(int L, bool periodic = false,
                     std::size_t site_limit = kDefaultSiteLimit);

/// Closed-form site count s^2 (m^2 - m_f^2)^n, saturating on overflow.
std::size_t expected_site_count(const IterationRule& rule, int n, int s);

struct FractalDims {
  double d_f = 0.0;
  int d_s = 2;
  double d_bf = 0.0;
};

/// d_f from the generating rule; a plain square counts as d_f = 2.
FractalDims hausdorff_dims(const Lattice& lattice);
/// Box-counting slope over box sides 1, m, m^2, ... (cross-check only).
double box_counting_dimension(const Lattice& lattice, int base);

void write_sites_csv(std::ostream& os, const Lattice& lattice);
void write_bonds_csv(std::ostream& os, const Lattice& lattice);

}  // namespace fractent
