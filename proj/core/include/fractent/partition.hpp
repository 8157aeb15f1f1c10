#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fractent/lattice.hpp"

namespace fractent {

enum class PartitionKind { kI, kII, kIII, kIV, kCustom };

std::string to_string(PartitionKind kind);
PartitionKind parse_partition_kind(const std::string& text);

/// Bipartition of a lattice into A (mask = 1) and B.
struct Partition {
  PartitionKind kind = PartitionKind::kCustom;
  std::vector<std::uint8_t> mask;
  /// Bonds crossing the cut as (site in A, site in B).
  std::vector<std::pair<std::size_t, std::size_t>> interface_pairs;
  /// Distinct A endpoints of interface_pairs.
  std::size_t boundary_sites = 0;
  /// A sites with a B neighbour directly above or below (horizontal-cut count).
  std::size_t cut_boundary_sites = 0;
  /// Linear size of A in site units.
  double L_A = 0.0;
  /// Per-site distance to the interface, 1 on interface rows; 0 for B sites
  /// and for A sites with no path to the interface.
  std::vector<int> iy;
  /// Per-site transverse coordinate.
  std::vector<int> ix;
  std::vector<std::size_t> a_sites;
  std::vector<std::size_t> b_sites;

  bool in_A(std::size_t site) const { return mask.at(site) != 0; }
  /// log(cut_boundary_sites) / log(L_A).
  double boundary_dimension() const;
};

Partition partition_I(const Lattice& lattice);
Partition partition_II(const Lattice& lattice);
Partition partition_III(const Lattice& lattice);
/// Half cut A = {y < ceil(W/2)}; valid on carpets (n >= 1) and square lattices.
Partition partition_IV(const Lattice& lattice);
Partition builtin_partition(const Lattice& lattice, PartitionKind kind);

/// Arbitrary mask; i_y is BFS distance inside A, L_A defaults to the lattice width.
Partition partition_from_mask(const Lattice& lattice, std::vector<std::uint8_t> mask,
                              double L_A = 0.0);
/// Swap A and B; interface distances are recomputed by BFS.
Partition complement(const Lattice& lattice, const Partition& p);

/// One 0/1 per line, canonical site order.
void write_mask(std::ostream& os, const std::vector<std::uint8_t>& mask);
std::vector<std::uint8_t> read_mask(std::istream& is);
Partition partition_from_mask_file(const Lattice& lattice, const std::filesystem::path& path);

}  // namespace fractent
