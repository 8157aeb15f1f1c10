#include "fractent/partition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

std::string to_string(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::kI: return "I";
    case PartitionKind::kII: return "II";
    case PartitionKind::kIII: return "III";
    case PartitionKind::kIV: return "IV";
    case PartitionKind::kCustom: return "custom";
  }
  return "custom";
}

PartitionKind parse_partition_kind(const std::string& text) {
  if (text == "I") return PartitionKind::kI;
  if (text == "II") return PartitionKind::kII;
  if (text == "III") return PartitionKind::kIII;
  if (text == "IV") return PartitionKind::kIV;
  if (text == "custom") return PartitionKind::kCustom;
  throw ValidationError(
      fmt::format("partition.name: unknown partition '{}' (expected I, II, III, IV or custom)", text));
}

double Partition::boundary_dimension() const {
  if (L_A <= 1.0 || cut_boundary_sites == 0) return 0.0;
  return std::log(static_cast<double>(cut_boundary_sites)) / std::log(L_A);
}

namespace {

enum class Depth { kBfs, kVertical };

Partition assemble(const Lattice& lat, std::vector<std::uint8_t> mask, PartitionKind kind,
                   double L_A, Depth depth, int y_cut) {
  const std::size_t N = lat.size();
  if (mask.size() != N)
    throw ValidationError(fmt::format("partition mask has {} entries, lattice has {} sites",
                                      mask.size(), N));
  Partition p;
  p.kind = kind;
  p.mask = std::move(mask);
  for (std::size_t i = 0; i < N; ++i) {
    p.mask[i] = p.mask[i] ? 1 : 0;
    (p.mask[i] ? p.a_sites : p.b_sites).push_back(i);
  }
  if (p.a_sites.empty()) throw ValidationError("partition: subsystem A is empty");
  if (p.b_sites.empty()) throw ValidationError("partition: subsystem B is empty");
  p.L_A = L_A > 0.0 ? L_A : static_cast<double>(lat.width());

  std::set<std::size_t> ends, cut_ends;
  for (auto [i, j] : lat.bonds()) {
    if (p.mask[i] == p.mask[j]) continue;
    const auto a = p.mask[i] ? i : j;
    const auto b = p.mask[i] ? j : i;
    p.interface_pairs.emplace_back(a, b);
    ends.insert(a);
    if (lat.coord(a).x == lat.coord(b).x) cut_ends.insert(a);
  }
  p.boundary_sites = ends.size();
  p.cut_boundary_sites = cut_ends.size();

  p.iy.assign(N, 0);
  p.ix.assign(N, 0);
  for (std::size_t i = 0; i < N; ++i) p.ix[i] = lat.coord(i).x;
  if (depth == Depth::kVertical) {
    for (auto i : p.a_sites) p.iy[i] = y_cut - lat.coord(i).y;
  } else {
    std::deque<std::size_t> queue;
    for (auto a : ends) {
      p.iy[a] = 1;
      queue.push_back(a);
    }
    while (!queue.empty()) {
      const auto i = queue.front();
      queue.pop_front();
      for (auto j : lat.neighbors(i))
        if (p.mask[j] && p.iy[j] == 0) {
          p.iy[j] = p.iy[i] + 1;
          queue.push_back(j);
        }
    }
  }
  return p;
}

int require_carpet(const Lattice& lat, int min_order, const char* name) {
  if (!lat.rule() || !(*lat.rule() == IterationRule::carpet()))
    throw ValidationError(fmt::format("partition {} needs a Sierpinski carpet lattice", name));
  if (lat.order() < min_order)
    throw ValidationError(
        fmt::format("partition {} needs carpet order >= {}, got {}", name, min_order, lat.order()));
  return lat.width() / 3;
}

template <class Pred>
std::vector<std::uint8_t> mask_where(const Lattice& lat, Pred pred) {
  std::vector<std::uint8_t> m(lat.size(), 0);
  for (std::size_t i = 0; i < lat.size(); ++i) m[i] = pred(lat.coord(i)) ? 1 : 0;
  return m;
}

}  // namespace

Partition partition_I(const Lattice& lat) {
  const int w = require_carpet(lat, 2, "I");
  auto m = mask_where(lat, [w](Coord c) { return c.x < w && c.y < w; });
  return assemble(lat, std::move(m), PartitionKind::kI, w, Depth::kBfs, 0);
}

Partition partition_II(const Lattice& lat) {
  const int w = require_carpet(lat, 2, "II");
  const int top = (w - 1) / 2;
  auto m = mask_where(lat, [w, top](Coord c) { return c.x < w && c.y <= top; });
  return assemble(lat, std::move(m), PartitionKind::kII, w, Depth::kBfs, 0);
}

Partition partition_III(const Lattice& lat) {
  const int w = require_carpet(lat, 2, "III");
  auto m = mask_where(lat, [w](Coord c) { return c.y < w; });
  return assemble(lat, std::move(m), PartitionKind::kIII, lat.width(), Depth::kVertical, w);
}

Partition partition_IV(const Lattice& lat) {
  if (lat.rule() && lat.order() < 1)
    throw ValidationError("partition IV needs order >= 1");
  if (lat.width() < 2) throw ValidationError("partition IV needs width >= 2");
  const int y_cut = (lat.width() + 1) / 2;
  auto m = mask_where(lat, [y_cut](Coord c) { return c.y < y_cut; });
  return assemble(lat, std::move(m), PartitionKind::kIV, lat.width(), Depth::kVertical, y_cut);
}

Partition builtin_partition(const Lattice& lat, PartitionKind kind) {
  switch (kind) {
    case PartitionKind::kI: return partition_I(lat);
    case PartitionKind::kII: return partition_II(lat);
    case PartitionKind::kIII: return partition_III(lat);
    case PartitionKind::kIV: return partition_IV(lat);
    case PartitionKind::kCustom: break;
  }
  throw ValidationError("partition.name: custom partitions need a mask file");
}

Partition partition_from_mask(const Lattice& lat, std::vector<std::uint8_t> mask, double L_A) {
  return assemble(lat, std::move(mask), PartitionKind::kCustom, L_A, Depth::kBfs, 0);
}

Partition complement(const Lattice& lat, const Partition& p) {
  std::vector<std::uint8_t> m(p.mask.size());
  std::transform(p.mask.begin(), p.mask.end(), m.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 0 : 1); });
  return partition_from_mask(lat, std::move(m), p.L_A);
}

void write_mask(std::ostream& os, const std::vector<std::uint8_t>& mask) {
  for (auto v : mask) os << (v ? '1' : '0') << '\n';
}

std::vector<std::uint8_t> read_mask(std::istream& is) {
  std::vector<std::uint8_t> mask;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }),
               line.end());
    if (line.empty()) continue;
    if (line != "0" && line != "1")
      throw ValidationError(fmt::format("mask line {}: expected 0 or 1, got '{}'", lineno, line));
    mask.push_back(line == "1" ? 1 : 0);
  }
  return mask;
}

Partition partition_from_mask_file(const Lattice& lat, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("partition.mask: cannot open '{}'", path.string()));
  return partition_from_mask(lat, read_mask(in));
}

}  // namespace fractent
