#include <map>

#include <fmt/format.h>

#include "fractent/error.hpp"
#include "fractent/pipeline.hpp"

namespace fractent {

namespace {

RunConfig base(ModelKind kind, PartitionKind part, std::vector<Task> tasks) {
  RunConfig c;
  c.model = kind == ModelKind::kH1 ? HoppingModel::h1() : HoppingModel::h2();
  c.partition = part;
  c.tasks = std::move(tasks);
  return c;
}

RunConfig scaling(ModelKind kind, PartitionKind part, bool large) {
  auto c = base(kind, part, {Task::kEe, Task::kFits});
  c.orders = large ? std::vector{2, 3, 4, 5} : std::vector{2, 3, 4};
  c.allow_large = large;
  return c;
}

RunConfig contour(ModelKind kind, PartitionKind part, bool large, bool with_ef) {
  std::vector<Task> tasks{Task::kContour};
  if (with_ef) tasks.push_back(Task::kEf);
  auto c = base(kind, part, tasks);
  c.orders = {large ? 5 : 4};
  c.allow_large = large;
  return c;
}

RunConfig gaps(ModelKind kind) {
  auto c = base(kind, PartitionKind::kIV, {Task::kGaps});
  c.orders = {1, 2, 3, 4};
  return c;
}

RunConfig square_dos(ModelKind kind) {
  auto c = base(kind, PartitionKind::kIV, {Task::kDos});
  c.lattice = LatticeKind::kSquare;
  c.periodic = true;
  c.sizes = {64};
  return c;
}

RunConfig carpet_kpm(ModelKind kind, bool large) {
  auto c = base(kind, PartitionKind::kIV, {Task::kDos});
  c.orders = {large ? 6 : 4};
  c.allow_large = large;
  c.dos_method = DosMethod::kStochasticChebyshev;
  return c;
}

using Maker = RunConfig (*)(bool);

const std::map<std::string, Maker>& table() {
  static const std::map<std::string, Maker> t = {
      {"fig2b", [](bool l) { return scaling(ModelKind::kH1, PartitionKind::kI, l); }},
      {"fig2d", [](bool l) { return scaling(ModelKind::kH1, PartitionKind::kII, l); }},
      {"fig3a", [](bool l) { return contour(ModelKind::kH1, PartitionKind::kII, l, true); }},
      {"fig3b", [](bool l) { return contour(ModelKind::kH1, PartitionKind::kI, l, true); }},
      {"fig3c",
       [](bool l) {
         auto c = base(ModelKind::kH1, PartitionKind::kIV, {Task::kEf});
         c.orders = {l ? 5 : 4};
         c.allow_large = l;
         return c;
       }},
      {"fig3d", [](bool l) { return contour(ModelKind::kH1, PartitionKind::kIII, l, true); }},
      {"fig3e", [](bool l) { return contour(ModelKind::kH1, PartitionKind::kIV, l, true); }},
      {"fig5b",
       [](bool l) {
         auto c = contour(ModelKind::kH1, PartitionKind::kIV, l, true);
         c.tasks.push_back(Task::kProfiles);
         return c;
       }},
      {"fig5d",
       [](bool) {
         auto c = base(ModelKind::kH1, PartitionKind::kIV, {Task::kContour, Task::kBaseline});
         c.lattice = LatticeKind::kSquare;
         c.sizes = {48};
         return c;
       }},
      {"fig6a", [](bool l) { return scaling(ModelKind::kH2, PartitionKind::kI, l); }},
      {"fig6b", [](bool l) { return scaling(ModelKind::kH2, PartitionKind::kII, l); }},
      {"fig6c", [](bool l) { return contour(ModelKind::kH2, PartitionKind::kI, l, false); }},
      {"fig6d", [](bool l) { return contour(ModelKind::kH2, PartitionKind::kII, l, false); }},
      {"fig8a", [](bool) { return gaps(ModelKind::kH1); }},
      {"fig8b", [](bool) { return gaps(ModelKind::kH2); }},
      {"fig8c", [](bool) { return square_dos(ModelKind::kH1); }},
      {"fig8d", [](bool) { return square_dos(ModelKind::kH2); }},
      {"fig8e", [](bool l) { return carpet_kpm(ModelKind::kH1, l); }},
      {"fig8f", [](bool l) { return carpet_kpm(ModelKind::kH2, l); }},
      {"figA4",
       [](bool l) {
         auto c = contour(ModelKind::kH1, PartitionKind::kIV, l, true);
         c.tasks.push_back(Task::kProfiles);
         return c;
       }},
  };
  return t;
}

}  // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : table()) ids.push_back(id);
  return ids;
}

RunConfig figure_config(const std::string& id, bool allow_large) {
  const auto& t = table();
  const auto it = t.find(id);
  if (it == t.end()) {
    std::string known;
    for (const auto& [k, fn] : t) known += (known.empty() ? "" : ", ") + k;
    throw ValidationError(fmt::format("reproduce: unknown figure id '{}' (known: {})", id, known));
  }
  return it->second(allow_large);
}

RunReport reproduce(const std::string& id, const std::filesystem::path& out_dir, bool allow_large) {
  return run(figure_config(id, allow_large), out_dir);
}

}  // namespace fractent
