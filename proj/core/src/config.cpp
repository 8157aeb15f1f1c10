#include "fractent/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "fractent/error.hpp"

namespace fractent {

std::string to_string(LatticeKind k) {
  switch (k) {
    case LatticeKind::kCarpet: return "carpet";
    case LatticeKind::kGeneralized: return "generalized";
    case LatticeKind::kSquare: return "square";
  }
  return "carpet";
}

namespace {

constexpr std::pair<Task, const char*> kTaskNames[] = {
    {Task::kEe, "ee"},         {Task::kContour, "contour"}, {Task::kEf, "ef"},
    {Task::kProfiles, "profiles"}, {Task::kDos, "dos"},     {Task::kGaps, "gaps"},
    {Task::kFits, "fits"},     {Task::kBaseline, "baseline"}};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

class Fields {
 public:
  explicit Fields(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  std::optional<std::string> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  template <class T>
  void number(const std::string& key, T& out) {
    if (auto v = take(key)) out = parse_number<T>(key, *v);
  }

  void boolean(const std::string& key, bool& out) {
    if (auto v = take(key)) {
      if (*v == "true" || *v == "1" || *v == "yes")
        out = true;
      else if (*v == "false" || *v == "0" || *v == "no")
        out = false;
      else
        throw ValidationError(fmt::format("{}: expected true or false, got '{}'", key, *v));
    }
  }

  void int_list(const std::string& key, std::vector<int>& out) {
    if (auto v = take(key)) {
      out.clear();
      for (const auto& item : split_list(*v)) out.push_back(parse_number<int>(key, item));
    }
  }

  void reject_leftovers() const {
    if (!kv_.empty()) throw ValidationError(fmt::format("{}: unknown key", kv_.begin()->first));
  }

  template <class T>
  static T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* b = text.data();
    const char* e = b + text.size();
    auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc() || ptr != e)
      throw ValidationError(fmt::format("{}: cannot parse '{}' as a number", key, text));
    return value;
  }

 private:
  std::map<std::string, std::string> kv_;
};

const std::set<std::string> kIgnoredSections = {"conventions", "artifacts", "manifest"};

}  // namespace

std::string to_string(Task t) {
  for (auto [task, name] : kTaskNames)
    if (task == t) return name;
  return "?";
}

Task parse_task(const std::string& text) {
  for (auto [task, name] : kTaskNames)
    if (text == name) return task;
  throw ValidationError(fmt::format("tasks.list: unknown task '{}'", text));
}

bool RunConfig::has(Task t) const { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); }

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError(fmt::format("{}:{}: malformed section header", source, lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(fmt::format("{}:{}: expected key = value", source, lineno));
    if (kIgnoredSections.count(section)) continue;
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    if (kv.count(key)) throw ValidationError(fmt::format("{}:{}: duplicate key {}", source, lineno, key));
    kv[key] = trim(line.substr(eq + 1));
  }

  RunConfig c;
  Fields f(std::move(kv));
  if (auto v = f.take("lattice.kind")) {
    if (*v == "carpet")
      c.lattice = LatticeKind::kCarpet;
    else if (*v == "generalized")
      c.lattice = LatticeKind::kGeneralized;
    else if (*v == "square")
      c.lattice = LatticeKind::kSquare;
    else
      throw ValidationError(fmt::format("lattice.kind: unknown lattice '{}'", *v));
  }
  f.int_list("lattice.orders", c.orders);
  f.number("lattice.s", c.s);
  f.number("lattice.m", c.m);
  f.number("lattice.m_f", c.m_f);
  f.int_list("lattice.sizes", c.sizes);
  f.boolean("lattice.periodic", c.periodic);

  if (auto v = f.take("model.kind")) c.model.kind = parse_model_kind(*v);
  f.number("model.t", c.model.t);
  f.number("model.mu", c.model.mu);
  f.number("model.t1", c.model.t1);
  if (auto v = f.take("model.filling")) c.filling = parse_filling(*v);

  if (auto v = f.take("partition.name")) c.partition = parse_partition_kind(*v);
  if (auto v = f.take("partition.mask")) c.mask_path = *v;

  if (auto v = f.take("tasks.list")) {
    c.tasks.clear();
    for (const auto& t : split_list(*v)) c.tasks.push_back(parse_task(t));
  }

  if (auto v = f.take("ef.launch")) c.launch.kind = parse_launch_kind(*v);
  f.number("ef.levels", c.launch.levels);
  f.boolean("ef.exclude_b4", c.exclude_b4);
  f.number("ef.permutations", c.permutations);

  f.number("profiles.min_iy", c.window.min_iy);
  f.number("profiles.keep_fraction", c.window.keep_fraction);

  f.number("fits.alpha_lo", c.alpha_grid.lo);
  f.number("fits.alpha_hi", c.alpha_grid.hi);
  f.number("fits.alpha_step", c.alpha_grid.step);

  if (auto v = f.take("dos.method")) c.dos_method = parse_dos_method(*v);
  f.number("dos.bins", c.dos_bins);
  f.number("dos.moments", c.dos_moments);
  f.number("dos.vectors", c.dos_vectors);
  {
    auto lo = f.take("dos.range_lo");
    auto hi = f.take("dos.range_hi");
    if (lo.has_value() != hi.has_value())
      throw ValidationError("dos.range_lo: range_lo and range_hi must be given together");
    if (lo)
      c.dos_range = std::pair{Fields::parse_number<double>("dos.range_lo", *lo),
                              Fields::parse_number<double>("dos.range_hi", *hi)};
  }

  f.int_list("baseline.sizes", c.baseline_sizes);

  f.number("run.seed", c.seed);
  f.number("run.dense_limit", c.dense_limit);
  f.number("run.site_limit", c.site_limit);
  f.boolean("run.allow_large", c.allow_large);
  f.number("run.workers", c.workers);
  f.reject_leftovers();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("config: cannot open '{}'", path.string()));
  return parse_config(in, path.string());
}

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::string s;
  s += "[lattice]\n";
  s += "kind = " + to_string(c.lattice) + "\n";
  s += "orders = " + join(c.orders) + "\n";
  s += fmt::format("s = {}\nm = {}\nm_f = {}\n", c.s, c.m, c.m_f);
  if (!c.sizes.empty()) s += "sizes = " + join(c.sizes) + "\n";
  s += fmt::format("periodic = {}\n", c.periodic);
  s += "\n[model]\n";
  s += "kind = " + to_string(c.model.kind) + "\n";
  s += "t = " + num(c.model.t) + "\n";
  s += "mu = " + num(c.model.mu) + "\n";
  s += "t1 = " + num(c.model.t1) + "\n";
  s += "filling = " + to_string(c.filling) + "\n";
  s += "\n[partition]\n";
  s += "name = " + to_string(c.partition) + "\n";
  if (!c.mask_path.empty()) s += "mask = " + c.mask_path + "\n";
  s += "\n[tasks]\nlist = ";
  for (std::size_t i = 0; i < c.tasks.size(); ++i) s += (i ? "," : "") + to_string(c.tasks[i]);
  s += "\n\n[ef]\n";
  s += "launch = " + to_string(c.launch.kind) + "\n";
  s += fmt::format("levels = {}\nexclude_b4 = {}\npermutations = {}\n", c.launch.levels, c.exclude_b4,
                   c.permutations);
  s += "\n[profiles]\n";
  s += fmt::format("min_iy = {}\nkeep_fraction = {}\n", c.window.min_iy, num(c.window.keep_fraction));
  s += "\n[fits]\n";
  s += "alpha_lo = " + num(c.alpha_grid.lo) + "\nalpha_hi = " + num(c.alpha_grid.hi) +
       "\nalpha_step = " + num(c.alpha_grid.step) + "\n";
  s += "\n[dos]\n";
  s += "method = " + to_string(c.dos_method) + "\n";
  s += fmt::format("bins = {}\nmoments = {}\nvectors = {}\n", c.dos_bins, c.dos_moments, c.dos_vectors);
  if (c.dos_range)
    s += "range_lo = " + num(c.dos_range->first) + "\nrange_hi = " + num(c.dos_range->second) + "\n";
  s += "\n[baseline]\nsizes = " + join(c.baseline_sizes) + "\n";
  s += "\n[run]\n";
  s += fmt::format("seed = {}\ndense_limit = {}\nsite_limit = {}\nallow_large = {}\nworkers = {}\n", c.seed,
                   c.dense_limit, c.site_limit, c.allow_large, c.workers);
  return s;
}

void validate(const RunConfig& c) {
  if (c.tasks.empty()) throw ValidationError("tasks.list: no tasks requested");
  if (c.workers < 1) throw ValidationError("run.workers: must be >= 1");
  if (c.model.t == 0.0) throw ValidationError("model.t: hopping must be nonzero");
  if (c.s < 1 || c.s > 3) throw ValidationError("lattice.s: must be in 1..3");

  const bool square = c.lattice == LatticeKind::kSquare;
  std::vector<std::size_t> dims;
  if (square) {
    if (c.sizes.empty()) throw ValidationError("lattice.sizes: square lattices need at least one size");
    for (int L : c.sizes) {
      if (L < 2) throw ValidationError(fmt::format("lattice.sizes: side {} must be >= 2", L));
      if (c.periodic && L < 3) throw ValidationError("lattice.sizes: periodic sides must be >= 3");
      const auto n = static_cast<std::size_t>(L) * static_cast<std::size_t>(L);
      if (n > c.site_limit)
        throw CapacityError(fmt::format("lattice.sizes: {}x{} exceeds site limit {}", L, L, c.site_limit));
      dims.push_back(n * static_cast<std::size_t>(c.model.orbitals()));
    }
  } else {
    if (c.periodic) throw ValidationError("lattice.periodic: only square lattices can be periodic");
    if (c.orders.empty()) throw ValidationError("lattice.orders: need at least one order");
    const IterationRule rule = c.lattice == LatticeKind::kCarpet ? IterationRule::carpet()
                                                                 : IterationRule(c.m, c.m_f);
    if (c.lattice == LatticeKind::kGeneralized && c.s != 1)
      throw ValidationError("lattice.s: generalized carpets use s = 1");
    for (std::size_t i = 0; i < c.orders.size(); ++i) {
      const int n = c.orders[i];
      if (n < 0) throw ValidationError(fmt::format("lattice.orders: order {} is negative", n));
      if (i && n <= c.orders[i - 1]) throw ValidationError("lattice.orders: must be strictly increasing");
      if (n > kDeskOrderCap && !c.allow_large)
        throw CapacityError(
            fmt::format("lattice.orders: order {} exceeds the desk cap {}; pass --allow-large", n, kDeskOrderCap));
      const auto count = expected_site_count(rule, n, c.s);
      if (count > c.site_limit)
        throw CapacityError(fmt::format("lattice.orders: order {} has {} sites, limit {}", n, count, c.site_limit));
      dims.push_back(count * static_cast<std::size_t>(c.model.orbitals()));
    }
  }

  const bool builtin_carpet_partition =
      c.partition == PartitionKind::kI || c.partition == PartitionKind::kII || c.partition == PartitionKind::kIII;
  if (c.partition == PartitionKind::kCustom && c.mask_path.empty())
    throw ValidationError("partition.mask: custom partition needs a mask file");
  if (builtin_carpet_partition && c.lattice != LatticeKind::kCarpet)
    throw ValidationError(
        fmt::format("partition.name: partition {} needs a carpet lattice", to_string(c.partition)));

  if (c.has(Task::kFits) && !c.has(Task::kEe)) throw ValidationError("tasks.list: fits requires ee");
  if (c.has(Task::kProfiles) && !(c.has(Task::kContour) && c.has(Task::kEf)))
    throw ValidationError("tasks.list: profiles requires contour and ef");
  if ((c.has(Task::kEf) || c.has(Task::kGaps)) && c.lattice != LatticeKind::kCarpet)
    throw ValidationError("tasks.list: ef and gaps need a carpet lattice");
  if (c.has(Task::kEf) && c.s != 1) throw ValidationError("lattice.s: ef needs s = 1");
  if (c.has(Task::kFits)) {
    if (dims.size() < 3) throw ValidationError("lattice.orders: fits need at least three lattices");
    c.alpha_grid.values();
  }
  if (c.permutations < 2) throw ValidationError("ef.permutations: must be >= 2");
  if (c.window.min_iy < 1) throw ValidationError("profiles.min_iy: must be >= 1");
  if (!(c.window.keep_fraction > 0.0 && c.window.keep_fraction <= 1.0))
    throw ValidationError("profiles.keep_fraction: must be in (0, 1]");
  if (c.dos_bins < 1) throw ValidationError("dos.bins: must be >= 1");
  if (c.dos_method == DosMethod::kStochasticChebyshev) {
    if (c.dos_moments < 32) throw ValidationError("dos.moments: must be >= 32");
    if (c.dos_vectors < 1) throw ValidationError("dos.vectors: must be >= 1");
  }
  if (c.dos_range && !(c.dos_range->second > c.dos_range->first))
    throw ValidationError("dos.range_lo: range must be increasing");

  const bool dense = c.has(Task::kEe) || c.has(Task::kContour) || c.has(Task::kGaps) ||
                     (c.has(Task::kDos) && c.dos_method == DosMethod::kExactHistogram);
  if (dense)
    for (auto d : dims)
      if (d > c.dense_limit)
        throw CapacityError(
            fmt::format("run.dense_limit: matrix dimension {} exceeds dense limit {}", d, c.dense_limit));
  if (c.has(Task::kBaseline)) {
    if (c.baseline_sizes.size() < 3) throw ValidationError("baseline.sizes: need at least three sizes");
    for (std::size_t i = 0; i < c.baseline_sizes.size(); ++i) {
      const int L = c.baseline_sizes[i];
      if (L < 2) throw ValidationError("baseline.sizes: sides must be >= 2");
      if (i && L <= c.baseline_sizes[i - 1]) throw ValidationError("baseline.sizes: must be strictly increasing");
      const auto d = static_cast<std::size_t>(L) * L * static_cast<std::size_t>(c.model.orbitals());
      if (d > c.dense_limit)
        throw CapacityError(fmt::format("baseline.sizes: dimension {} exceeds dense limit {}", d, c.dense_limit));
    }
  }
}

}  // namespace fractent
