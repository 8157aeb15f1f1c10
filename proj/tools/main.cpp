// fractent command-line front end.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fractent/config.hpp"
#include "fractent/error.hpp"
#include "fractent/pipeline.hpp"

namespace {

struct Overrides {
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool allow_large = false;

  void apply(fractent::RunConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (allow_large) cfg.allow_large = true;
  }
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for stochastic DOS and permutation nulls");
  cmd->add_option("--workers", o.workers, "Parallel jobs")->check(CLI::PositiveNumber);
  cmd->add_flag("--allow-large", o.allow_large, "Permit carpet orders above 4");
}

void print(const fractent::RunReport& r) {
  for (const auto& line : r.summary) std::cout << line << '\n';
  std::cout << r.artifacts.size() << " artifacts, manifest " << r.manifest.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-fermion entanglement on Sierpinski-carpet lattices"};
  app.require_subcommand(1);

  Overrides o;
  std::string config_path;

  auto* lattice = app.add_subcommand("lattice", "Export lattice sites, bonds and partition masks");
  std::optional<int> order;
  int cell = 1;
  lattice->add_option("--config", config_path, "Run config")->check(CLI::ExistingFile);
  lattice->add_option("--order", order, "Carpet order when no config is given");
  lattice->add_option("--s", cell, "Cell width when no config is given")->capture_default_str();
  add_common(lattice, o);

  auto* run = app.add_subcommand("run", "Run the tasks of a config");
  run->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);
  add_common(run, o);

  auto* reproduce = app.add_subcommand("reproduce", "Run a canned figure config");
  std::string figure;
  reproduce->add_option("figure", figure, "Figure id, e.g. fig2b")->required();
  add_common(reproduce, o);

  auto* validate = app.add_subcommand("validate", "Check a config without computing");
  validate->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);
  validate->add_flag("--allow-large", o.allow_large, "Permit carpet orders above 4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*lattice) {
      fractent::RunConfig cfg;
      if (!config_path.empty()) {
        cfg = fractent::load_config(config_path);
      } else {
        cfg.orders = {order.value_or(3)};
        cfg.s = cell;
      }
      o.apply(cfg);
      print(fractent::export_lattices(cfg, o.out));
    } else if (*run) {
      auto cfg = fractent::load_config(config_path);
      o.apply(cfg);
      print(fractent::run(cfg, o.out));
    } else if (*reproduce) {
      auto cfg = fractent::figure_config(figure, o.allow_large);
      o.apply(cfg);
      print(fractent::run(cfg, o.out));
    } else if (*validate) {
      auto cfg = fractent::load_config(config_path);
      o.apply(cfg);
      fractent::validate(cfg);
      std::cout << "config ok\n";
    }
  } catch (const fractent::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
