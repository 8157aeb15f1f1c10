#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fractent/error.hpp"
#include "fractent/io.hpp"
#include "fractent/pipeline.hpp"

using namespace fractent;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("fractent_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string validation_message(const std::string& text) {
  try {
    validate(parse(text));
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

const char* kSmall = R"(
[lattice]
orders = 1, 2, 3
[model]
kind = H1
[partition]
name = IV
[tasks]
list = ee, contour, gaps, fits
)";

}  // namespace

TEST(Config, RoundTrip) {
  const auto cfg = parse(kSmall);
  EXPECT_EQ(cfg.orders, (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(cfg.has(Task::kFits));
  EXPECT_FALSE(cfg.has(Task::kEf));
  const auto text = serialize_config(cfg);
  EXPECT_EQ(serialize_config(parse(text)), text);
}

TEST(Config, DefaultsMatchModelConventions) {
  const auto cfg = parse("");
  EXPECT_EQ(cfg.model.kind, ModelKind::kH1);
  EXPECT_DOUBLE_EQ(cfg.model.t, 1.0);
  EXPECT_DOUBLE_EQ(cfg.model.mu, 0.0);
  EXPECT_DOUBLE_EQ(cfg.model.t1, 0.5);
  EXPECT_EQ(cfg.seed, 1u);
}

TEST(Config, FieldLevelErrors) {
  EXPECT_NE(validation_message("[partition]\nname = V\n").find("partition"), std::string::npos);
  EXPECT_NE(validation_message("[model]\nt = 0\n[tasks]\nlist = ee\n").find("model.t"), std::string::npos);
  EXPECT_NE(validation_message("[lattice]\norders = -1\n[tasks]\nlist = ee\n").find("lattice.orders"), std::string::npos);
  EXPECT_NE(validation_message("[tasks]\nlist = fits\n").find("ee"), std::string::npos);
  EXPECT_NE(validation_message("[tasks]\nlist = profiles, contour\n").find("ef"), std::string::npos);
  EXPECT_NE(validation_message("[lattice]\nbogus = 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(validation_message("[lattice]\norders = two\n").find("orders"), std::string::npos);
}

TEST(Config, CapacityCheckedBeforeWork) {
  auto cfg = parse("[lattice]\norders = 5\n[tasks]\nlist = ee\n");
  EXPECT_THROW(validate(cfg), CapacityError);
  const auto out = scratch("capacity");
  EXPECT_THROW(run(cfg, out), CapacityError);
  EXPECT_FALSE(fs::exists(out / "manifest.txt"));
  cfg.allow_large = true;
  cfg.dense_limit = 4096;
  EXPECT_THROW(validate(cfg), CapacityError);
}

TEST(Run, DeterministicArtifacts) {
  auto cfg = parse(kSmall);
  const auto a = run(cfg, scratch("det_a"));
  const auto b = run(cfg, scratch("det_b"));
  ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
    EXPECT_EQ(a.artifacts[i].name, b.artifacts[i].name);
    EXPECT_EQ(a.artifacts[i].sha256, b.artifacts[i].sha256) << a.artifacts[i].name;
  }
  EXPECT_EQ(read_file(a.manifest), read_file(b.manifest));
}

TEST(Run, WorkersDoNotChangeResults) {
  auto cfg = parse(kSmall);
  const auto a = run(cfg, scratch("w1"));
  cfg.workers = 3;
  const auto b = run(cfg, scratch("w3"));
  ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) EXPECT_EQ(a.artifacts[i].sha256, b.artifacts[i].sha256);
}

TEST(Run, ManifestReplays) {
  const auto out = scratch("replay");
  const auto first = run(parse(kSmall), out);
  const auto replay = run(load_config(first.manifest), scratch("replay2"));
  EXPECT_EQ(read_file(first.manifest), read_file(replay.manifest));
  const auto text = read_file(first.manifest);
  for (const auto& a : first.artifacts) {
    EXPECT_NE(text.find(a.name + " = " + a.sha256), std::string::npos) << a.name;
    EXPECT_EQ(sha256_file(out / a.name), a.sha256);
  }
}

TEST(Run, StochasticDosFollowsSeed) {
  auto cfg = parse("[lattice]\norders = 2\n[tasks]\nlist = dos\n[dos]\nmethod = stochastic-chebyshev\nbins = 33\nmoments = 64\nvectors = 4\n");
  const auto a = run(cfg, scratch("seed_a"));
  cfg.seed = 2;
  const auto b = run(cfg, scratch("seed_b"));
  ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) differs |= a.artifacts[i].sha256 != b.artifacts[i].sha256;
  EXPECT_TRUE(differs);
}

TEST(Reproduce, KnownFigures) {
  const auto ids = figure_ids();
  EXPECT_GE(ids.size(), 10u);
  for (const auto& id : ids) EXPECT_NO_THROW(validate(figure_config(id))) << id;
  EXPECT_THROW(figure_config("fig99"), ValidationError);
}

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  Image img(2, 1);
  img.set(1, 0, {1, 2, 3});
  EXPECT_EQ(img.to_ppm(), std::string("P6\n2 1\n255\n\xff\xff\xff\x01\x02\x03", 17));
}
