// Copyright 2026 The Silpan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "silpan/panoptic_io.h"
#include "silpan/raster_io.h"
#include "silpan/silhouette.h"

namespace silpan {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "silpan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = CliMain(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path Scratch(const std::string& name) {
  auto dir = fs::path(::testing::TempDir()) / ("silpan_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST(CliTest, PipelineOnCleanSceneScoresPerfectly) {
  const fs::path d = Scratch("pipeline");
  const std::string s = d.string();
  auto r = RunCli({"synth", "--out-dir", s, "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"compose", "--detections", s + "/detections.json", "--bases",
           s + "/bases.grid", "--output-dir", s + "/inst"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("kept "), std::string::npos);
  r = RunCli({"fuse", "--instances", s + "/inst/instances.json", "--stuff",
           s + "/stuff.grid", "--categories", s + "/categories.json",
           "--output", s + "/pred"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"eval", "--pred", s + "/pred", "--gt", s + "/gt", "--categories",
           s + "/categories.json", "--json", s + "/report.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("PQ 1.0000  SQ 1.0000  RQ 1.0000", 0), 0u) << r.out;
  const auto report = nlohmann::json::parse(Slurp(d / "report.json"));
  EXPECT_EQ(report.at("pq").get<double>(), 1.0);
}

TEST(CliTest, IdenticalBundlesEvaluateToOne) {
  const fs::path d = Scratch("identical");
  const std::string s = d.string();
  ASSERT_EQ(RunCli({"synth", "--out-dir", s, "--seed", "3", "--count", "2"}).code,
            0);
  const std::string a = s + "/scene_0000/gt";
  const std::string b = s + "/scene_0001/gt";
  auto r = RunCli({"eval", "--pred", a, b, "--gt", a, b, "--categories",
                s + "/scene_0000/categories.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("PQ 1.0000", 0), 0u) << r.out;
  r = RunCli({"eval", "--pred", a, "--gt", a, b, "--categories",
           s + "/scene_0000/categories.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("silpan: error: INVALID_ARGUMENT: ", 0), 0u) << r.err;
}

TEST(CliTest, SynthIsByteIdentical) {
  const fs::path a = Scratch("det_a");
  const fs::path b = Scratch("det_b");
  const std::vector<std::string> extra = {"--seed", "7", "--box-jitter", "2",
                                          "--mask-flip-prob", "0.02"};
  for (const fs::path& d : {a, b}) {
    std::vector<std::string> args = {"synth", "--out-dir", d.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    ASSERT_EQ(RunCli(args).code, 0);
  }
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path rel = fs::relative(e.path(), a);
    ASSERT_TRUE(fs::exists(b / rel)) << rel;
    EXPECT_EQ(Slurp(e.path()), Slurp(b / rel)) << rel;
  }
  EXPECT_GE(files, 7);
}

TEST(CliTest, SilhouetteMatchesLibrary) {
  const fs::path d = Scratch("silhouette");
  const std::string s = d.string();
  ASSERT_EQ(RunCli({"synth", "--out-dir", s, "--seed", "2"}).code, 0);
  auto r = RunCli({"silhouette", "--input", s + "/gt", "--output", s + "/sil"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto gt = LoadPanoptic(s + "/gt");
  ASSERT_TRUE(gt.ok());
  auto pair = ExtractSilhouettePair(gt->map, gt->table);
  ASSERT_TRUE(pair.ok());
  for (const auto& [file, want] :
       {std::pair{"sil_things.png", &pair->things},
        std::pair{"sil_stuff.png", &pair->stuff}}) {
    auto raster = DecodePng(Slurp(d / file));
    ASSERT_TRUE(raster.ok()) << file;
    EXPECT_EQ(*RasterToMask(*raster), *want) << file;
  }
  r = RunCli({"silhouette", "--input", s + "/gt", "--output", s + "/all",
           "--target", "all"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(d / "all.png"));
}

TEST(CliTest, CheckGradPasses) {
  auto r = RunCli({"check-grad", "--instances", "20"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliTest, UsageErrorsExitTwo) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"frobnicate"},
           {},
           {"eval", "--bogus"},
           {"synth"},
           {"silhouette", "--input", "x", "--output", "y", "--target", "edges"},
           {"print-config", "--alpha", "notanumber"}}) {
    auto r = RunCli(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args[0]);
    EXPECT_EQ(r.err.rfind("silpan: error: USAGE: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST(CliTest, RuntimeErrorsExitOne) {
  const fs::path d = Scratch("runtime");
  auto r = RunCli({"eval", "--pred", (d / "nope").string(), "--gt",
                (d / "nope").string(), "--categories",
                (d / "cats.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("silpan: error: NOT_FOUND: ", 0), 0u) << r.err;
  r = RunCli({"print-config", "--alpha", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("silpan: error: INVALID_ARGUMENT: ", 0), 0u) << r.err;
}

TEST(CliTest, HelpExitsZero) {
  auto r = RunCli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("check-grad"), std::string::npos);
}

TEST(CliTest, FlagsOverrideConfigFile) {
  const fs::path d = Scratch("config");
  const fs::path cfg = d / "silpan.cfg";
  std::ofstream(cfg) << "alpha = 0.5\nscore_min = 0.25\n";
  auto r = RunCli({"print-config", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("alpha = 0.5\n"), std::string::npos);
  EXPECT_NE(r.out.find("score-min = 0.25\n"), std::string::npos);
  r = RunCli({"print-config", "--config", cfg.string(), "--alpha", "0.7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("alpha = 0.7\n"), std::string::npos);
  EXPECT_NE(r.out.find("score-min = 0.25\n"), std::string::npos);
  r = RunCli({"--alpha", "0.6", "print-config"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("alpha = 0.6\n"), std::string::npos);

  // The printed config is itself a valid config file.
  const fs::path dumped = d / "dumped.cfg";
  std::ofstream(dumped) << r.out;
  auto again = RunCli({"print-config", "--config", dumped.string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.out, r.out);

  std::ofstream(cfg) << "unknown_key = 1\n";
  r = RunCli({"print-config", "--config", cfg.string()});
  EXPECT_EQ(r.code, 1);
}

}  // namespace
}  // namespace silpan
