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


#include "cli.h"

#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "json.hpp"
#include "silpan/blend.h"
#include "silpan/config.h"
#include "silpan/fusion.h"
#include "silpan/gradcheck.h"
#include "silpan/metrics.h"
#include "silpan/panoptic_io.h"
#include "silpan/raster_io.h"
#include "silpan/records.h"
#include "silpan/scoring.h"
#include "silpan/silhouette.h"
#include "silpan/status_macros.h"
#include "silpan/synth.h"

namespace silpan {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct SilhouetteArgs {
  std::string input;
  std::string output;
  std::string target = "pair";
};

struct ComposeArgs {
  std::string detections;
  std::string bases;
  std::string output_dir;
};

struct FuseArgs {
  std::string instances;
  std::string stuff;
  std::string categories;
  std::string output;
};

struct EvalArgs {
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  std::string categories;
  std::string json;
};

struct SynthArgs {
  std::string out_dir;
  int count = 1;
};

struct CheckGradArgs {
  int instances = 100;
  double tol = kGradientTolerance;
};

absl::Status RunSilhouette(const SilhouetteArgs& args, std::ostream& out) {
  SILPAN_ASSIGN_OR_RETURN(const PanopticResult result,
                          LoadPanoptic(args.input));
  auto write = [&](const BinaryMask& mask,
                   const std::string& path) -> absl::Status {
    SILPAN_ASSIGN_OR_RETURN(const std::string png,
                            EncodePng(MaskToRaster(mask)));
    SILPAN_RETURN_IF_ERROR(WriteFile(path, png));
    out << path << " " << mask.Count() << "\n";
    return absl::OkStatus();
  };
  if (args.target == "pair") {
    SILPAN_ASSIGN_OR_RETURN(
        const SilhouettePair pair,
        ExtractSilhouettePair(result.map, result.table));
    SILPAN_RETURN_IF_ERROR(write(pair.things, args.output + "_things.png"));
    return write(pair.stuff, args.output + "_stuff.png");
  }
  SilhouetteTarget target = SilhouetteTarget::kAll;
  if (args.target == "things") target = SilhouetteTarget::kThings;
  if (args.target == "stuff") target = SilhouetteTarget::kStuff;
  SILPAN_ASSIGN_OR_RETURN(
      const BinaryMask mask,
      ExtractSilhouette(result.map, result.table, target));
  return write(mask, args.output + ".png");
}

absl::Status RunCompose(const ComposeArgs& args, const Config& config,
                        std::ostream& out) {
  SILPAN_ASSIGN_OR_RETURN(const std::string text, ReadFile(args.detections));
  SILPAN_ASSIGN_OR_RETURN(const InstanceFile file, InstanceFileFromJson(text));
  SILPAN_ASSIGN_OR_RETURN(const DenseGrid3 bases, LoadGrid(args.bases));
  const int h = bases.height();
  const int w = bases.width();
  if ((file.height != 0 || file.width != 0) &&
      (file.height != h || file.width != w)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "detections are for a %dx%d image but bases are %dx%d", file.height,
        file.width, h, w));
  }
  std::vector<Detection> dets;
  for (const InstanceRecord& r : file.records) dets.push_back(r.detection);
  SILPAN_ASSIGN_OR_RETURN(const std::vector<int> kept,
                          Nms(dets, config.nms_iou));
  std::vector<ScoredInstance> instances;
  for (int i : kept) {
    const InstanceRecord& r = file.records[i];
    SILPAN_ASSIGN_OR_RETURN(
        InstanceMask mask, ComposeInstance(r.detection.attention, bases,
                                           r.detection.box, h, w, config.blend));
    SILPAN_ASSIGN_OR_RETURN(
        ScoredInstance inst,
        MakeScoredInstance(r.detection, std::move(mask), r.iou_score,
                           r.silhouette_score, config.alpha));
    instances.push_back(std::move(inst));
  }
  SILPAN_RETURN_IF_ERROR(SaveInstances(instances, h, w, args.output_dir));
  out << "kept " << kept.size() << " of " << dets.size() << " detections\n";
  return absl::OkStatus();
}

absl::Status RunFuse(const FuseArgs& args, const Config& config,
                     std::ostream& out) {
  SILPAN_ASSIGN_OR_RETURN(const std::string cats_text,
                          ReadFile(args.categories));
  SILPAN_ASSIGN_OR_RETURN(const CategoryRegistry registry,
                          CategoriesFromJson(cats_text));
  SILPAN_ASSIGN_OR_RETURN(const std::vector<ScoredInstance> instances,
                          LoadInstances(args.instances, config.alpha));
  SILPAN_ASSIGN_OR_RETURN(const DenseGrid3 stuff, LoadGrid(args.stuff));
  for (const ScoredInstance& inst : instances) {
    const std::optional<Category> cat = registry.Find(inst.detection.class_id);
    if (!cat.has_value() || !cat->is_thing) {
      return absl::InvalidArgumentError(absl::StrCat(
          "instance class ", inst.detection.class_id,
          " is not a thing category"));
    }
  }
  const std::vector<int> stuff_ids = registry.StuffIds();
  SILPAN_ASSIGN_OR_RETURN(
      const PanopticResult result,
      FusePanoptic(instances, stuff, stuff_ids, config.Fusion()));
  SILPAN_RETURN_IF_ERROR(SavePanoptic(result, args.output));
  int things = 0;
  for (const auto& [id, info] : result.table) things += info.is_thing;
  out << "segments " << result.table.size() << " (things " << things
      << ", stuff " << result.table.size() - things << ")\n";
  return absl::OkStatus();
}

std::string FormatReport(const PQReport& r, const CategoryRegistry& registry) {
  std::string s = absl::StrFormat(
      "PQ %.4f  SQ %.4f  RQ %.4f\nPQ_things %.4f  PQ_stuff %.4f\n"
      "classes %d (things %d, stuff %d)\n",
      r.pq, r.sq, r.rq, r.pq_things, r.pq_stuff, r.num_classes, r.num_things,
      r.num_stuff);
  absl::StrAppendFormat(&s, "%-8s %-16s %-5s %7s %7s %7s %6s %6s %6s\n", "id",
                        "name", "kind", "PQ", "SQ", "RQ", "TP", "FP", "FN");
  for (const ClassReport& c : r.per_class) {
    const std::optional<Category> cat = registry.Find(c.category_id);
    const std::string name = cat ? cat->name : "";
    if (c.included) {
      absl::StrAppendFormat(&s, "%-8d %-16s %-5s %7.4f %7.4f %7.4f %6d %6d %6d\n",
                            c.category_id, name, c.is_thing ? "thing" : "stuff",
                            c.pq, c.sq, c.rq, c.tp, c.fp, c.fn);
    } else {
      absl::StrAppendFormat(&s, "%-8d %-16s %-5s %7s %7s %7s %6d %6d %6d\n",
                            c.category_id, name, c.is_thing ? "thing" : "stuff",
                            "-", "-", "-", c.tp, c.fp, c.fn);
    }
  }
  return s;
}

std::string ReportToJson(const PQReport& r) {
  nlohmann::ordered_json j;
  j["pq"] = r.pq;
  j["sq"] = r.sq;
  j["rq"] = r.rq;
  j["pq_things"] = r.pq_things;
  j["pq_stuff"] = r.pq_stuff;
  j["num_classes"] = r.num_classes;
  j["num_things"] = r.num_things;
  j["num_stuff"] = r.num_stuff;
  j["per_class"] = nlohmann::ordered_json::array();
  for (const ClassReport& c : r.per_class) {
    nlohmann::ordered_json e;
    e["category_id"] = c.category_id;
    e["is_thing"] = c.is_thing;
    e["tp"] = c.tp;
    e["fp"] = c.fp;
    e["fn"] = c.fn;
    e["iou_sum"] = c.iou_sum;
    e["included"] = c.included;
    if (c.included) {
      e["pq"] = c.pq;
      e["sq"] = c.sq;
      e["rq"] = c.rq;
    }
    j["per_class"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

absl::Status RunEval(const EvalArgs& args, std::ostream& out) {
  if (args.pred.size() != args.gt.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("got ", args.pred.size(), " predictions but ",
                     args.gt.size(), " ground truths"));
  }
  SILPAN_ASSIGN_OR_RETURN(const std::string cats_text,
                          ReadFile(args.categories));
  SILPAN_ASSIGN_OR_RETURN(const CategoryRegistry registry,
                          CategoriesFromJson(cats_text));
  PQStats total = PQStats::ForRegistry(registry);
  for (std::size_t i = 0; i < args.pred.size(); ++i) {
    SILPAN_ASSIGN_OR_RETURN(const PanopticResult pred,
                            LoadPanoptic(args.pred[i]));
    SILPAN_ASSIGN_OR_RETURN(const PanopticResult gt, LoadPanoptic(args.gt[i]));
    SILPAN_ASSIGN_OR_RETURN(const PQStats stats,
                            ComputeImageStats(pred, gt, registry));
    SILPAN_ASSIGN_OR_RETURN(total, PqReduce(total, stats));
  }
  SILPAN_ASSIGN_OR_RETURN(const PQReport report, SummarizePq(total, registry));
  out << FormatReport(report, registry);
  if (!args.json.empty()) {
    SILPAN_RETURN_IF_ERROR(WriteFile(args.json, ReportToJson(report)));
  }
  return absl::OkStatus();
}

absl::Status WriteScene(const SyntheticScene& scene, const fs::path& dir) {
  SILPAN_RETURN_IF_ERROR(SavePanoptic(scene.gt, (dir / "gt").string()));
  InstanceFile dets{scene.gt.map.height(), scene.gt.map.width(), {}};
  for (const ScoredInstance& inst : scene.scored) {
    dets.records.push_back(InstanceRecord{inst.detection, inst.iou_score,
                                          inst.silhouette_score, std::nullopt,
                                          ""});
  }
  SILPAN_RETURN_IF_ERROR(WriteFile((dir / "detections.json").string(),
                                   InstanceFileToJson(dets)));
  SILPAN_RETURN_IF_ERROR(SaveGrid(scene.bases, (dir / "bases.grid").string()));
  SILPAN_RETURN_IF_ERROR(
      SaveGrid(scene.stuff_probs, (dir / "stuff.grid").string()));
  SILPAN_RETURN_IF_ERROR(WriteFile((dir / "categories.json").string(),
                                   CategoriesToJson(scene.categories)));
  return SaveInstances(scene.scored, scene.gt.map.height(),
                       scene.gt.map.width(), (dir / "instances").string());
}

absl::Status RunSynth(const SynthArgs& args, const Config& config,
                      std::ostream& out) {
  if (args.count < 1) {
    return absl::InvalidArgumentError("--count must be at least 1");
  }
  SILPAN_ASSIGN_OR_RETURN(SceneSpec spec, config.Scene());
  for (int i = 0; i < args.count; ++i) {
    spec.seed = config.seed + static_cast<std::uint64_t>(i);
    SILPAN_ASSIGN_OR_RETURN(const SyntheticScene scene, SynthScene(spec));
    fs::path dir(args.out_dir);
    if (args.count > 1) dir /= absl::StrFormat("scene_%04d", i);
    SILPAN_RETURN_IF_ERROR(WriteScene(scene, dir));
    out << dir.string() << " seed " << spec.seed << " instances "
        << scene.detections.size() << " segments " << scene.gt.table.size()
        << "\n";
  }
  return absl::OkStatus();
}

absl::Status RunCheckGrad(const CheckGradArgs& args, const Config& config,
                          std::ostream& out) {
  SILPAN_ASSIGN_OR_RETURN(
      const std::vector<GradSuiteResult> suites,
      RunGradientSuites(args.instances, config.seed, args.tol));
  bool all = true;
  for (const GradSuiteResult& s : suites) {
    out << absl::StrFormat("%-20s instances %d  max_rel_error %.3e  %s\n",
                           s.name, s.instances, s.max_rel_error,
                           s.passed ? "PASS" : "FAIL");
    all = all && s.passed;
  }
  if (!all) {
    return absl::InternalError(absl::StrFormat(
        "gradient check above tolerance %.1e", args.tol));
  }
  return absl::OkStatus();
}

void ReportError(std::ostream& err, const absl::Status& status) {
  err << "silpan: error: " << absl::StatusCodeToString(status.code()) << ": "
      << absl::StrReplaceAll(status.message(), {{"\n", " "}}) << "\n";
}

void ReportUsage(std::ostream& err, const std::string& message) {
  err << "silpan: error: USAGE: "
      << absl::StrReplaceAll(message, {{"\n", " "}})
      << " (run 'silpan --help')\n";
}

// Copies one schema field between configs.
void CopyKey(const ConfigTarget& from, const ConfigTarget& to) {
  std::visit(
      [&](auto* dst) {
        using P = decltype(dst);
        *dst = *std::get<P>(from);
      },
      to);
}

void AddConfigOption(CLI::App& app, const ConfigKey& key) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        const std::string flag = absl::StrCat("--", std::string(key.name));
        const std::string help(key.help);
        if constexpr (std::is_same_v<T, bool>) {
          app.add_flag(flag, *p, help);
        } else {
          app.add_option(flag, *p, help);
        }
      },
      key.target);
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app("Silhouette-aware panoptic segmentation toolkit.", "silpan");
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "flat key = value file; command-line flags override it");

  // Flags are parsed into `flags`; after the file is applied, only the ones
  // actually given on the command line are copied over.
  Config flags;
  std::vector<ConfigKey> flag_keys = ConfigKeys(flags);
  for (const ConfigKey& key : flag_keys) AddConfigOption(app, key);

  SilhouetteArgs sil;
  CLI::App* sil_cmd = app.add_subcommand(
      "silhouette", "extract silhouette masks from a panoptic bundle");
  sil_cmd->add_option("--input", sil.input, "panoptic bundle stem")->required();
  sil_cmd->add_option("--output", sil.output, "output path prefix")
      ->required();
  sil_cmd->add_option("--target", sil.target, "pair, things, stuff or all")
      ->check(CLI::IsMember({"pair", "things", "stuff", "all"}));

  ComposeArgs compose;
  CLI::App* compose_cmd = app.add_subcommand(
      "compose", "NMS, then blend attention and bases into instance masks");
  compose_cmd->add_option("--detections", compose.detections,
                          "detection record file")
      ->required();
  compose_cmd->add_option("--bases", compose.bases, "bases grid file")
      ->required();
  compose_cmd->add_option("--output-dir", compose.output_dir,
                          "directory for instances.json and masks")
      ->required();

  FuseArgs fuse;
  CLI::App* fuse_cmd =
      app.add_subcommand("fuse", "merge instances and stuff into a panoptic bundle");
  fuse_cmd->add_option("--instances", fuse.instances, "instances.json")
      ->required();
  fuse_cmd->add_option("--stuff", fuse.stuff, "stuff probability grid file")
      ->required();
  fuse_cmd->add_option("--categories", fuse.categories, "categories file")
      ->required();
  fuse_cmd->add_option("--output", fuse.output, "output bundle stem")
      ->required();

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "panoptic quality of predictions against gt");
  eval_cmd->add_option("--pred", eval.pred, "prediction bundle stems")
      ->required();
  eval_cmd->add_option("--gt", eval.gt, "ground-truth bundle stems")
      ->required();
  eval_cmd->add_option("--categories", eval.categories, "categories file")
      ->required();
  eval_cmd->add_option("--json", eval.json, "also write the report as JSON");

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "write seeded synthetic scenes");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")
      ->required();
  synth_cmd->add_option("--count", synth.count,
                        "number of scenes (seeds seed, seed+1, ...)");

  CheckGradArgs grad;
  CLI::App* grad_cmd = app.add_subcommand(
      "check-grad", "finite-difference check of the loss gradients");
  grad_cmd->add_option("--instances", grad.instances,
                       "random problems per suite");
  grad_cmd->add_option("--tol", grad.tol, "maximum relative error");

  CLI::App* config_cmd =
      app.add_subcommand("print-config", "print the effective configuration");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    if (app.get_subcommand_no_throw(name) == nullptr) {
      ReportUsage(err, absl::StrCat("unknown subcommand '", name, "'"));
      return kExitUsage;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ReportUsage(err, e.what());
    return kExitUsage;
  }

  Config config;
  if (!config_path.empty()) {
    if (absl::Status s = ApplyConfigFile(config_path, &config); !s.ok()) {
      ReportError(err, s);
      return kExitRuntime;
    }
  }
  std::vector<ConfigKey> keys = ConfigKeys(config);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const CLI::Option* opt =
        app.get_option(absl::StrCat("--", std::string(keys[i].name)));
    if (opt->count() > 0) CopyKey(flag_keys[i].target, keys[i].target);
  }
  if (absl::Status s = ValidateConfig(config); !s.ok()) {
    ReportError(err, s);
    return kExitRuntime;
  }

  absl::Status status;
  if (sil_cmd->parsed()) {
    status = RunSilhouette(sil, out);
  } else if (compose_cmd->parsed()) {
    status = RunCompose(compose, config, out);
  } else if (fuse_cmd->parsed()) {
    status = RunFuse(fuse, config, out);
  } else if (eval_cmd->parsed()) {
    status = RunEval(eval, out);
  } else if (synth_cmd->parsed()) {
    status = RunSynth(synth, config, out);
  } else if (grad_cmd->parsed()) {
    status = RunCheckGrad(grad, config, out);
  } else if (config_cmd->parsed()) {
    out << ConfigToText(config);
  }
  if (!status.ok()) {
    ReportError(err, status);
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace silpan
