// Copyright 2026 The interj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "interj/cli.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "interj/audio_io.h"
#include "interj/eval.h"
#include "interj/parallel.h"
#include "interj/random.h"
#include "json.hpp"

namespace interj {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void ConfigFail(const std::string &msg) {
  throw Error(ErrorCode::kConfigError, msg);
}

void CheckKeys(const json &obj, std::initializer_list<const char *> allowed,
               const std::string &where) {
  if (!obj.is_object()) ConfigFail(where + " must be an object");
  for (const auto &[key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char *a) { return key == a; }))
      ConfigFail("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void Read(const json &obj, const char *key, T *dst) {
  if (obj.contains(key)) *dst = obj.at(key).get<T>();
}

TestNoiseSpec ParseTestNoise(const json &j, const std::string &where) {
  CheckKeys(j, {"scenes", "min_w_orig", "max_w_orig"}, where);
  TestNoiseSpec t;
  Read(j, "scenes", &t.scenes);
  Read(j, "min_w_orig", &t.min_w_orig);
  Read(j, "max_w_orig", &t.max_w_orig);
  return t;
}

PlanSpec ParsePlan(const json &j, const std::string &name) {
  const std::string where = "plan '" + name + "'";
  CheckKeys(j, {"tempo", "pitch", "scenes", "weights", "compose", "white_noise",
                "allow_out_of_range"},
            where);
  PlanSpec p;
  Read(j, "tempo", &p.tempo);
  Read(j, "pitch", &p.pitch);
  Read(j, "scenes", &p.scenes);
  Read(j, "weights", &p.weights);
  Read(j, "compose", &p.compose);
  Read(j, "allow_out_of_range", &p.allow_out_of_range);
  if (j.contains("white_noise")) p.white_noise = j.at("white_noise").get<double>();
  if (!p.scenes.empty() && p.weights.empty())
    ConfigFail(where + " lists scenes but no weights");
  return p;
}

}  // namespace

PipelineConfig ParsePipelineConfig(const std::string &json_text) {
  PipelineConfig c;
  try {
    const json j = json::parse(json_text);
    CheckKeys(j, {"seed", "jobs", "paths", "preprocess", "synth", "features", "train",
                  "plans", "scenarios"},
              "config");
    Read(j, "seed", &c.seed);
    Read(j, "jobs", &c.jobs);
    if (j.contains("paths")) {
      const json &p = j.at("paths");
      CheckKeys(p, {"corpus", "scenes", "out"}, "paths");
      Read(p, "corpus", &c.corpus_dir);
      Read(p, "scenes", &c.scene_dir);
      Read(p, "out", &c.out_dir);
    }
    if (j.contains("preprocess")) {
      const json &p = j.at("preprocess");
      CheckKeys(p, {"min_seconds", "max_seconds", "canonical_seconds"}, "preprocess");
      Read(p, "min_seconds", &c.bounds.min_seconds);
      Read(p, "max_seconds", &c.bounds.max_seconds);
      Read(p, "canonical_seconds", &c.bounds.canonical_seconds);
    }
    if (j.contains("synth")) {
      const json &s = j.at("synth");
      CheckKeys(s, {"per_class", "speakers"}, "synth");
      if (s.contains("per_class")) {
        const json &pc = s.at("per_class");
        if (pc.is_array()) {
          if (pc.size() != kNumClasses) ConfigFail("synth.per_class needs 5 entries");
          for (size_t k = 0; k < kNumClasses; ++k) c.synth.per_class[k] = pc[k].get<size_t>();
        } else {
          c.synth.per_class.fill(pc.get<size_t>());
        }
      }
      Read(s, "speakers", &c.synth.speakers);
    }
    if (j.contains("features")) {
      const json &f = j.at("features");
      CheckKeys(f, {"frame_ms", "hop_ms", "contrast_quantile"}, "features");
      Read(f, "frame_ms", &c.features.stft.frame_ms);
      Read(f, "hop_ms", &c.features.stft.hop_ms);
      Read(f, "contrast_quantile", &c.features.contrast_quantile);
    }
    if (j.contains("train")) {
      const json &t = j.at("train");
      CheckKeys(t, {"epochs", "batch_size", "learning_rate", "hidden", "activation",
                    "patience", "shuffle"},
                "train");
      Read(t, "epochs", &c.train.epochs);
      Read(t, "batch_size", &c.train.batch_size);
      Read(t, "learning_rate", &c.train.learning_rate);
      Read(t, "hidden", &c.train.hidden);
      Read(t, "patience", &c.train.patience);
      Read(t, "shuffle", &c.train.shuffle);
      if (t.contains("activation"))
        c.train.activation = ParseActivation(t.at("activation").get<std::string>());
    }
    if (j.contains("plans")) {
      for (const auto &[name, plan] : j.at("plans").items())
        c.plans[name] = ParsePlan(plan, name);
    }
    if (j.contains("scenarios")) {
      const json &s = j.at("scenarios");
      CheckKeys(s, {"corpus", "include_originals", "scenario1", "scenario2"}, "scenarios");
      Read(s, "corpus", &c.scenario_corpus);
      Read(s, "include_originals", &c.include_originals);
      if (s.contains("scenario1")) {
        const json &s1 = s.at("scenario1");
        CheckKeys(s1, {"train_speakers", "validation_speakers", "test_speakers", "plans",
                       "test_noise"},
                  "scenario1");
        Read(s1, "train_speakers", &c.scenario1.split.train_speakers);
        Read(s1, "validation_speakers", &c.scenario1.split.validation_speakers);
        Read(s1, "test_speakers", &c.scenario1.split.test_speakers);
        Read(s1, "plans", &c.scenario1.plans);
        if (s1.contains("test_noise"))
          c.scenario1.test_noise = ParseTestNoise(s1.at("test_noise"), "scenario1.test_noise");
      }
      if (s.contains("scenario2")) {
        const json &s2 = s.at("scenario2");
        CheckKeys(s2, {"speakers", "plans", "test_noise"}, "scenario2");
        Read(s2, "speakers", &c.scenario2.speakers);
        Read(s2, "plans", &c.scenario2.plans);
        if (s2.contains("test_noise"))
          c.scenario2.test_noise = ParseTestNoise(s2.at("test_noise"), "scenario2.test_noise");
      }
    }
  } catch (const json::exception &e) {
    ConfigFail(std::string("config: ") + e.what());
  }
  if (c.jobs < 1) ConfigFail("jobs must be >= 1");
  for (const auto &names : {c.scenario1.plans, c.scenario2.plans})
    for (const auto &name : names)
      if (!c.plans.count(name)) ConfigFail("scenario refers to undefined plan '" + name + "'");
  return c;
}

PipelineConfig LoadPipelineConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) ConfigFail("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParsePipelineConfig(ss.str());
}

std::vector<SceneMix> SceneLibrary(const PipelineConfig &config) {
  if (config.scene_dir.empty()) return SyntheticScenes(DeriveSeed(config.seed, "scenes"));
  return LoadScenes(config.scene_dir,
                    SecondsToSamples(config.bounds.canonical_seconds, kCanonicalSampleRate));
}

namespace {

const SceneMix &FindScene(const std::vector<SceneMix> &library, const std::string &name) {
  for (const auto &s : library)
    if (s.name == name) return s;
  std::string known;
  for (const auto &s : library) known += (known.empty() ? "" : ", ") + s.name;
  ConfigFail("unknown scene '" + name + "' (available: " + known + ")");
}

std::vector<SceneMix> ResolveScenes(const std::vector<std::string> &names,
                                    const std::vector<SceneMix> &library) {
  std::vector<SceneMix> out;
  for (const auto &name : names) out.push_back(FindScene(library, name));
  return out;
}

}  // namespace

AugmentPlan ResolvePlan(const PlanSpec &spec, const std::vector<SceneMix> &library) {
  AugmentPlan plan;
  plan.tempo_factors = spec.tempo;
  plan.pitch_semitones = spec.pitch;
  plan.compose = spec.compose;
  plan.white_noise = spec.white_noise;
  plan.allow_out_of_range = spec.allow_out_of_range;
  for (const auto &name : spec.scenes) {
    SceneMix scene = FindScene(library, name);
    scene.weights = spec.weights;
    plan.scenes.push_back(std::move(scene));
  }
  ValidatePlan(plan);
  return plan;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kPlanInvalid:
      return 1;
    case ErrorCode::kNonFiniteLoss:
      return 3;
    default:
      return 2;
  }
}

namespace {

struct Context {
  PipelineConfig config;
  std::ostream &out;
  std::ostream &err;

  fs::path Out(const std::string &rel) const { return fs::path(config.out_dir) / rel; }
};

std::string Slug(const std::string &name) {
  std::string s;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    else if (!s.empty() && s.back() != '_')
      s += '_';
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s.empty() ? "plan" : s;
}

void WriteFile(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
}

std::string HashHex(const std::string &bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScenarioConfig MakeScenarioConfig(const PipelineConfig &c) {
  ScenarioConfig s;
  s.train = c.train;
  s.train.seed = DeriveSeed(c.seed, "init");
  s.features = c.features;
  s.bounds = c.bounds;
  s.seed = c.seed;
  s.include_originals = c.include_originals;
  s.jobs = c.jobs;
  return s;
}

std::vector<NamedPlan> ResolvePlans(const PipelineConfig &c,
                                    const std::vector<std::string> &names) {
  std::vector<NamedPlan> out;
  if (names.empty()) return out;
  bool needs_scenes = false;
  for (const auto &name : names) needs_scenes |= !c.plans.at(name).scenes.empty();
  const std::vector<SceneMix> library = needs_scenes ? SceneLibrary(c) : std::vector<SceneMix>{};
  for (const auto &name : names) out.push_back({name, ResolvePlan(c.plans.at(name), library)});
  return out;
}

void PrintManifestCounts(const Manifest &m, std::ostream &out) {
  std::map<std::string, size_t> per_label;
  for (const auto &row : m) ++per_label[row.label];
  for (const auto &name : ClassNames()) out << "  " << name << ": " << per_label[name] << "\n";
}

int CmdSynth(const Context &ctx) {
  SynthSpec spec = ctx.config.synth;
  spec.seed = ctx.config.seed;
  spec.bounds = ctx.config.bounds;
  const auto clips = SynthCorpus(spec);
  const fs::path root = ctx.Out("synth");
  const Manifest m = WriteCorpus(clips, root.string());
  WriteManifest(m, (root / "manifest.jsonl").string());
  ctx.out << "wrote " << m.size() << " clips to " << root.string() << "\n";
  PrintManifestCounts(m, ctx.out);
  return 0;
}

int CmdPreprocess(const Context &ctx) {
  if (ctx.config.corpus_dir.empty()) ConfigFail("paths.corpus is not set");
  const fs::path root = ctx.Out("preprocessed");
  IngestStats stats;
  const Manifest m = IngestTree(ctx.config.corpus_dir, root.string(), ctx.config.seed,
                                ctx.config.bounds, &stats, ctx.config.jobs);
  WriteManifest(m, (root / "manifest.jsonl").string());
  ctx.out << "accepted " << stats.accepted << ", rejected "
          << stats.too_short + stats.too_long << " (too short " << stats.too_short
          << ", too long " << stats.too_long << ")\n";
  ctx.out << "manifest: " << (root / "manifest.jsonl").string() << "\n";
  return 0;
}

fs::path DefaultManifest(const Context &ctx, const std::string &given) {
  if (!given.empty()) return given;
  return ctx.Out("preprocessed") / "manifest.jsonl";
}

int CmdAugment(const Context &ctx, const std::string &plan_name,
               const std::string &manifest_path) {
  const auto it = ctx.config.plans.find(plan_name);
  if (it == ctx.config.plans.end()) ConfigFail("no plan named '" + plan_name + "'");
  const std::vector<SceneMix> library =
      it->second.scenes.empty() ? std::vector<SceneMix>{} : SceneLibrary(ctx.config);
  const AugmentPlan plan = ResolvePlan(it->second, library);
  const size_t per_clip = ExpectedVariantCount(plan);
  if (per_clip == 0) ctx.err << "warning: plan '" << plan_name << "' generates no variants\n";

  const Manifest input = ReadManifest(DefaultManifest(ctx, manifest_path).string());
  const std::vector<AudioClip> clips = LoadCorpus(input);
  const fs::path root = ctx.Out("augmented") / Slug(plan_name);
  for (const auto &name : ClassNames()) fs::create_directories(root / name);

  std::vector<Manifest> rows(clips.size());
  const uint64_t seed = ctx.config.seed;
  ParallelFor(clips.size(), ctx.config.jobs, [&](size_t i) {
    const auto variants = ExpandPlan(plan, clips[i], DeriveSeed(seed, "augment", i));
    const std::string stem = fs::path(input[i].path).stem().string();
    for (size_t v = 0; v < variants.size(); ++v) {
      const AudioClip fitted = FitToCanonical(
          variants[v], DeriveSeed(DeriveSeed(seed, "fit", i), "variant", v), ctx.config.bounds);
      const fs::path path = root / input[i].label / (stem + "__" + ProvenanceSlug(fitted) + ".wav");
      WriteWav(fitted, path.string());
      rows[i].push_back({path.string(), input[i].label, input[i].speaker,
                         fitted.duration_seconds(), fitted.provenance_string()});
    }
  });
  Manifest m;
  std::map<std::string, std::pair<size_t, size_t>> counts;
  for (size_t i = 0; i < clips.size(); ++i) {
    if (ctx.config.include_originals) m.push_back(input[i]);
    ++counts[input[i].label].first;
    counts[input[i].label].second += rows[i].size();
    m.insert(m.end(), rows[i].begin(), rows[i].end());
  }
  WriteManifest(m, (root / "manifest.jsonl").string());

  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %9s %10s %8s\n", "Class", "Original", "Generated",
                "Total");
  ctx.out << "Plan " << plan_name << " (" << per_clip << " variants per clip)\n" << buf;
  size_t total_orig = 0, total_gen = 0;
  for (const auto &name : ClassNames()) {
    const auto [orig, gen] = counts[name];
    std::snprintf(buf, sizeof buf, "%-10s %9zu %10zu %8zu\n", name.c_str(), orig, gen,
                  orig + gen);
    ctx.out << buf;
    total_orig += orig;
    total_gen += gen;
  }
  std::snprintf(buf, sizeof buf, "%-10s %9zu %10zu %8zu\n", "all", total_orig, total_gen,
                total_orig + total_gen);
  ctx.out << buf << "manifest: " << (root / "manifest.jsonl").string() << "\n";
  return 0;
}

int CmdFeaturize(const Context &ctx, const std::string &manifest_path,
                 const std::string &output) {
  const Manifest m = ReadManifest(DefaultManifest(ctx, manifest_path).string());
  const std::vector<AudioClip> clips = LoadCorpus(m);
  std::vector<FeatureRow> rows(clips.size());
  ParallelFor(clips.size(), ctx.config.jobs, [&](size_t i) {
    rows[i] = {m[i].label, m[i].speaker, m[i].provenance,
               Featurize(clips[i], ctx.config.features)};
  });
  const fs::path path = output.empty() ? ctx.Out("features.csv") : fs::path(output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteFeatureCsv(rows, path.string());
  ctx.out << "wrote " << rows.size() << " rows x " << kFeatureDim << " features to "
          << path.string() << "\n";
  return 0;
}

LabeledRows RowsFromCsv(const std::string &path) {
  const auto rows = ReadFeatureCsv(path);
  LabeledRows out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), kFeatureDim);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < kFeatureDim; ++j)
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i].features.values[j];
    out.labels.push_back(LabelIndex(rows[i].label));
  }
  return out;
}

std::string TrainConfigJson(const TrainConfig &t) {
  json j;
  j["epochs"] = t.epochs;
  j["batch_size"] = t.batch_size;
  j["learning_rate"] = t.learning_rate;
  j["hidden"] = t.hidden;
  j["activation"] = std::string(ActivationName(t.activation));
  j["seed"] = t.seed;
  j["patience"] = t.patience;
  j["shuffle"] = t.shuffle;
  return j.dump();
}

int CmdTrain(const Context &ctx, const std::string &features, const std::string &validation,
             const std::string &output) {
  const LabeledRows train = RowsFromCsv(features);
  const LabeledRows val = validation.empty() ? LabeledRows{} : RowsFromCsv(validation);
  TrainConfig tc = ctx.config.train;
  tc.seed = DeriveSeed(ctx.config.seed, "init");
  const TrainResult result = Train(train, val, tc);
  const fs::path path = output.empty() ? ctx.Out("model.json") : fs::path(output);
  const std::string text = SerializeCheckpoint(result.params, HashHex(TrainConfigJson(tc)));
  WriteFile(path, text);
  const EpochStats &best = result.history[static_cast<size_t>(result.best_epoch - 1)];
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "epochs run %zu, best epoch %d: train loss %.4f acc %.3f", result.history.size(),
                result.best_epoch, best.train_loss, best.train_accuracy);
  ctx.out << buf;
  if (val.size() > 0) {
    std::snprintf(buf, sizeof buf, ", validation loss %.4f acc %.3f", best.validation_loss,
                  best.validation_accuracy);
    ctx.out << buf;
  }
  ctx.out << "\ncheckpoint " << path.string() << " hash " << HashHex(text) << "\n";
  return 0;
}

int CmdEvaluate(const Context &ctx, const std::string &model_path, const std::string &features) {
  const fs::path path = model_path.empty() ? ctx.Out("model.json") : fs::path(model_path);
  const ModelParams params = LoadCheckpoint(path.string());
  if (params.input_dim() != kFeatureDim)
    throw Error(ErrorCode::kShapeMismatch,
                "checkpoint takes " + std::to_string(params.input_dim()) +
                    " features, expected " + std::to_string(kFeatureDim));
  const LabeledRows rows = RowsFromCsv(features);
  const Metrics m = ComputeMetrics(rows.labels, Predict(params, rows.features));
  char buf[128];
  std::snprintf(buf, sizeof buf, "rows %zu  accuracy %.4f  macro-F1 %.4f\n", m.total,
                m.accuracy, m.macro_f1);
  ctx.out << buf << "confusion (rows = truth):\n";
  json report;
  report["accuracy"] = m.accuracy;
  report["macro_f1"] = m.macro_f1;
  report["rows"] = m.total;
  for (size_t t = 0; t < kNumClasses; ++t) {
    std::snprintf(buf, sizeof buf, "  %-9s", ClassNames()[t].c_str());
    ctx.out << buf;
    for (size_t p = 0; p < kNumClasses; ++p) {
      std::snprintf(buf, sizeof buf, " %6zu", m.confusion[t][p]);
      ctx.out << buf;
    }
    ctx.out << "\n";
    report["f1"][ClassNames()[t]] = m.f1[t];
    report["confusion"].push_back(m.confusion[t]);
  }
  WriteFile(ctx.Out("evaluation.json"), report.dump(2) + "\n");
  return 0;
}

std::vector<AudioClip> ScenarioCorpus(const PipelineConfig &c) {
  if (c.scenario_corpus == "synth") {
    SynthSpec spec = c.synth;
    spec.seed = c.seed;
    spec.bounds = c.bounds;
    return SynthCorpus(spec);
  }
  return LoadCorpus(ReadManifest(c.scenario_corpus));
}

void EmitReport(const Context &ctx, const ScenarioReport &report, const std::string &stem) {
  WriteFile(ctx.Out(stem + ".csv"), FormatReportCsv(report));
  const std::string text = FormatReportText(report);
  WriteFile(ctx.Out(stem + ".txt"), text);
  ctx.out << text << "wrote " << ctx.Out(stem + ".csv").string() << "\n\n";
}

int CmdScenario1(const Context &ctx) {
  const PipelineConfig &c = ctx.config;
  const std::vector<NamedPlan> plans = ResolvePlans(c, c.scenario1.plans);
  std::vector<AudioClip> clips = ScenarioCorpus(c);
  const TestNoiseSpec &noise = c.scenario1.test_noise;
  if (!noise.scenes.empty())
    clips = NoiseShiftSpeakers(clips, c.scenario1.split.test_speakers,
                               ResolveScenes(noise.scenes, SceneLibrary(c)), noise.min_w_orig,
                               noise.max_w_orig, DeriveSeed(c.seed, "testnoise"));
  const auto reports = RunScenario1(clips, plans, c.scenario1.split, MakeScenarioConfig(c));
  for (size_t i = 0; i < reports.size(); ++i)
    EmitReport(ctx, reports[i], "scenario1_" + c.scenario1.split.test_speakers[i]);
  if (reports.size() > 1)
    EmitReport(ctx, AverageReports("Scenario 1: mean over test speakers", reports),
               "scenario1_mean");
  return 0;
}

int CmdScenario2(const Context &ctx) {
  const PipelineConfig &c = ctx.config;
  if (c.scenario2.speakers.empty()) ConfigFail("scenario2.speakers is empty");
  if (c.scenario2.test_noise.scenes.empty()) ConfigFail("scenario2.test_noise.scenes is empty");
  const std::vector<NamedPlan> plans = ResolvePlans(c, c.scenario2.plans);
  const std::vector<SceneMix> test_scenes =
      ResolveScenes(c.scenario2.test_noise.scenes, SceneLibrary(c));
  for (const auto &name : c.scenario2.plans)
    for (const auto &scene : c.plans.at(name).scenes)
      if (std::count(c.scenario2.test_noise.scenes.begin(), c.scenario2.test_noise.scenes.end(),
                     scene))
        ctx.err << "warning: scene '" << scene << "' is used by both plan '" << name
                << "' and the noisy test set\n";
  const std::vector<AudioClip> clips = ScenarioCorpus(c);
  std::vector<ScenarioReport> reports;
  for (size_t s = 0; s < c.scenario2.speakers.size(); ++s) {
    const std::string &speaker = c.scenario2.speakers[s];
    std::vector<AudioClip> own;
    for (const auto &clip : clips)
      if (clip.speaker == speaker) own.push_back(clip);
    if (own.empty()) throw Error(ErrorCode::kUnknownSpeaker, "no clips for speaker " + speaker);
    const Scenario2Data data =
        BuildScenario2Data(own, test_scenes, c.scenario2.test_noise.min_w_orig,
                           c.scenario2.test_noise.max_w_orig, DeriveSeed(c.seed, "scenario2", s));
    ScenarioReport r =
        RunScenario2(data.train, data.validation, data.noisy_test, plans, MakeScenarioConfig(c));
    r.title = "Scenario 2: speaker " + speaker + ", noisy test set";
    if (c.scenario2.speakers.size() > 1) EmitReport(ctx, r, "scenario2_" + speaker);
    reports.push_back(std::move(r));
  }
  EmitReport(ctx,
             reports.size() == 1 ? reports[0]
                                 : AverageReports("Scenario 2: mean over speakers", reports),
             "scenario2");
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Interjection classification pipeline with audio data augmentation", "interj"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Root seed (overrides config)");
  app.add_option("--jobs", jobs, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory (overrides config)");

  auto *synth = app.add_subcommand("synth", "Write the synthetic interjection corpus");
  auto *preprocess = app.add_subcommand("preprocess", "Gate and pad a <label>/<clip>.wav tree");
  std::string plan_name, manifest, output, features, validation, model;
  auto *augment = app.add_subcommand("augment", "Expand a manifest under a named plan");
  augment->add_option("plan", plan_name, "Plan name from the config")->required();
  augment->add_option("--manifest", manifest, "Input manifest");
  auto *featurize = app.add_subcommand("featurize", "Write the 193-column feature CSV");
  featurize->add_option("--manifest", manifest, "Input manifest");
  featurize->add_option("--output", output, "Feature CSV path");
  auto *train = app.add_subcommand("train", "Train a classifier on a feature CSV");
  train->add_option("--features", features, "Training feature CSV")->required();
  train->add_option("--validation", validation, "Validation feature CSV");
  train->add_option("--output", output, "Checkpoint path");
  auto *evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a feature CSV");
  evaluate->add_option("--model", model, "Checkpoint path");
  evaluate->add_option("--features", features, "Feature CSV")->required();
  int which = 0;
  auto *scenario = app.add_subcommand("scenario", "Run evaluation scenario 1 or 2");
  scenario->add_option("which", which, "1 (unseen speakers) or 2 (noisy test set)")
      ->required()
      ->check(CLI::IsMember({1, 2}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Context ctx{config_path.empty() ? PipelineConfig{} : LoadPipelineConfig(config_path), out,
                err};
    if (seed) ctx.config.seed = *seed;
    if (jobs) ctx.config.jobs = *jobs;
    if (!out_dir.empty()) ctx.config.out_dir = out_dir;
    if (*synth) return CmdSynth(ctx);
    if (*preprocess) return CmdPreprocess(ctx);
    if (*augment) return CmdAugment(ctx, plan_name, manifest);
    if (*featurize) return CmdFeaturize(ctx, manifest, output);
    if (*train) return CmdTrain(ctx, features, validation, output);
    if (*evaluate) return CmdEvaluate(ctx, model, features);
    if (*scenario) return which == 1 ? CmdScenario1(ctx) : CmdScenario2(ctx);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace interj
