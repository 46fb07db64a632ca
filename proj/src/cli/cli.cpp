// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/cli/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rpd/core/digest.h"
#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/core/validate.h"
#include "rpd/corpus/synth.h"
#include "rpd/enable3d/enable3d.h"
#include "rpd/io/bookshelf.h"
#include "rpd/io/lefdef.h"
#include "rpd/metrics/metrics.h"
#include "rpd/part/partition.h"
#include "rpd/remap/remap.h"
#include "rpd/repair/repair.h"
#include "rpd/tierview/tierview.h"

namespace rpd::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

// Serialized writer for one --out tree.
class OutDir
{
 public:
  explicit OutDir(fs::path root) : root_(std::move(root))
  {
    for (const char* sub : kLayout) {
      fs::create_directories(root_ / sub);
    }
  }

  fs::path path(const std::string& rel) const { return root_ / rel; }

  void write(const std::string& rel, std::string_view content)
  {
    std::lock_guard<std::mutex> lock(mutex_);
    writeFile(path(rel).string(), content);
  }

  void writeJson(const std::string& rel, const Json& doc) { write(rel, doc.dump(2) + "\n"); }

  // SHA-256 of every artifact except the run-varying metrics records.
  std::size_t writeDigests()
  {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& entry : fs::recursive_directory_iterator(root_)) {
      if (!entry.is_regular_file()) {
        continue;
      }
      const std::string rel = fs::relative(entry.path(), root_).generic_string();
      if (rel == kDigestFile || rel.ends_with(".metrics.json")) {
        continue;
      }
      rows.emplace_back(rel, sha256Hex(readFile(entry.path().string())));
    }
    std::sort(rows.begin(), rows.end());
    std::string text;
    for (const auto& [rel, hex] : rows) {
      text += fmt::format("{}  {}\n", hex, rel);
    }
    write(kDigestFile, text);
    return rows.size();
  }

  static constexpr const char* kDigestFile = "reports/artifacts.sha256";

 private:
  fs::path root_;
  std::mutex mutex_;
};

struct Globals
{
  std::string out = "out";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string config;
  bool strict = false;
};

struct Inputs
{
  std::string aux;
  std::vector<std::string> lef;
  std::string def;
  std::int64_t synth = 0;
};

void addInputs(CLI::App* sub, Inputs& in)
{
  sub->add_option("--aux", in.aux, "Bookshelf .aux file");
  sub->add_option("--lef", in.lef, "LEF files, technology first");
  sub->add_option("--def", in.def, "DEF file (needs --lef)");
  sub->add_option("--synth", in.synth, "Generate a synthetic design of this many instances")
      ->check(CLI::PositiveNumber);
}

const lefdef::LefSubset& synthLibrary()
{
  static const lefdef::LefSubset lib = corpus::syntheticLibrary(corpus::syntheticTech());
  return lib;
}

lefdef::LefSubset readLefs(const std::vector<std::string>& paths)
{
  lefdef::LefSubset lib;
  for (const std::string& p : paths) {
    lib = lefdef::parseLef(readFile(p), std::move(lib));
  }
  return lib;
}

// A library view of the masters a design already carries.
lefdef::LefSubset libraryOf(const Design& design)
{
  lefdef::LefSubset lib;
  lib.tech.name = design.name;
  lib.tech.units = design.units;
  lib.tech.sites = design.sites;
  for (const Master& m : design.masters) {
    if (!m.isCover()) {
      lib.macros.push_back(m);
    }
  }
  return lib;
}

struct Loaded
{
  Design design;
  lefdef::LefSubset lib;
};

Loaded loadDesign(const Inputs& in, std::uint64_t seed)
{
  const int sources = !in.aux.empty() + !in.def.empty() + (in.synth > 0);
  if (sources != 1) {
    throw UsageError("exactly one of --aux, --def or --synth is required");
  }
  if (!in.aux.empty()) {
    Design d = bookshelf::bundleToDesign(bookshelf::parseBookshelf(in.aux));
    lefdef::LefSubset lib = libraryOf(d);
    return {std::move(d), std::move(lib)};
  }
  if (!in.def.empty()) {
    if (in.lef.empty()) {
      throw UsageError("--def needs at least one --lef");
    }
    lefdef::LefSubset lib = readLefs(in.lef);
    Design d = lefdef::parseDef(readFile(in.def), lib);
    return {std::move(d), std::move(lib)};
  }
  corpus::SynthConfig cfg;
  cfg.num_instances = in.synth;
  cfg.seed = seed;
  return {corpus::generateSynthetic(cfg, synthLibrary()), synthLibrary()};
}

std::string stemOf(const Design& design)
{
  return design.name.empty() ? std::string("design") : lefdef::sanitizeIdentifier(design.name);
}

TechStack techFor(const lefdef::LefSubset& lib, const Design& design)
{
  TechStack tech = lib.tech;
  for (const Site& s : design.sites) {
    if (tech.findSite(s.name) == nullptr) {
      tech.sites.push_back(s);
    }
  }
  return tech;
}

void writeDesignFiles(OutDir& out,
                      const std::string& dir,
                      const std::string& stem,
                      const Design& design,
                      const TechStack& tech)
{
  out.write(fmt::format("{}/{}.def", dir, stem), lefdef::writeDef(design));
  out.write(fmt::format("{}/{}.v", dir, stem), lefdef::writeStructuralNetlist(design));
  out.write(fmt::format("tech/{}.lef", stem), lefdef::writeLef(tech, design.masters));
}

void merge(ValidationReport& into, const ValidationReport& from, std::string_view prefix = {})
{
  for (const Violation& v : from.violations) {
    into.add(v.code, prefix.empty() ? v.locus : fmt::format("{}:{}", prefix, v.locus));
  }
}

Json toJson(const ValidationReport& report, const std::string& command)
{
  Json j;
  j["command"] = command;
  j["count"] = report.size();
  std::map<std::string, std::int64_t> by_code;
  Json list = Json::array();
  for (const Violation& v : report.violations) {
    ++by_code[v.code];
    list.push_back({{"code", v.code}, {"locus", v.locus}});
  }
  j["by_code"] = by_code;
  j["violations"] = std::move(list);
  return j;
}

struct Outcome
{
  ValidationReport validation;
  metrics::MetricsRecord record;
};

int finish(const std::string& command,
           Outcome outcome,
           std::chrono::steady_clock::time_point start,
           const Globals& g,
           OutDir& out,
           std::ostream& os,
           std::ostream& err)
{
  metrics::MetricsRecord& r = outcome.record;
  r.violations.clear();
  for (const Violation& v : outcome.validation.violations) {
    ++r.violations[v.code];
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.memory_peak_kb = metrics::peakRssKb();
  out.writeJson(fmt::format("reports/{}.validation.json", command),
                toJson(outcome.validation, command));
  out.write(fmt::format("reports/{}.metrics.json", command), metrics::emitMetrics(r));
  const std::size_t artifacts = out.writeDigests();
  os << fmt::format("{}: {} artifacts in {}, {} violations\n",
                    command,
                    artifacts,
                    g.out,
                    outcome.validation.size());
  if (!outcome.validation.empty()) {
    err << fmt::format("rosetta-pd: {}: {} validation violations (first: {} {})\n",
                       command,
                       outcome.validation.size(),
                       outcome.validation.violations.front().code,
                       outcome.validation.violations.front().locus);
    if (g.strict) {
      return kExitFailure;
    }
  }
  return kExitOk;
}

// Subcommands.

struct TranslateOpts
{
  Inputs in;
  std::string from;
  std::string to;
};

Outcome translate(const TranslateOpts& o, const Globals& g, OutDir& out)
{
  Design design;
  lefdef::LefSubset lib;
  std::string to = o.to;
  if (o.from == "bookshelf") {
    if (o.in.aux.empty()) {
      throw UsageError("--from bookshelf needs --aux");
    }
    Loaded l = loadDesign({o.in.aux, {}, {}, 0}, g.seed);
    design = std::move(l.design);
    lib = std::move(l.lib);
    to = to.empty() ? "def" : to;
  } else {
    if (o.in.def.empty()) {
      throw UsageError(fmt::format("--from {} needs --lef and --def", o.from));
    }
    Loaded l = loadDesign({{}, o.in.lef, o.in.def, 0}, g.seed);
    design = std::move(l.design);
    lib = std::move(l.lib);
    to = to.empty() ? (o.from == "fakelefdef" ? "bookshelf" : "def") : to;
  }
  const std::string stem = stemOf(design);
  if (to == "def") {
    writeDesignFiles(out, "designs", stem, design, techFor(lib, design));
  } else {
    const bookshelf::Bundle bundle = o.from == "fakelefdef" ? remap::fakeToBookshelf(lib, design)
                                                            : bookshelf::designToBundle(design);
    const fs::path dir = out.path("designs/" + stem);
    fs::create_directories(dir);
    bookshelf::writeBundle(bundle, dir.string());
  }
  return {validateDesign(design), metrics::measure(design, "translate", "2d")};
}

struct RepairOpts
{
  Inputs in;
  double max_area_ratio = 64.0;
  Dbu grid = 1;
};

Outcome repairCmd(const RepairOpts& o, const Globals& g, OutDir& out)
{
  Loaded l = loadDesign(o.in, g.seed);
  repair::RepairConfig cfg;
  cfg.max_instance_area_ratio = o.max_area_ratio;
  cfg.grid = o.grid;
  cfg.strict = g.strict;
  repair::RepairResult res = repair::repairPipeline(l.design, cfg);
  writeDesignFiles(out,
                   "designs",
                   stemOf(l.design) + "_repaired",
                   res.design,
                   techFor(l.lib, res.design));
  out.writeJson("reports/repair.json", repair::toJson(res.log));
  return {validateDesign(res.design), metrics::measure(res.design, "repair", "2d")};
}

struct RemapOpts
{
  Inputs in;
  std::vector<std::string> target_lef;
  bool allow_pin_drop = false;
};

Outcome remapCmd(const RemapOpts& o, const Globals&, OutDir& out)
{
  bookshelf::Bundle bundle;
  if (!o.in.aux.empty() && o.in.def.empty()) {
    bundle = bookshelf::parseBookshelf(o.in.aux);
  } else if (o.in.aux.empty() && !o.in.def.empty() && !o.in.lef.empty()) {
    const lefdef::LefSubset src = readLefs(o.in.lef);
    bundle = remap::fakeToBookshelf(src, lefdef::parseDef(readFile(o.in.def), src));
  } else {
    throw UsageError("remap needs --aux, or --lef with --def, as its source");
  }
  const lefdef::LefSubset target = readLefs(o.target_lef);
  remap::RemapPolicy policy;
  policy.allow_pin_drop = o.allow_pin_drop;
  remap::RemapResult res = remap::remapToPdk(bundle, target, policy);
  const std::string stem = stemOf(res.design) + "_remap";
  out.write(fmt::format("designs/{}.def", stem), lefdef::writeDef(res.design));
  out.write(fmt::format("designs/{}.v", stem), lefdef::writeStructuralNetlist(res.design));
  out.write(fmt::format("tech/{}.lef", stem), lefdef::writeLef(res.used));
  out.writeJson("reports/remap.json", remap::toJson(res.report));
  metrics::MetricsRecord r = metrics::measure(res.design, "remap", "2d");
  if (!target.tech.name.empty()) {
    r.enablement = target.tech.name;
  }
  return {remap::legalityCheck(res.design, target), r};
}

struct Enable3dOpts
{
  std::vector<std::string> lef;
  std::vector<std::string> top_lef;
  double pitch = 1.0;
  std::vector<double> pitches;
  bool compat = false;
  std::string name = "stack";
};

Outcome enable3dCmd(const Enable3dOpts& o, const Globals&, OutDir& out)
{
  const lefdef::LefSubset bottom = o.lef.empty() ? synthLibrary() : readLefs(o.lef);
  const lefdef::LefSubset top = o.top_lef.empty() ? bottom : readLefs(o.top_lef);
  enable3d::StackConfig cfg;
  cfg.bottom_tech = bottom.tech;
  cfg.top_tech = top.tech;
  cfg.hbt = enable3d::hbtPitchSweep(enable3d::HbtSpec{}, {o.pitch}).front();
  cfg.legacy_compat_layers = o.compat;
  const TechStack tech = enable3d::build3dTech(cfg);

  std::vector<Master> masters;
  auto append = [&](std::vector<Master> more) {
    masters.insert(masters.end(),
                   std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
  };
  append(enable3d::deriveTierMasters(bottom, Tier::kBottom));
  append(enable3d::deriveCoverMasters(bottom, Tier::kBottom));
  append(enable3d::deriveTierMasters(top, Tier::kUpper));
  append(enable3d::deriveCoverMasters(top, Tier::kUpper));
  out.write(fmt::format("tech/{}_3d.lef", o.name), lefdef::writeLef(tech, masters));
  out.writeJson(fmt::format("tech/{}_manifest.json", o.name), enable3d::stackManifest(cfg, tech));
  if (!o.top_lef.empty()) {
    const enable3d::UnifiedLibrary unified = enable3d::buildUnifiedLibrary(bottom, top);
    out.write(fmt::format("tech/{}_unified.lef", o.name), lefdef::writeLef(unified.lib));
    out.writeJson("reports/hidden_pins.json", enable3d::toJson(unified.report));
  }

  ValidationReport validation;
  std::vector<enable3d::HbtSpec> specs{cfg.hbt};
  if (!o.pitches.empty()) {
    const auto sweep = enable3d::hbtPitchSweep(enable3d::HbtSpec{}, o.pitches);
    Json list = Json::array();
    for (const auto& s : sweep) {
      list.push_back(enable3d::toJson(s));
    }
    out.writeJson("reports/hbt_pitch_sweep.json", list);
    specs.insert(specs.end(), sweep.begin(), sweep.end());
  }
  for (const auto& s : specs) {
    if (s.width != s.spacing || s.pitch != s.width + s.spacing) {
      validation.add("HBT_RULE", fmt::format("pitch {}", s.pitch));
    }
  }
  metrics::MetricsRecord r;
  r.design = o.name;
  r.stage = "enable3d";
  r.flow = "3d";
  r.enablement = tech.name;
  r.units = tech.units;
  return {validation, r};
}

struct PartitionOpts
{
  Inputs in;
  std::string sweep = "none";
  double lo = 2.0;
  double hi = 10.0;
  int points = 11;
  int seeds = 1;
  double ubfactor = 10.0;
  double start0 = 0.06;
  double epsilon = 0.02;
  int starts = 8;
  int max_passes = 64;
  int resample_size = 15;
  int resamples = 1000;
};

Json partitionJson(const Design& design,
                   const part::Hypergraph& h,
                   const part::PartitionResult& pr)
{
  Json j;
  j["design"] = design.name;
  j["seed"] = pr.seed;
  j["cutsize"] = pr.cutsize;
  j["feasible"] = pr.feasible;
  j["balance"] = {{"target0", pr.balance.target0},
                  {"target1", pr.balance.target1},
                  {"epsilon", pr.balance.epsilon}};
  Json sides = Json::object();
  for (std::size_t v = 0; v < h.numVertices(); ++v) {
    sides[h.names[v]] = pr.side[v];
  }
  j["sides"] = std::move(sides);
  return j;
}

Outcome partitionCmd(const PartitionOpts& o, const Globals& g, OutDir& out)
{
  Loaded l = loadDesign(o.in, g.seed);
  const part::Hypergraph h = part::designToHypergraph(l.design);
  part::SweepOptions sopts;
  sopts.seeds.clear();
  for (int k = 0; k < o.seeds; ++k) {
    sopts.seeds.push_back(g.seed + static_cast<std::uint64_t>(k));
  }
  sopts.jobs = g.jobs;
  sopts.fm.starts = o.starts;
  sopts.fm.max_passes = o.max_passes;
  sopts.resample_size = o.resample_size;
  sopts.resamples = o.resamples;
  sopts.bootstrap_seed = g.seed;

  std::optional<part::SweepResult> sweep;
  if (o.sweep == "ub") {
    sweep = part::ubfactorSweep(h, o.lo, o.hi, o.points, sopts);
  } else if (o.sweep == "base") {
    sweep = part::baseBalanceSweep(h, o.start0, o.points, sopts, o.epsilon);
  } else {
    sweep = part::ubfactorSweep(h, o.ubfactor, o.ubfactor, 1, sopts);
  }
  if (o.sweep != "none") {
    out.writeJson("reports/sweep.json", part::toJson(*sweep));
    out.write("reports/sweep.csv", part::sweepCsv(*sweep));
  }
  if (!sweep->best) {
    fail(Errc::kInfeasibleBalance, "no seed reached any balance window");
  }
  const part::PartitionResult& pr = *sweep->best;
  out.writeJson("reports/partition.json", partitionJson(l.design, h, pr));
  metrics::MetricsRecord r = metrics::measure(l.design, "partition", "3d");
  r.cutsize = pr.cutsize;
  return {validateDesign(l.design), r};
}

struct TierviewOpts
{
  Inputs in;
  std::vector<std::string> top_lef;
  std::string partition;
  std::string stack = "auto";
  std::string strategy = "restricted";
  double ubfactor = 10.0;
  int starts = 8;
};

part::PartitionResult readPartition(const std::string& path, const part::Hypergraph& h)
{
  const auto doc = nlohmann::json::parse(readFile(path));
  part::PartitionResult pr;
  pr.side.resize(h.numVertices(), 0);
  const auto& sides = doc.at("sides");
  for (std::size_t v = 0; v < h.numVertices(); ++v) {
    const auto it = sides.find(h.names[v]);
    if (it == sides.end()) {
      fail(Errc::kCoverageGap,
           fmt::format("partition file '{}' does not cover instance '{}'", path, h.names[v]));
    }
    pr.side[v] = it->get<int>() == 0 ? 0 : 1;
  }
  pr.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("balance")) {
    pr.balance.target0 = doc["balance"].value("target0", 0.5);
    pr.balance.target1 = doc["balance"].value("target1", 0.5);
    pr.balance.epsilon = doc["balance"].value("epsilon", 0.0);
  }
  pr.cutsize = part::cutsize(h, pr.side);
  pr.feasible = part::balanced(pr.balance, h.totalWeight(), [&] {
    std::int64_t w = 0;
    for (std::size_t v = 0; v < h.numVertices(); ++v) {
      w += pr.side[v] == 0 ? h.weights[v] : 0;
    }
    return w;
  }());
  return pr;
}

Outcome tierviewCmd(const TierviewOpts& o, const Globals& g, OutDir& out)
{
  Loaded l = loadDesign(o.in, g.seed);
  const lefdef::LefSubset top = o.top_lef.empty() ? l.lib : readLefs(o.top_lef);
  const bool hetero
      = o.stack == "auto" ? !o.top_lef.empty() : o.stack == "heterogeneous";
  enable3d::HiddenPinReport hidden;
  if (!o.top_lef.empty()) {
    hidden = enable3d::buildUnifiedLibrary(l.lib, top).report;
  }
  const part::Hypergraph h = part::designToHypergraph(l.design);
  part::PartitionResult pr;
  if (!o.partition.empty()) {
    pr = readPartition(o.partition, h);
  } else {
    part::FmOptions fm;
    fm.starts = o.starts;
    pr = part::fmBipartition(h, {0.5, 0.5, o.ubfactor / 100.0}, g.seed, fm);
  }
  const auto ta = tierview::assignTiers(
      l.design, h, pr, hetero ? tierview::StackKind::kHeterogeneous : tierview::StackKind::kHomogeneous);
  const auto bottom_lib = tierview::tierLibrary(l.lib, Tier::kBottom);
  const auto upper_lib = tierview::tierLibrary(top, Tier::kUpper);
  const auto views = tierview::generateTierViews(l.design, ta, bottom_lib, upper_lib, hidden);

  const std::string stem = stemOf(l.design);
  TechStack tech;
  tech.name = stem + "_tiers";
  tech.units = l.design.units;
  tech.sites = views.bottom.sites;
  std::vector<Master> masters = bottom_lib.masters;
  masters.insert(masters.end(), upper_lib.masters.begin(), upper_lib.masters.end());
  out.write(fmt::format("tech/{}_tiers.lef", stem), lefdef::writeLef(tech, masters));

  ValidationReport validation;
  const tierview::StrategyMode mode = o.strategy == "flexible"
                                          ? tierview::StrategyMode::kFlexible
                                          : tierview::StrategyMode::kRestricted;
  for (Tier t : {Tier::kBottom, Tier::kUpper}) {
    const Design& view = views.view(t);
    const std::string tag = t == Tier::kBottom ? "bottom" : "upper";
    out.write(fmt::format("views/{}_{}.def", stem, tag), lefdef::writeDef(view));
    out.write(fmt::format("views/{}_{}.v", stem, tag), lefdef::writeStructuralNetlist(view));
    merge(validation, validateDesign(view), tag);
    merge(validation, tierview::checkTierStrategy(view, {mode, t}), tag);
  }
  out.writeJson("reports/cross_tier.json", tierview::toJson(views.report));
  out.writeJson("reports/tier_assignment.json", tierview::toJson(ta));

  metrics::MetricsRecord r = metrics::measure(l.design, "tierview", "3d");
  r.cutsize = pr.cutsize;
  r.hbt_estimate = static_cast<std::int64_t>(tierview::estimateHbtCount(views.report, false));
  return {validation, r};
}

struct MetricsOpts
{
  Inputs in;
  std::vector<std::string> compare;
  std::string stage = "metrics";
  std::string flow = "2d";
};

Outcome metricsCmd(const MetricsOpts& o, const Globals& g, OutDir& out)
{
  const bool has_design = !o.in.aux.empty() || !o.in.def.empty() || o.in.synth > 0;
  if (!has_design && o.compare.empty()) {
    throw UsageError("metrics needs a design (--aux, --def, --synth) or --compare files");
  }
  Outcome outcome;
  outcome.record.design = "compare";
  outcome.record.stage = o.stage;
  outcome.record.flow = o.flow;
  if (has_design) {
    Loaded l = loadDesign(o.in, g.seed);
    outcome.record = metrics::measure(l.design, o.stage, o.flow);
    outcome.validation = validateDesign(l.design);
    out.write("reports/metrics.json", metrics::emitMetrics(outcome.record));
  }
  if (!o.compare.empty()) {
    std::vector<metrics::MetricsRecord> records;
    for (const std::string& path : o.compare) {
      records.push_back(metrics::parseMetrics(readFile(path), g.strict));
    }
    out.write("reports/compare.csv", metrics::compareRuns(records));
  }
  return outcome;
}

struct SynthOpts
{
  std::int64_t instances = 1000;
  double degree = 3.0;
  int depth = 3;
  std::int64_t io = -1;
  double utilization = 0.6;
  double locality = 0.8;
};

Outcome synthCmd(const SynthOpts& o, const Globals& g, OutDir& out)
{
  corpus::SynthConfig cfg;
  cfg.num_instances = o.instances;
  cfg.avg_net_degree = o.degree;
  cfg.hierarchy_depth = o.depth;
  cfg.io_pins = o.io;
  cfg.utilization = o.utilization;
  cfg.locality = o.locality;
  cfg.seed = g.seed;
  const Design design = corpus::generateSynthetic(cfg, synthLibrary());
  const std::string stem = stemOf(design);
  out.write(fmt::format("designs/{}.def", stem), lefdef::writeDef(design));
  out.write(fmt::format("designs/{}.v", stem), lefdef::writeStructuralNetlist(design));
  out.write("tech/synth.lef", lefdef::writeLef(synthLibrary()));
  return {validateDesign(design), metrics::measure(design, "synth", "2d")};
}

bool truthy(const std::string& v)
{
  return iequals(v, "true") || iequals(v, "on") || iequals(v, "yes") || v == "1";
}

// Appends config-file entries for options absent from the command line.
std::vector<std::string> withConfig(CLI::App& app, std::vector<std::string> args)
{
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) {
    return args;
  }
  if (!fs::exists(path)) {
    fail(Errc::kMissingFile, fmt::format("config file '{}' not found", path));
  }
  CLI::App* sub = nullptr;
  for (const std::string& a : args) {
    if (CLI::App* s = app.get_subcommand_no_throw(a)) {
      sub = s;
      break;
    }
  }
  const std::vector<CLI::ConfigItem> items = CLI::ConfigINI().from_file(path);
  std::vector<std::string> extra;
  for (const CLI::ConfigItem& item : items) {
    const std::string key = item.fullname();
    if (key == "config" || item.name == "++" || item.name == "--") {
      continue;
    }
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
    if (given) {
      continue;
    }
    const CLI::Option* opt = sub != nullptr ? sub->get_option_no_throw(flag) : nullptr;
    if (opt == nullptr) {
      opt = app.get_option_no_throw(flag);
    }
    if (opt == nullptr) {
      throw UsageError(fmt::format("config key '{}' is not an option here", key));
    }
    if (opt->get_expected_min() == 0) {
      if (!item.inputs.empty() && truthy(item.inputs.front())) {
        extra.push_back(flag);
      }
      continue;
    }
    extra.push_back(flag);
    extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"rosetta-pd: physical design benchmark translation, 3D enablement and partitioning",
               "rosetta-pd"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")
      ->envname("ROSETTA_PD_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--config", g.config, "key=value file mirroring the flags; flags win");
  app.add_flag("--strict", g.strict, "Exit 1 when any validation violation is found");

  TranslateOpts tr;
  CLI::App* c_tr = app.add_subcommand("translate", "Convert Bookshelf or LEF/DEF designs");
  addInputs(c_tr, tr.in);
  c_tr->add_option("--from", tr.from, "Source format")
      ->required()
      ->check(CLI::IsMember({"bookshelf", "fakelefdef", "lefdef"}));
  c_tr->add_option("--to", tr.to, "Target format")->check(CLI::IsMember({"def", "bookshelf"}));

  RepairOpts rp;
  CLI::App* c_rp = app.add_subcommand("repair", "Remove ill-formed nets, split and snap");
  addInputs(c_rp, rp.in);
  c_rp->add_option("--max-area-ratio", rp.max_area_ratio, "Oversize area ratio over the median")
      ->capture_default_str();
  c_rp->add_option("--grid", rp.grid, "Snap grid in DBU")->capture_default_str();

  RemapOpts rm;
  CLI::App* c_rm = app.add_subcommand("remap", "Remap a Bookshelf design onto a target PDK");
  addInputs(c_rm, rm.in);
  c_rm->add_option("--target-lef", rm.target_lef, "Target technology and cell LEF files")
      ->required();
  c_rm->add_flag("--allow-pin-drop", rm.allow_pin_drop, "Allow macros with fewer pins");

  Enable3dOpts e3;
  CLI::App* c_e3 = app.add_subcommand("enable3d", "Build a face-to-face 3D technology");
  c_e3->add_option("--lef", e3.lef, "Bottom tier LEF files (default: synthetic)");
  c_e3->add_option("--top-lef", e3.top_lef, "Upper tier LEF files (default: bottom)");
  c_e3->add_option("--pitch", e3.pitch, "HBT pitch in microns")->capture_default_str();
  c_e3->add_option("--pitches", e3.pitches, "Additional HBT pitches to sweep");
  c_e3->add_flag("--compat", e3.compat, "Add M2_add/M3_add layers");
  c_e3->add_option("--name", e3.name, "Output name")->capture_default_str();

  PartitionOpts pt;
  CLI::App* c_pt = app.add_subcommand("partition", "Bipartition and balance sweeps");
  addInputs(c_pt, pt.in);
  c_pt->add_option("--sweep", pt.sweep, "none, ub or base")
      ->check(CLI::IsMember({"none", "ub", "base"}))
      ->capture_default_str();
  c_pt->add_option("--lo", pt.lo, "Lowest UBfactor")->capture_default_str();
  c_pt->add_option("--hi", pt.hi, "Highest UBfactor")->capture_default_str();
  c_pt->add_option("--points", pt.points, "Sweep points")->capture_default_str();
  c_pt->add_option("--seeds", pt.seeds, "Seeds per point, from --seed upward")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_pt->add_option("--ubfactor", pt.ubfactor, "UBfactor without a sweep")->capture_default_str();
  c_pt->add_option("--start0", pt.start0, "First side-0 fraction of a base sweep")
      ->capture_default_str();
  c_pt->add_option("--epsilon", pt.epsilon, "Tolerance of a base sweep")->capture_default_str();
  c_pt->add_option("--starts", pt.starts, "FM starts per run")->capture_default_str();
  c_pt->add_option("--max-passes", pt.max_passes, "FM passes per start")->capture_default_str();
  c_pt->add_option("--resample-size", pt.resample_size, "Bootstrap draw size")
      ->capture_default_str();
  c_pt->add_option("--resamples", pt.resamples, "Bootstrap draws")->capture_default_str();

  TierviewOpts tv;
  CLI::App* c_tv = app.add_subcommand("tierview", "Per-tier designs from a partition");
  addInputs(c_tv, tv.in);
  c_tv->add_option("--top-lef", tv.top_lef, "Upper tier LEF files (default: design library)");
  c_tv->add_option("--partition", tv.partition, "partition.json from the partition command");
  c_tv->add_option("--stack", tv.stack, "auto, homogeneous or heterogeneous")
      ->check(CLI::IsMember({"auto", "homogeneous", "heterogeneous"}))
      ->capture_default_str();
  c_tv->add_option("--strategy", tv.strategy, "restricted or flexible")
      ->check(CLI::IsMember({"restricted", "flexible"}))
      ->capture_default_str();
  c_tv->add_option("--ubfactor", tv.ubfactor, "UBfactor when partitioning here")
      ->capture_default_str();
  c_tv->add_option("--starts", tv.starts, "FM starts when partitioning here")
      ->capture_default_str();

  MetricsOpts mt;
  CLI::App* c_mt = app.add_subcommand("metrics", "Measure a design or compare metrics records");
  addInputs(c_mt, mt.in);
  c_mt->add_option("--compare", mt.compare, "Metrics JSON files to tabulate");
  c_mt->add_option("--stage", mt.stage, "Stage label")->capture_default_str();
  c_mt->add_option("--flow", mt.flow, "Flow label")->capture_default_str();

  SynthOpts sy;
  CLI::App* c_sy = app.add_subcommand("synth", "Generate a synthetic design");
  c_sy->add_option("--instances", sy.instances, "Instance count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_sy->add_option("--degree", sy.degree, "Mean net degree")->capture_default_str();
  c_sy->add_option("--depth", sy.depth, "Hierarchy depth")->capture_default_str();
  c_sy->add_option("--io", sy.io, "IO pins (negative: automatic)")->capture_default_str();
  c_sy->add_option("--utilization", sy.utilization, "Core utilization")->capture_default_str();
  c_sy->add_option("--locality", sy.locality, "Per-level intra-block probability")
      ->capture_default_str();

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> argv = withConfig(app, args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << fmt::format("rosetta-pd: usage: {}\n", e.what());
    return kExitUsage;
  } catch (const UsageError& e) {
    err << fmt::format("rosetta-pd: usage: {}\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    err << fmt::format("rosetta-pd: error: {}\n", e.what());
    return kExitFailure;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    OutDir dir(g.out);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Outcome outcome;
    if (sub == c_tr) {
      outcome = translate(tr, g, dir);
    } else if (sub == c_rp) {
      outcome = repairCmd(rp, g, dir);
    } else if (sub == c_rm) {
      outcome = remapCmd(rm, g, dir);
    } else if (sub == c_e3) {
      outcome = enable3dCmd(e3, g, dir);
    } else if (sub == c_pt) {
      outcome = partitionCmd(pt, g, dir);
    } else if (sub == c_tv) {
      outcome = tierviewCmd(tv, g, dir);
    } else if (sub == c_mt) {
      outcome = metricsCmd(mt, g, dir);
    } else {
      outcome = synthCmd(sy, g, dir);
    }
    return finish(name, std::move(outcome), start, g, dir, out, err);
  } catch (const UsageError& e) {
    err << fmt::format("rosetta-pd: usage: {}\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    err << fmt::format("rosetta-pd: error: {}\n", e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    err << fmt::format("rosetta-pd: error: {}\n", e.what());
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run(args, out, err);
}

}  // namespace rpd::cli
