// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "oracles.h"
#include "rpd/core/digest.h"
#include "rpd/core/error.h"
#include "rpd/core/rng.h"
#include "rpd/core/validate.h"
#include "rpd/corpus/synth.h"
#include "rpd/tierview/tierview.h"

namespace rpd {
namespace {

using tierview::StackKind;
using tierview::StrategyMode;
using tierview::TierLibrary;

Errc codeOf(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInvalidArgument;
}

const lefdef::LefSubset& synthLib()
{
  static const lefdef::LefSubset lib = corpus::syntheticLibrary(corpus::syntheticTech());
  return lib;
}

struct Libs
{
  TierLibrary bottom;
  TierLibrary upper;
};

Libs homogeneousLibs()
{
  return {tierview::tierLibrary(synthLib(), Tier::kBottom),
          tierview::tierLibrary(synthLib(), Tier::kUpper)};
}

Design smallDesign(std::int64_t n, std::uint64_t seed)
{
  corpus::SynthConfig cfg;
  cfg.num_instances = n;
  cfg.seed = seed;
  return corpus::generateSynthetic(cfg, synthLib());
}

// Two inverters u0 -> u1 on one net, plus an IO net into u0.
Design pairDesign()
{
  Design d;
  d.name = "pair";
  d.die = {0, 0, 20000, 20000};
  d.core = d.die;
  d.sites = synthLib().tech.sites;
  d.masters.push_back(*synthLib().findMacro("INV_X1"));
  for (const char* name : {"u0", "u1"}) {
    Instance inst;
    inst.name = name;
    inst.master = "INV_X1";
    inst.location = Point{0, 0};
    d.instances.push_back(inst);
  }
  d.instances[1].location = Point{2000, 0};
  IoPin io;
  io.name = "in";
  io.dir = PinDir::kInput;
  io.location = Point{0, 0};
  io.shape = {-50, -50, 50, 50};
  io.layer = "M2";
  d.io_pins.push_back(io);
  Net n0;
  n0.name = "n0";
  n0.pins = {NetPin::instPin("u0", "ZN", PinDir::kOutput),
             NetPin::instPin("u1", "A", PinDir::kInput)};
  Net n1;
  n1.name = "n1";
  n1.pins = {NetPin::ioPin("in", PinDir::kInput), NetPin::instPin("u0", "A", PinDir::kInput)};
  d.nets = {n0, n1};
  return d;
}

tierview::TierAssignment manualAssignment(const Design& d,
                                          const std::map<std::string, int>& sides,
                                          StackKind kind = StackKind::kHomogeneous)
{
  const auto h = part::designToHypergraph(d);
  part::PartitionResult pr;
  pr.side.resize(h.numVertices(), 0);
  for (std::size_t v = 0; v < h.numVertices(); ++v) {
    auto it = sides.find(h.names[v]);
    pr.side[v] = it == sides.end() ? 0 : it->second;
  }
  return tierview::assignTiers(d, h, pr, kind);
}

std::size_t nonCoverCount(const Design& view)
{
  const DesignIndex index(view);
  return std::count_if(view.instances.begin(), view.instances.end(), [&](const Instance& i) {
    return !index.master(i.master)->isCover();
  });
}

TEST(AssignTiers, IoTierFollowsStackKind)
{
  const Design d = pairDesign();
  EXPECT_EQ(manualAssignment(d, {{"u1", 1}}, StackKind::kHomogeneous).io_tier, Tier::kBottom);
  EXPECT_EQ(manualAssignment(d, {{"u1", 1}}, StackKind::kHeterogeneous).io_tier, Tier::kUpper);
}

TEST(AssignTiers, SideZeroIsBottom)
{
  const auto ta = manualAssignment(pairDesign(), {{"u0", 0}, {"u1", 1}});
  EXPECT_EQ(ta.tiers.at("u0"), Tier::kBottom);
  EXPECT_EQ(ta.tiers.at("u1"), Tier::kUpper);
  EXPECT_EQ(ta.count(Tier::kBottom), 1u);
}

TEST(AssignTiers, CoverageGapNamesMissingInstance)
{
  const Design d = smallDesign(100, 3);
  auto h = part::designToHypergraph(d);
  part::PartitionResult pr;
  pr.side.assign(h.numVertices() - 1, 0);
  const std::string missing = h.names.back();
  try {
    tierview::assignTiers(d, h, pr, StackKind::kHomogeneous);
    FAIL() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kCoverageGap);
    EXPECT_NE(std::string(e.what()).find(missing), std::string::npos);
  }
}

TEST(TierViews, OppositeTiersGiveOneCrossTierNet)
{
  const Design d = pairDesign();
  const auto libs = homogeneousLibs();
  const auto ta = manualAssignment(d, {{"u0", 0}, {"u1", 1}});
  const auto v = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});
  ASSERT_EQ(v.report.nets.size(), 1u);
  EXPECT_EQ(v.report.nets[0].net, "n0");
  EXPECT_EQ(v.report.nets[0].bottom_pins, std::vector<std::string>{"u0/ZN"});
  EXPECT_EQ(v.report.nets[0].upper_pins, std::vector<std::string>{"u1/A"});
  EXPECT_EQ(tierview::estimateHbtCount(v.report, false), 1u);
  EXPECT_EQ(tierview::estimateHbtCount(v.report, true), 1u);

  // n0 in both views, n1 only with the IO pins on the bottom view.
  EXPECT_EQ(v.bottom.nets.size(), 2u);
  ASSERT_EQ(v.upper.nets.size(), 1u);
  EXPECT_EQ(v.upper.nets[0].name, "n0");
  EXPECT_TRUE(v.upper.io_pins.empty());
  ASSERT_EQ(v.bottom.io_pins.size(), 1u);
  EXPECT_EQ(v.bottom.io_pins[0].tier, Tier::kBottom);

  const DesignIndex bi(v.bottom);
  EXPECT_EQ(bi.instance("u0")->master, "INV_X1_bottom");
  EXPECT_EQ(bi.instance("u1")->master, "INV_X1_upper_cover");
  EXPECT_TRUE(bi.instance("u1")->fixed);
  EXPECT_EQ(bi.instance("u1")->location, d.instances[1].location);
  EXPECT_TRUE(validateDesign(v.bottom).empty());
  EXPECT_TRUE(validateDesign(v.upper).empty());
}

TEST(TierViews, IoOnlyCrossing)
{
  const Design d = pairDesign();
  const auto libs = homogeneousLibs();
  const auto ta = manualAssignment(d, {{"u0", 1}, {"u1", 1}});
  const auto v = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});
  ASSERT_EQ(v.report.nets.size(), 1u);
  EXPECT_EQ(v.report.nets[0].net, "n1");
  EXPECT_TRUE(v.report.nets[0].io_spanning);
  EXPECT_FALSE(v.report.nets[0].internal);
  EXPECT_EQ(tierview::estimateHbtCount(v.report, false), 0u);
  EXPECT_EQ(tierview::estimateHbtCount(v.report, true), 1u);
}

TEST(TierViews, AllBottomLeavesUpperWithCoversOnly)
{
  const Design d = smallDesign(200, 4);
  const auto libs = homogeneousLibs();
  const auto ta = manualAssignment(d, {});
  const auto v = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});
  EXPECT_EQ(nonCoverCount(v.upper), 0u);
  EXPECT_EQ(v.upper.instances.size(), d.instances.size());
  EXPECT_TRUE(v.report.nets.empty());
  EXPECT_TRUE(v.upper.nets.empty());
  EXPECT_EQ(v.bottom.nets.size(), d.nets.size());
}

TEST(TierViews, UnplacedSourceGivesUnplacedCover)
{
  Design d = pairDesign();
  d.instances[1].location.reset();
  const auto libs = homogeneousLibs();
  const auto v = tierview::generateTierViews(
      d, manualAssignment(d, {{"u1", 1}}), libs.bottom, libs.upper, {});
  EXPECT_FALSE(DesignIndex(v.bottom).instance("u1")->location.has_value());
}

TEST(TierViews, MissingTierMaster)
{
  const Design d = pairDesign();
  auto libs = homogeneousLibs();
  std::erase_if(libs.upper.masters,
                [](const Master& m) { return m.name == "INV_X1_upper_cover"; });
  const auto ta = manualAssignment(d, {{"u1", 1}});
  EXPECT_EQ(codeOf([&] { tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {}); }),
            Errc::kMissingTierMaster);
}

TEST(TierViews, PinRenameAndUnmappedPin)
{
  const Design d = pairDesign();
  auto libs = homogeneousLibs();
  for (Master& m : libs.upper.masters) {
    if (enable3d::logicalName(m.name) == "INV_X1") {
      for (MasterPin& p : m.pins) {
        if (p.name == "A") {
          p.name = "I";
        }
      }
    }
  }
  const auto ta = manualAssignment(d, {{"u1", 1}});
  EXPECT_EQ(codeOf([&] { tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {}); }),
            Errc::kUnmappedPin);
  const auto v = tierview::generateTierViews(
      d, ta, libs.bottom, libs.upper, {}, {{"INV_X1", "A", "I"}});
  const Net& n0 = v.upper.nets[0];
  EXPECT_EQ(n0.pins[1].pin, "I");
  EXPECT_TRUE(validateDesign(v.upper).empty());
}

TEST(TierViews, TieOffsAreHiddenPinsOfTheTierMaster)
{
  // Library A carries an extra VPB pin on every macro.
  lefdef::LefSubset lib_a = synthLib();
  for (Master& m : lib_a.macros) {
    MasterPin vpb;
    vpb.name = "VPB";
    vpb.dir = PinDir::kInout;
    m.pins.push_back(vpb);
  }
  const auto unified = enable3d::buildUnifiedLibrary(lib_a, synthLib());
  Design d = smallDesign(300, 9);
  d.masters.clear();
  for (const Master& m : unified.lib.macros) {
    d.masters.push_back(m);
  }
  ASSERT_TRUE(validateDesign(d).empty());
  Rng rng(2);
  std::map<std::string, int> sides;
  for (const Instance& inst : d.instances) {
    sides[inst.name] = static_cast<int>(uniformBelow(rng, 2));
  }
  const auto ta = manualAssignment(d, sides, StackKind::kHeterogeneous);
  const auto v = tierview::generateTierViews(d,
                                             ta,
                                             tierview::tierLibrary(lib_a, Tier::kBottom),
                                             tierview::tierLibrary(synthLib(), Tier::kUpper),
                                             unified.report);
  for (Tier t : {Tier::kBottom, Tier::kUpper}) {
    const Design& view = v.view(t);
    const DesignIndex index(view);
    for (const Instance& inst : view.instances) {
      if (index.master(inst.master)->isCover()) {
        EXPECT_TRUE(inst.tie_offs.empty());
        continue;
      }
      const std::vector<std::string> want
          = t == Tier::kBottom ? std::vector<std::string>{"VPB"} : std::vector<std::string>{};
      EXPECT_EQ(inst.tie_offs, want) << inst.name;
    }
  }
  EXPECT_EQ(v.bottom.io_pins.size(), 0u);
  EXPECT_EQ(v.upper.io_pins.size(), d.io_pins.size());
}

// Independent count: nets with instance pins on both tiers.
std::size_t directCrossCount(const Design& d, const tierview::TierAssignment& ta)
{
  std::size_t count = 0;
  for (const Net& net : d.nets) {
    std::set<Tier> tiers;
    for (const NetPin& p : net.pins) {
      if (!p.io) {
        tiers.insert(ta.tiers.at(p.owner));
      }
    }
    count += tiers.size() == 2 ? 1 : 0;
  }
  return count;
}

TEST(TierViews, ConservationOverRandomPartitions)
{
  const auto libs = homogeneousLibs();
  for (int trial = 0; trial < 50; ++trial) {
    const Design d = smallDesign(100 + 20 * trial, 100 + trial);
    auto h = part::designToHypergraph(d);
    part::PartitionResult pr;
    if (trial % 2 == 0) {
      pr = part::fmBipartition(h, {0.5, 0.5, 0.1}, trial, {.starts = 2, .max_passes = 8});
    } else {
      Rng rng(trial);
      pr.side.resize(h.numVertices());
      for (int& s : pr.side) {
        s = static_cast<int>(uniformBelow(rng, 2));
      }
    }
    const auto kind = trial % 3 == 0 ? StackKind::kHeterogeneous : StackKind::kHomogeneous;
    const auto ta = tierview::assignTiers(d, h, pr, kind);
    const auto v = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});

    std::multiset<std::string> orig;
    for (const Instance& inst : d.instances) {
      orig.insert(inst.name);
    }
    std::multiset<std::string> views;
    for (Tier t : {Tier::kBottom, Tier::kUpper}) {
      const DesignIndex index(v.view(t));
      for (const Instance& inst : v.view(t).instances) {
        const Master* m = index.master(inst.master);
        if (!m->isCover()) {
          views.insert(inst.name);
          EXPECT_EQ(m->tier_tag, tagOf(t));
        }
      }
      EXPECT_TRUE(validateDesign(v.view(t)).empty()) << trial;
    }
    ASSERT_EQ(views, orig) << trial;

    std::set<std::string> reported;
    for (const auto& n : v.report.nets) {
      reported.insert(n.net);
    }
    std::map<std::string, int> seen;
    for (Tier t : {Tier::kBottom, Tier::kUpper}) {
      for (const Net& n : v.view(t).nets) {
        ++seen[n.name];
      }
    }
    for (const Net& n : d.nets) {
      const int k = seen[n.name];
      ASSERT_TRUE(k == 1 || k == 2) << n.name;
      EXPECT_EQ(k == 2, reported.contains(n.name)) << n.name;
    }

    part::Hypergraph unit = h;
    std::fill(unit.edge_weights.begin(), unit.edge_weights.end(), 1.0);
    const auto cut = static_cast<std::size_t>(oracle::recount(unit, pr.side));
    EXPECT_EQ(tierview::estimateHbtCount(v.report, false), cut) << trial;
    EXPECT_EQ(directCrossCount(d, ta), cut) << trial;

    std::size_t io_only = 0;
    for (const Net& net : d.nets) {
      bool io = false;
      std::set<Tier> tiers;
      for (const NetPin& p : net.pins) {
        if (p.io) {
          io = true;
        } else {
          tiers.insert(ta.tiers.at(p.owner));
        }
      }
      const bool other = tiers.contains(ta.io_tier == Tier::kBottom ? Tier::kUpper : Tier::kBottom);
      io_only += io && other && tiers.size() == 1 ? 1 : 0;
    }
    EXPECT_EQ(tierview::estimateHbtCount(v.report, true)
                  - tierview::estimateHbtCount(v.report, false),
              io_only);
  }
}

TEST(TierViews, Deterministic)
{
  const Design d = smallDesign(500, 21);
  const auto libs = homogeneousLibs();
  const auto h = part::designToHypergraph(d);
  const auto pr = part::fmBipartition(h, {0.5, 0.5, 0.1}, 7);
  const auto ta = tierview::assignTiers(d, h, pr, StackKind::kHomogeneous);
  const auto a = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});
  const auto b = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});
  EXPECT_EQ(canonicalDigest(a.bottom), canonicalDigest(b.bottom));
  EXPECT_EQ(canonicalDigest(a.upper), canonicalDigest(b.upper));
  EXPECT_EQ(tierview::toJson(a.report).dump(), tierview::toJson(b.report).dump());
}

TEST(HbtEstimate, CountsOneTerminalPerNet)
{
  tierview::CrossTierReport r;
  EXPECT_EQ(tierview::estimateHbtCount(r, true), 0u);
  for (int i = 0; i < 147; ++i) {
    r.nets.push_back({"n" + std::to_string(i), {"a/Z"}, {"b/A", "c/A"}, true, false});
  }
  r.nets.push_back({"io", {"PIN/x"}, {"d/A"}, false, true});
  EXPECT_EQ(tierview::estimateHbtCount(r, false), 147u);
  EXPECT_EQ(tierview::estimateHbtCount(r, true), 148u);
}

TEST(TierStrategy, RestrictedAndFlexible)
{
  const Design d = pairDesign();
  const auto libs = homogeneousLibs();
  const auto v = tierview::generateTierViews(
      d, manualAssignment(d, {{"u1", 1}}), libs.bottom, libs.upper, {});
  Design view = v.bottom;
  // Replace the cover twin by a movable upper-tier master.
  for (Instance& inst : view.instances) {
    if (inst.name == "u1") {
      inst.master = "INV_X1_upper";
      inst.fixed = false;
    }
  }
  view.masters.push_back(*libs.upper.find("INV_X1_upper"));
  const auto restricted
      = tierview::checkTierStrategy(view, {StrategyMode::kRestricted, Tier::kBottom});
  ASSERT_EQ(restricted.size(), 1u);
  EXPECT_EQ(restricted.violations[0], (Violation{"INACTIVE_TIER_MOVABLE", "u1"}));
  EXPECT_TRUE(
      tierview::checkTierStrategy(view, {StrategyMode::kFlexible, Tier::kBottom}).empty());

  for (Tier t : {Tier::kBottom, Tier::kUpper}) {
    for (auto mode : {StrategyMode::kRestricted, StrategyMode::kFlexible}) {
      EXPECT_TRUE(tierview::checkTierStrategy(v.view(t), {mode, t}).empty());
    }
  }
  Design loose = v.bottom;
  for (Instance& inst : loose.instances) {
    inst.fixed = false;
  }
  for (auto mode : {StrategyMode::kRestricted, StrategyMode::kFlexible}) {
    const auto r = tierview::checkTierStrategy(loose, {mode, Tier::kBottom});
    EXPECT_EQ(r.count("COVER_NOT_FIXED"), 1u);
    EXPECT_EQ(r.size(), 1u);
  }
}

TEST(CrossTierReport, Json)
{
  const Design d = pairDesign();
  const auto libs = homogeneousLibs();
  const auto ta = manualAssignment(d, {{"u1", 1}});
  const auto v = tierview::generateTierViews(d, ta, libs.bottom, libs.upper, {});
  const auto j = tierview::toJson(v.report);
  EXPECT_EQ(j["io_tier"], "BOTTOM");
  EXPECT_EQ(j["hbt_estimate"], 1);
  ASSERT_EQ(j["nets"].size(), 1u);
  EXPECT_EQ(j["nets"][0]["net"], "n0");
  EXPECT_EQ(j["nets"][0]["bottom_pins"][0], "u0/ZN");
  EXPECT_EQ(j["nets"][0]["upper_pins"][0], "u1/A");
  EXPECT_EQ(j["nets"][0]["io_spanning"], false);
  const auto a = tierview::toJson(ta);
  EXPECT_EQ(a["instances"]["u1"], "UPPER");
  EXPECT_EQ(a["bottom"], 1);
}

}  // namespace
}  // namespace rpd
