// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/tierview/tierview.h"

#include <algorithm>
#include <future>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "rpd/core/error.h"

namespace rpd::tierview {

namespace {

std::string pinLabel(const NetPin& p)
{
  return p.io ? fmt::format("PIN/{}", p.owner) : fmt::format("{}/{}", p.owner, p.pin);
}

// Shared classification of nets by the tiers of their pins.
struct NetClass
{
  bool on_bottom = false;
  bool on_upper = false;
  bool has_io = false;
  bool inst_bottom = false;
  bool inst_upper = false;

  bool on(Tier t) const { return t == Tier::kBottom ? on_bottom : on_upper; }
};

struct Context
{
  const Design& design;
  const TierAssignment& ta;
  const TierLibrary& bottom_lib;
  const TierLibrary& upper_lib;
  const enable3d::HiddenPinReport& hidden;
  std::map<std::pair<std::string, std::string>, std::string> renames;
  std::vector<NetClass> classes;

  const TierLibrary& lib(Tier t) const { return t == Tier::kBottom ? bottom_lib : upper_lib; }
};

const Master& tierMaster(const Context& ctx, const Instance& inst, Tier tier, bool cover)
{
  const std::string name = enable3d::logicalName(inst.master) + enable3d::tierSuffix(tier)
                           + (cover ? "_cover" : "");
  const Master* m = ctx.lib(tier).find(name);
  if (m == nullptr) {
    fail(Errc::kMissingTierMaster,
         fmt::format("instance '{}' needs master '{}' on the {} tier",
                     inst.name,
                     name,
                     tierName(tier)));
  }
  return *m;
}

std::string mapPin(const Context& ctx,
                   const Net& net,
                   const NetPin& pin,
                   const Instance& inst,
                   const Master& target)
{
  if (target.findPin(pin.pin) != nullptr) {
    return pin.pin;
  }
  const std::string logical = enable3d::logicalName(inst.master);
  auto it = ctx.renames.find({logical, pin.pin});
  if (it != ctx.renames.end() && target.findPin(it->second) != nullptr) {
    return it->second;
  }
  fail(Errc::kUnmappedPin,
       fmt::format("net '{}': pin '{}/{}' has no counterpart on master '{}'",
                   net.name,
                   inst.name,
                   pin.pin,
                   target.name));
}

Design buildView(const Context& ctx, Tier tier)
{
  const Design& src = ctx.design;
  Design view;
  view.name = fmt::format("{}{}", src.name, enable3d::tierSuffix(tier));
  view.units = src.units;
  view.die = src.die;
  view.core = src.core;
  for (Tier t : {Tier::kBottom, Tier::kUpper}) {
    for (const Site& s : ctx.lib(t).sites) {
      if (view.findSite(s.name) == nullptr) {
        view.sites.push_back(s);
      }
    }
  }

  std::map<std::string, const Master*> used;
  std::unordered_map<std::string, const Master*> inst_master;
  for (const Instance& inst : src.instances) {
    const Master* orig = src.findMaster(inst.master);
    Instance out = inst;
    if (orig != nullptr && orig->isCover()) {
      used.emplace(orig->name, orig);
      inst_master.emplace(inst.name, orig);
      view.instances.push_back(std::move(out));
      continue;
    }
    const Tier home = ctx.ta.tiers.at(inst.name);
    const Master& m = tierMaster(ctx, inst, home, home != tier);
    used.emplace(m.name, &m);
    inst_master.emplace(inst.name, &m);
    out.master = m.name;
    out.tier = home;
    out.tie_offs.clear();
    if (home == tier) {
      const std::string logical = enable3d::logicalName(inst.master);
      for (const enable3d::HiddenPin& h : ctx.hidden.hidden) {
        if (h.macro == logical && m.findPin(h.pin) != nullptr) {
          out.tie_offs.push_back(h.pin);
        }
      }
      std::sort(out.tie_offs.begin(), out.tie_offs.end());
      out.tie_offs.erase(std::unique(out.tie_offs.begin(), out.tie_offs.end()),
                         out.tie_offs.end());
    } else {
      out.fixed = true;
    }
    view.instances.push_back(std::move(out));
  }
  for (const auto& [name, m] : used) {
    view.masters.push_back(*m);
  }

  const bool io_here = ctx.ta.io_tier == tier;
  if (io_here) {
    for (IoPin p : src.io_pins) {
      p.tier = tier;
      view.io_pins.push_back(std::move(p));
    }
  }

  const std::unordered_map<std::string, std::size_t> by_name = [&] {
    std::unordered_map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < src.instances.size(); ++i) {
      m.emplace(src.instances[i].name, i);
    }
    return m;
  }();
  for (std::size_t n = 0; n < src.nets.size(); ++n) {
    if (!ctx.classes[n].on(tier)) {
      continue;
    }
    const Net& net = src.nets[n];
    Net out;
    out.name = net.name;
    out.weight = net.weight;
    for (const NetPin& p : net.pins) {
      if (p.io) {
        if (io_here) {
          out.pins.push_back(p);
        }
        continue;
      }
      const auto it = by_name.find(p.owner);
      if (it == by_name.end()) {
        fail(Errc::kInvalidDesign,
             fmt::format("net '{}' names unknown instance '{}'", net.name, p.owner));
      }
      const Instance& inst = src.instances[it->second];
      NetPin q = p;
      q.pin = mapPin(ctx, net, p, inst, *inst_master.at(inst.name));
      out.pins.push_back(std::move(q));
    }
    view.nets.push_back(std::move(out));
  }

  if (!src.rows.empty() && !ctx.lib(tier).sites.empty()) {
    const std::string suffix = enable3d::tierSuffix(tier);
    const Site* site = &ctx.lib(tier).sites.front();
    for (const Site& s : ctx.lib(tier).sites) {
      if (s.name == src.rows.front().site + suffix) {
        site = &s;
      }
    }
    view.rows = enable3d::rebuildRows(view.core, *site, fmt::format("ROW{}", suffix));
  }
  return view;
}

}  // namespace

std::size_t TierAssignment::count(Tier tier) const
{
  return std::count_if(
      tiers.begin(), tiers.end(), [&](const auto& kv) { return kv.second == tier; });
}

TierAssignment assignTiers(const Design& design,
                           const part::Hypergraph& h,
                           const part::PartitionResult& part,
                           StackKind kind)
{
  std::unordered_map<std::string_view, int> side;
  const std::size_t n = std::min(h.names.size(), part.side.size());
  for (std::size_t v = 0; v < n; ++v) {
    side.emplace(h.names[v], part.side[v]);
  }
  TierAssignment ta;
  ta.io_tier = kind == StackKind::kHomogeneous ? Tier::kBottom : Tier::kUpper;
  ta.source = part;
  const DesignIndex index(design);
  for (const Instance& inst : design.instances) {
    const Master* m = index.master(inst.master);
    if (m != nullptr && m->isCover()) {
      continue;
    }
    auto it = side.find(inst.name);
    if (it == side.end()) {
      fail(Errc::kCoverageGap,
           fmt::format("partition does not cover instance '{}'", inst.name));
    }
    ta.tiers.emplace(inst.name, it->second == 0 ? Tier::kBottom : Tier::kUpper);
  }
  return ta;
}

const Master* TierLibrary::find(std::string_view name) const
{
  for (const Master& m : masters) {
    if (m.name == name) {
      return &m;
    }
  }
  return nullptr;
}

TierLibrary tierLibrary(const lefdef::LefSubset& lib, Tier tier)
{
  TierLibrary out;
  out.tier = tier;
  out.masters = enable3d::deriveTierMasters(lib, tier);
  auto covers = enable3d::deriveCoverMasters(lib, tier);
  out.masters.insert(out.masters.end(),
                     std::make_move_iterator(covers.begin()),
                     std::make_move_iterator(covers.end()));
  for (Site s : lib.tech.sites) {
    s.name += enable3d::tierSuffix(tier);
    out.sites.push_back(std::move(s));
  }
  return out;
}

std::size_t CrossTierReport::internalCount() const
{
  return std::count_if(nets.begin(), nets.end(), [](const CrossTierNet& n) { return n.internal; });
}

std::size_t CrossTierReport::ioOnlyCount() const
{
  return std::count_if(nets.begin(), nets.end(), [](const CrossTierNet& n) {
    return n.io_spanning && !n.internal;
  });
}

TierViews generateTierViews(const Design& design,
                            const TierAssignment& ta,
                            const TierLibrary& bottom_lib,
                            const TierLibrary& upper_lib,
                            const enable3d::HiddenPinReport& hidden,
                            const std::vector<PinRename>& renames)
{
  Context ctx{design, ta, bottom_lib, upper_lib, hidden, {}, {}};
  for (const PinRename& r : renames) {
    ctx.renames[{r.macro, r.from}] = r.to;
  }
  for (const Instance& inst : design.instances) {
    const Master* m = design.findMaster(inst.master);
    if ((m == nullptr || !m->isCover()) && !ta.tiers.contains(inst.name)) {
      fail(Errc::kCoverageGap, fmt::format("no tier for instance '{}'", inst.name));
    }
  }

  TierViews out;
  out.report.io_tier = ta.io_tier;
  ctx.classes.resize(design.nets.size());
  for (std::size_t n = 0; n < design.nets.size(); ++n) {
    const Net& net = design.nets[n];
    NetClass& c = ctx.classes[n];
    CrossTierNet rec;
    rec.net = net.name;
    for (const NetPin& p : net.pins) {
      std::optional<Tier> t;
      if (p.io) {
        c.has_io = true;
        t = ta.io_tier;
      } else if (auto it = ta.tiers.find(p.owner); it != ta.tiers.end()) {
        t = it->second;
        (*t == Tier::kBottom ? c.inst_bottom : c.inst_upper) = true;
      }
      if (!t) {
        continue;
      }
      (*t == Tier::kBottom ? c.on_bottom : c.on_upper) = true;
      (*t == Tier::kBottom ? rec.bottom_pins : rec.upper_pins).push_back(pinLabel(p));
    }
    if (!c.on_bottom && !c.on_upper) {
      (ta.io_tier == Tier::kBottom ? c.on_bottom : c.on_upper) = true;
    }
    rec.internal = c.inst_bottom && c.inst_upper;
    rec.io_spanning
        = c.has_io && (ta.io_tier == Tier::kBottom ? c.inst_upper : c.inst_bottom);
    if (rec.internal || rec.io_spanning) {
      out.report.nets.push_back(std::move(rec));
    }
  }

  auto upper = std::async(std::launch::async, [&] { return buildView(ctx, Tier::kUpper); });
  out.bottom = buildView(ctx, Tier::kBottom);
  out.upper = upper.get();
  return out;
}

std::size_t estimateHbtCount(const CrossTierReport& report, bool include_io)
{
  return report.internalCount() + (include_io ? report.ioOnlyCount() : 0);
}

ValidationReport checkTierStrategy(const Design& view, const TierStrategy& strategy)
{
  ValidationReport report;
  const DesignIndex index(view);
  for (const Instance& inst : view.instances) {
    const Master* m = index.master(inst.master);
    if (m == nullptr || inst.fixed) {
      continue;
    }
    if (m->isCover()) {
      report.add("COVER_NOT_FIXED", inst.name);
    } else if (strategy.mode == StrategyMode::kRestricted
               && m->tier_tag != tagOf(strategy.active_tier)) {
      report.add("INACTIVE_TIER_MOVABLE", inst.name);
    }
  }
  return report;
}

nlohmann::ordered_json toJson(const CrossTierReport& report)
{
  nlohmann::ordered_json j;
  j["io_tier"] = tierName(report.io_tier);
  j["internal_cross_tier_nets"] = report.internalCount();
  j["io_only_cross_tier_nets"] = report.ioOnlyCount();
  j["hbt_estimate"] = estimateHbtCount(report, false);
  j["hbt_estimate_with_io"] = estimateHbtCount(report, true);
  j["nets"] = nlohmann::ordered_json::array();
  for (const CrossTierNet& n : report.nets) {
    nlohmann::ordered_json e;
    e["net"] = n.net;
    e["bottom_pins"] = n.bottom_pins;
    e["upper_pins"] = n.upper_pins;
    e["io_spanning"] = n.io_spanning;
    e["hbt"] = 1;
    j["nets"].push_back(std::move(e));
  }
  return j;
}

nlohmann::ordered_json toJson(const TierAssignment& ta)
{
  nlohmann::ordered_json j;
  j["io_tier"] = tierName(ta.io_tier);
  j["bottom"] = ta.count(Tier::kBottom);
  j["upper"] = ta.count(Tier::kUpper);
  j["cutsize"] = ta.source.cutsize;
  j["seed"] = ta.source.seed;
  nlohmann::ordered_json inst = nlohmann::ordered_json::object();
  for (const auto& [name, tier] : ta.tiers) {
    inst[name] = tierName(tier);
  }
  j["instances"] = std::move(inst);
  return j;
}

}  // namespace rpd::tierview
