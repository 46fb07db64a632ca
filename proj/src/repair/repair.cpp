// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/repair/repair.h"

#include <fmt/core.h>

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "rpd/core/error.h"

namespace rpd::repair {

std::string_view removalReasonName(RemovalReason r)
{
  switch (r) {
    case RemovalReason::kAllInput:
      return "ALL_INPUT";
    case RemovalReason::kAllOutput:
      return "ALL_OUTPUT";
    case RemovalReason::kDegenerate:
      return "DEGENERATE";
  }
  return "?";
}

void RepairLog::append(const RepairLog& other)
{
  removed_nets.insert(removed_nets.end(), other.removed_nets.begin(), other.removed_nets.end());
  split_instances.insert(
      split_instances.end(), other.split_instances.begin(), other.split_instances.end());
  snapped += other.snapped;
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

bool RepairLog::empty() const
{
  return removed_nets.empty() && split_instances.empty() && snapped == 0;
}

void checkConfig(const RepairConfig& cfg)
{
  if (!(cfg.max_instance_area_ratio > 1.0)) {
    fail(Errc::kInvalidArgument,
         fmt::format("max_instance_area_ratio must exceed 1 (got {})", cfg.max_instance_area_ratio));
  }
  if (cfg.grid < 1) {
    fail(Errc::kInvalidArgument, fmt::format("grid must be at least 1 (got {})", cfg.grid));
  }
}

RepairResult removeIllFormedNets(const Design& design)
{
  RepairResult out;
  out.design = design;
  out.design.nets.clear();
  out.design.nets.reserve(design.nets.size());
  for (const Net& net : design.nets) {
    std::optional<RemovalReason> reason;
    if (net.pins.size() <= 1) {
      reason = RemovalReason::kDegenerate;
    } else {
      const auto all = [&net](PinDir d) {
        return std::all_of(net.pins.begin(), net.pins.end(), [d](const NetPin& p) {
          return p.dir == d;
        });
      };
      if (all(PinDir::kInput)) {
        reason = RemovalReason::kAllInput;
      } else if (all(PinDir::kOutput)) {
        reason = RemovalReason::kAllOutput;
      }
    }
    if (reason) {
      out.log.removed_nets.push_back({net.name, *reason});
    } else {
      out.design.nets.push_back(net);
    }
  }
  return out;
}

namespace {

bool isShardMaster(const Master& m)
{
  return m.name.find(kShardMarker) != std::string::npos;
}

bool rotated(Orient o)
{
  return o == Orient::E || o == Orient::W || o == Orient::FE || o == Orient::FW;
}

constexpr std::string_view kChainOut = "CHAIN_O";
constexpr std::string_view kChainIn = "CHAIN_I";

}  // namespace

double oversizeThreshold(const Design& design, const RepairConfig& cfg)
{
  std::vector<Area> areas;
  for (const Master& m : design.masters) {
    if (!m.isCover() && !isShardMaster(m)) {
      areas.push_back(m.area());
    }
  }
  if (areas.empty()) {
    fail(Errc::kThresholdUndefined, "no non-COVER masters; median area undefined");
  }
  // Lower median keeps the threshold an exact multiple of a master area.
  const auto mid = areas.begin() + static_cast<std::ptrdiff_t>((areas.size() - 1) / 2);
  std::nth_element(areas.begin(), mid, areas.end());
  return cfg.max_instance_area_ratio * static_cast<double>(*mid);
}

RepairResult splitOversizedInstances(const Design& design, const RepairConfig& cfg)
{
  checkConfig(cfg);
  const double threshold = oversizeThreshold(design, cfg);

  RepairResult out;
  Design& d = out.design;
  d = design;
  d.instances.clear();
  d.instances.reserve(design.instances.size());

  std::unordered_map<std::string_view, const Master*> masters;
  for (const Master& m : design.masters) {
    masters.try_emplace(m.name, &m);
  }
  std::unordered_set<std::string> names;
  for (const Instance& inst : design.instances) {
    names.insert(inst.name);
  }
  for (const Net& net : design.nets) {
    names.insert(net.name);
  }

  std::map<std::string, Master> new_masters;
  auto shardMaster = [&](const Master& m, std::size_t index, Dbu width) {
    const std::string name = fmt::format("{}{}{}_w{}", m.name, kShardMarker, index == 0 ? "0" : "", width);
    auto [it, inserted] = new_masters.try_emplace(name);
    if (inserted && masters.find(name) == masters.end()) {
      Master& s = it->second;
      s.name = name;
      s.width = width;
      s.height = m.height;
      s.site = m.site;
      s.tier_tag = m.tier_tag;
      if (index == 0) {
        for (const MasterPin& p : m.pins) {
          MasterPin q = p;
          q.shapes.clear();
          q.offset.x = std::min(q.offset.x, width);
          s.pins.push_back(std::move(q));
        }
      }
      MasterPin chain;
      chain.name = std::string(index == 0 ? kChainOut : kChainIn);
      chain.dir = index == 0 ? PinDir::kOutput : PinDir::kInput;
      chain.offset = {width / 2, m.height / 2};
      s.pins.push_back(std::move(chain));
    }
    return name;
  };

  // original instance name -> shard 0 name
  std::unordered_map<std::string, std::string> renamed;
  std::vector<Net> chain_nets;
  for (const Instance& inst : design.instances) {
    auto mit = masters.find(inst.master);
    const Master* m = mit == masters.end() ? nullptr : mit->second;
    if (m == nullptr || m->isCover() || static_cast<double>(m->area()) <= threshold) {
      d.instances.push_back(inst);
      continue;
    }
    const Dbu width = m->width;
    const Dbu height = m->height;
    if (static_cast<double>(height) > threshold) {
      const std::string msg = fmt::format(
          "instance '{}': height {} alone exceeds threshold {}", inst.name, height, threshold);
      if (cfg.strict) {
        fail(Errc::kDegenerateConfig, msg);
      }
      out.log.warnings.push_back(msg);
      d.instances.push_back(inst);
      continue;
    }
    Dbu k = 2;
    while (static_cast<double>((width + k - 1) / k * height) > threshold) {
      ++k;
    }
    SplitRecord rec;
    rec.original = inst.name;
    rec.chain_net = inst.name + "__chain";
    if (!names.insert(rec.chain_net).second) {
      fail(Errc::kNameCollision, fmt::format("chain net '{}' already exists", rec.chain_net));
    }
    Net chain;
    chain.name = rec.chain_net;
    Dbu along = 0;
    for (Dbu i = 0; i < k; ++i) {
      const Dbu w = width / k + (i < width % k ? 1 : 0);
      Instance shard;
      shard.name = fmt::format("{}__s{}", inst.name, i);
      if (!names.insert(shard.name).second) {
        fail(Errc::kNameCollision, fmt::format("shard name '{}' already exists", shard.name));
      }
      shard.master = shardMaster(*m, static_cast<std::size_t>(i), w);
      shard.orient = inst.orient;
      shard.fixed = inst.fixed;
      shard.tier = inst.tier;
      if (i == 0) {
        shard.tie_offs = inst.tie_offs;
      }
      if (inst.location) {
        shard.location = rotated(inst.orient) ? Point{inst.location->x, inst.location->y + along}
                                              : Point{inst.location->x + along, inst.location->y};
      }
      along += w;
      chain.pins.push_back(i == 0 ? NetPin::instPin(shard.name, std::string(kChainOut), PinDir::kOutput)
                                  : NetPin::instPin(shard.name, std::string(kChainIn), PinDir::kInput));
      rec.shards.push_back(shard.name);
      d.instances.push_back(std::move(shard));
    }
    renamed.emplace(inst.name, rec.shards.front());
    chain_nets.push_back(std::move(chain));
    out.log.split_instances.push_back(std::move(rec));
  }

  if (!renamed.empty()) {
    for (Net& net : d.nets) {
      for (NetPin& p : net.pins) {
        if (!p.io) {
          if (auto it = renamed.find(p.owner); it != renamed.end()) {
            p.owner = it->second;
          }
        }
      }
    }
  }
  for (auto& [name, m] : new_masters) {
    if (!m.name.empty()) {
      d.masters.push_back(std::move(m));
    }
  }
  for (Net& n : chain_nets) {
    d.nets.push_back(std::move(n));
  }
  return out;
}

Dbu snapToGrid(Dbu v, Dbu grid)
{
  Dbu q = v / grid;
  const Dbu r = v % grid;
  if (2 * (r < 0 ? -r : r) >= grid) {
    q += v < 0 ? -1 : 1;
  }
  return q * grid;
}

RepairResult snapAndRescale(const Design& design, const RepairConfig& cfg)
{
  checkConfig(cfg);
  RepairResult out;
  out.design = design;
  if (cfg.grid == 1) {
    return out;
  }
  for (Instance& inst : out.design.instances) {
    if (!inst.location) {
      continue;
    }
    const Point snapped{snapToGrid(inst.location->x, cfg.grid),
                        snapToGrid(inst.location->y, cfg.grid)};
    if (snapped != *inst.location) {
      inst.location = snapped;
      ++out.log.snapped;
    }
  }
  return out;
}

RepairResult repairPipeline(const Design& design, const RepairConfig& cfg)
{
  checkConfig(cfg);
  RepairResult removed = removeIllFormedNets(design);
  RepairResult split = splitOversizedInstances(removed.design, cfg);
  RepairResult snapped = snapAndRescale(split.design, cfg);
  RepairLog log = std::move(removed.log);
  log.append(split.log);
  log.append(snapped.log);
  return {std::move(snapped.design), std::move(log)};
}

nlohmann::ordered_json toJson(const RepairLog& log)
{
  nlohmann::ordered_json j;
  j["removed_nets"] = nlohmann::ordered_json::array();
  for (const RemovedNet& r : log.removed_nets) {
    j["removed_nets"].push_back({{"net", r.net}, {"reason", removalReasonName(r.reason)}});
  }
  j["split_instances"] = nlohmann::ordered_json::array();
  for (const SplitRecord& s : log.split_instances) {
    j["split_instances"].push_back({{"original", s.original},
                                    {"shards", s.shards},
                                    {"shard_count", s.shardCount()},
                                    {"chain_net", s.chain_net}});
  }
  j["snapped"] = log.snapped;
  j["warnings"] = log.warnings;
  return j;
}

}  // namespace rpd::repair
