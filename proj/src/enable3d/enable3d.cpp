// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/enable3d/enable3d.h"

#include <fmt/core.h>

#include <algorithm>
#include <set>
#include <unordered_map>

#include "rpd/core/error.h"
#include "rpd/core/text.h"

namespace rpd::enable3d {

namespace {

bool endsWith(std::string_view s, std::string_view suffix)
{
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool stackLayer(const Layer& l)
{
  return l.kind == LayerKind::kRouting || l.kind == LayerKind::kCut;
}

const Layer* topRouting(const std::vector<Layer>& layers)
{
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    if (it->kind == LayerKind::kRouting) {
      return &*it;
    }
  }
  return nullptr;
}

// Renames every layer reference of a macro for the tier.
Master retier(const Master& m,
              const std::unordered_map<std::string, std::string>& layer_map,
              Tier tier)
{
  Master out = m;
  auto rename = [&](LayerRect& s) {
    auto it = layer_map.find(s.layer);
    if (it == layer_map.end()) {
      fail(Errc::kUnknownLayer,
           fmt::format("macro '{}' references layer '{}' absent from the {} tier",
                       m.name,
                       s.layer,
                       tierName(tier)));
    }
    s.layer = it->second;
  };
  for (MasterPin& p : out.pins) {
    for (LayerRect& s : p.shapes) {
      rename(s);
    }
  }
  for (LayerRect& s : out.obs) {
    rename(s);
  }
  out.name = m.name + tierSuffix(tier);
  if (!out.site.empty()) {
    out.site += tierSuffix(tier);
  }
  out.tier_tag = tagOf(tier);
  return out;
}

std::unordered_map<std::string, std::string> layerMap(const TechStack& tech, Tier tier)
{
  std::unordered_map<std::string, std::string> map;
  for (const Layer& l : tech.layers) {
    map.emplace(l.name, tierLayerName(l.name, tier));
  }
  return map;
}

}  // namespace

void checkHbt(const HbtSpec& hbt)
{
  if (!(hbt.width > 0) || !(hbt.spacing > 0) || !(hbt.pitch > 0) || !(hbt.resistance > 0)) {
    fail(Errc::kInvalidArgument, "HBT width, spacing, pitch and resistance must be positive");
  }
  if (hbt.width != hbt.spacing || hbt.pitch != hbt.width + hbt.spacing) {
    fail(Errc::kInvalidArgument,
         fmt::format("HBT needs width == spacing and pitch == width + spacing (got {} {} {})",
                     hbt.width,
                     hbt.spacing,
                     hbt.pitch));
  }
}

std::string tierSuffix(Tier tier)
{
  return tier == Tier::kBottom ? "_bottom" : "_upper";
}

std::string tierLayerName(std::string_view layer, Tier tier)
{
  return tier == Tier::kBottom ? std::string(layer)
                               : fmt::format("{}{}", layer, kUpperSuffix);
}

TechStack build3dTech(const StackConfig& cfg)
{
  const TechStack& bot = cfg.bottom_tech;
  const TechStack& top = cfg.top_tech;
  if (bot.units != top.units) {
    fail(Errc::kUnitMismatch,
         fmt::format("bottom tech uses {} DBU/um, top tech {}", bot.units, top.units));
  }
  checkHbt(cfg.hbt);
  const Layer* bot_top = topRouting(bot.layers);
  const Layer* top_top = topRouting(top.layers);
  if (bot_top == nullptr || top_top == nullptr) {
    fail(Errc::kInvalidArgument, "both tiers need at least one routing layer");
  }

  TechStack t;
  t.name = fmt::format("{}_3D", bot.name == top.name ? bot.name : bot.name + "_" + top.name);
  t.units = bot.units;
  t.tiered = true;

  for (const Layer& l : bot.layers) {
    if (stackLayer(l)) {
      t.layers.push_back(l);
      t.tier_of_layer[l.name] = LayerTier::kBottom;
    }
  }
  if (cfg.legacy_compat_layers) {
    for (std::string_view base : {"M2", "M3"}) {
      const Layer* src = bot.findLayer(base);
      Layer l = src != nullptr && src->kind == LayerKind::kRouting ? *src : *bot_top;
      l.name = fmt::format("{}_add", base);
      t.layers.push_back(l);
      t.tier_of_layer[l.name] = LayerTier::kBottom;
    }
  }

  Layer hbt;
  hbt.name = std::string(kBondLayer);
  hbt.kind = LayerKind::kCut;
  hbt.width = toDbu(cfg.hbt.width, t.units);
  hbt.spacing = toDbu(cfg.hbt.spacing, t.units);
  hbt.pitch = toDbu(cfg.hbt.pitch, t.units);
  t.layers.push_back(hbt);
  t.tier_of_layer[hbt.name] = LayerTier::kBond;

  for (auto it = top.layers.rbegin(); it != top.layers.rend(); ++it) {
    if (stackLayer(*it)) {
      Layer l = *it;
      l.name = tierLayerName(l.name, Tier::kUpper);
      t.tier_of_layer[l.name] = LayerTier::kUpper;
      t.layers.push_back(std::move(l));
    }
  }

  for (Site s : bot.sites) {
    s.name += tierSuffix(Tier::kBottom);
    t.sites.push_back(s);
  }
  for (Site s : top.sites) {
    s.name += tierSuffix(Tier::kUpper);
    t.sites.push_back(s);
  }

  for (const ViaDef& v : bot.vias) {
    t.vias.push_back(v);
  }
  for (ViaDef v : top.vias) {
    // Mirrored: the upper metal of the via sits closer to the bond.
    const std::string lower = tierLayerName(v.top, Tier::kUpper);
    const std::string upper = tierLayerName(v.bottom, Tier::kUpper);
    v.name = tierLayerName(v.name, Tier::kUpper);
    v.bottom = lower;
    v.cut = tierLayerName(v.cut, Tier::kUpper);
    v.top = upper;
    t.vias.push_back(std::move(v));
  }
  ViaDef bond;
  bond.name = std::string(kBondVia);
  bond.bottom = bot_top->name;
  bond.cut = hbt.name;
  bond.top = tierLayerName(top_top->name, Tier::kUpper);
  const Dbu lo = -(hbt.width / 2);
  bond.cut_rect = {lo, lo, lo + hbt.width, lo + hbt.width};
  bond.resistance = cfg.hbt.resistance;
  t.vias.push_back(bond);
  return t;
}

std::vector<Master> deriveTierMasters(const lefdef::LefSubset& lib, Tier tier)
{
  const auto map = layerMap(lib.tech, tier);
  std::vector<Master> out;
  for (const Master& m : lib.macros) {
    if (!m.isCover()) {
      out.push_back(retier(m, map, tier));
    }
  }
  return out;
}

std::vector<Master> deriveCoverMasters(const lefdef::LefSubset& lib, Tier tier)
{
  const auto map = layerMap(lib.tech, tier);
  std::vector<Master> out;
  for (const Master& m : lib.macros) {
    if (m.isCover()) {
      continue;
    }
    Master c = retier(m, map, tier);
    c.name += "_cover";
    c.cell_class = CellClass::kCover;
    c.obs.clear();
    out.push_back(std::move(c));
  }
  return out;
}

std::string logicalName(std::string_view master)
{
  std::string_view s = master;
  if (endsWith(s, "_cover")) {
    s.remove_suffix(6);
  }
  for (Tier t : {Tier::kBottom, Tier::kUpper}) {
    const std::string suffix = tierSuffix(t);
    if (endsWith(s, suffix)) {
      s.remove_suffix(suffix.size());
      return std::string(s);
    }
  }
  return std::string(master);
}

bool HiddenPinReport::isHidden(std::string_view macro, std::string_view pin) const
{
  return std::any_of(hidden.begin(), hidden.end(), [&](const HiddenPin& h) {
    return h.macro == macro && h.pin == pin;
  });
}

UnifiedLibrary buildUnifiedLibrary(const lefdef::LefSubset& lib_a,
                                   const lefdef::LefSubset& lib_b)
{
  UnifiedLibrary out;
  out.lib.tech = lib_a.tech;
  for (const Master& a : lib_a.macros) {
    const Master* b = lib_b.findMacro(a.name);
    if (b == nullptr) {
      continue;
    }
    Master u = a;
    std::vector<std::string> shared;
    for (MasterPin& p : u.pins) {
      if (b->findPin(p.name) != nullptr) {
        shared.push_back(p.name);
      } else {
        p.hidden = true;
        out.report.hidden.push_back({a.name, p.name, "A"});
      }
    }
    for (const MasterPin& p : b->pins) {
      if (a.findPin(p.name) == nullptr) {
        MasterPin h = p;
        h.hidden = true;
        // libB layers need not exist in libA's technology.
        h.shapes.clear();
        h.offset.x = std::clamp<Dbu>(h.offset.x, 0, u.width);
        h.offset.y = std::clamp<Dbu>(h.offset.y, 0, u.height);
        u.pins.push_back(std::move(h));
        out.report.hidden.push_back({a.name, p.name, "B"});
      }
    }
    out.report.shared.emplace_back(a.name, std::move(shared));
    out.lib.macros.push_back(std::move(u));
  }
  if (out.lib.macros.empty()) {
    fail(Errc::kEmptyIntersection, "the two libraries share no macro name");
  }
  return out;
}

std::vector<Row> rebuildRows(const Rect& core, const Site& site, std::string_view prefix)
{
  if (site.width <= 0 || site.height <= 0) {
    fail(Errc::kInvalidArgument, fmt::format("site '{}' has a nonpositive size", site.name));
  }
  if (core.empty()) {
    fail(Errc::kInvalidArgument, "core rectangle is empty");
  }
  if (site.width > core.width() || site.height > core.height()) {
    fail(Errc::kSiteTooLarge,
         fmt::format("site '{}' ({} x {}) does not fit the core ({} x {})",
                     site.name,
                     site.width,
                     site.height,
                     core.width(),
                     core.height()));
  }
  TierTag tag = TierTag::kNone;
  if (endsWith(site.name, "_bottom")) {
    tag = TierTag::kBottom;
  } else if (endsWith(site.name, "_upper")) {
    tag = TierTag::kUpper;
  }
  std::vector<Row> rows;
  const Dbu count = core.height() / site.height;
  for (Dbu i = 0; i < count; ++i) {
    Row r;
    r.name = fmt::format("{}_{}", prefix, i);
    r.site = site.name;
    r.origin = {core.xlo, core.ylo + i * site.height};
    r.num_sites = core.width() / site.width;
    r.step = site.width;
    r.orient = i % 2 == 0 ? Orient::N : Orient::FS;
    r.tier = tag;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<HbtSpec> hbtPitchSweep(const HbtSpec& base, const std::vector<double>& pitches)
{
  std::vector<HbtSpec> out;
  out.reserve(pitches.size());
  for (double p : pitches) {
    if (!(p > 0)) {
      fail(Errc::kNonpositivePitch, fmt::format("HBT pitch must be positive (got {})", p));
    }
    HbtSpec s = base;
    s.pitch = p;
    s.width = p / 2;
    s.spacing = p / 2;
    out.push_back(s);
  }
  return out;
}

nlohmann::ordered_json toJson(const HbtSpec& hbt)
{
  return {{"width_um", hbt.width},
          {"spacing_um", hbt.spacing},
          {"pitch_um", hbt.pitch},
          {"resistance_ohm", hbt.resistance}};
}

nlohmann::ordered_json toJson(const HiddenPinReport& report)
{
  nlohmann::ordered_json j;
  j["hidden"] = nlohmann::ordered_json::array();
  for (const HiddenPin& h : report.hidden) {
    j["hidden"].push_back({{"macro", h.macro}, {"pin", h.pin}, {"present_in", h.present_in}});
  }
  j["shared"] = nlohmann::ordered_json::object();
  for (const auto& [macro, pins] : report.shared) {
    j["shared"][macro] = pins;
  }
  return j;
}

nlohmann::ordered_json stackManifest(const StackConfig& cfg, const TechStack& tech)
{
  nlohmann::ordered_json j;
  j["name"] = tech.name;
  j["units"] = tech.units;
  j["tiers"] = {{{"tier", "BOTTOM"}, {"tech", cfg.bottom_tech.name}},
                {{"tier", "UPPER"}, {"tech", cfg.top_tech.name}}};
  j["layer_map"] = nlohmann::ordered_json::array();
  for (const Layer& l : tech.layers) {
    auto it = tech.tier_of_layer.find(l.name);
    j["layer_map"].push_back(
        {{"layer", l.name},
         {"kind", layerKindName(l.kind)},
         {"tier", it == tech.tier_of_layer.end() ? "" : layerTierName(it->second)}});
  }
  j["hbt"] = toJson(cfg.hbt);
  j["compat_layers"] = cfg.legacy_compat_layers
                           ? nlohmann::ordered_json::array({"M2_add", "M3_add"})
                           : nlohmann::ordered_json::array();
  nlohmann::ordered_json pdn;
  pdn["isolated"] = cfg.pdn_isolated;
  if (cfg.pdn_isolated) {
    pdn["domains"] = {{{"tier", "BOTTOM"}, {"supplies", {"VDD", "VSS"}}},
                      {{"tier", "UPPER"}, {"supplies", {"VDD_m", "VSS_m"}}}};
  } else {
    pdn["domains"] = {{{"tier", "SHARED"}, {"supplies", {"VDD", "VSS"}}}};
  }
  j["pdn"] = pdn;
  return j;
}

}  // namespace rpd::enable3d
