// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <fmt/core.h>

#include <algorithm>
#include <unordered_set>

#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/io/lefdef.h"
#include "tokenizer.h"

namespace rpd::lefdef {

namespace {

constexpr std::string_view kHiddenProperty = "RPD_HIDDEN";
constexpr std::string_view kBondLayer = "HBT";

bool endsWith(std::string_view s, std::string_view suffix)
{
  return s.size() >= suffix.size()
         && s.substr(s.size() - suffix.size()) == suffix;
}

TierTag tagFromName(std::string_view name)
{
  if (endsWith(name, "_cover")) {
    name.remove_suffix(6);
  }
  if (endsWith(name, "_bottom")) {
    return TierTag::kBottom;
  }
  if (endsWith(name, "_upper")) {
    return TierTag::kUpper;
  }
  return TierTag::kNone;
}

Rect normalized(Dbu x1, Dbu y1, Dbu x2, Dbu y2)
{
  return {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
}

class LefParser
{
 public:
  LefParser(std::string_view text, LefSubset base)
      : in_("lef", text), lef_(std::move(base))
  {
    for (const Layer& l : lef_.tech.layers) {
      layers_.insert(l.name);
    }
    for (const Master& m : lef_.macros) {
      macros_.insert(m.name);
    }
  }

  LefSubset run()
  {
    while (!in_.atEnd()) {
      const std::string_view kw = in_.word();
      if (kw == "END") {
        if (in_.accept("LIBRARY")) {
          break;
        }
        in_.syntax("unexpected END");
      } else if (kw == "UNITS") {
        parseUnits();
      } else if (kw == "LAYER") {
        parseLayer();
      } else if (kw == "SITE") {
        parseSite();
      } else if (kw == "VIA") {
        parseVia();
      } else if (kw == "MACRO") {
        parseMacro();
      } else if (kw == "VERSION" || kw == "BUSBITCHARS" || kw == "DIVIDERCHAR"
                 || kw == "NAMESCASESENSITIVE") {
        in_.skipStatement();
      } else if (kw == "PROPERTYDEFINITIONS") {
        in_.skipBlock("PROPERTYDEFINITIONS");
      } else if (kw == "BEGINEXT") {
        while (!in_.atEnd() && in_.next().text != "ENDEXT") {
        }
      } else {
        skipUnknown(kw);
      }
    }
    inferTiers();
    return std::move(lef_);
  }

 private:
  void warn(std::string msg)
  {
    lef_.warnings.push_back(fmt::format("lef:{}: {}", in_.line(), msg));
  }

  // Unsupported statement or block: blocks are "KEYWORD name ... END name".
  void skipUnknown(std::string_view kw)
  {
    warn(fmt::format("skipped unsupported section '{}'", kw));
    if (in_.restOfLineHasSemicolon()) {
      in_.skipStatement();
      return;
    }
    const std::string_view name = kw == "SPACING" ? kw : in_.word();
    in_.skipBlock(name);
  }

  Dbu dbu() { return toDbu(in_.number(), lef_.tech.units); }

  void requireLayer(std::string_view name)
  {
    if (!layers_.contains(std::string(name))) {
      in_.syntax(fmt::format("undeclared layer '{}'", name));
    }
  }

  void parseUnits()
  {
    while (!in_.accept("END")) {
      const std::string_view kw = in_.word();
      if (kw == "DATABASE") {
        in_.expect("MICRONS");
        const auto units = in_.integer();
        if (units <= 0) {
          in_.syntax("DATABASE MICRONS must be positive");
        }
        if (have_geometry_ && units != lef_.tech.units) {
          in_.syntax("DATABASE MICRONS differs from earlier library units");
        }
        lef_.tech.units = static_cast<int>(units);
        in_.expect(";");
      } else {
        in_.skipStatement();
      }
    }
    in_.expect("UNITS");
  }

  void parseLayer()
  {
    Layer layer;
    layer.name = std::string(in_.word());
    bool have_pitch = false;
    while (!(in_.peek().text == "END" && in_.peek(1).text == layer.name)) {
      const std::string_view kw = in_.word();
      if (kw == "TYPE") {
        const std::string_view type = in_.word();
        if (type == "ROUTING") {
          layer.kind = LayerKind::kRouting;
        } else if (type == "CUT") {
          layer.kind = LayerKind::kCut;
        } else {
          layer.kind = LayerKind::kMasterslice;
        }
        in_.skipStatement();
      } else if (kw == "DIRECTION") {
        const std::string_view d = in_.word();
        layer.direction = d == "HORIZONTAL" ? LayerDir::kHorizontal
                          : d == "VERTICAL" ? LayerDir::kVertical
                                            : LayerDir::kNone;
        in_.skipStatement();
      } else if (kw == "PITCH") {
        layer.pitch = dbu();
        have_pitch = true;
        in_.skipStatement();
      } else if (kw == "WIDTH") {
        layer.width = dbu();
        in_.skipStatement();
      } else if (kw == "SPACING" && layer.spacing == 0) {
        layer.spacing = dbu();
        in_.skipStatement();
      } else {
        in_.skipStatement();
      }
    }
    in_.next();
    in_.next();
    if (layer.kind == LayerKind::kCut && !have_pitch) {
      layer.pitch = layer.width + layer.spacing;
    }
    have_geometry_ = true;
    if (!layers_.insert(layer.name).second) {
      warn(fmt::format("duplicate layer '{}' ignored", layer.name));
      return;
    }
    lef_.tech.layers.push_back(std::move(layer));
  }

  void parseSite()
  {
    Site site;
    site.name = std::string(in_.word());
    while (!(in_.peek().text == "END" && in_.peek(1).text == site.name)) {
      const std::string_view kw = in_.word();
      if (kw == "SIZE") {
        site.width = dbu();
        in_.expect("BY");
        site.height = dbu();
      }
      in_.skipStatement();
    }
    in_.next();
    in_.next();
    if (site.width <= 0 || site.height <= 0) {
      in_.syntax(fmt::format("site '{}' needs a positive SIZE", site.name));
    }
    if (lef_.tech.findSite(site.name) != nullptr) {
      warn(fmt::format("duplicate site '{}' ignored", site.name));
      return;
    }
    lef_.tech.sites.push_back(std::move(site));
  }

  void parseVia()
  {
    ViaDef via;
    via.name = std::string(in_.word());
    while (in_.accept("DEFAULT") || in_.accept("GENERATED")) {
    }
    std::vector<std::string> vlayers;
    bool have_cut = false;
    bool generated = false;
    std::string current;
    while (!(in_.peek().text == "END" && in_.peek(1).text == via.name)) {
      const std::string_view kw = in_.word();
      if (kw == "RESISTANCE") {
        via.resistance = in_.number();
        in_.skipStatement();
      } else if (kw == "LAYER") {
        current = std::string(in_.word());
        requireLayer(current);
        vlayers.push_back(current);
        in_.skipStatement();
      } else if (kw == "RECT") {
        if (current.empty()) {
          in_.syntax("RECT before LAYER");
        }
        if (in_.accept("MASK")) {
          in_.integer();
        }
        const Dbu x1 = dbu(), y1 = dbu(), x2 = dbu(), y2 = dbu();
        in_.expect(";");
        if (lef_.tech.findLayer(current)->kind == LayerKind::kCut) {
          const Rect r = normalized(x1, y1, x2, y2);
          via.cut_rect = have_cut ? via.cut_rect.merged(r) : r;
          have_cut = true;
        }
      } else {
        generated = generated || kw == "VIARULE";
        in_.skipStatement();
      }
    }
    in_.next();
    in_.next();
    std::vector<std::string> metals;
    for (const std::string& l : vlayers) {
      if (lef_.tech.findLayer(l)->kind == LayerKind::kCut) {
        via.cut = l;
      } else {
        metals.push_back(l);
      }
    }
    if (generated || via.cut.empty() || metals.size() != 2) {
      warn(fmt::format("skipped via '{}' outside the supported form", via.name));
      return;
    }
    if (*lef_.tech.layerIndex(metals[0]) > *lef_.tech.layerIndex(metals[1])) {
      std::swap(metals[0], metals[1]);
    }
    via.bottom = metals[0];
    via.top = metals[1];
    lef_.tech.vias.push_back(std::move(via));
  }

  Rect shifted(Rect r) const
  {
    return {r.xlo + origin_.x, r.ylo + origin_.y, r.xhi + origin_.x, r.yhi + origin_.y};
  }

  // LAYER / RECT / POLYGON statements up to a bare END.
  std::vector<LayerRect> parseGeometry()
  {
    std::vector<LayerRect> shapes;
    std::string current;
    while (!in_.accept("END")) {
      const std::string_view kw = in_.word();
      if (kw == "LAYER") {
        current = std::string(in_.word());
        requireLayer(current);
        in_.skipStatement();
      } else if (kw == "RECT" || kw == "POLYGON") {
        if (current.empty()) {
          in_.syntax(fmt::format("{} before LAYER", kw));
        }
        if (in_.accept("MASK")) {
          in_.integer();
        }
        bool first = true;
        Rect box;
        while (!in_.accept(";")) {
          const Dbu x = dbu();
          const Dbu y = dbu();
          if (kw == "RECT" && !first) {
            box = normalized(box.xlo, box.ylo, x, y);
          } else {
            box = first ? Rect{x, y, x, y} : box.merged({x, y, x, y});
          }
          first = false;
        }
        shapes.push_back({current, shifted(box)});
      } else {
        in_.skipStatement();
      }
    }
    return shapes;
  }

  MasterPin parsePin(const Master& macro)
  {
    MasterPin pin;
    pin.name = std::string(in_.word());
    while (!(in_.peek().text == "END" && in_.peek(1).text == pin.name)) {
      const std::string_view kw = in_.word();
      if (kw == "DIRECTION") {
        const std::string_view d = in_.word();
        pin.dir = parsePinDir(d).value_or(PinDir::kInout);
        in_.skipStatement();
      } else if (kw == "USE") {
        const std::string_view u = in_.word();
        pin.use = u == "POWER"    ? PinUse::kPower
                  : u == "GROUND" ? PinUse::kGround
                  : u == "CLOCK"  ? PinUse::kClock
                                  : PinUse::kSignal;
        in_.skipStatement();
      } else if (kw == "PROPERTY") {
        if (in_.accept(kHiddenProperty)) {
          pin.hidden = in_.integer() != 0;
        }
        in_.skipStatement();
      } else if (kw == "PORT") {
        auto shapes = parseGeometry();
        pin.shapes.insert(pin.shapes.end(), shapes.begin(), shapes.end());
      } else {
        in_.skipStatement();
      }
    }
    in_.next();
    in_.next();
    if (pin.shapes.empty()) {
      pin.offset = {macro.width / 2, macro.height / 2};
    } else {
      Rect box = pin.shapes.front().rect;
      for (const LayerRect& s : pin.shapes) {
        box = box.merged(s.rect);
      }
      pin.offset = {(box.xlo + box.xhi) / 2, (box.ylo + box.yhi) / 2};
    }
    return pin;
  }

  void parseMacro()
  {
    Master macro;
    macro.name = std::string(in_.word());
    origin_ = {};
    while (!(in_.peek().text == "END" && in_.peek(1).text == macro.name)) {
      const std::string_view kw = in_.word();
      if (kw == "CLASS") {
        macro.cell_class
            = in_.word() == "COVER" ? CellClass::kCover : CellClass::kCore;
        in_.skipStatement();
      } else if (kw == "ORIGIN") {
        origin_.x = dbu();
        origin_.y = dbu();
        in_.skipStatement();
      } else if (kw == "SIZE") {
        macro.width = dbu();
        in_.expect("BY");
        macro.height = dbu();
        in_.skipStatement();
      } else if (kw == "SITE") {
        macro.site = std::string(in_.word());
        in_.skipStatement();
      } else if (kw == "PIN") {
        macro.pins.push_back(parsePin(macro));
      } else if (kw == "OBS") {
        auto shapes = parseGeometry();
        macro.obs.insert(macro.obs.end(), shapes.begin(), shapes.end());
      } else if (kw == "DENSITY") {
        while (!in_.accept("END")) {
          in_.next();
        }
      } else {
        in_.skipStatement();
      }
    }
    in_.next();
    in_.next();
    if (macro.width <= 0 || macro.height <= 0) {
      in_.syntax(fmt::format("macro '{}' needs a positive SIZE", macro.name));
    }
    macro.tier_tag = tagFromName(macro.name);
    have_geometry_ = true;
    if (!macros_.insert(macro.name).second) {
      warn(fmt::format("duplicate macro '{}' ignored", macro.name));
      return;
    }
    lef_.macros.push_back(std::move(macro));
  }

  // A bonding cut layer splits the stack into bottom, bond and upper tiers.
  void inferTiers()
  {
    TechStack& tech = lef_.tech;
    const auto bond = tech.layerIndex(kBondLayer);
    tech.tiered = bond.has_value();
    tech.tier_of_layer.clear();
    if (!bond) {
      return;
    }
    for (std::size_t i = 0; i < tech.layers.size(); ++i) {
      tech.tier_of_layer[tech.layers[i].name] = i < *bond    ? LayerTier::kBottom
                                                : i == *bond ? LayerTier::kBond
                                                             : LayerTier::kUpper;
    }
  }

  TokenStream in_;
  LefSubset lef_;
  std::unordered_set<std::string> layers_;
  std::unordered_set<std::string> macros_;
  Point origin_;
  bool have_geometry_ = false;
};

void writeShapes(std::string& out,
                 const std::vector<LayerRect>& shapes,
                 int units,
                 std::string_view indent)
{
  std::string_view current;
  for (const LayerRect& s : shapes) {
    if (s.layer != current) {
      current = s.layer;
      out += fmt::format("{}LAYER {} ;\n", indent, s.layer);
    }
    out += fmt::format("{}  RECT {} {} {} {} ;\n",
                       indent,
                       formatMicrons(s.rect.xlo, units),
                       formatMicrons(s.rect.ylo, units),
                       formatMicrons(s.rect.xhi, units),
                       formatMicrons(s.rect.yhi, units));
  }
}

}  // namespace

const Master* LefSubset::findMacro(std::string_view name) const
{
  for (const Master& m : macros) {
    if (m.name == name) {
      return &m;
    }
  }
  return nullptr;
}

LefSubset parseLef(std::string_view text, LefSubset base)
{
  return LefParser(text, std::move(base)).run();
}

std::string writeLef(const TechStack& stack, std::span<const Master> masters)
{
  const int u = stack.units;
  auto um = [u](Dbu v) { return formatMicrons(v, u); };
  std::string out;
  out += fmt::format("# generated-by {} {}\n", kToolName, kToolVersion);
  out += "VERSION 5.8 ;\nBUSBITCHARS \"[]\" ;\nDIVIDERCHAR \"/\" ;\n\n";

  const bool any_hidden = std::any_of(
      masters.begin(), masters.end(), [](const Master& m) {
        return std::any_of(m.pins.begin(), m.pins.end(), [](const MasterPin& p) {
          return p.hidden;
        });
      });
  if (any_hidden) {
    out += fmt::format(
        "PROPERTYDEFINITIONS\n  PIN {} INTEGER ;\nEND PROPERTYDEFINITIONS\n\n",
        kHiddenProperty);
  }

  out += fmt::format("UNITS\n  DATABASE MICRONS {} ;\nEND UNITS\n\n", u);

  for (const Layer& l : stack.layers) {
    out += fmt::format("LAYER {}\n  TYPE {} ;\n", l.name, layerKindName(l.kind));
    if (l.kind == LayerKind::kRouting) {
      if (l.direction != LayerDir::kNone) {
        out += fmt::format("  DIRECTION {} ;\n", layerDirName(l.direction));
      }
      if (l.pitch > 0) {
        out += fmt::format("  PITCH {} ;\n", um(l.pitch));
      }
    }
    if (l.kind != LayerKind::kMasterslice) {
      if (l.width > 0) {
        out += fmt::format("  WIDTH {} ;\n", um(l.width));
      }
      if (l.spacing > 0) {
        out += fmt::format("  SPACING {} ;\n", um(l.spacing));
      }
    }
    out += fmt::format("END {}\n\n", l.name);
  }

  for (const Site& s : stack.sites) {
    out += fmt::format("SITE {}\n  CLASS CORE ;\n  SIZE {} BY {} ;\nEND {}\n\n",
                       s.name,
                       um(s.width),
                       um(s.height),
                       s.name);
  }

  for (const ViaDef& v : stack.vias) {
    out += fmt::format("VIA {} DEFAULT\n  RESISTANCE {} ;\n",
                       v.name,
                       formatDouble(v.resistance));
    for (const std::string& l : {v.bottom, v.cut, v.top}) {
      out += fmt::format("  LAYER {} ;\n    RECT {} {} {} {} ;\n",
                         l,
                         um(v.cut_rect.xlo),
                         um(v.cut_rect.ylo),
                         um(v.cut_rect.xhi),
                         um(v.cut_rect.yhi));
    }
    out += fmt::format("END {}\n\n", v.name);
  }

  const Layer* first_routing = nullptr;
  for (const Layer& l : stack.layers) {
    if (l.kind == LayerKind::kRouting) {
      first_routing = &l;
      break;
    }
  }

  for (const Master& m : masters) {
    out += fmt::format("MACRO {}\n  CLASS {} ;\n  ORIGIN 0 0 ;\n",
                       m.name,
                       m.isCover() ? "COVER" : "CORE");
    out += fmt::format("  SIZE {} BY {} ;\n  SYMMETRY X Y ;\n",
                       um(m.width),
                       um(m.height));
    if (!m.site.empty()) {
      out += fmt::format("  SITE {} ;\n", m.site);
    }
    for (const MasterPin& p : m.pins) {
      out += fmt::format("  PIN {}\n    DIRECTION {} ;\n    USE {} ;\n",
                         p.name,
                         pinDirName(p.dir),
                         pinUseName(p.use));
      if (p.hidden) {
        out += fmt::format("    PROPERTY {} 1 ;\n", kHiddenProperty);
      }
      if (!p.shapes.empty()) {
        out += "    PORT\n";
        writeShapes(out, p.shapes, u, "      ");
        out += "    END\n";
      } else if (first_routing != nullptr) {
        // Keep the access point: a unit square centered on it.
        out += "    PORT\n";
        writeShapes(out,
                    {{first_routing->name,
                      {p.offset.x - 1, p.offset.y - 1, p.offset.x + 1, p.offset.y + 1}}},
                    u,
                    "      ");
        out += "    END\n";
      }
      out += fmt::format("  END {}\n", p.name);
    }
    if (!m.obs.empty()) {
      out += "  OBS\n";
      writeShapes(out, m.obs, u, "    ");
      out += "  END\n";
    }
    out += fmt::format("END {}\n\n", m.name);
  }
  out += "END LIBRARY\n";
  return out;
}

std::string writeLef(const LefSubset& lef)
{
  return writeLef(lef.tech, lef.macros);
}

}  // namespace rpd::lefdef
