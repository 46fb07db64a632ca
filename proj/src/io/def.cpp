// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <fmt/core.h>

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/core/validate.h"
#include "rpd/io/lefdef.h"
#include "tokenizer.h"

namespace rpd::lefdef {

namespace {

constexpr std::string_view kCoreProperty = "RPD_CORE_BOX";
constexpr std::string_view kTieProperty = "RPD_TIE_OFFS";
constexpr std::string_view kWeightProperty = "RPD_WEIGHT";
constexpr std::string_view kTierProperty = "RPD_TIER";

Point rotate(Point p, Orient o)
{
  switch (o) {
    case Orient::N:
      return p;
    case Orient::S:
      return {-p.x, -p.y};
    case Orient::W:
      return {-p.y, p.x};
    case Orient::E:
      return {p.y, -p.x};
    case Orient::FN:
      return {-p.x, p.y};
    case Orient::FS:
      return {p.x, -p.y};
    case Orient::FW:
      return {-p.y, -p.x};
    case Orient::FE:
      return {p.y, p.x};
  }
  return p;
}

Rect rotate(const Rect& r, Orient o)
{
  const Point a = rotate(Point{r.xlo, r.ylo}, o);
  const Point b = rotate(Point{r.xhi, r.yhi}, o);
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

Master scaled(Master m, Dbu f)
{
  if (f == 1) {
    return m;
  }
  auto scale = [f](Rect& r) {
    r = {r.xlo * f, r.ylo * f, r.xhi * f, r.yhi * f};
  };
  m.width *= f;
  m.height *= f;
  for (MasterPin& p : m.pins) {
    p.offset = {p.offset.x * f, p.offset.y * f};
    for (LayerRect& s : p.shapes) {
      scale(s.rect);
    }
  }
  for (LayerRect& s : m.obs) {
    scale(s.rect);
  }
  return m;
}

TierTag rowTag(std::string_view site)
{
  auto ends = [site](std::string_view suffix) {
    return site.size() >= suffix.size()
           && site.substr(site.size() - suffix.size()) == suffix;
  };
  if (ends("_bottom")) {
    return TierTag::kBottom;
  }
  if (ends("_upper")) {
    return TierTag::kUpper;
  }
  return TierTag::kNone;
}

std::string unquote(std::string_view s)
{
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

struct PendingPin
{
  std::string owner;
  std::string pin;
  bool io = false;
  int line = 0;
};

class DefParser
{
 public:
  DefParser(std::string_view text, const LefSubset& lef)
      : in_("def", text), lef_(lef)
  {
  }

  Design run()
  {
    design_.units = lef_.tech.units;
    while (!in_.atEnd()) {
      const std::string_view kw = in_.word();
      if (kw == "END") {
        in_.expect("DESIGN");
        break;
      }
      if (kw == "VERSION" || kw == "DIVIDERCHAR" || kw == "BUSBITCHARS"
          || kw == "TECHNOLOGY" || kw == "HISTORY") {
        in_.skipStatement();
      } else if (kw == "DESIGN") {
        design_.name = std::string(in_.word());
        in_.expect(";");
      } else if (kw == "UNITS") {
        in_.expect("DISTANCE");
        in_.expect("MICRONS");
        const auto units = in_.integer();
        if (units <= 0 || units % lef_.tech.units != 0) {
          in_.syntax(fmt::format(
              "DEF units {} are not a multiple of LEF units {}", units, lef_.tech.units));
        }
        design_.units = static_cast<int>(units);
        in_.expect(";");
      } else if (kw == "PROPERTYDEFINITIONS") {
        parsePropertyDefinitions();
      } else if (kw == "DIEAREA") {
        parseDieArea();
      } else if (kw == "ROW") {
        parseRow();
      } else if (kw == "COMPONENTS") {
        parseComponents();
      } else if (kw == "PINS") {
        parsePins();
      } else if (kw == "NETS") {
        parseNets();
      } else {
        warn(fmt::format("skipped unsupported section '{}'", kw));
        if (kw == "SPECIALNETS" || kw == "VIAS" || kw == "REGIONS"
                   || kw == "GROUPS" || kw == "BLOCKAGES" || kw == "FILLS"
                   || kw == "NONDEFAULTRULES" || kw == "PINPROPERTIES"
                   || kw == "SCANCHAINS" || kw == "STYLES" || kw == "SLOTS"
                   || kw == "COMPONENTMASKSHIFT" || kw == "BEGINEXT") {
          in_.skipBlock(kw);
        } else {
          in_.skipStatement();
        }
      }
    }
    finish();
    return std::move(design_);
  }

  std::vector<std::string> warnings;

 private:
  void warn(std::string msg)
  {
    warnings.push_back(fmt::format("def:{}: {}", in_.line(), msg));
  }

  Dbu coord() { return static_cast<Dbu>(std::llround(in_.number())); }

  Point point()
  {
    in_.expect("(");
    Point p;
    p.x = coord();
    p.y = coord();
    in_.expect(")");
    return p;
  }

  Orient orient()
  {
    const std::string_view tok = in_.word();
    if (auto o = parseOrient(tok)) {
      return *o;
    }
    in_.syntax(fmt::format("unknown orientation '{}'", tok));
  }

  // Skips the rest of a "+ OPTION ..." clause.
  void skipOption()
  {
    while (in_.peek().text != "+" && in_.peek().text != ";") {
      in_.next();
    }
  }

  void parsePropertyDefinitions()
  {
    while (!in_.accept("END")) {
      const std::string_view object = in_.word();
      const std::string_view name = in_.word();
      if (object == "DESIGN" && name == kCoreProperty) {
        in_.expect("STRING");
        std::istringstream box(unquote(in_.word()));
        Rect r;
        if (!(box >> r.xlo >> r.ylo >> r.xhi >> r.yhi)) {
          in_.syntax(fmt::format("malformed {} value", kCoreProperty));
        }
        core_ = r;
      }
      in_.skipStatement();
    }
    in_.expect("PROPERTYDEFINITIONS");
  }

  void parseDieArea()
  {
    std::vector<Point> pts;
    while (!in_.accept(";")) {
      pts.push_back(point());
    }
    if (pts.size() < 2) {
      in_.syntax("DIEAREA needs two points");
    }
    if (pts.size() > 2) {
      warn("polygonal DIEAREA reduced to its bounding box");
    }
    Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const Point& p : pts) {
      r = r.merged({p.x, p.y, p.x, p.y});
    }
    design_.die = r;
    have_die_ = true;
  }

  void parseRow()
  {
    Row row;
    row.name = std::string(in_.word());
    row.site = std::string(in_.word());
    const Site* site = lef_.tech.findSite(row.site);
    if (site == nullptr) {
      in_.syntax(fmt::format("row '{}' uses undeclared site '{}'", row.name, row.site));
    }
    row.origin.x = coord();
    row.origin.y = coord();
    row.orient = orient();
    row.num_sites = 1;
    row.step = site->width * scale();
    if (in_.accept("DO")) {
      const auto nx = in_.integer();
      in_.expect("BY");
      const auto ny = in_.integer();
      if (ny != 1) {
        warn(fmt::format("vertical row '{}' treated as horizontal", row.name));
      }
      row.num_sites = nx * ny;
      if (in_.accept("STEP")) {
        const Dbu sx = coord();
        coord();
        if (sx > 0) {
          row.step = sx;
        }
      }
    }
    in_.skipStatement();
    row.tier = rowTag(row.site);
    design_.rows.push_back(std::move(row));
  }

  Dbu scale() const { return design_.units / lef_.tech.units; }

  void parseComponents()
  {
    in_.integer();
    in_.expect(";");
    while (!in_.accept("END")) {
      in_.expect("-");
      Instance inst;
      inst.name = std::string(in_.word());
      inst.master = std::string(in_.word());
      const int line = in_.line();
      while (!in_.accept(";")) {
        in_.expect("+");
        const std::string_view opt = in_.word();
        if (opt == "PLACED" || opt == "FIXED" || opt == "COVER") {
          inst.location = point();
          inst.orient = orient();
          inst.fixed = opt != "PLACED";
        } else if (opt == "UNPLACED") {
          inst.location.reset();
        } else if (opt == "PROPERTY") {
          while (in_.peek().text != "+" && in_.peek().text != ";") {
            const std::string_view name = in_.word();
            const std::string value = unquote(in_.word());
            if (name == kTieProperty) {
              for (std::string_view pin : splitWhitespace(value)) {
                inst.tie_offs.emplace_back(pin);
              }
            } else if (name == kTierProperty) {
              inst.tier = value == tierName(Tier::kUpper) ? Tier::kUpper : Tier::kBottom;
            }
          }
        } else {
          skipOption();
        }
      }
      component_lines_.push_back(line);
      design_.instances.push_back(std::move(inst));
    }
    in_.expect("COMPONENTS");
  }

  void parsePins()
  {
    in_.integer();
    in_.expect(";");
    while (!in_.accept("END")) {
      in_.expect("-");
      IoPin io;
      io.name = std::string(in_.word());
      Rect shape;
      bool have_shape = false;
      while (!in_.accept(";")) {
        in_.expect("+");
        const std::string_view opt = in_.word();
        if (opt == "DIRECTION") {
          io.dir = parsePinDir(in_.word()).value_or(PinDir::kInout);
          skipOption();
        } else if (opt == "LAYER") {
          io.layer = std::string(in_.word());
          while (in_.peek().text != "(") {
            in_.next();  // MASK / SPACING / DESIGNRULEWIDTH values
          }
          const Point a = point();
          const Point b = point();
          shape = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
          have_shape = true;
        } else if (opt == "PLACED" || opt == "FIXED" || opt == "COVER") {
          io.location = point();
          const Orient o = orient();
          if (have_shape) {
            shape = rotate(shape, o);
          } else {
            pending_orient_ = o;
          }
        } else if (opt == "PORT") {
        } else {
          skipOption();
        }
      }
      if (have_shape && pending_orient_) {
        shape = rotate(shape, *pending_orient_);
      }
      pending_orient_.reset();
      io.shape = shape;
      design_.io_pins.push_back(std::move(io));
    }
    in_.expect("PINS");
  }

  void parseWiring(Net& net)
  {
    while (true) {
      std::string layer(in_.word());
      std::optional<Point> prev;
      while (true) {
        const std::string_view t = in_.peek().text;
        if (t == "(") {
          in_.next();
          Point p;
          const std::string_view xs = in_.word();
          p.x = xs == "*" && prev ? prev->x : static_cast<Dbu>(std::llround(parseDouble(xs).value_or(0)));
          const std::string_view ys = in_.word();
          p.y = ys == "*" && prev ? prev->y : static_cast<Dbu>(std::llround(parseDouble(ys).value_or(0)));
          if (in_.peek().text != ")") {
            in_.next();  // extension
          }
          in_.expect(")");
          if (prev) {
            net.wires.push_back({layer, *prev, p});
          }
          prev = p;
        } else if (t == "MASK" || t == "TAPERRULE" || t == "STYLE") {
          in_.next();
          in_.next();
        } else if (t == "TAPER" || t == "VIRTUAL") {
          in_.next();
        } else if (t == "RECT") {
          in_.next();
          in_.expect("(");
          while (!in_.accept(")")) {
            in_.next();
          }
        } else if (t == "NEW" || t == "+" || t == ";") {
          break;
        } else {
          in_.next();
          if (!prev) {
            in_.syntax(fmt::format("via '{}' without a point", t));
          }
          net.vias.push_back({std::string(t), *prev});
          if (parseOrient(in_.peek().text)) {
            in_.next();
          }
        }
      }
      if (!in_.accept("NEW")) {
        return;
      }
    }
  }

  void parseNets()
  {
    in_.integer();
    in_.expect(";");
    while (!in_.accept("END")) {
      in_.expect("-");
      Net net;
      net.name = std::string(in_.word());
      std::vector<PendingPin> pins;
      while (in_.accept("(")) {
        PendingPin p;
        p.line = in_.line();
        const std::string_view owner = in_.word();
        if (owner == "PIN") {
          p.io = true;
          p.owner = std::string(in_.word());
        } else {
          p.owner = std::string(owner);
          p.pin = std::string(in_.word());
        }
        while (!in_.accept(")")) {
          in_.next();  // + SYNTHESIZED
        }
        if (p.owner == "*") {
          warn(fmt::format("net '{}': global pin reference skipped", net.name));
          continue;
        }
        pins.push_back(std::move(p));
      }
      while (!in_.accept(";")) {
        in_.expect("+");
        const std::string_view opt = in_.word();
        if (opt == "WEIGHT") {
          net.weight = static_cast<double>(in_.integer());
        } else if (opt == "PROPERTY" && in_.peek().text == kWeightProperty) {
          in_.next();
          net.weight = in_.number();
        } else if (opt == "ROUTED" || opt == "FIXED" || opt == "COVER"
                   || opt == "NOSHIELD") {
          parseWiring(net);
        } else {
          skipOption();
        }
      }
      pending_.push_back(std::move(pins));
      design_.nets.push_back(std::move(net));
    }
    in_.expect("NETS");
  }

  void finish()
  {
    const Dbu f = scale();
    design_.masters.reserve(lef_.macros.size());
    for (const Master& m : lef_.macros) {
      design_.masters.push_back(scaled(m, f));
    }
    for (const Site& s : lef_.tech.sites) {
      design_.sites.push_back({s.name, s.width * f, s.height * f});
    }

    std::unordered_map<std::string_view, const Master*> masters;
    for (const Master& m : design_.masters) {
      masters.try_emplace(m.name, &m);
    }
    std::unordered_map<std::string_view, const Master*> inst_master;
    for (std::size_t i = 0; i < design_.instances.size(); ++i) {
      Instance& inst = design_.instances[i];
      auto it = masters.find(inst.master);
      if (it == masters.end()) {
        fail(Errc::kUnknownMaster,
             fmt::format("def:{}: component '{}' uses unknown macro '{}'",
                         component_lines_[i],
                         inst.name,
                         inst.master));
      }
      if (!inst.tier) {
        inst.tier = tierOf(it->second->tier_tag);
      }
      inst_master.try_emplace(inst.name, it->second);
    }
    std::unordered_map<std::string_view, const IoPin*> ios;
    for (const IoPin& io : design_.io_pins) {
      ios.try_emplace(io.name, &io);
    }

    for (std::size_t n = 0; n < design_.nets.size(); ++n) {
      Net& net = design_.nets[n];
      for (PendingPin& p : pending_[n]) {
        if (p.io) {
          auto it = ios.find(p.owner);
          if (it == ios.end()) {
            fail(Errc::kSyntax,
                 fmt::format("def:{}: net '{}' references undeclared pin '{}'",
                             p.line, net.name, p.owner));
          }
          const Rect& s = it->second->shape;
          net.pins.push_back(NetPin::ioPin(p.owner,
                                           flipped(it->second->dir),
                                           {(s.xlo + s.xhi) / 2, (s.ylo + s.yhi) / 2}));
          continue;
        }
        auto it = inst_master.find(p.owner);
        if (it == inst_master.end()) {
          fail(Errc::kSyntax,
               fmt::format("def:{}: net '{}' references undeclared component '{}'",
                           p.line, net.name, p.owner));
        }
        const MasterPin* mp = it->second->findPin(p.pin);
        if (mp == nullptr) {
          fail(Errc::kSyntax,
               fmt::format("def:{}: net '{}': macro '{}' has no pin '{}'",
                           p.line, net.name, it->second->name, p.pin));
        }
        net.pins.push_back(NetPin::instPin(p.owner, p.pin, mp->dir));
      }
    }

    Rect rows_box;
    for (std::size_t i = 0; i < design_.rows.size(); ++i) {
      const Row& row = design_.rows[i];
      const Site* site = design_.findSite(row.site);
      const Rect r{row.origin.x, row.origin.y, row.origin.x + row.width(), row.origin.y + site->height};
      rows_box = i == 0 ? r : rows_box.merged(r);
    }
    if (!have_die_) {
      warn("missing DIEAREA; using the row extent");
      design_.die = rows_box;
    }
    design_.core = core_ ? *core_ : design_.rows.empty() ? design_.die : rows_box;

    const ValidationReport report = validateDesign(design_);
    if (!report.empty()) {
      const Violation& v = report.violations.front();
      fail(Errc::kSyntax,
           fmt::format("def: parsed design is inconsistent ({} at {}; {} violation(s))",
                       v.code, v.locus, report.size()));
    }
  }

  TokenStream in_;
  const LefSubset& lef_;
  Design design_;
  std::optional<Rect> core_;
  std::optional<Orient> pending_orient_;
  bool have_die_ = false;
  std::vector<int> component_lines_;
  std::vector<std::vector<PendingPin>> pending_;
};

std::string pointText(Point p)
{
  return fmt::format("( {} {} )", p.x, p.y);
}

}  // namespace

Design parseDef(std::string_view text,
                const LefSubset& lef,
                std::vector<std::string>* warnings)
{
  DefParser parser(text, lef);
  Design design = parser.run();
  if (warnings != nullptr) {
    *warnings = std::move(parser.warnings);
  }
  return design;
}

std::string writeDef(const Design& design)
{
  std::string out;
  out.reserve(128 * (design.instances.size() + design.nets.size()) + 1024);
  out += fmt::format("# generated-by {} {}\n", kToolName, kToolVersion);
  out += "VERSION 5.8 ;\nDIVIDERCHAR \"/\" ;\nBUSBITCHARS \"[]\" ;\n";
  out += fmt::format("DESIGN {} ;\n", design.name.empty() ? "top" : design.name);
  out += fmt::format("UNITS DISTANCE MICRONS {} ;\n\n", design.units);

  out += "PROPERTYDEFINITIONS\n";
  out += fmt::format("  DESIGN {} STRING \"{} {} {} {}\" ;\n",
                     kCoreProperty,
                     design.core.xlo,
                     design.core.ylo,
                     design.core.xhi,
                     design.core.yhi);
  out += fmt::format("  COMPONENT {} STRING ;\n", kTieProperty);
  out += fmt::format("  COMPONENT {} STRING ;\n", kTierProperty);
  out += fmt::format("  NET {} REAL ;\n", kWeightProperty);
  out += "END PROPERTYDEFINITIONS\n\n";

  out += fmt::format("DIEAREA {} {} ;\n\n",
                     pointText({design.die.xlo, design.die.ylo}),
                     pointText({design.die.xhi, design.die.yhi}));

  for (const Row& row : design.rows) {
    out += fmt::format("ROW {} {} {} {} {} DO {} BY 1 STEP {} 0 ;\n",
                       row.name,
                       row.site,
                       row.origin.x,
                       row.origin.y,
                       orientName(row.orient),
                       row.num_sites,
                       row.step);
  }
  if (!design.rows.empty()) {
    out += "\n";
  }

  out += fmt::format("COMPONENTS {} ;\n", design.instances.size());
  for (const Instance& inst : design.instances) {
    out += fmt::format("  - {} {}", inst.name, inst.master);
    if (inst.location) {
      out += fmt::format(" + {} {} {}",
                         inst.fixed ? "FIXED" : "PLACED",
                         pointText(*inst.location),
                         orientName(inst.orient));
    } else {
      out += " + UNPLACED";
    }
    if (!inst.tie_offs.empty()) {
      std::string pins;
      for (const std::string& p : inst.tie_offs) {
        pins += pins.empty() ? p : " " + p;
      }
      out += fmt::format(" + PROPERTY {} \"{}\"", kTieProperty, pins);
    }
    if (inst.tier) {
      out += fmt::format(" + PROPERTY {} {}", kTierProperty, tierName(*inst.tier));
    }
    out += " ;\n";
  }
  out += "END COMPONENTS\n\n";

  std::unordered_map<std::string_view, std::string_view> io_net;
  for (const Net& net : design.nets) {
    for (const NetPin& p : net.pins) {
      if (p.io) {
        io_net.try_emplace(p.owner, net.name);
      }
    }
  }
  out += fmt::format("PINS {} ;\n", design.io_pins.size());
  for (const IoPin& io : design.io_pins) {
    auto net = io_net.find(io.name);
    out += fmt::format("  - {} + NET {} + DIRECTION {} + USE SIGNAL",
                       io.name,
                       net == io_net.end() ? std::string_view(io.name) : net->second,
                       pinDirName(io.dir));
    if (!io.layer.empty()) {
      out += fmt::format("\n    + LAYER {} {} {}",
                         io.layer,
                         pointText({io.shape.xlo, io.shape.ylo}),
                         pointText({io.shape.xhi, io.shape.yhi}));
    }
    if (io.location) {
      out += fmt::format("\n    + PLACED {} N", pointText(*io.location));
    }
    out += " ;\n";
  }
  out += "END PINS\n\n";

  out += fmt::format("NETS {} ;\n", design.nets.size());
  for (const Net& net : design.nets) {
    out += fmt::format("  - {}", net.name);
    for (const NetPin& p : net.pins) {
      if (p.io) {
        out += fmt::format(" ( PIN {} )", p.owner);
      } else {
        out += fmt::format(" ( {} {} )", p.owner, p.pin);
      }
    }
    if (net.weight != 1.0) {
      if (net.weight == std::floor(net.weight) && net.weight >= 0
          && net.weight < 1e15) {
        out += fmt::format(" + WEIGHT {}", static_cast<std::int64_t>(net.weight));
      } else {
        out += fmt::format(" + PROPERTY {} {}", kWeightProperty, formatDouble(net.weight));
      }
    }
    bool first = true;
    for (const WireSegment& w : net.wires) {
      out += fmt::format("\n    {} {} {} {}",
                         first ? "+ ROUTED" : "NEW",
                         w.layer,
                         pointText(w.from),
                         pointText(w.to));
      first = false;
    }
    for (const ViaRef& v : net.vias) {
      const std::string_view layer
          = net.wires.empty() ? std::string_view(v.name) : std::string_view(net.wires.front().layer);
      out += fmt::format("\n    {} {} {} {}",
                         first ? "+ ROUTED" : "NEW",
                         layer,
                         pointText(v.at),
                         v.name);
      first = false;
    }
    out += " ;\n";
  }
  out += "END NETS\n\nEND DESIGN\n";
  return out;
}

}  // namespace rpd::lefdef
