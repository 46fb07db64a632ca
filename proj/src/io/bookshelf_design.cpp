// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <fmt/core.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <unordered_map>

#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/io/bookshelf.h"

namespace rpd::bookshelf {

namespace {

constexpr double kMaxCoord = std::numeric_limits<std::int32_t>::max();

PinDir dirOf(char c)
{
  switch (c) {
    case 'I':
      return PinDir::kInput;
    case 'O':
      return PinDir::kOutput;
    default:
      return PinDir::kInout;
  }
}

char charOf(PinDir d)
{
  switch (d) {
    case PinDir::kInput:
      return 'I';
    case PinDir::kOutput:
      return 'O';
    case PinDir::kInout:
      break;
  }
  return 'B';
}

std::string signedToken(Dbu v)
{
  return v < 0 ? fmt::format("n{}", -v) : fmt::format("{}", v);
}

class Scaler
{
 public:
  explicit Scaler(int units) : units_(units) {}

  Dbu operator()(double microns, std::string_view what) const
  {
    const double scaled = microns * units_;
    if (!std::isfinite(scaled) || std::fabs(scaled) > kMaxCoord) {
      fail(Errc::kScaleOverflow,
           fmt::format("{} = {} um exceeds the DBU range at {} DBU/um",
                       what,
                       microns,
                       units_));
    }
    return static_cast<Dbu>(std::llround(scaled));
  }

  // Offset from the center of a size-dbu extent, as a lower-left offset.
  Dbu fromCenter(Dbu size, double offset, std::string_view what) const
  {
    const double v = static_cast<double>(size) / 2.0 + offset * units_;
    if (!std::isfinite(v) || std::fabs(v) > kMaxCoord) {
      fail(Errc::kScaleOverflow, fmt::format("pin offset of {} out of range", what));
    }
    return static_cast<Dbu>(std::llround(v));
  }

 private:
  int units_;
};

double toMicrons(Dbu v, int units)
{
  return static_cast<double>(v) / units;
}

// Offset from the center in microns for a lower-left offset in DBU.
double centerOffset(Dbu offset, Dbu size, int units)
{
  return static_cast<double>(2 * offset - size) / (2.0 * units);
}

}  // namespace

std::string derivedPinName(PinDir dir, Point offset)
{
  return fmt::format(
      "P{}_{}_{}", charOf(dir), signedToken(offset.x), signedToken(offset.y));
}

Design bundleToDesign(const Bundle& bundle, int units)
{
  if (units <= 0) {
    fail(Errc::kInvalidArgument, "units must be positive");
  }
  const Scaler dbu(units);
  Design design;
  design.name = bundle.aux.design;
  design.units = units;

  std::unordered_map<std::string_view, const PlRecord*> placement;
  for (const PlRecord& rec : bundle.pl) {
    placement[rec.name] = &rec;
  }

  struct NodeInfo
  {
    Dbu width = 0;
    Dbu height = 0;
    bool terminal = false;
    std::size_t index = 0;  // into instances or io_pins
    std::string master;
  };
  std::unordered_map<std::string_view, NodeInfo> nodes;
  std::map<std::string, std::size_t> master_index;
  std::vector<std::map<std::string, MasterPin>> master_pins;

  bool have_box = false;
  Rect box;
  auto grow = [&](const Rect& r) {
    box = have_box ? box.merged(r) : r;
    have_box = true;
  };

  for (const NodeRecord& node : bundle.nodes) {
    NodeInfo info;
    info.width = dbu(node.width, node.name + " width");
    info.height = dbu(node.height, node.name + " height");
    info.terminal = node.terminal();
    auto pl = placement.find(node.name);
    std::optional<Point> loc;
    if (pl != placement.end()) {
      loc = Point{dbu(pl->second->x, node.name + " x"),
                  dbu(pl->second->y, node.name + " y")};
    }
    if (info.terminal) {
      IoPin io;
      io.name = node.name;
      io.location = loc;
      io.shape = {0, 0, info.width, info.height};
      info.index = design.io_pins.size();
      if (loc) {
        grow({loc->x, loc->y, loc->x + info.width, loc->y + info.height});
      }
      design.io_pins.push_back(std::move(io));
    } else {
      const bool fixed = pl != placement.end() && pl->second->fixed;
      std::string master = fmt::format(
          "BKS_w{}_h{}_{}", info.width, info.height, fixed ? "fix" : "mov");
      if (!master_index.contains(master)) {
        master_index.emplace(master, design.masters.size());
        Master m;
        m.name = master;
        m.width = info.width;
        m.height = info.height;
        design.masters.push_back(std::move(m));
        master_pins.emplace_back();
      }
      Instance inst;
      inst.name = node.name;
      inst.master = master;
      inst.location = loc;
      inst.fixed = fixed;
      if (pl != placement.end()) {
        inst.orient = parseOrient(pl->second->orient).value_or(Orient::N);
      }
      if (loc) {
        const Point size = orientedSize(inst.orient, info.width, info.height);
        grow({loc->x, loc->y, loc->x + size.x, loc->y + size.y});
      }
      info.master = std::move(master);
      info.index = design.instances.size();
      design.instances.push_back(std::move(inst));
    }
    nodes.emplace(node.name, std::move(info));
  }

  std::unordered_map<std::string_view, double> weights;
  for (const WeightRecord& w : bundle.wts) {
    weights[w.name] = w.weight;
  }

  std::unordered_map<std::string, int> pin_uses;
  design.nets.reserve(bundle.nets.size());
  for (const NetRecord& rec : bundle.nets) {
    Net net;
    net.name = rec.name;
    if (auto w = weights.find(rec.name); w != weights.end()) {
      net.weight = w->second;
    }
    net.pins.reserve(rec.pins.size());
    for (const PinRecord& pin : rec.pins) {
      auto it = nodes.find(pin.node);
      if (it == nodes.end()) {
        fail(Errc::kUnknownNode,
             fmt::format("net '{}' references undeclared node '{}'",
                         rec.name,
                         pin.node));
      }
      const NodeInfo& info = it->second;
      const PinDir dir = dirOf(pin.dir);
      const Point offset{dbu.fromCenter(info.width, pin.dx, pin.node),
                         dbu.fromCenter(info.height, pin.dy, pin.node)};
      if (info.terminal) {
        net.pins.push_back(NetPin::ioPin(pin.node, dir, offset));
        continue;
      }
      // A node can attach several nets at the same offset; later uses get
      // an occurrence suffix so each instance pin stays on one net.
      std::string pin_name = derivedPinName(dir, offset);
      const int use = pin_uses[pin.node + '/' + pin_name]++;
      if (use > 0) {
        pin_name += fmt::format("_{}", use);
      }
      auto& pins = master_pins[master_index.at(info.master)];
      if (!pins.contains(pin_name)) {
        MasterPin mp;
        mp.name = pin_name;
        mp.dir = dir;
        mp.offset = offset;
        pins.emplace(pin_name, std::move(mp));
      }
      net.pins.push_back(NetPin::instPin(pin.node, pin_name, dir));
    }
    design.nets.push_back(std::move(net));
  }

  // IO port direction: opposite of its first net reference.
  std::unordered_map<std::string_view, PinDir> io_dir;
  for (const Net& net : design.nets) {
    for (const NetPin& p : net.pins) {
      if (p.io) {
        io_dir.try_emplace(p.owner, flipped(p.dir));
      }
    }
  }
  for (IoPin& io : design.io_pins) {
    if (auto it = io_dir.find(io.name); it != io_dir.end()) {
      io.dir = it->second;
    }
  }

  for (std::size_t i = 0; i < design.masters.size(); ++i) {
    for (auto& [name, pin] : master_pins[i]) {
      design.masters[i].pins.push_back(std::move(pin));
    }
  }

  std::map<std::string, std::size_t> site_index;
  bool have_rows = false;
  Rect rows_box;
  for (std::size_t i = 0; i < bundle.rows.size(); ++i) {
    const RowRecord& rec = bundle.rows[i];
    const std::string label = fmt::format("row {}", i);
    const Dbu step = dbu(rec.site_spacing, label + " Sitespacing");
    const Dbu height = dbu(rec.height, label + " Height");
    const std::string site = fmt::format("BKS_site_w{}_h{}", step, height);
    if (!site_index.contains(site)) {
      site_index.emplace(site, design.sites.size());
      design.sites.push_back({site, step, height});
    }
    Row row;
    row.name = fmt::format("row_{}", i);
    row.site = site;
    row.origin = {dbu(rec.subrow_origin, label + " SubrowOrigin"),
                  dbu(rec.coordinate, label + " Coordinate")};
    row.num_sites = rec.num_sites;
    row.step = step;
    row.orient = parseOrient(rec.site_orient).value_or(Orient::N);
    const Rect r{row.origin.x,
                 row.origin.y,
                 row.origin.x + row.width(),
                 row.origin.y + height};
    rows_box = have_rows ? rows_box.merged(r) : r;
    have_rows = true;
    grow(r);
    design.rows.push_back(std::move(row));
  }
  design.die = have_box ? box : Rect{};
  design.core = have_rows ? rows_box : design.die;
  return design;
}

Bundle designToBundle(const Design& design)
{
  const DesignIndex index(design);
  const int units = design.units;
  Bundle bundle;
  bundle.aux.design = design.name;

  for (const Instance& inst : design.instances) {
    const Master* m = index.master(inst.master);
    if (m == nullptr) {
      fail(Errc::kUnknownMaster,
           fmt::format("instance '{}' uses unknown master '{}'",
                       inst.name,
                       inst.master));
    }
    bundle.nodes.push_back({inst.name,
                            toMicrons(m->width, units),
                            toMicrons(m->height, units),
                            NodeKind::kMovable});
    if (inst.location) {
      PlRecord pl;
      pl.name = inst.name;
      pl.x = toMicrons(inst.location->x, units);
      pl.y = toMicrons(inst.location->y, units);
      pl.orient = std::string(orientName(inst.orient));
      pl.fixed = inst.fixed;
      bundle.pl.push_back(std::move(pl));
    }
  }
  // Terminal lower-left is the port shape's lower-left.
  std::unordered_map<std::string_view, const IoPin*> ios;
  for (const IoPin& io : design.io_pins) {
    ios[io.name] = &io;
    bundle.nodes.push_back({io.name,
                            toMicrons(io.shape.width(), units),
                            toMicrons(io.shape.height(), units),
                            NodeKind::kTerminal});
    if (io.location) {
      PlRecord pl;
      pl.name = io.name;
      pl.x = toMicrons(io.location->x + io.shape.xlo, units);
      pl.y = toMicrons(io.location->y + io.shape.ylo, units);
      pl.fixed = true;
      bundle.pl.push_back(std::move(pl));
    }
  }

  for (const Net& net : design.nets) {
    NetRecord rec;
    rec.name = net.name;
    for (const NetPin& p : net.pins) {
      PinRecord pin;
      pin.node = p.owner;
      pin.dir = charOf(p.dir);
      if (p.io) {
        const IoPin* io = ios.at(p.owner);
        pin.dx = centerOffset(p.io_offset.x - io->shape.xlo, io->shape.width(), units);
        pin.dy = centerOffset(p.io_offset.y - io->shape.ylo, io->shape.height(), units);
      } else {
        const Master* m = index.masterOf(p.owner);
        const MasterPin* mp = m == nullptr ? nullptr : m->findPin(p.pin);
        if (mp == nullptr) {
          fail(Errc::kInvalidDesign,
               fmt::format("net '{}' pin {}/{} does not resolve",
                           net.name,
                           p.owner,
                           p.pin));
        }
        pin.dx = centerOffset(mp->offset.x, m->width, units);
        pin.dy = centerOffset(mp->offset.y, m->height, units);
      }
      rec.pins.push_back(std::move(pin));
    }
    bundle.nets.push_back(std::move(rec));
    if (net.weight != 1.0) {
      bundle.wts.push_back({net.name, net.weight});
    }
  }

  for (const Row& row : design.rows) {
    const Site* site = index.site(row.site);
    if (site == nullptr) {
      fail(Errc::kInvalidDesign,
           fmt::format("row '{}' uses unknown site '{}'", row.name, row.site));
    }
    RowRecord rec;
    rec.coordinate = toMicrons(row.origin.y, units);
    rec.height = toMicrons(site->height, units);
    rec.site_width = toMicrons(site->width, units);
    rec.site_spacing = toMicrons(row.step, units);
    rec.site_orient = std::string(orientName(row.orient));
    rec.subrow_origin = toMicrons(row.origin.x, units);
    rec.num_sites = row.num_sites;
    bundle.rows.push_back(rec);
  }
  return bundle;
}

namespace {

std::string fmtNum(double v)
{
  return formatDouble(v);
}

}  // namespace

Manifest writeBundle(const Bundle& bundle, const std::string& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    fail(Errc::kIoFailure, fmt::format("cannot create '{}': {}", dir, ec.message()));
  }
  Manifest m;
  m.directory = dir;
  m.design = bundle.aux.design.empty() ? std::string("design") : bundle.aux.design;
  m.nodes = m.design + ".nodes";
  m.nets = m.design + ".nets";
  m.wts = m.design + ".wts";
  m.pl = m.design + ".pl";
  m.scl = m.design + ".scl";
  const std::string header = fmt::format("# generated-by {} {}\n", kToolName, kToolVersion);
  auto path = [&](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };

  writeFile(path(m.design + ".aux"),
            fmt::format("RowBasedPlacement : {} {} {} {} {}\n",
                        m.nodes,
                        m.nets,
                        m.wts,
                        m.pl,
                        m.scl));

  std::string nodes = "UCLA nodes 1.0\n" + header + "\n";
  nodes += fmt::format("NumNodes : {}\nNumTerminals : {}\n\n",
                       bundle.nodes.size(),
                       bundle.terminalCount());
  for (const NodeRecord& n : bundle.nodes) {
    nodes += fmt::format("  {} {} {}", n.name, fmtNum(n.width), fmtNum(n.height));
    if (n.kind == NodeKind::kTerminal) {
      nodes += " terminal";
    } else if (n.kind == NodeKind::kTerminalNi) {
      nodes += " terminal_NI";
    }
    nodes += '\n';
  }
  writeFile(path(m.nodes), nodes);

  std::string nets = "UCLA nets 1.0\n" + header + "\n";
  nets += fmt::format("NumNets : {}\nNumPins : {}\n\n",
                      bundle.nets.size(),
                      bundle.pinCount());
  for (const NetRecord& net : bundle.nets) {
    nets += fmt::format("NetDegree : {} {}\n", net.pins.size(), net.name);
    for (const PinRecord& p : net.pins) {
      nets += fmt::format("  {} {} : {} {}\n",
                          p.node,
                          p.dir == '\0' ? 'B' : p.dir,
                          fmtNum(p.dx),
                          fmtNum(p.dy));
    }
  }
  writeFile(path(m.nets), nets);

  std::string wts = "UCLA wts 1.0\n" + header + "\n";
  for (const WeightRecord& w : bundle.wts) {
    wts += fmt::format("  {} {}\n", w.name, fmtNum(w.weight));
  }
  writeFile(path(m.wts), wts);

  std::string pl = "UCLA pl 1.0\n" + header + "\n";
  for (const PlRecord& p : bundle.pl) {
    pl += fmt::format("{} {} {} : {}", p.name, fmtNum(p.x), fmtNum(p.y), p.orient);
    if (p.fixed_ni) {
      pl += " /FIXED_NI";
    } else if (p.fixed) {
      pl += " /FIXED";
    }
    pl += '\n';
  }
  writeFile(path(m.pl), pl);

  std::string scl = "UCLA scl 1.0\n" + header + "\n";
  scl += fmt::format("NumRows : {}\n\n", bundle.rows.size());
  for (const RowRecord& r : bundle.rows) {
    scl += "CoreRow Horizontal\n";
    scl += fmt::format("  Coordinate    :  {}\n", fmtNum(r.coordinate));
    scl += fmt::format("  Height        :  {}\n", fmtNum(r.height));
    scl += fmt::format("  Sitewidth     :  {}\n", fmtNum(r.site_width));
    scl += fmt::format("  Sitespacing   :  {}\n", fmtNum(r.site_spacing));
    scl += fmt::format("  Siteorient    :  {}\n", r.site_orient);
    scl += fmt::format("  Sitesymmetry  :  {}\n", r.site_symmetry);
    scl += fmt::format("  SubrowOrigin  :  {}\tNumSites  :  {}\n",
                       fmtNum(r.subrow_origin),
                       r.num_sites);
    scl += "End\n";
  }
  writeFile(path(m.scl), scl);
  return m;
}

Manifest writeBookshelf(const Design& design, const std::string& dir)
{
  return writeBundle(designToBundle(design), dir);
}

}  // namespace rpd::bookshelf
