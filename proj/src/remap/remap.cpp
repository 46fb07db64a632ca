// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/remap/remap.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "rpd/core/error.h"
#include "rpd/enable3d/enable3d.h"

namespace rpd::remap {

namespace {

Dbu floorTo(Dbu v, Dbu origin, Dbu step)
{
  Dbu q = (v - origin) / step;
  if ((v - origin) % step != 0 && v < origin) {
    --q;
  }
  return origin + q * step;
}

Dbu ceilTo(Dbu v, Dbu origin, Dbu step)
{
  const Dbu f = floorTo(v, origin, step);
  return f == v ? v : f + step;
}

Dbu scaled(Dbu v, double s)
{
  return static_cast<Dbu>(std::llround(static_cast<double>(v) * s));
}

Point scaled(Point p, double s)
{
  return {scaled(p.x, s), scaled(p.y, s)};
}

const Site& targetSite(const lefdef::LefSubset& target)
{
  if (target.tech.sites.empty()) {
    fail(Errc::kInvalidArgument, fmt::format("target '{}' declares no site", target.tech.name));
  }
  const Site& site = target.tech.sites.front();
  if (site.width <= 0 || site.height <= 0) {
    fail(Errc::kInvalidArgument, fmt::format("site '{}' has a nonpositive size", site.name));
  }
  return site;
}

// Assigns each connection of one instance a macro signal pin, preferring
// a pin of the same direction. Null when no signal pin is left.
class PinAssigner
{
 public:
  explicit PinAssigner(const Master& m)
  {
    for (const MasterPin& p : m.pins) {
      if (p.hidden || p.use == PinUse::kPower || p.use == PinUse::kGround) {
        continue;
      }
      pools_[static_cast<int>(p.dir)].push_back(&p);
    }
  }

  const MasterPin* take(PinDir dir)
  {
    for (int k : {static_cast<int>(dir), static_cast<int>(PinDir::kInout), 0, 1}) {
      if (next_[k] < pools_[k].size()) {
        return pools_[k][next_[k]++];
      }
    }
    return nullptr;
  }

 private:
  std::vector<const MasterPin*> pools_[3];
  std::size_t next_[3] = {0, 0, 0};
};

struct Slot
{
  Dbu x = 0;
  std::size_t row = 0;
};

}  // namespace

bookshelf::Bundle fakeToBookshelf(const lefdef::LefSubset& lef, const Design& def)
{
  Design copy = def;
  if (copy.masters.empty()) {
    copy.masters = lef.macros;
  }
  for (Net& net : copy.nets) {
    net.wires.clear();
    net.vias.clear();
  }
  return bookshelf::designToBundle(copy);
}

std::vector<const Master*> candidates(const lefdef::LefSubset& target,
                                      const Site& site,
                                      std::size_t pins,
                                      const RemapPolicy& policy)
{
  std::vector<const Master*> out;
  for (const Master& m : target.macros) {
    if (m.cell_class != CellClass::kCore || m.height <= 0 || m.width <= 0
        || m.height % site.height != 0) {
      continue;
    }
    if (!policy.allow_pin_drop && m.signalPinCount() < pins) {
      continue;
    }
    out.push_back(&m);
  }
  return out;
}

const Master* chooseMacro(std::span<const Master* const> cands,
                          std::size_t pins,
                          double scaled_area)
{
  const Master* best = nullptr;
  std::int64_t best_pins = 0;
  double best_area = 0.0;
  for (const Master* m : cands) {
    const std::int64_t dp = std::abs(static_cast<std::int64_t>(m->signalPinCount())
                                     - static_cast<std::int64_t>(pins));
    const double da = std::abs(static_cast<double>(m->area()) - scaled_area);
    if (best == nullptr || dp < best_pins || (dp == best_pins && da < best_area)
        || (dp == best_pins && da == best_area && m->name < best->name)) {
      best = m;
      best_pins = dp;
      best_area = da;
    }
  }
  return best;
}

RemapResult remapToPdk(const bookshelf::Bundle& bundle,
                       const lefdef::LefSubset& target,
                       const RemapPolicy& policy)
{
  const Site& site = targetSite(target);
  const Design src = bookshelf::bundleToDesign(bundle, target.tech.units);
  const DesignIndex sidx(src);

  RemapResult result;
  RemapReport& report = result.report;
  report.site = site.name;

  std::vector<Dbu> heights;
  for (const Instance& inst : src.instances) {
    heights.push_back(sidx.master(inst.master)->height);
  }
  if (!heights.empty()) {
    std::sort(heights.begin(), heights.end());
    const Dbu median = heights[(heights.size() - 1) / 2];
    if (median > 0) {
      report.scale = static_cast<double>(site.height) / static_cast<double>(median);
    }
  }
  const double s = report.scale;

  // Connections per instance, in net order.
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> uses;
  for (std::size_t n = 0; n < src.nets.size(); ++n) {
    for (std::size_t p = 0; p < src.nets[n].pins.size(); ++p) {
      const NetPin& np = src.nets[n].pins[p];
      if (!np.io) {
        uses[np.owner].emplace_back(n, p);
      }
    }
  }

  Design& out = result.design;
  out.name = src.name;
  out.units = target.tech.units;
  out.sites = {site};
  out.nets = src.nets;
  for (Net& net : out.nets) {
    net.wires.clear();
    net.vias.clear();
  }

  std::set<std::string> used;
  for (const Instance& inst : src.instances) {
    const Master* sm = sidx.master(inst.master);
    const auto conn = uses.find(inst.name);
    const std::size_t pins = conn == uses.end() ? 0 : conn->second.size();
    const auto cands = candidates(target, site, pins, policy);
    const double area = static_cast<double>(sm->width) * s * static_cast<double>(sm->height) * s;
    const Master* m = chooseMacro(cands, pins, area);
    if (m == nullptr) {
      fail(Errc::kNoCandidate,
           fmt::format("node '{}' with {} pins has no candidate macro in '{}'",
                       inst.name,
                       pins,
                       target.tech.name));
    }
    used.insert(m->name);
    NodeAssignment a;
    a.source = inst.name;
    a.chosen_macro = m->name;
    a.pin_delta = static_cast<std::int64_t>(m->signalPinCount()) - static_cast<std::int64_t>(pins);
    a.area_delta = static_cast<double>(m->area()) - area;
    if (conn != uses.end()) {
      PinAssigner assign(*m);
      for (const auto& [n, p] : conn->second) {
        NetPin& np = out.nets[n].pins[p];
        const MasterPin* mp = assign.take(np.dir);
        if (mp == nullptr) {
          np.owner.clear();
          ++a.dropped_pins;
        } else {
          np.pin = mp->name;
          np.dir = mp->dir;
        }
      }
    }
    report.nodes.push_back(std::move(a));

    Instance ni;
    ni.name = inst.name;
    ni.master = m->name;
    ni.fixed = inst.fixed;
    ni.location = inst.location ? scaled(*inst.location, s) : Point{0, 0};
    out.instances.push_back(std::move(ni));
  }
  for (Net& net : out.nets) {
    std::erase_if(net.pins, [](const NetPin& p) { return p.owner.empty(); });
  }
  for (const Master& m : target.macros) {
    if (used.contains(m.name)) {
      result.used.macros.push_back(m);
      out.masters.push_back(m);
    }
  }
  result.used.tech = target.tech;
  const DesignIndex oidx(out);

  // Core: the scaled source core snapped outward to the site grid, tall
  // enough for the tallest macro.
  Rect core = src.core.valid() ? Rect{scaled(src.core.xlo, s), scaled(src.core.ylo, s),
                                      scaled(src.core.xhi, s), scaled(src.core.yhi, s)}
                               : Rect{0, 0, site.width, site.height};
  Dbu tallest = site.height;
  Dbu widest = site.width;
  for (const Master& m : out.masters) {
    tallest = std::max(tallest, m.height);
    widest = std::max(widest, m.width);
  }
  core.xhi = std::max(core.xhi, core.xlo + widest);
  core.yhi = std::max(core.yhi, core.ylo + tallest);
  core.xhi = ceilTo(core.xhi, core.xlo, site.width);
  core.yhi = ceilTo(core.yhi, core.ylo, site.height);
  const auto num_rows = static_cast<std::size_t>(core.height() / site.height);

  // Greedy row legalization in x order: each instance takes the nearest
  // free slot over all rows it fits in; the core widens when none fits.
  std::vector<Dbu> frontier(num_rows, core.xlo);
  std::vector<std::size_t> order(out.instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Instance& ia = out.instances[a];
    const Instance& ib = out.instances[b];
    return std::tie(ia.location->x, ia.name) < std::tie(ib.location->x, ib.name);
  });
  for (std::size_t i : order) {
    Instance& inst = out.instances[i];
    const Master* m = oidx.master(inst.master);
    const auto span = static_cast<std::size_t>(m->height / site.height);
    const Point want{std::clamp(floorTo(inst.location->x, core.xlo, site.width), core.xlo, core.xhi),
                     inst.location->y};
    std::optional<Slot> best;
    Dbu best_cost = std::numeric_limits<Dbu>::max();
    std::optional<Slot> fallback;
    for (std::size_t r = 0; r + span <= num_rows; ++r) {
      Dbu x = want.x;
      for (std::size_t k = r; k < r + span; ++k) {
        x = std::max(x, frontier[k]);
      }
      if (!fallback || x < fallback->x) {
        fallback = Slot{x, r};
      }
      if (x + m->width > core.xhi) {
        continue;
      }
      const Dbu y = core.ylo + static_cast<Dbu>(r) * site.height;
      const Dbu cost = (x - want.x) + std::abs(y - want.y);
      if (cost < best_cost) {
        best_cost = cost;
        best = Slot{x, r};
      }
    }
    if (!best) {
      best = fallback;
      core.xhi = ceilTo(best->x + m->width, core.xlo, site.width);
    }
    const Point placed{best->x, core.ylo + static_cast<Dbu>(best->row) * site.height};
    if (placed != want) {
      ++report.displaced;
    }
    inst.location = placed;
    inst.orient = best->row % 2 == 0 ? Orient::N : Orient::FS;
    for (std::size_t k = best->row; k < best->row + span; ++k) {
      frontier[k] = best->x + m->width;
    }
  }
  out.core = core;
  out.rows = enable3d::rebuildRows(core, site);

  Rect die = core;
  // IO pins go on the second routing layer when there is one.
  std::string io_layer;
  int routing = 0;
  for (const Layer& l : target.tech.layers) {
    if (l.kind == LayerKind::kRouting && routing++ < 2) {
      io_layer = l.name;
    }
  }
  for (const IoPin& io : src.io_pins) {
    IoPin p = io;
    p.layer = io_layer;
    p.shape = {scaled(io.shape.xlo, s), scaled(io.shape.ylo, s),
               scaled(io.shape.xhi, s), scaled(io.shape.yhi, s)};
    if (io.location) {
      p.location = scaled(*io.location, s);
      die = die.merged({p.location->x + p.shape.xlo, p.location->y + p.shape.ylo,
                        p.location->x + p.shape.xhi, p.location->y + p.shape.yhi});
    }
    out.io_pins.push_back(std::move(p));
  }
  for (Net& net : out.nets) {
    for (NetPin& np : net.pins) {
      if (np.io) {
        np.io_offset = scaled(np.io_offset, s);
      }
    }
  }
  out.die = die;
  requireValid(out);
  return result;
}

ValidationReport legalityCheck(const Design& design, const lefdef::LefSubset& target)
{
  ValidationReport report;
  const DesignIndex index(design);

  std::map<Dbu, std::vector<const Row*>> rows_at;
  for (const Row& row : design.rows) {
    rows_at[row.origin.y].push_back(&row);
  }
  const Site* fallback = target.tech.sites.empty() ? nullptr : &target.tech.sites.front();

  struct Box
  {
    Rect rect;
    int tier;
    const std::string* name;
  };
  std::vector<Box> boxes;
  for (const Instance& inst : design.instances) {
    const Master* m = index.master(inst.master);
    if (target.findMacro(inst.master) == nullptr) {
      report.add("UNKNOWN_MASTER", inst.name);
    }
    if (m == nullptr || !inst.location) {
      continue;
    }
    const Point size = orientedSize(inst.orient, m->width, m->height);
    const Rect box{inst.location->x, inst.location->y,
                   inst.location->x + size.x, inst.location->y + size.y};
    if (!design.core.contains(box)) {
      report.add("OUTSIDE_CORE", inst.name);
    }
    bool on_grid = false;
    if (!design.rows.empty()) {
      auto it = rows_at.find(inst.location->y);
      if (it != rows_at.end()) {
        for (const Row* row : it->second) {
          const Dbu dx = inst.location->x - row->origin.x;
          on_grid = on_grid || (row->step > 0 && dx >= 0 && dx % row->step == 0);
        }
      }
    } else if (fallback != nullptr && fallback->width > 0 && fallback->height > 0) {
      on_grid = (inst.location->x - design.core.xlo) % fallback->width == 0
                && (inst.location->y - design.core.ylo) % fallback->height == 0;
    }
    if (!on_grid) {
      report.add("OFF_GRID", inst.name);
    }
    if (!m->isCover()) {
      boxes.push_back({box, inst.tier ? static_cast<int>(*inst.tier) : -1, &inst.name});
    }
  }

  // Sweep over x: an interval stays active until a later box starts at
  // or beyond its right edge.
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    return std::tie(a.rect.xlo, *a.name) < std::tie(b.rect.xlo, *b.name);
  });
  std::multimap<Dbu, std::size_t> active;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    while (!active.empty() && active.begin()->first <= b.rect.xlo) {
      active.erase(active.begin());
    }
    for (const auto& [xhi, j] : active) {
      const Box& a = boxes[j];
      if (a.tier == b.tier && a.rect.ylo < b.rect.yhi && b.rect.ylo < a.rect.yhi) {
        const auto& [lo, hi] = std::minmax(*a.name, *b.name);
        report.add("OVERLAP", lo + "," + hi);
      }
    }
    active.emplace(b.rect.xhi, i);
  }

  for (const Violation& v : validateDesign(design).violations) {
    if (v.code == "BAD_ROW" || v.code == "ROW_OVERLAP" || v.code == "UNKNOWN_SITE") {
      report.violations.push_back(v);
    }
  }
  return report;
}

nlohmann::ordered_json toJson(const RemapReport& report)
{
  nlohmann::ordered_json j;
  j["scale"] = report.scale;
  j["site"] = report.site;
  j["displaced"] = report.displaced;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const NodeAssignment& a : report.nodes) {
    nlohmann::ordered_json n;
    n["source"] = a.source;
    n["chosen_macro"] = a.chosen_macro;
    n["pin_delta"] = a.pin_delta;
    n["area_delta"] = a.area_delta;
    if (a.dropped_pins > 0) {
      n["dropped_pins"] = a.dropped_pins;
    }
    j["nodes"].push_back(std::move(n));
  }
  return j;
}

}  // namespace rpd::remap
