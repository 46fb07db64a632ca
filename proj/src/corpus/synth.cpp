// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/corpus/synth.h"

#include <fmt/core.h>

#include <cmath>
#include <numeric>

#include "rpd/core/error.h"
#include "rpd/core/rng.h"
#include "rpd/enable3d/enable3d.h"
#include "rpd/metrics/metrics.h"

namespace rpd::corpus {

namespace {

struct CellTemplate
{
  std::string_view name;
  int sites;
  std::vector<std::string_view> inputs;
  std::string_view output;
};

const std::vector<CellTemplate>& templates()
{
  static const std::vector<CellTemplate> cells = {
      {"INV_X1", 2, {"A"}, "ZN"},
      {"BUF_X1", 3, {"A"}, "Z"},
      {"NAND2_X1", 3, {"A1", "A2"}, "ZN"},
      {"NOR2_X1", 3, {"A1", "A2"}, "ZN"},
      {"AOI21_X1", 4, {"A", "B1", "B2"}, "ZN"},
      {"NAND3_X1", 4, {"A1", "A2", "A3"}, "ZN"},
      {"XOR2_X1", 5, {"A", "B"}, "Z"},
      {"DFF_X1", 10, {"D", "CK"}, "Q"},
  };
  return cells;
}

// Block index of item i when n items are cut into 2^level contiguous
// blocks.
std::int64_t blockOf(std::int64_t i, std::int64_t n, int level)
{
  const std::int64_t blocks = std::int64_t{1} << level;
  return std::min(blocks - 1, i * blocks / n);
}

std::pair<std::int64_t, std::int64_t> blockRange(std::int64_t b, std::int64_t n, int level)
{
  const std::int64_t blocks = std::int64_t{1} << level;
  auto start = [&](std::int64_t k) {
    // First i with blockOf(i) >= k.
    return (k * n + blocks - 1) / blocks;
  };
  return {start(b), b + 1 == blocks ? n : start(b + 1)};
}

// Free input pins, sampled per instance or globally.
class InputPool
{
 public:
  explicit InputPool(const std::vector<std::vector<int>>& inputs_per_instance)
      : free_(inputs_per_instance), first_(inputs_per_instance.size())
  {
    for (std::size_t i = 0; i < free_.size(); ++i) {
      first_[i] = keys_.size();
      for (int p : free_[i]) {
        pos_.push_back(order_.size());
        order_.push_back(keys_.size());
        keys_.emplace_back(static_cast<std::int64_t>(i), p);
      }
    }
  }

  bool empty() const { return order_.empty(); }

  bool hasFree(std::int64_t inst) const { return !free_[inst].empty(); }

  // Takes a random free pin of `inst`.
  int take(std::int64_t inst, Rng& rng)
  {
    auto& pins = free_[inst];
    const std::size_t k = uniformBelow(rng, pins.size());
    const int pin = pins[k];
    pins[k] = pins.back();
    pins.pop_back();
    removeKey(inst, pin);
    return pin;
  }

  // A random free (instance, pin) whose instance is not in `exclude`.
  std::optional<std::pair<std::int64_t, int>> takeAny(Rng& rng,
                                                      const std::vector<std::int64_t>& exclude)
  {
    for (int attempt = 0; attempt < 32 && !order_.empty(); ++attempt) {
      const auto [inst, pin] = keys_[order_[uniformBelow(rng, order_.size())]];
      if (std::find(exclude.begin(), exclude.end(), inst) != exclude.end()) {
        continue;
      }
      auto& pins = free_[inst];
      pins.erase(std::find(pins.begin(), pins.end(), pin));
      removeKey(inst, pin);
      return std::make_pair(inst, pin);
    }
    return std::nullopt;
  }

 private:
  void removeKey(std::int64_t inst, int pin)
  {
    std::size_t k = first_[inst];
    while (keys_[k].second != pin) {
      ++k;
    }
    const std::size_t at = pos_[k];
    const std::size_t last = order_.back();
    order_[at] = last;
    pos_[last] = at;
    order_.pop_back();
  }

  std::vector<std::vector<int>> free_;
  std::vector<std::size_t> first_;
  std::vector<std::pair<std::int64_t, int>> keys_;
  // pos_[key] = index of key in order_.
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> order_;
};

}  // namespace

TechStack syntheticTech(int metals, std::string name, int units)
{
  if (metals < 1) {
    fail(Errc::kInvalidArgument, fmt::format("need at least one metal layer (got {})", metals));
  }
  TechStack t;
  t.name = std::move(name);
  t.units = units;
  const Dbu base = units / 5;
  for (int i = 1; i <= metals; ++i) {
    Layer m;
    m.name = fmt::format("M{}", i);
    m.kind = LayerKind::kRouting;
    m.pitch = base * (1 + (i - 1) / 2);
    m.width = m.pitch / 2;
    m.spacing = m.pitch - m.width;
    m.direction = i % 2 == 1 ? LayerDir::kHorizontal : LayerDir::kVertical;
    t.layers.push_back(m);
    if (i < metals) {
      Layer v;
      v.name = fmt::format("V{}{}", i, i + 1);
      v.kind = LayerKind::kCut;
      v.width = m.width;
      v.spacing = m.spacing;
      v.pitch = v.width + v.spacing;
      t.layers.push_back(v);
      ViaDef via;
      via.name = fmt::format("VIA{}{}", i, i + 1);
      via.bottom = m.name;
      via.cut = v.name;
      via.top = fmt::format("M{}", i + 1);
      const Dbu half = v.width / 2;
      via.cut_rect = {-half, -half, v.width - half, v.width - half};
      via.resistance = 5.0;
      t.vias.push_back(via);
    }
  }
  t.sites.push_back({"core", units / 5, 2 * units});
  return t;
}

lefdef::LefSubset syntheticLibrary(const TechStack& tech)
{
  if (tech.sites.empty()) {
    fail(Errc::kInvalidArgument, fmt::format("tech '{}' has no site", tech.name));
  }
  const Layer* m1 = nullptr;
  for (const Layer& l : tech.layers) {
    if (l.kind == LayerKind::kRouting) {
      m1 = &l;
      break;
    }
  }
  if (m1 == nullptr) {
    fail(Errc::kInvalidArgument, fmt::format("tech '{}' has no routing layer", tech.name));
  }
  const Site& site = tech.sites.front();
  lefdef::LefSubset lib;
  lib.tech = tech;
  const Dbu h = site.height;
  const Dbu sw = site.width;
  const Dbu half_w = std::max<Dbu>(1, sw * 3 / 20);
  for (const CellTemplate& t : templates()) {
    Master m;
    m.name = std::string(t.name);
    m.width = t.sites * sw;
    m.height = h;
    m.site = site.name;
    auto signal = [&](std::string_view name, PinDir dir, int k) {
      MasterPin p;
      p.name = std::string(name);
      p.dir = dir;
      const Dbu x = sw / 2 + k * sw;
      p.offset = {x, h / 2};
      p.shapes.push_back({m1->name, {x - half_w, h * 7 / 20, x + half_w, h * 13 / 20}});
      return p;
    };
    int k = 0;
    for (std::string_view in : t.inputs) {
      m.pins.push_back(signal(in, PinDir::kInput, k++));
    }
    m.pins.push_back(signal(t.output, PinDir::kOutput, k));
    const Dbu rail = std::max<Dbu>(2, h * 3 / 100);
    MasterPin vdd;
    vdd.name = "VDD";
    vdd.use = PinUse::kPower;
    vdd.shapes.push_back({m1->name, {0, h - rail, m.width, h}});
    vdd.offset = {m.width / 2, h - rail / 2};
    MasterPin vss;
    vss.name = "VSS";
    vss.use = PinUse::kGround;
    vss.shapes.push_back({m1->name, {0, 0, m.width, rail}});
    vss.offset = {m.width / 2, rail / 2};
    m.pins.push_back(vdd);
    m.pins.push_back(vss);
    m.obs.push_back({m1->name, {0, h * 3 / 20, m.width, h * 5 / 20}});
    lib.macros.push_back(std::move(m));
  }
  return lib;
}

void checkConfig(const SynthConfig& cfg, const lefdef::LefSubset& lib)
{
  auto bad = [](const std::string& msg) { fail(Errc::kDegenerateConfig, msg); };
  if (cfg.num_instances < 1) {
    bad(fmt::format("num_instances must be positive (got {})", cfg.num_instances));
  }
  if (!(cfg.avg_net_degree >= 2.0) || !std::isfinite(cfg.avg_net_degree)) {
    bad(fmt::format("avg_net_degree must be at least 2 (got {})", cfg.avg_net_degree));
  }
  if (cfg.hierarchy_depth < 0 || cfg.hierarchy_depth > 30) {
    bad(fmt::format("hierarchy_depth must be in [0, 30] (got {})", cfg.hierarchy_depth));
  }
  if (!(cfg.utilization > 0.0) || cfg.utilization > 1.0) {
    bad(fmt::format("utilization must be in (0, 1] (got {})", cfg.utilization));
  }
  if (!(cfg.locality >= 0.0) || cfg.locality > 1.0) {
    bad(fmt::format("locality must be in [0, 1] (got {})", cfg.locality));
  }
  if (lib.tech.sites.empty()) {
    bad("library has no site");
  }
  double sum = 0.0;
  for (const MixEntry& e : cfg.master_mix) {
    const Master* m = lib.findMacro(e.master);
    if (m == nullptr || m->isCover()) {
      bad(fmt::format("master_mix names unknown CORE master '{}'", e.master));
    }
    if (!(e.probability >= 0.0)) {
      bad(fmt::format("master_mix probability for '{}' is negative", e.master));
    }
    sum += e.probability;
  }
  if (!cfg.master_mix.empty() && std::abs(sum - 1.0) > 1e-9) {
    bad(fmt::format("master_mix probabilities sum to {}, not 1", sum));
  }
  bool any_core = false;
  for (const Master& m : lib.macros) {
    any_core = any_core || !m.isCover();
  }
  if (!any_core) {
    bad("library has no CORE master");
  }
}

Design generateSynthetic(const SynthConfig& cfg, const lefdef::LefSubset& lib)
{
  checkConfig(cfg, lib);
  Rng rng(cfg.seed);
  const std::int64_t n = cfg.num_instances;
  const int depth = static_cast<int>(std::min<std::int64_t>(
      cfg.hierarchy_depth, static_cast<std::int64_t>(std::floor(std::log2(static_cast<double>(n))))));

  std::vector<const Master*> choices;
  std::vector<double> cumulative;
  if (cfg.master_mix.empty()) {
    for (const Master& m : lib.macros) {
      if (!m.isCover()) {
        choices.push_back(&m);
      }
    }
    for (std::size_t i = 0; i < choices.size(); ++i) {
      cumulative.push_back(static_cast<double>(i + 1) / static_cast<double>(choices.size()));
    }
  } else {
    double acc = 0.0;
    for (const MixEntry& e : cfg.master_mix) {
      acc += e.probability;
      choices.push_back(lib.findMacro(e.master));
      cumulative.push_back(acc);
    }
  }

  Design d;
  d.name = fmt::format("synth_n{}_s{}", n, cfg.seed);
  d.units = lib.tech.units;
  d.sites = lib.tech.sites;
  d.masters = lib.macros;

  std::vector<const Master*> inst_master(n);
  std::vector<std::vector<int>> inputs(n);
  std::vector<int> output(n, -1);
  Area area = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    std::size_t k = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    k = std::min(k, choices.size() - 1);
    const Master* m = choices[k];
    inst_master[i] = m;
    for (std::size_t p = 0; p < m->pins.size(); ++p) {
      const MasterPin& mp = m->pins[p];
      if (mp.hidden || mp.use == PinUse::kPower || mp.use == PinUse::kGround) {
        continue;
      }
      if (mp.dir == PinDir::kInput) {
        inputs[i].push_back(static_cast<int>(p));
      } else if (mp.dir == PinDir::kOutput && output[i] < 0) {
        output[i] = static_cast<int>(p);
      }
    }
    Instance inst;
    inst.name = fmt::format("u{}", i);
    inst.master = m->name;
    d.instances.push_back(std::move(inst));
    area += m->area();
  }

  InputPool pool(inputs);
  const std::int64_t total_inputs = std::accumulate(
      inputs.begin(), inputs.end(), std::int64_t{0}, [](std::int64_t a, const auto& v) {
        return a + static_cast<std::int64_t>(v.size());
      });
  const double sinks_per_net = cfg.avg_net_degree - 1.0;

  // Sink instance for a driver: climb one hierarchy level with
  // probability 1 - locality, then sample inside that block.
  auto pickSink = [&](std::int64_t driver_block_inst, const std::vector<std::int64_t>& exclude)
      -> std::optional<std::pair<std::int64_t, int>> {
    int level = depth;
    while (level > 0 && uniform01(rng) >= cfg.locality) {
      --level;
    }
    const auto [lo, hi] = blockRange(blockOf(driver_block_inst, n, level), n, level);
    for (int attempt = 0; attempt < 8; ++attempt) {
      const std::int64_t cand = lo + static_cast<std::int64_t>(uniformBelow(rng, hi - lo));
      if (pool.hasFree(cand) && std::find(exclude.begin(), exclude.end(), cand) == exclude.end()) {
        return std::make_pair(cand, pool.take(cand, rng));
      }
    }
    return pool.takeAny(rng, exclude);
  };

  auto drawDegree = [&]() {
    // floor(U[2, 2d - 1)) has mean d.
    const double x = 2.0 + uniform01(rng) * (2.0 * cfg.avg_net_degree - 3.0);
    return static_cast<int>(std::floor(x));
  };

  std::vector<std::int64_t> drivers;
  for (std::int64_t i = 0; i < n; ++i) {
    if (output[i] >= 0) {
      drivers.push_back(i);
    }
  }
  shuffle(std::span(drivers), rng);
  const auto net_target = std::min<std::int64_t>(
      static_cast<std::int64_t>(drivers.size()),
      static_cast<std::int64_t>(0.85 * static_cast<double>(total_inputs) / sinks_per_net));
  drivers.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, net_target)));
  std::sort(drivers.begin(), drivers.end());

  const std::int64_t ios
      = cfg.io_pins >= 0 ? cfg.io_pins
        : n < 10         ? 0
                         : std::min<std::int64_t>(128, std::llround(2.0 * std::sqrt(static_cast<double>(n))));

  std::int64_t net_id = 0;
  auto addSinks = [&](Net& net, std::int64_t anchor, std::vector<std::int64_t>& on_net, int sinks) {
    for (int s = 0; s < sinks && !pool.empty(); ++s) {
      const auto pick = pickSink(anchor, on_net);
      if (!pick) {
        break;
      }
      const auto [inst, pin] = *pick;
      on_net.push_back(inst);
      const MasterPin& mp = inst_master[inst]->pins[pin];
      net.pins.push_back(NetPin::instPin(d.instances[inst].name, mp.name, mp.dir));
    }
  };
  for (std::int64_t drv : drivers) {
    Net net;
    net.name = fmt::format("n{}", net_id++);
    const MasterPin& mp = inst_master[drv]->pins[output[drv]];
    net.pins.push_back(NetPin::instPin(d.instances[drv].name, mp.name, mp.dir));
    std::vector<std::int64_t> on_net{drv};
    addSinks(net, drv, on_net, drawDegree() - 1);
    if (net.pins.size() >= 2) {
      d.nets.push_back(std::move(net));
    }
  }

  // IO pins: inputs drive a new net, outputs join an existing one.
  for (std::int64_t k = 0; k < ios; ++k) {
    IoPin io;
    io.name = fmt::format("io{}", k);
    io.dir = k % 2 == 0 ? PinDir::kInput : PinDir::kOutput;
    if (io.dir == PinDir::kInput) {
      Net net;
      net.name = fmt::format("n{}", net_id++);
      net.pins.push_back(NetPin::ioPin(io.name, flipped(io.dir)));
      std::vector<std::int64_t> on_net;
      addSinks(net, static_cast<std::int64_t>(uniformBelow(rng, n)), on_net, drawDegree() - 1);
      if (net.pins.size() < 2) {
        continue;
      }
      d.nets.push_back(std::move(net));
    } else {
      if (d.nets.empty()) {
        continue;
      }
      Net& net = d.nets[uniformBelow(rng, d.nets.size())];
      net.pins.push_back(NetPin::ioPin(io.name, flipped(io.dir)));
    }
    d.io_pins.push_back(std::move(io));
  }

  // Floorplan and row-filling placement in hierarchy order.
  const Site& site = lib.tech.sites.front();
  metrics::Floorplan fp = metrics::deriveFloorplan(area, cfg.utilization, 1.0, site);
  std::vector<Row> rows;
  for (;;) {
    rows = enable3d::rebuildRows(fp.core, site);
    std::size_t r = 0;
    Dbu x = fp.core.xlo;
    bool fits = true;
    for (std::int64_t i = 0; i < n && fits; ++i) {
      const Dbu w = inst_master[i]->width;
      while (r < rows.size() && x + w > fp.core.xlo + rows[r].width()) {
        ++r;
        x = fp.core.xlo;
      }
      if (r == rows.size()) {
        fits = false;
        break;
      }
      Instance& inst = d.instances[i];
      inst.location = Point{x, rows[r].origin.y};
      inst.orient = rows[r].orient;
      x += w;
    }
    if (fits) {
      break;
    }
    fp.core.yhi += site.height;
    fp.die.yhi += site.height;
  }
  d.die = fp.die;
  d.core = fp.core;
  d.rows = std::move(rows);

  const Layer* io_layer = nullptr;
  for (const Layer& l : lib.tech.layers) {
    if (l.kind == LayerKind::kRouting) {
      io_layer = &l;
      if (l.name != "M1") {
        break;
      }
    }
  }
  std::int64_t left = 0;
  std::int64_t right = 0;
  const std::int64_t per_side = std::max<std::int64_t>(1, (static_cast<std::int64_t>(d.io_pins.size()) + 1) / 2);
  for (IoPin& io : d.io_pins) {
    const bool in = io.dir == PinDir::kInput;
    const std::int64_t slot = in ? left++ : right++;
    const Dbu y = d.die.ylo + (d.die.height() * (2 * slot + 1)) / (2 * per_side);
    io.location = Point{in ? d.die.xlo : d.die.xhi, y};
    const Dbu half = std::max<Dbu>(1, io_layer->width / 2);
    io.shape = {-half, -half, half, half};
    io.layer = io_layer->name;
  }
  return d;
}

Design generateSynthetic(const SynthConfig& cfg)
{
  static const lefdef::LefSubset lib = syntheticLibrary(syntheticTech());
  return generateSynthetic(cfg, lib);
}

}  // namespace rpd::corpus
