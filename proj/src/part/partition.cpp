// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/part/partition.h"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "rpd/core/error.h"
#include "rpd/core/rng.h"
#include "rpd/core/text.h"

namespace rpd::part {

int Hypergraph::addVertex(std::string name, std::int64_t weight, std::optional<int> fixed_side)
{
  if (weight < 0) {
    fail(Errc::kInvalidArgument, fmt::format("vertex '{}' has negative weight {}", name, weight));
  }
  if (fixed_side && *fixed_side != 0 && *fixed_side != 1) {
    fail(Errc::kInvalidArgument, fmt::format("vertex '{}' fixed to side {}", name, *fixed_side));
  }
  names.push_back(std::move(name));
  weights.push_back(weight);
  fixed.push_back(fixed_side);
  return static_cast<int>(weights.size()) - 1;
}

int Hypergraph::addEdge(std::vector<int> vertices, double weight, std::string name)
{
  if (!(weight >= 0.0)) {
    fail(Errc::kInvalidArgument, fmt::format("edge '{}' has negative weight", name));
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  for (int v : vertices) {
    if (v < 0 || static_cast<std::size_t>(v) >= numVertices()) {
      fail(Errc::kInvalidArgument, fmt::format("edge '{}' references vertex {}", name, v));
    }
  }
  if (vertices.size() < 2) {
    return -1;
  }
  edges.push_back(std::move(vertices));
  edge_weights.push_back(weight);
  edge_names.push_back(std::move(name));
  return static_cast<int>(edges.size()) - 1;
}

std::int64_t Hypergraph::totalWeight() const
{
  std::int64_t total = 0;
  for (std::int64_t w : weights) {
    total += w;
  }
  return total;
}

std::vector<std::vector<int>> Hypergraph::incidence() const
{
  std::vector<std::vector<int>> out(numVertices());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int v : edges[e]) {
      out[static_cast<std::size_t>(v)].push_back(static_cast<int>(e));
    }
  }
  return out;
}

Hypergraph designToHypergraph(const Design& design)
{
  const DesignIndex index(design);
  Hypergraph h;
  std::map<std::string, int, std::less<>> vertex;
  for (const Instance& inst : design.instances) {
    const Master* m = index.master(inst.master);
    if (m == nullptr) {
      fail(Errc::kUnknownMaster,
           fmt::format("instance '{}' uses unknown master '{}'", inst.name, inst.master));
    }
    if (m->isCover()) {
      continue;
    }
    std::optional<int> side;
    if (inst.fixed && inst.tier) {
      side = *inst.tier == Tier::kBottom ? 0 : 1;
    }
    vertex.emplace(inst.name, h.addVertex(inst.name, m->area(), side));
  }
  if (h.numVertices() == 0) {
    fail(Errc::kEmptyDesign, fmt::format("design '{}' has no partitionable instance", design.name));
  }
  for (const Net& net : design.nets) {
    std::vector<int> vs;
    std::vector<std::string> ios;
    for (const NetPin& p : net.pins) {
      if (p.io) {
        ios.push_back(p.owner);
      } else if (auto it = vertex.find(p.owner); it != vertex.end()) {
        vs.push_back(it->second);
      }
    }
    const int e = h.addEdge(std::move(vs), net.weight, net.name);
    if (!ios.empty()) {
      h.io_nets.push_back({net.name, std::move(ios), e >= 0 ? std::optional<int>(e) : std::nullopt});
    }
  }
  return h;
}

void checkBalance(const BalancePoint& bp)
{
  auto inside = [](double t) { return t > 0.0 && t < 1.0; };
  if (!inside(bp.target0) || !inside(bp.target1)
      || std::abs(bp.target0 + bp.target1 - 1.0) > 1e-12) {
    fail(Errc::kInvalidArgument,
         fmt::format("balance targets ({}, {}) must lie in (0, 1) and sum to 1",
                     bp.target0,
                     bp.target1));
  }
  if (!(bp.epsilon >= 0.0)) {
    fail(Errc::kInvalidArgument, fmt::format("balance tolerance {} is negative", bp.epsilon));
  }
}

bool balanced(const BalancePoint& bp, std::int64_t total, std::int64_t side0)
{
  const double w = static_cast<double>(total);
  const double s = static_cast<double>(side0);
  return s >= (bp.target0 - bp.epsilon) * w && s <= (bp.target0 + bp.epsilon) * w;
}

double cutsize(const Hypergraph& h, std::span<const int> side)
{
  double cut = 0.0;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    const auto& vs = h.edges[e];
    const int first = side[static_cast<std::size_t>(vs.front())];
    for (int v : vs) {
      if (side[static_cast<std::size_t>(v)] != first) {
        cut += h.edge_weights[e];
        break;
      }
    }
  }
  return cut;
}

namespace {

// FM refinement with gain buckets keyed by (-gain, vertex), so the first
// entry is the highest gain with the smallest vertex id.
class Fm
{
 public:
  Fm(const Hypergraph& h, const BalancePoint& bp)
      : h_(h),
        bp_(bp),
        inc_(h.incidence()),
        total_(h.totalWeight()),
        side_(h.numVertices(), 0),
        gain_(h.numVertices(), 0.0),
        locked_(h.numVertices(), 0),
        count_(h.numEdges())
  {
    for (std::size_t v = 0; v < h.numVertices(); ++v) {
      if (!h.fixed[v]) {
        slack_ = std::max(slack_, h.weights[v]);
      }
    }
  }

  // Weight-balanced greedy fill in a seeded random order, then greedy
  // moves toward the balance window. False when the window is missed.
  bool initial(Rng& rng)
  {
    std::array<std::int64_t, 2> w{0, 0};
    std::vector<int> order;
    for (std::size_t v = 0; v < h_.numVertices(); ++v) {
      if (h_.fixed[v]) {
        side_[v] = *h_.fixed[v];
        w[static_cast<std::size_t>(side_[v])] += h_.weights[v];
      } else {
        order.push_back(static_cast<int>(v));
      }
    }
    shuffle(std::span(order), rng);
    const std::array<double, 2> target{bp_.target0, bp_.target1};
    for (int v : order) {
      const auto wv = h_.weights[static_cast<std::size_t>(v)];
      const double f0 = static_cast<double>(w[0] + wv) / target[0];
      const double f1 = static_cast<double>(w[1] + wv) / target[1];
      const int s = f0 <= f1 ? 0 : 1;
      side_[static_cast<std::size_t>(v)] = s;
      w[static_cast<std::size_t>(s)] += wv;
    }
    w0_ = w[0];
    return repairBalance(order);
  }

  double cut() const { return cutsize(h_, side_); }

  // One FM pass; returns the accepted cut reduction (0 when none).
  double pass()
  {
    resetCounts();
    for (std::size_t v = 0; v < h_.numVertices(); ++v) {
      locked_[v] = h_.fixed[v] ? 1 : 0;
      gain_[v] = computeGain(static_cast<int>(v));
      if (!locked_[v]) {
        bucket_[static_cast<std::size_t>(side_[v])].insert({-gain_[v], static_cast<int>(v)});
      }
    }
    const double lo = (bp_.target0 - bp_.epsilon) * static_cast<double>(total_)
                      - static_cast<double>(slack_);
    const double hi = (bp_.target0 + bp_.epsilon) * static_cast<double>(total_)
                      + static_cast<double>(slack_);
    std::vector<int> moves;
    double cum = 0.0;
    double best = 0.0;
    std::size_t best_len = 0;
    while (true) {
      int pick = -1;
      double pick_gain = 0.0;
      for (int s = 0; s < 2; ++s) {
        for (const auto& [neg, v] : bucket_[static_cast<std::size_t>(s)]) {
          const auto wv = h_.weights[static_cast<std::size_t>(v)];
          const double next = static_cast<double>(s == 0 ? w0_ - wv : w0_ + wv);
          if (next < lo || next > hi) {
            continue;
          }
          if (pick < 0 || -neg > pick_gain || (-neg == pick_gain && v < pick)) {
            pick = v;
            pick_gain = -neg;
          }
          break;
        }
      }
      if (pick < 0) {
        break;
      }
      move(pick);
      moves.push_back(pick);
      cum += pick_gain;
      if (cum > best && balanced(bp_, total_, w0_)) {
        best = cum;
        best_len = moves.size();
      }
    }
    for (std::size_t i = moves.size(); i > best_len; --i) {
      const auto v = static_cast<std::size_t>(moves[i - 1]);
      w0_ += side_[v] == 0 ? -h_.weights[v] : h_.weights[v];
      side_[v] = 1 - side_[v];
    }
    bucket_[0].clear();
    bucket_[1].clear();
    return best;
  }

  const std::vector<int>& side() const { return side_; }
  bool feasible() const { return balanced(bp_, total_, w0_); }

 private:
  bool repairBalance(const std::vector<int>& free)
  {
    const double lo = (bp_.target0 - bp_.epsilon) * static_cast<double>(total_);
    const double hi = (bp_.target0 + bp_.epsilon) * static_cast<double>(total_);
    auto distance = [&](std::int64_t w0) {
      const double x = static_cast<double>(w0);
      return x < lo ? lo - x : (x > hi ? x - hi : 0.0);
    };
    for (std::size_t step = 0; step <= free.size() && !feasible(); ++step) {
      const int from = static_cast<double>(w0_) > hi ? 0 : 1;
      int pick = -1;
      double pick_dist = distance(w0_);
      for (int v : free) {
        const auto u = static_cast<std::size_t>(v);
        if (side_[u] != from) {
          continue;
        }
        const double d = distance(from == 0 ? w0_ - h_.weights[u] : w0_ + h_.weights[u]);
        if (d < pick_dist) {
          pick = v;
          pick_dist = d;
        }
      }
      if (pick < 0) {
        return false;
      }
      const auto u = static_cast<std::size_t>(pick);
      w0_ += from == 0 ? -h_.weights[u] : h_.weights[u];
      side_[u] = 1 - from;
    }
    return feasible();
  }

  void resetCounts()
  {
    for (std::size_t e = 0; e < h_.numEdges(); ++e) {
      count_[e] = {0, 0};
      for (int v : h_.edges[e]) {
        ++count_[e][static_cast<std::size_t>(side_[static_cast<std::size_t>(v)])];
      }
    }
  }

  double computeGain(int v) const
  {
    const auto from = static_cast<std::size_t>(side_[static_cast<std::size_t>(v)]);
    double g = 0.0;
    for (int e : inc_[static_cast<std::size_t>(v)]) {
      const auto& c = count_[static_cast<std::size_t>(e)];
      if (c[from] == 1) {
        g += h_.edge_weights[static_cast<std::size_t>(e)];
      }
      if (c[1 - from] == 0) {
        g -= h_.edge_weights[static_cast<std::size_t>(e)];
      }
    }
    return g;
  }

  void adjust(int u, double delta)
  {
    const auto x = static_cast<std::size_t>(u);
    if (locked_[x]) {
      return;
    }
    auto& b = bucket_[static_cast<std::size_t>(side_[x])];
    b.erase({-gain_[x], u});
    gain_[x] += delta;
    b.insert({-gain_[x], u});
  }

  void move(int v)
  {
    const auto x = static_cast<std::size_t>(v);
    const int from = side_[x];
    const int to = 1 - from;
    bucket_[static_cast<std::size_t>(from)].erase({-gain_[x], v});
    locked_[x] = 1;
    for (int e : inc_[x]) {
      const auto ue = static_cast<std::size_t>(e);
      const double c = h_.edge_weights[ue];
      auto& n = count_[ue];
      if (n[static_cast<std::size_t>(to)] == 0) {
        for (int u : h_.edges[ue]) {
          if (u != v) {
            adjust(u, c);
          }
        }
      } else if (n[static_cast<std::size_t>(to)] == 1) {
        for (int u : h_.edges[ue]) {
          if (side_[static_cast<std::size_t>(u)] == to) {
            adjust(u, -c);
          }
        }
      }
      --n[static_cast<std::size_t>(from)];
      ++n[static_cast<std::size_t>(to)];
      side_[x] = to;
      if (n[static_cast<std::size_t>(from)] == 0) {
        for (int u : h_.edges[ue]) {
          if (u != v) {
            adjust(u, -c);
          }
        }
      } else if (n[static_cast<std::size_t>(from)] == 1) {
        for (int u : h_.edges[ue]) {
          if (side_[static_cast<std::size_t>(u)] == from) {
            adjust(u, c);
          }
        }
      }
      side_[x] = from;
    }
    side_[x] = to;
    w0_ += from == 0 ? -h_.weights[x] : h_.weights[x];
  }

  const Hypergraph& h_;
  BalancePoint bp_;
  std::vector<std::vector<int>> inc_;
  std::int64_t total_ = 0;
  std::int64_t slack_ = 0;
  std::int64_t w0_ = 0;
  std::vector<int> side_;
  std::vector<double> gain_;
  std::vector<char> locked_;
  std::vector<std::array<int, 2>> count_;
  std::array<std::set<std::pair<double, int>>, 2> bucket_;
};

void parallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn)
{
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

SweepResult runSweep(const Hypergraph& h,
                     std::string kind,
                     std::vector<SweepPoint> points,
                     const SweepOptions& opts)
{
  if (opts.seeds.empty()) {
    fail(Errc::kInvalidArgument, "sweep needs at least one seed");
  }
  const std::size_t seeds = opts.seeds.size();
  std::vector<std::optional<PartitionResult>> runs(points.size() * seeds);
  parallelFor(runs.size(), opts.jobs, [&](std::size_t i) {
    try {
      runs[i] = fmBipartition(h, points[i / seeds].balance, opts.seeds[i % seeds], opts.fm);
    } catch (const Error& e) {
      if (e.code() != Errc::kInfeasibleBalance) {
        throw;
      }
    }
  });

  SweepResult out;
  out.kind = std::move(kind);
  std::optional<std::size_t> best_run;
  for (std::size_t k = 0; k < points.size(); ++k) {
    SweepPoint& p = points[k];
    std::vector<double> cuts;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto& r = runs[k * seeds + s];
      SweepRun run;
      run.seed = opts.seeds[s];
      run.feasible = r.has_value();
      if (r) {
        run.cutsize = r->cutsize;
        cuts.push_back(r->cutsize);
        if (!p.best || r->cutsize < *p.runs[*p.best].cutsize
            || (r->cutsize == *p.runs[*p.best].cutsize && run.seed < p.runs[*p.best].seed)) {
          p.best = p.runs.size();
        }
      }
      p.runs.push_back(run);
    }
    if (!cuts.empty()) {
      p.expected_min = expectedMinCutsize(cuts, opts.resample_size, opts.resamples,
                                          mixSeed(opts.bootstrap_seed, k));
    }
    if (p.best) {
      const std::size_t idx = k * seeds + *p.best;
      if (!best_run) {
        best_run = idx;
        out.best_point = k;
      } else {
        const PartitionResult& a = *runs[idx];
        const PartitionResult& b = *runs[*best_run];
        if (std::tie(a.cutsize, a.balance.epsilon, a.seed)
            < std::tie(b.cutsize, b.balance.epsilon, b.seed)) {
          best_run = idx;
          out.best_point = k;
        }
      }
    }
  }
  if (best_run) {
    out.best = runs[*best_run];
  }
  out.points = std::move(points);
  return out;
}

}  // namespace

PartitionResult fmBipartition(const Hypergraph& h,
                              const BalancePoint& bp,
                              std::uint64_t seed,
                              const FmOptions& opts)
{
  checkBalance(bp);
  if (h.numVertices() == 0) {
    fail(Errc::kEmptyDesign, "hypergraph has no vertices");
  }
  if (opts.starts < 1 || opts.max_passes < 1) {
    fail(Errc::kInvalidArgument, "FM needs at least one start and one pass");
  }
  std::optional<PartitionResult> best;
  std::optional<double> initial;
  for (int start = 0; start < opts.starts; ++start) {
    Fm fm(h, bp);
    Rng rng(mixSeed(seed, static_cast<std::uint64_t>(start)));
    if (!fm.initial(rng)) {
      continue;
    }
    const double before = fm.cut();
    if (!initial) {
      initial = before;
    }
    int passes = 0;
    while (passes < opts.max_passes) {
      ++passes;
      if (fm.pass() <= 0.0) {
        break;
      }
    }
    const double cut = fm.cut();
    if (!best || cut < best->cutsize) {
      PartitionResult r;
      r.side = fm.side();
      r.cutsize = cut;
      r.passes = passes;
      best = std::move(r);
    }
  }
  if (!best) {
    fail(Errc::kInfeasibleBalance,
         fmt::format("no assignment reached side-0 weight within ({} +- {}) of {}",
                     bp.target0,
                     bp.epsilon,
                     h.totalWeight()));
  }
  best->balance = bp;
  best->seed = seed;
  best->feasible = true;
  best->initial_cutsize = *initial;
  return *best;
}

std::vector<double> ubfactorPoints(double lo, double hi, int points)
{
  if (points < 1 || !(lo >= 0.0) || !(hi >= lo)) {
    fail(Errc::kInvalidArgument,
         fmt::format("UBfactor sweep needs 0 <= lo <= hi and points >= 1 (got {}, {}, {})", lo, hi, points));
  }
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    out.push_back(points == 1 ? lo : lo + k * (hi - lo) / (points - 1));
  }
  return out;
}

std::vector<BalancePoint> baseBalancePoints(double start0, int points, double epsilon)
{
  if (points < 1 || !(start0 > 0.0 && start0 < 1.0)) {
    fail(Errc::kInvalidArgument,
         fmt::format("base-balance sweep needs a start in (0, 1) and points >= 1 (got {}, {})",
                     start0,
                     points));
  }
  std::vector<BalancePoint> out;
  for (int k = 0; k < points; ++k) {
    double t0 = points == 1 ? start0 : start0 + k * (0.5 - start0) / (points - 1);
    if (points > 1 && k == points - 1) {
      t0 = 0.5;
    }
    BalancePoint bp{t0, 1.0 - t0, epsilon};
    checkBalance(bp);
    out.push_back(bp);
  }
  return out;
}

SweepResult ubfactorSweep(const Hypergraph& h, double lo, double hi, int points, const SweepOptions& opts)
{
  std::vector<SweepPoint> pts;
  for (double u : ubfactorPoints(lo, hi, points)) {
    SweepPoint p;
    p.parameter = u;
    p.balance = {0.5, 0.5, u / 100.0};
    pts.push_back(std::move(p));
  }
  return runSweep(h, "ubfactor", std::move(pts), opts);
}

SweepResult baseBalanceSweep(const Hypergraph& h,
                             double start0,
                             int points,
                             const SweepOptions& opts,
                             double epsilon)
{
  std::vector<SweepPoint> pts;
  for (const BalancePoint& bp : baseBalancePoints(start0, points, epsilon)) {
    SweepPoint p;
    p.parameter = bp.target0;
    p.balance = bp;
    pts.push_back(std::move(p));
  }
  return runSweep(h, "base_balance", std::move(pts), opts);
}

double expectedMinCutsize(std::span<const double> samples,
                          int resample_size,
                          int resamples,
                          std::uint64_t rng_seed)
{
  if (samples.empty()) {
    fail(Errc::kEmptySamples, "bootstrap needs at least one sample");
  }
  if (resample_size < 1 || resamples < 1) {
    fail(Errc::kInvalidArgument,
         fmt::format("bootstrap needs positive sizes (got {}, {})", resample_size, resamples));
  }
  Rng rng(rng_seed);
  double sum = 0.0;
  for (int r = 0; r < resamples; ++r) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < resample_size; ++k) {
      m = std::min(m, samples[uniformBelow(rng, samples.size())]);
    }
    sum += m;
  }
  return sum / resamples;
}

nlohmann::ordered_json toJson(const SweepResult& sweep)
{
  auto balance = [](const BalancePoint& bp) {
    nlohmann::ordered_json j;
    j["target"] = {bp.target0, bp.target1};
    j["epsilon"] = bp.epsilon;
    return j;
  };
  nlohmann::ordered_json j;
  j["kind"] = sweep.kind;
  j["points"] = nlohmann::ordered_json::array();
  for (const SweepPoint& p : sweep.points) {
    nlohmann::ordered_json jp;
    jp["parameter"] = p.parameter;
    jp["balance"] = balance(p.balance);
    jp["runs"] = nlohmann::ordered_json::array();
    for (const SweepRun& r : p.runs) {
      jp["runs"].push_back({{"seed", r.seed},
                            {"cutsize", r.cutsize ? nlohmann::ordered_json(*r.cutsize) : nullptr},
                            {"feasible", r.feasible}});
    }
    jp["best"] = p.best ? nlohmann::ordered_json(*p.runs[*p.best].cutsize) : nullptr;
    jp["expected_min"] = p.expected_min ? nlohmann::ordered_json(*p.expected_min) : nullptr;
    j["points"].push_back(std::move(jp));
  }
  if (sweep.best) {
    j["global_best"] = {{"point", *sweep.best_point},
                        {"seed", sweep.best->seed},
                        {"cutsize", sweep.best->cutsize},
                        {"balance", balance(sweep.best->balance)}};
  } else {
    j["global_best"] = nullptr;
  }
  return j;
}

std::string sweepCsv(const SweepResult& sweep)
{
  std::string out = "parameter,target0,target1,epsilon,feasible_runs,best_cutsize,expected_min_cutsize\n";
  for (const SweepPoint& p : sweep.points) {
    std::size_t feasible = 0;
    for (const SweepRun& r : p.runs) {
      feasible += r.feasible ? 1 : 0;
    }
    out += fmt::format("{},{},{},{},{},{},{}\n",
                       formatDouble(p.parameter),
                       formatDouble(p.balance.target0),
                       formatDouble(p.balance.target1),
                       formatDouble(p.balance.epsilon),
                       feasible,
                       p.best ? formatDouble(*p.runs[*p.best].cutsize) : "",
                       p.expected_min ? formatDouble(*p.expected_min) : "");
  }
  return out;
}

}  // namespace rpd::part
