// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpd/core/design.h"

// Balance-constrained min-cut bipartitioning.
namespace rpd::part {

struct Hypergraph
{
  std::vector<std::string> names;
  std::vector<std::int64_t> weights;
  // Side a vertex must stay on.
  std::vector<std::optional<int>> fixed;

  std::vector<std::vector<int>> edges;
  std::vector<double> edge_weights;
  std::vector<std::string> edge_names;

  // Nets that touch IO pins, with their vertex edge when one was formed.
  struct IoNet
  {
    std::string net;
    std::vector<std::string> io_pins;
    std::optional<int> edge;
  };
  std::vector<IoNet> io_nets;

  int addVertex(std::string name, std::int64_t weight, std::optional<int> fixed_side = {});
  // Duplicate vertices are merged; edges with fewer than two distinct
  // vertices are dropped and -1 is returned.
  int addEdge(std::vector<int> vertices, double weight = 1.0, std::string name = {});

  std::size_t numVertices() const { return weights.size(); }
  std::size_t numEdges() const { return edges.size(); }
  std::int64_t totalWeight() const;
  // Edges incident to each vertex.
  std::vector<std::vector<int>> incidence() const;
};

// One vertex per non-COVER instance weighted by master area and one edge
// per net over its instances. Fixed instances with a tier are fixed to
// that side (BOTTOM 0, UPPER 1). Errors: EMPTY_DESIGN.
Hypergraph designToHypergraph(const Design& design);

struct BalancePoint
{
  // Side-0 and side-1 target fractions.
  double target0 = 0.5;
  double target1 = 0.5;
  double epsilon = 0.0;
};

// Errors: INVALID_ARGUMENT when a target is outside (0, 1), the targets
// do not sum to 1, or epsilon is negative.
void checkBalance(const BalancePoint& bp);

// side0 in [(target0 - eps) W, (target0 + eps) W].
bool balanced(const BalancePoint& bp, std::int64_t total, std::int64_t side0);

double cutsize(const Hypergraph& h, std::span<const int> side);

struct PartitionResult
{
  std::vector<int> side;
  double cutsize = 0.0;
  BalancePoint balance;
  std::uint64_t seed = 0;
  bool feasible = false;
  // Cut of the first seeded initial assignment before refinement.
  double initial_cutsize = 0.0;
  int passes = 0;
};

struct FmOptions
{
  // Independent initial assignments refined per call; the best is kept.
  int starts = 8;
  int max_passes = 64;
};

// Errors: INFEASIBLE_BALANCE when no start reaches the balance window,
// INVALID_ARGUMENT.
PartitionResult fmBipartition(const Hypergraph& h,
                              const BalancePoint& bp,
                              std::uint64_t seed,
                              const FmOptions& opts = {});

struct SweepRun
{
  std::uint64_t seed = 0;
  bool feasible = false;
  std::optional<double> cutsize;
};

struct SweepPoint
{
  // UBfactor or side-0 base fraction.
  double parameter = 0.0;
  BalancePoint balance;
  std::vector<SweepRun> runs;
  // Index into runs.
  std::optional<std::size_t> best;
  std::optional<double> expected_min;
};

struct SweepResult
{
  std::string kind;
  std::vector<SweepPoint> points;
  std::optional<std::size_t> best_point;
  std::optional<PartitionResult> best;
};

struct SweepOptions
{
  std::vector<std::uint64_t> seeds = {1};
  int jobs = 1;
  FmOptions fm;
  int resample_size = 15;
  int resamples = 1000;
  std::uint64_t bootstrap_seed = 1;
};

// u_k = lo + k (hi - lo) / (points - 1); target (0.5, 0.5), eps = u / 100.
std::vector<double> ubfactorPoints(double lo, double hi, int points);

// Linear from `start` to (0.5, 0.5) over `points`.
std::vector<BalancePoint> baseBalancePoints(double start0, int points, double epsilon = 0.02);

// Errors: INVALID_ARGUMENT. Infeasible points are recorded, not raised.
SweepResult ubfactorSweep(const Hypergraph& h, double lo, double hi, int points, const SweepOptions& opts);
SweepResult baseBalanceSweep(const Hypergraph& h,
                             double start0,
                             int points,
                             const SweepOptions& opts,
                             double epsilon = 0.02);

// Mean over `resamples` draws (with replacement, size `resample_size`) of
// the draw minimum. Errors: EMPTY_SAMPLES, INVALID_ARGUMENT.
double expectedMinCutsize(std::span<const double> samples,
                          int resample_size,
                          int resamples,
                          std::uint64_t rng_seed);

nlohmann::ordered_json toJson(const SweepResult& sweep);

// parameter,target0,target1,epsilon,feasible_runs,best_cutsize,expected_min_cutsize
std::string sweepCsv(const SweepResult& sweep);

}  // namespace rpd::part
