// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpd/core/design.h"

// Benchmark normalization: drop ill-formed nets, split oversized cells,
// snap placements to a grid.
namespace rpd::repair {

struct RepairConfig
{
  // Oversize threshold = ratio x median area of non-COVER masters.
  double max_instance_area_ratio = 64.0;
  Dbu grid = 1;
  // Cells that cannot be split under the threshold are an error when
  // strict, a logged warning otherwise.
  bool strict = false;
};

enum class RemovalReason
{
  kAllInput,
  kAllOutput,
  kDegenerate,
};

std::string_view removalReasonName(RemovalReason r);

struct RemovedNet
{
  std::string net;
  RemovalReason reason;
};

struct SplitRecord
{
  std::string original;
  std::vector<std::string> shards;
  std::string chain_net;

  std::size_t shardCount() const { return shards.size(); }
};

struct RepairLog
{
  std::vector<RemovedNet> removed_nets;
  std::vector<SplitRecord> split_instances;
  std::int64_t snapped = 0;
  std::vector<std::string> warnings;

  void append(const RepairLog& other);
  bool empty() const;
};

struct RepairResult
{
  Design design;
  RepairLog log;
};

// Marker in names of masters generated by splitting.
inline constexpr std::string_view kShardMarker = "__shard";

// Errors: INVALID_ARGUMENT (ratio <= 1 or grid < 1).
void checkConfig(const RepairConfig& cfg);

RepairResult removeIllFormedNets(const Design& design);

// Threshold in DBU^2. Masters produced by an earlier split are not part of
// the median. Errors: THRESHOLD_UNDEFINED.
double oversizeThreshold(const Design& design, const RepairConfig& cfg);

// Errors: THRESHOLD_UNDEFINED, NAME_COLLISION, DEGENERATE_CONFIG (strict
// and a cell taller than the threshold allows).
RepairResult splitOversizedInstances(const Design& design, const RepairConfig& cfg);

// Rounds each coordinate to the nearest grid multiple, halves away from
// zero.
Dbu snapToGrid(Dbu v, Dbu grid);

RepairResult snapAndRescale(const Design& design, const RepairConfig& cfg);

RepairResult repairPipeline(const Design& design, const RepairConfig& cfg);

nlohmann::ordered_json toJson(const RepairLog& log);

}  // namespace rpd::repair
