// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpd/core/design.h"

namespace rpd::metrics {

inline constexpr std::string_view kSchemaId = "rosetta-pd.metrics/1";

struct HpwlResult
{
  Dbu total = 0;
  // Nets skipped because a pin has no location.
  std::int64_t unplaced_nets = 0;
};

// Sum over nets of pin bounding-box width + height. Pins are located at
// instance location + oriented master-pin offset, IO pins at their
// location + io_offset.
HpwlResult hpwl(const Design& design);
Dbu computeHpwl(const Design& design);

// Sum of Manhattan segment lengths. Errors: NO_ROUTING when no net
// carries wiring.
Dbu routedLength(const Design& design);
std::int64_t viaCount(const Design& design);

struct Floorplan
{
  Rect die;
  Rect core;
};

// Core area = ceil(stdcell_area / utilization) with width / height =
// aspect_ratio, rounded up to the site grid when a site is given.
// Errors: NONPOSITIVE_INPUT.
Floorplan deriveFloorplan(Area stdcell_area,
                          double utilization,
                          double aspect_ratio,
                          const std::optional<Site>& site = std::nullopt,
                          Dbu margin = 0);

struct MetricsRecord
{
  std::string design;
  std::string stage;
  std::string flow;
  std::optional<std::string> enablement;
  int units = kDefaultDbuPerMicron;
  Dbu wirelength_hpwl = 0;
  std::optional<Dbu> wirelength_routed;
  std::int64_t instance_count = 0;
  std::int64_t net_count = 0;
  std::int64_t pin_count = 0;
  Area stdcell_area = 0;
  Area core_area = 0;
  double utilization = 0.0;
  std::optional<double> cutsize;
  std::optional<std::int64_t> hbt_estimate;
  double runtime_s = 0.0;
  std::optional<std::int64_t> memory_peak_kb;
  std::map<std::string, std::int64_t> violations;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

// Record with counts, areas and wirelength filled in from the design.
MetricsRecord measure(const Design& design, std::string stage, std::string flow);

double utilizationOf(Area stdcell_area, Area core_area);

// The shipped schema document.
const nlohmann::json& schema();

// Errors found by checking `doc` against the schema plus the utilization
// identity. `strict` rejects unknown keys.
std::vector<std::string> schemaErrors(const nlohmann::json& doc, bool strict = true);

nlohmann::ordered_json toJson(const MetricsRecord& record);

// Errors: SCHEMA_VIOLATION.
std::string emitMetrics(const MetricsRecord& record);
MetricsRecord parseMetrics(std::string_view text, bool strict = true);

// One row per record ordered by (design, flow, stage). Missing values are
// empty cells.
std::string compareRuns(std::span<const MetricsRecord> records);

// Peak resident set size of this process, when the platform reports it.
std::optional<std::int64_t> peakRssKb();

}  // namespace rpd::metrics
