// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpd/core/design.h"
#include "rpd/core/validate.h"
#include "rpd/enable3d/enable3d.h"
#include "rpd/io/lefdef.h"
#include "rpd/part/partition.h"

// Per-tier design views from a bipartition.
namespace rpd::tierview {

enum class StackKind
{
  kHomogeneous,
  kHeterogeneous,
};

struct TierAssignment
{
  // Every non-COVER instance.
  std::map<std::string, Tier> tiers;
  Tier io_tier = Tier::kBottom;
  part::PartitionResult source;

  std::size_t count(Tier tier) const;
};

// Side 0 is BOTTOM. IO pins go to BOTTOM on homogeneous stacks and to
// UPPER on heterogeneous ones. Errors: COVERAGE_GAP.
TierAssignment assignTiers(const Design& design,
                           const part::Hypergraph& h,
                           const part::PartitionResult& part,
                           StackKind kind);

// Tier masters, their COVER twins and tier-renamed sites.
struct TierLibrary
{
  Tier tier = Tier::kBottom;
  std::vector<Master> masters;
  std::vector<Site> sites;

  const Master* find(std::string_view name) const;
};

TierLibrary tierLibrary(const lefdef::LefSubset& lib, Tier tier);

// Pin renames applied when a logical pin is absent from the tier master.
struct PinRename
{
  std::string macro;
  std::string from;
  std::string to;
};

struct CrossTierNet
{
  std::string net;
  // "inst/pin" or "PIN/name".
  std::vector<std::string> bottom_pins;
  std::vector<std::string> upper_pins;
  // Instance pins on both tiers.
  bool internal = false;
  // IO pins with instance pins on the other tier.
  bool io_spanning = false;
};

struct CrossTierReport
{
  Tier io_tier = Tier::kBottom;
  std::vector<CrossTierNet> nets;

  std::size_t internalCount() const;
  // Nets that cross only through their IO pins.
  std::size_t ioOnlyCount() const;
};

struct TierViews
{
  Design bottom;
  Design upper;
  CrossTierReport report;

  const Design& view(Tier tier) const { return tier == Tier::kBottom ? bottom : upper; }
};

// Each view holds its tier's instances on tier masters and fixed COVER
// twins of the other tier's instances under the same names. Nets stay in
// the view of their pins; cross-tier nets go to both views and the
// report. Hidden pins present on a tier master become tie-offs.
// Errors: MISSING_TIER_MASTER, UNMAPPED_PIN.
TierViews generateTierViews(const Design& design,
                            const TierAssignment& ta,
                            const TierLibrary& bottom_lib,
                            const TierLibrary& upper_lib,
                            const enable3d::HiddenPinReport& hidden,
                            const std::vector<PinRename>& renames = {});

// One HBT per cross-tier net.
std::size_t estimateHbtCount(const CrossTierReport& report, bool include_io);

enum class StrategyMode
{
  kRestricted,
  kFlexible,
};

struct TierStrategy
{
  StrategyMode mode = StrategyMode::kRestricted;
  Tier active_tier = Tier::kBottom;
};

// COVER_NOT_FIXED for any movable COVER instance; in RESTRICTED mode also
// INACTIVE_TIER_MOVABLE for movable instances off the active tier.
ValidationReport checkTierStrategy(const Design& view, const TierStrategy& strategy);

nlohmann::ordered_json toJson(const CrossTierReport& report);
nlohmann::ordered_json toJson(const TierAssignment& ta);

}  // namespace rpd::tierview
