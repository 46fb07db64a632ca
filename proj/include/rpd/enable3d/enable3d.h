// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rpd/core/design.h"
#include "rpd/io/lefdef.h"

// Face-to-face 3D enablement from 2D technologies.
namespace rpd::enable3d {

// Hybrid bonding terminal geometry in microns, resistance in ohms.
struct HbtSpec
{
  double width = 0.5;
  double spacing = 0.5;
  double pitch = 1.0;
  double resistance = 0.02;

  friend bool operator==(const HbtSpec&, const HbtSpec&) = default;
};

// Errors: INVALID_ARGUMENT when width != spacing, pitch != width +
// spacing, or any field is not positive.
void checkHbt(const HbtSpec& hbt);

struct StackConfig
{
  TechStack bottom_tech;
  TechStack top_tech;
  HbtSpec hbt;
  bool legacy_compat_layers = false;
  // Metadata only: separate supply nets per tier.
  bool pdn_isolated = true;
};

inline constexpr std::string_view kBondLayer = "HBT";
inline constexpr std::string_view kBondVia = "HBT_VIA";
inline constexpr std::string_view kUpperSuffix = "_m";

std::string tierSuffix(Tier tier);

// Layer name of `layer` on the given tier ("M1" -> "M1_m" on UPPER).
std::string tierLayerName(std::string_view layer, Tier tier);

// Bottom routing/cut layers, optional M2_add/M3_add, the HBT cut layer,
// then the top tier's routing/cut layers mirrored (topmost first) with the
// "_m" suffix. Sites are renamed with "_bottom"/"_upper".
// Errors: UNIT_MISMATCH, INVALID_ARGUMENT.
TechStack build3dTech(const StackConfig& cfg);

// One "<macro>_<tier>" master per CORE macro with layers renamed for the
// tier. Errors: UNKNOWN_LAYER.
std::vector<Master> deriveTierMasters(const lefdef::LefSubset& lib, Tier tier);

// One "<macro>_<tier>_cover" COVER master per CORE macro: same size and
// pins as the tier master, no OBS. Errors: UNKNOWN_LAYER.
std::vector<Master> deriveCoverMasters(const lefdef::LefSubset& lib, Tier tier);

// Removes a "_bottom"/"_upper" suffix, with an optional trailing "_cover".
std::string logicalName(std::string_view master);

struct HiddenPin
{
  std::string macro;
  std::string pin;
  // Which library carries the pin: "A" or "B".
  std::string present_in;
};

struct HiddenPinReport
{
  std::vector<HiddenPin> hidden;
  // Per surviving macro, the pins present in both libraries.
  std::vector<std::pair<std::string, std::vector<std::string>>> shared;

  bool isHidden(std::string_view macro, std::string_view pin) const;
};

struct UnifiedLibrary
{
  lefdef::LefSubset lib;
  HiddenPinReport report;
};

// Intersection by macro name with geometry from libA. Pins on one side
// only are kept as hidden pins. Errors: EMPTY_INTERSECTION.
UnifiedLibrary buildUnifiedLibrary(const lefdef::LefSubset& lib_a,
                                   const lefdef::LefSubset& lib_b);

// Rows tiling `core` bottom-up, alternating N/FS. Errors: SITE_TOO_LARGE,
// INVALID_ARGUMENT.
std::vector<Row> rebuildRows(const Rect& core,
                             const Site& site,
                             std::string_view prefix = "ROW");

// width = spacing = pitch / 2 for each pitch. Errors: NONPOSITIVE_PITCH.
std::vector<HbtSpec> hbtPitchSweep(const HbtSpec& base, const std::vector<double>& pitches);

nlohmann::ordered_json toJson(const HbtSpec& hbt);
nlohmann::ordered_json toJson(const HiddenPinReport& report);

// {tiers, layer_map, hbt, compat_layers, pdn}.
nlohmann::ordered_json stackManifest(const StackConfig& cfg, const TechStack& tech);

}  // namespace rpd::enable3d
