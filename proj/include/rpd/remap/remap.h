// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpd/core/design.h"
#include "rpd/core/validate.h"
#include "rpd/io/bookshelf.h"
#include "rpd/io/lefdef.h"

// Reconstruction of Bookshelf from simplified LEF/DEF and remapping of a
// Bookshelf netlist onto a target cell library.
namespace rpd::remap {

// Components become nodes sized by their macro, IO pins become terminals,
// nets keep their pin lists. Wiring is dropped.
bookshelf::Bundle fakeToBookshelf(const lefdef::LefSubset& lef, const Design& def);

struct RemapPolicy
{
  // Permit macros with fewer signal pins than the node; surplus node pins
  // are disconnected and counted in the report.
  bool allow_pin_drop = false;
};

struct NodeAssignment
{
  std::string source;
  std::string chosen_macro;
  // Macro signal pins minus node pins.
  std::int64_t pin_delta = 0;
  // Macro area minus the scaled node area, DBU^2.
  double area_delta = 0.0;
  std::int64_t dropped_pins = 0;
};

struct RemapReport
{
  double scale = 1.0;
  std::string site;
  std::vector<NodeAssignment> nodes;
  std::int64_t displaced = 0;
};

struct RemapResult
{
  Design design;
  lefdef::LefSubset used;
  RemapReport report;
};

// Candidate macros for a node with `pins` connections: CORE macros whose
// height is a multiple of the site height and, unless pins may be dropped,
// with at least `pins` signal pins.
std::vector<const Master*> candidates(const lefdef::LefSubset& target,
                                      const Site& site,
                                      std::size_t pins,
                                      const RemapPolicy& policy);

// Argmin of (|pin delta|, |area delta|, name) over `cands`.
const Master* chooseMacro(std::span<const Master* const> cands,
                          std::size_t pins,
                          double scaled_area);

// Errors: NO_CANDIDATE, INVALID_ARGUMENT (target without site or macros).
RemapResult remapToPdk(const bookshelf::Bundle& bundle,
                       const lefdef::LefSubset& target,
                       const RemapPolicy& policy = {});

// Placement legality against `target`: OFF_GRID, OUTSIDE_CORE, OVERLAP
// (same tier, COVER masters excluded, one entry per pair),
// UNKNOWN_MASTER, plus row and site violations from validateDesign.
ValidationReport legalityCheck(const Design& design, const lefdef::LefSubset& target);

nlohmann::ordered_json toJson(const RemapReport& report);

}  // namespace rpd::remap
