// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpd/core/design.h"

// LEF/DEF subset and a structural gate-level netlist form.
//
// LEF: UNITS, LAYER, SITE, VIA, MACRO (PIN, OBS). DEF: UNITS, DIEAREA, ROW,
// COMPONENTS, PINS, NETS with regular wiring. Other sections are skipped
// and counted in warnings.
namespace rpd::lefdef {

struct LefSubset
{
  TechStack tech;
  std::vector<Master> macros;
  std::vector<std::string> warnings;

  const Master* findMacro(std::string_view name) const;
};

// Parses LEF text on top of `base`, so a technology LEF and a cell LEF can
// be read in sequence. Macro tier tags are recovered from the _bottom /
// _upper naming convention. Errors: SYNTAX.
LefSubset parseLef(std::string_view text, LefSubset base = {});

std::string writeLef(const TechStack& stack, std::span<const Master> masters);
std::string writeLef(const LefSubset& lef);

// Errors: UNKNOWN_MASTER, SYNTAX. The result always passes validateDesign.
Design parseDef(std::string_view text,
                const LefSubset& lef,
                std::vector<std::string>* warnings = nullptr);

std::string writeDef(const Design& design);

// Legal simple identifier: illegal characters become '_' and a leading
// digit gets a '_' prefix.
std::string sanitizeIdentifier(std::string_view name);

// One module, one instantiation per instance, named port connections and
// 1'b0 ties for tie-off and hidden input pins. Errors: NAME_COLLISION.
std::string writeStructuralNetlist(const Design& design);

// Reads the output of writeStructuralNetlist back into an unplaced design
// over the given masters. Errors: SYNTAX, UNKNOWN_MASTER.
Design readStructuralNetlist(std::string_view text,
                             std::span<const Master> masters);

}  // namespace rpd::lefdef
