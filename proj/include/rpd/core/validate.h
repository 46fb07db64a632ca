// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <string>
#include <vector>

#include "rpd/core/design.h"

namespace rpd {

struct Violation
{
  std::string code;
  std::string locus;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport
{
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  std::size_t size() const { return violations.size(); }
  std::size_t count(std::string_view code) const;
  void add(std::string code, std::string locus);
};

// Checks every structural invariant of the design model. Violations are
// returned, never thrown. Codes:
//   DUPLICATE_INSTANCE, DUPLICATE_NET, DUPLICATE_MASTER, DUPLICATE_IO_PIN,
//   UNKNOWN_MASTER, DANGLING_PIN, HIDDEN_PIN_ON_NET, NEGATIVE_WEIGHT,
//   BAD_DIE, CORE_OUTSIDE_DIE, OUTSIDE_DIE, TIER_MISMATCH, UNKNOWN_SITE,
//   BAD_ROW, ROW_OVERLAP, BAD_MASTER
ValidationReport validateDesign(const Design& design);

// Throws Errc::kInvalidDesign carrying the first violation.
void requireValid(const Design& design);

}  // namespace rpd
