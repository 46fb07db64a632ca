// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>

#include "rpd/core/design.h"

namespace rpd {

struct StatsRecord
{
  std::int64_t instances = 0;
  std::int64_t nets = 0;
  std::int64_t pins = 0;
  // Exact sum over non-COVER instances.
  Area stdcell_area = 0;
  double avg_net_degree = 0.0;
};

StatsRecord designStats(const Design& design);

}  // namespace rpd
