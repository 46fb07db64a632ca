// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/stats.h"

#include "rpd/core/validate.h"

namespace rpd {

StatsRecord designStats(const Design& design)
{
  requireValid(design);
  const DesignIndex index(design);
  StatsRecord stats;
  stats.instances = static_cast<std::int64_t>(design.instances.size());
  stats.nets = static_cast<std::int64_t>(design.nets.size());
  for (const Net& net : design.nets) {
    stats.pins += static_cast<std::int64_t>(net.pins.size());
  }
  for (const Instance& inst : design.instances) {
    const Master* m = index.master(inst.master);
    if (!m->isCover()) {
      stats.stdcell_area += m->area();
    }
  }
  if (stats.nets > 0) {
    stats.avg_net_degree
        = static_cast<double>(stats.pins) / static_cast<double>(stats.nets);
  }
  return stats;
}

}  // namespace rpd
