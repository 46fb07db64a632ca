// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/validate.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rpd/core/error.h"

namespace rpd {

std::size_t ValidationReport::count(std::string_view code) const
{
  return std::count_if(violations.begin(),
                       violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

void ValidationReport::add(std::string code, std::string locus)
{
  violations.push_back({std::move(code), std::move(locus)});
}

namespace {

template <typename T>
void checkUnique(const std::vector<T>& items,
                 std::string_view code,
                 ValidationReport& report)
{
  std::unordered_set<std::string_view> seen;
  seen.reserve(items.size());
  for (const T& item : items) {
    if (!seen.insert(item.name).second) {
      report.add(std::string(code), item.name);
    }
  }
}

void checkRows(const Design& design,
               const DesignIndex& index,
               ValidationReport& report)
{
  struct Span
  {
    Rect rect;
    TierTag tier;
    const Row* row;
  };
  std::vector<Span> spans;
  for (const Row& row : design.rows) {
    const Site* site = index.site(row.site);
    if (site == nullptr) {
      report.add("UNKNOWN_SITE", row.name);
      continue;
    }
    if (row.num_sites <= 0 || row.step != site->width) {
      report.add("BAD_ROW", row.name);
      continue;
    }
    spans.push_back({{row.origin.x,
                      row.origin.y,
                      row.origin.x + row.width(),
                      row.origin.y + site->height},
                     row.tier,
                     &row});
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    return a.rect.ylo < b.rect.ylo;
  });
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      if (spans[j].rect.ylo >= spans[i].rect.yhi) {
        break;
      }
      if (spans[i].tier == spans[j].tier
          && spans[i].rect.overlaps(spans[j].rect)) {
        report.add("ROW_OVERLAP",
                   fmt::format("{},{}", spans[i].row->name, spans[j].row->name));
      }
    }
  }
}

}  // namespace

ValidationReport validateDesign(const Design& design)
{
  ValidationReport report;
  const DesignIndex index(design);

  checkUnique(design.masters, "DUPLICATE_MASTER", report);
  checkUnique(design.instances, "DUPLICATE_INSTANCE", report);
  checkUnique(design.nets, "DUPLICATE_NET", report);
  checkUnique(design.io_pins, "DUPLICATE_IO_PIN", report);

  if (!design.die.valid() || !design.core.valid()) {
    report.add("BAD_DIE", design.name);
  } else if (!design.die.contains(design.core)) {
    report.add("CORE_OUTSIDE_DIE", design.name);
  }

  for (const Master& m : design.masters) {
    if (m.width < 0 || m.height < 0) {
      report.add("BAD_MASTER", m.name);
    }
  }

  for (const Instance& inst : design.instances) {
    const Master* master = index.master(inst.master);
    if (master == nullptr) {
      report.add("UNKNOWN_MASTER", inst.name);
      continue;
    }
    if (inst.tier && master->tier_tag != TierTag::kNone
        && tagOf(*inst.tier) != master->tier_tag) {
      report.add("TIER_MISMATCH", inst.name);
    }
    if (inst.location) {
      const Point size
          = orientedSize(inst.orient, master->width, master->height);
      const Rect box{inst.location->x,
                     inst.location->y,
                     inst.location->x + size.x,
                     inst.location->y + size.y};
      if (!design.die.contains(box)) {
        report.add("OUTSIDE_DIE", inst.name);
      }
    }
  }

  for (const Net& net : design.nets) {
    if (!(net.weight >= 0.0) || !std::isfinite(net.weight)) {
      report.add("NEGATIVE_WEIGHT", net.name);
    }
    for (const NetPin& pin : net.pins) {
      if (pin.io) {
        if (index.ioPin(pin.owner) == nullptr) {
          report.add("DANGLING_PIN", fmt::format("{}:PIN/{}", net.name, pin.owner));
        }
        continue;
      }
      const Master* master = index.masterOf(pin.owner);
      const MasterPin* mp
          = master == nullptr ? nullptr : master->findPin(pin.pin);
      if (mp == nullptr) {
        report.add("DANGLING_PIN",
                   fmt::format("{}:{}/{}", net.name, pin.owner, pin.pin));
      } else if (mp->hidden) {
        report.add("HIDDEN_PIN_ON_NET",
                   fmt::format("{}:{}/{}", net.name, pin.owner, pin.pin));
      }
    }
  }

  checkRows(design, index, report);
  return report;
}

void requireValid(const Design& design)
{
  const ValidationReport report = validateDesign(design);
  if (!report.empty()) {
    const Violation& v = report.violations.front();
    fail(Errc::kInvalidDesign,
         fmt::format("design '{}' has {} violation(s), first {} at {}",
                     design.name,
                     report.size(),
                     v.code,
                     v.locus));
  }
}

}  // namespace rpd
