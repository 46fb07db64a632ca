// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpd/core/design.h"
#include "rpd/io/lefdef.h"

// Synthetic technologies, libraries and netlists.
namespace rpd::corpus {

// M routing layers M1..Mm with cut layers V12.. between them, one site
// "core" of 0.2 x 2.0 um and one via per cut layer.
TechStack syntheticTech(int metals = 6,
                        std::string name = "synth",
                        int units = kDefaultDbuPerMicron);

// Small CORE library on the tech's first site. Pins sit on M1.
lefdef::LefSubset syntheticLibrary(const TechStack& tech);

struct MixEntry
{
  std::string master;
  double probability = 0.0;
};

struct SynthConfig
{
  std::int64_t num_instances = 1000;
  double avg_net_degree = 3.0;
  int hierarchy_depth = 3;
  std::uint64_t seed = 1;
  // Empty means uniform over the library.
  std::vector<MixEntry> master_mix;
  // Negative means automatic (about 2 sqrt(n), at most 128).
  std::int64_t io_pins = -1;
  double utilization = 0.6;
  // Probability that a sink stays inside the driver's block, per level.
  double locality = 0.8;
};

// Errors: DEGENERATE_CONFIG.
void checkConfig(const SynthConfig& cfg, const lefdef::LefSubset& lib);

// Placed, legal design over `lib`: every net has one driver and at least
// one sink; instances fill rows in hierarchy order. Errors:
// DEGENERATE_CONFIG.
Design generateSynthetic(const SynthConfig& cfg, const lefdef::LefSubset& lib);

// Over syntheticLibrary(syntheticTech()).
Design generateSynthetic(const SynthConfig& cfg);

}  // namespace rpd::corpus
