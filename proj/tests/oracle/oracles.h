// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rpd/part/partition.h"

// Independent reference implementations used as test oracles.
namespace rpd::oracle {

// Random hypergraph with `n` vertices of integer weight 1..4 and n..2n
// edges of 2..4 vertices with integer weight 1..3.
part::Hypergraph randomHypergraph(std::uint64_t seed, int n);

// The fixed 100-case suite of hypergraphs with 4..14 vertices.
std::vector<part::Hypergraph> smallSuite();

// Minimum cut over all 2^n assignments feasible for at least one of
// `points` and honoring fixed vertices; nullopt when none is feasible.
std::optional<double> bruteForceMinCut(const part::Hypergraph& h,
                                       std::span<const part::BalancePoint> points);

// Cut recomputed edge by edge from the side map.
double recount(const part::Hypergraph& h, std::span<const int> side);

// Straightforward bootstrap of the minimum over a fresh mt19937_64
// stream: indices by rejection sampling on the raw 64-bit output.
double referenceBootstrap(std::span<const double> samples,
                          int resample_size,
                          int resamples,
                          std::uint64_t seed);

}  // namespace rpd::oracle
