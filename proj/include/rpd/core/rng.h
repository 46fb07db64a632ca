// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace rpd {

// The standard distributions are implementation-defined, so every random
// draw in the project goes through these helpers on top of mt19937_64,
// whose output sequence is fixed by the standard.
using Rng = std::mt19937_64;

// Uniform integer in [0, n) by rejection; n > 0.
inline std::uint64_t uniformBelow(Rng& rng, std::uint64_t n)
{
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  std::uint64_t v = rng();
  while (v >= limit) {
    v = rng();
  }
  return v % n;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng)
{
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniformBelow(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

// Derives an independent stream seed from (seed, stream).
inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rpd
