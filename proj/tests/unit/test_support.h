// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "rpd/core/design.h"

namespace rpd::test {

std::string fixture(const std::string& relative);

// Scratch directory removed on destruction.
class TempDir
{
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Cell library used across tests on site "unit" (100x1000 DBU): INV
// (A -> Y, 2 sites) and NAND2 (A B -> Y, 3 sites), port shapes on M1.
Design tinyLibraryDesign();

// Random legal design over tinyLibraryDesign() masters: `instances` placed
// cells in rows, `nets` nets of degree 2..4, `ios` IO pins.
Design randomDesign(std::uint64_t seed, int instances, int nets, int ios);

}  // namespace rpd::test
