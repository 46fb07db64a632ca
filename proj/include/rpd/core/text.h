// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpd/core/geometry.h"

namespace rpd {

inline constexpr std::string_view kToolName = "rosetta-pd";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Locale-independent number parsing. The whole token must be consumed.
std::optional<double> parseDouble(std::string_view s);
std::optional<std::int64_t> parseInt(std::string_view s);

// Micron value to DBU with round-half-away-from-zero.
Dbu toDbu(double microns, int units);

// Shortest decimal that parses back to dbu / units exactly.
std::string formatMicrons(Dbu dbu, int units);

// Shortest round-trip representation of a double.
std::string formatDouble(double v);

std::vector<std::string_view> splitWhitespace(std::string_view line);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, std::string_view content);

bool iequals(std::string_view a, std::string_view b);

}  // namespace rpd
