// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/text.h"

#include <fmt/core.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rpd/core/error.h"

namespace rpd {

std::optional<double> parseDouble(std::string_view s)
{
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  if (s.empty()) {
    return std::nullopt;
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::int64_t> parseInt(std::string_view s)
{
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

Dbu toDbu(double microns, int units)
{
  return static_cast<Dbu>(std::llround(microns * units));
}

std::string formatMicrons(Dbu dbu, int units)
{
  // units = 2^a * 5^b gives a terminating decimal; emit it exactly.
  int twos = 0;
  int fives = 0;
  int rest = units;
  while (rest > 0 && rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest > 0 && rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) {
    return formatDouble(static_cast<double>(dbu) / units);
  }
  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) {
    scale *= 10;
  }
  const std::int64_t scaled = dbu * (scale / units);
  const bool neg = scaled < 0;
  const std::uint64_t mag = neg ? 0 - static_cast<std::uint64_t>(scaled)
                                : static_cast<std::uint64_t>(scaled);
  std::string whole = std::to_string(mag / static_cast<std::uint64_t>(scale));
  std::string frac = std::to_string(mag % static_cast<std::uint64_t>(scale));
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') {
    frac.pop_back();
  }
  std::string out = neg ? "-" : "";
  out += whole;
  if (!frac.empty()) {
    out += '.';
    out += frac;
  }
  return out;
}

std::string formatDouble(double v)
{
  return fmt::format("{}", v);
}

std::vector<std::string_view> splitWhitespace(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size()
           && std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size()
           && !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

std::string readFile(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::kMissingFile, fmt::format("cannot open '{}'", path));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(Errc::kIoFailure, fmt::format("cannot write '{}'", path));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    fail(Errc::kIoFailure, fmt::format("short write to '{}'", path));
  }
}

bool iequals(std::string_view a, std::string_view b)
{
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i]))
        != std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace rpd
