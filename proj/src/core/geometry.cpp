// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/geometry.h"

#include <array>

namespace rpd {

namespace {
constexpr std::array<std::string_view, 8> kOrientNames
    = {"N", "S", "E", "W", "FN", "FS", "FE", "FW"};
}

std::string_view orientName(Orient o)
{
  return kOrientNames[static_cast<std::size_t>(o)];
}

std::optional<Orient> parseOrient(std::string_view token)
{
  for (std::size_t i = 0; i < kOrientNames.size(); ++i) {
    if (kOrientNames[i] == token) {
      return static_cast<Orient>(i);
    }
  }
  return std::nullopt;
}

Point transformOffset(Point p, Orient o, Dbu w, Dbu h)
{
  switch (o) {
    case Orient::N:
      return p;
    case Orient::S:
      return {w - p.x, h - p.y};
    case Orient::W:
      return {h - p.y, p.x};
    case Orient::E:
      return {p.y, w - p.x};
    case Orient::FN:
      return {w - p.x, p.y};
    case Orient::FS:
      return {p.x, h - p.y};
    case Orient::FW:
      return {p.y, p.x};
    case Orient::FE:
      return {h - p.y, w - p.x};
  }
  return p;
}

Point orientedSize(Orient o, Dbu w, Dbu h)
{
  switch (o) {
    case Orient::E:
    case Orient::W:
    case Orient::FE:
    case Orient::FW:
      return {h, w};
    default:
      return {w, h};
  }
}

}  // namespace rpd
