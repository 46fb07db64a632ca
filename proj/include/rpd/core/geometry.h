// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>

namespace rpd {

// Database units. All geometry is integral; microns exist only at file
// boundaries.
using Dbu = std::int64_t;
using Area = std::int64_t;

inline constexpr int kDefaultDbuPerMicron = 1000;

struct Point
{
  Dbu x = 0;
  Dbu y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Rect
{
  Dbu xlo = 0;
  Dbu ylo = 0;
  Dbu xhi = 0;
  Dbu yhi = 0;

  Dbu width() const { return xhi - xlo; }
  Dbu height() const { return yhi - ylo; }
  Area area() const { return width() * height(); }
  bool valid() const { return xhi >= xlo && yhi >= ylo; }
  bool empty() const { return xhi <= xlo || yhi <= ylo; }

  bool contains(const Rect& r) const
  {
    return r.xlo >= xlo && r.ylo >= ylo && r.xhi <= xhi && r.yhi <= yhi;
  }

  // Positive-area overlap; abutting rectangles do not overlap.
  bool overlaps(const Rect& r) const
  {
    return std::max(xlo, r.xlo) < std::min(xhi, r.xhi)
           && std::max(ylo, r.ylo) < std::min(yhi, r.yhi);
  }

  Rect merged(const Rect& r) const
  {
    return {std::min(xlo, r.xlo),
            std::min(ylo, r.ylo),
            std::max(xhi, r.xhi),
            std::max(yhi, r.yhi)};
  }

  Point center2x() const { return {xlo + xhi, ylo + yhi}; }

  friend bool operator==(const Rect&, const Rect&) = default;
  friend auto operator<=>(const Rect&, const Rect&) = default;
};

// The eight DEF orientations.
enum class Orient
{
  N,
  S,
  E,
  W,
  FN,
  FS,
  FE,
  FW,
};

std::string_view orientName(Orient o);
std::optional<Orient> parseOrient(std::string_view token);

// Maps an offset inside an unrotated w x h cell to the offset inside the
// placed footprint under orientation o.
Point transformOffset(Point offset, Orient o, Dbu w, Dbu h);

// Footprint size after orientation (E/W/FE/FW swap width and height).
Point orientedSize(Orient o, Dbu w, Dbu h);

}  // namespace rpd
