// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpd/core/design.h"

// Bookshelf placement benchmark family (.aux/.nodes/.nets/.wts/.pl/.scl).
namespace rpd::bookshelf {

enum class NodeKind
{
  kMovable,
  kTerminal,
  kTerminalNi,
};

struct NodeRecord
{
  std::string name;
  double width = 0.0;
  double height = 0.0;
  NodeKind kind = NodeKind::kMovable;

  bool terminal() const { return kind != NodeKind::kMovable; }
};

struct PinRecord
{
  std::string node;
  // 'I', 'O', 'B', or '\0' when the file gives no direction.
  char dir = '\0';
  // Offset from the node center; absent offsets mean the center.
  double dx = 0.0;
  double dy = 0.0;
};

struct NetRecord
{
  std::string name;
  std::vector<PinRecord> pins;
};

struct PlRecord
{
  std::string name;
  double x = 0.0;
  double y = 0.0;
  std::string orient = "N";
  bool fixed = false;
  bool fixed_ni = false;
};

struct RowRecord
{
  double coordinate = 0.0;
  double height = 0.0;
  double site_width = 0.0;
  double site_spacing = 0.0;
  std::string site_orient = "N";
  std::string site_symmetry = "1";
  double subrow_origin = 0.0;
  std::int64_t num_sites = 0;
};

struct WeightRecord
{
  std::string name;
  double weight = 1.0;
};

// Member files named by the .aux manifest, as written there.
struct Manifest
{
  std::string directory;
  std::string design;
  std::string nodes;
  std::string nets;
  std::string wts;
  std::string pl;
  std::string scl;
};

struct Bundle
{
  Manifest aux;
  std::vector<NodeRecord> nodes;
  std::vector<NetRecord> nets;
  std::vector<PlRecord> pl;
  std::vector<RowRecord> rows;
  std::vector<WeightRecord> wts;
  std::vector<std::string> warnings;

  std::size_t pinCount() const;
  std::size_t terminalCount() const;
};

struct ParseOptions
{
  // Unknown trailing tokens are SYNTAX errors when strict, warnings
  // otherwise.
  bool strict = true;
  // Parse member files concurrently.
  bool parallel = true;
};

// Errors: MISSING_FILE, HEADER_MISMATCH, SYNTAX (file:line:col),
// UNKNOWN_NODE.
Bundle parseBookshelf(const std::string& aux_path, const ParseOptions& opts = {});

// Builds a design: one synthetic master per (width, height, movability)
// named BKS_w{W}_h{H}_{mov|fix}, terminals become IO pins, scl rows become
// rows. Master pins are derived from net pin offsets and directions.
// Net weights come from .wts entries that name a net.
// Errors: SCALE_OVERFLOW.
Design bundleToDesign(const Bundle& bundle, int units = kDefaultDbuPerMicron);

// Inverse view of a design as Bookshelf records (microns = DBU / units).
Bundle designToBundle(const Design& design);

// Writes <dir>/<design>.{aux,nodes,nets,wts,pl,scl}. Errors: IO_FAILURE.
Manifest writeBundle(const Bundle& bundle, const std::string& dir);

Manifest writeBookshelf(const Design& design, const std::string& dir);

// Name of the synthetic master pin for a Bookshelf pin entry.
std::string derivedPinName(PinDir dir, Point offset);

}  // namespace rpd::bookshelf
