// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpd/core/geometry.h"

namespace rpd {

enum class PinDir
{
  kInput,
  kOutput,
  kInout,
};

enum class PinUse
{
  kSignal,
  kClock,
  kPower,
  kGround,
};

enum class CellClass
{
  kCore,
  kCover,
};

enum class Tier
{
  kBottom,
  kUpper,
};

enum class TierTag
{
  kNone,
  kBottom,
  kUpper,
};

std::string_view pinDirName(PinDir d);
std::optional<PinDir> parsePinDir(std::string_view s);
std::string_view pinUseName(PinUse u);
std::string_view tierName(Tier t);
std::string_view tierTagName(TierTag t);
TierTag tagOf(Tier t);
std::optional<Tier> tierOf(TierTag t);
PinDir flipped(PinDir d);

struct LayerRect
{
  std::string layer;
  Rect rect;

  friend bool operator==(const LayerRect&, const LayerRect&) = default;
};

struct MasterPin
{
  std::string name;
  PinDir dir = PinDir::kInout;
  PinUse use = PinUse::kSignal;
  // Internal pin of a unified library view; never connected to a net.
  bool hidden = false;
  // Access point relative to the unrotated lower-left corner.
  Point offset;
  std::vector<LayerRect> shapes;

  friend bool operator==(const MasterPin&, const MasterPin&) = default;
};

struct Master
{
  std::string name;
  Dbu width = 0;
  Dbu height = 0;
  CellClass cell_class = CellClass::kCore;
  std::vector<MasterPin> pins;
  std::vector<LayerRect> obs;
  std::string site;
  TierTag tier_tag = TierTag::kNone;

  Area area() const { return width * height; }
  bool isCover() const { return cell_class == CellClass::kCover; }
  const MasterPin* findPin(std::string_view pin) const;
  // Signal pins that are neither hidden nor supply pins.
  std::size_t signalPinCount() const;

  friend bool operator==(const Master&, const Master&) = default;
};

struct Instance
{
  std::string name;
  std::string master;
  std::optional<Point> location;
  Orient orient = Orient::N;
  bool fixed = false;
  std::optional<Tier> tier;
  // Master pins connected to a constant in netlist views.
  std::vector<std::string> tie_offs;

  bool placed() const { return location.has_value(); }
};

// One pin on a net. Instance pins name a master pin of the owning
// instance; IO pins name a design IoPin (pin is empty). dir is the
// direction as seen by the net: a driver is kOutput.
struct NetPin
{
  std::string owner;
  std::string pin;
  bool io = false;
  PinDir dir = PinDir::kInout;
  // Access point relative to the IoPin location; unused for instance pins.
  Point io_offset;

  static NetPin instPin(std::string inst, std::string pin, PinDir dir);
  static NetPin ioPin(std::string name, PinDir dir, Point offset = {});
};

struct WireSegment
{
  std::string layer;
  Point from;
  Point to;

  Dbu length() const;
};

struct ViaRef
{
  std::string name;
  Point at;
};

struct Net
{
  std::string name;
  std::vector<NetPin> pins;
  double weight = 1.0;
  std::vector<WireSegment> wires;
  std::vector<ViaRef> vias;
};

struct IoPin
{
  std::string name;
  // Port direction of the design (INPUT drives the net from outside).
  PinDir dir = PinDir::kInout;
  std::optional<Point> location;
  // Port shape relative to location.
  Rect shape;
  std::string layer;
  std::optional<Tier> tier;
};

struct Site
{
  std::string name;
  Dbu width = 0;
  Dbu height = 0;

  friend bool operator==(const Site&, const Site&) = default;
};

struct Row
{
  std::string name;
  std::string site;
  Point origin;
  std::int64_t num_sites = 0;
  Dbu step = 0;
  Orient orient = Orient::N;
  TierTag tier = TierTag::kNone;

  Dbu width() const { return num_sites * step; }
};

struct Design
{
  std::string name;
  int units = kDefaultDbuPerMicron;
  Rect die;
  Rect core;
  std::vector<Site> sites;
  std::vector<Master> masters;
  std::vector<Instance> instances;
  std::vector<Net> nets;
  std::vector<Row> rows;
  std::vector<IoPin> io_pins;

  const Master* findMaster(std::string_view name) const;
  const Site* findSite(std::string_view name) const;
};

// Name lookup tables over a design. Invalidated by any structural edit.
class DesignIndex
{
 public:
  explicit DesignIndex(const Design& design);

  const Master* master(std::string_view name) const;
  const Instance* instance(std::string_view name) const;
  const IoPin* ioPin(std::string_view name) const;
  const Site* site(std::string_view name) const;
  // Master of the named instance, or nullptr.
  const Master* masterOf(std::string_view inst) const;
  std::optional<std::size_t> instanceIndex(std::string_view name) const;

 private:
  const Design* design_;
  std::unordered_map<std::string_view, std::size_t> masters_;
  std::unordered_map<std::string_view, std::size_t> instances_;
  std::unordered_map<std::string_view, std::size_t> io_pins_;
  std::unordered_map<std::string_view, std::size_t> sites_;
};

// Absolute location of a net pin, or nullopt when its owner is unplaced or
// unknown.
std::optional<Point> pinLocation(const DesignIndex& index, const NetPin& pin);

enum class LayerKind
{
  kRouting,
  kCut,
  kMasterslice,
};

enum class LayerDir
{
  kNone,
  kHorizontal,
  kVertical,
};

enum class LayerTier
{
  kBottom,
  kUpper,
  kBond,
};

std::string_view layerKindName(LayerKind k);
std::string_view layerDirName(LayerDir d);
std::string_view layerTierName(LayerTier t);

struct Layer
{
  std::string name;
  LayerKind kind = LayerKind::kRouting;
  Dbu pitch = 0;
  Dbu width = 0;
  Dbu spacing = 0;
  LayerDir direction = LayerDir::kNone;

  friend bool operator==(const Layer&, const Layer&) = default;
};

struct ViaDef
{
  std::string name;
  std::string bottom;
  std::string cut;
  std::string top;
  Rect cut_rect;
  double resistance = 0.0;

  friend bool operator==(const ViaDef&, const ViaDef&) = default;
};

struct TechStack
{
  std::string name;
  int units = kDefaultDbuPerMicron;
  std::vector<Layer> layers;
  std::vector<Site> sites;
  std::vector<ViaDef> vias;
  bool tiered = false;
  std::map<std::string, LayerTier> tier_of_layer;

  const Layer* findLayer(std::string_view name) const;
  std::optional<std::size_t> layerIndex(std::string_view name) const;
  const Site* findSite(std::string_view name) const;
  std::size_t countKind(LayerKind kind) const;
};

}  // namespace rpd
