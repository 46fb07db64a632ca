// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/design.h"

#include <cstdlib>

namespace rpd {

std::string_view pinDirName(PinDir d)
{
  switch (d) {
    case PinDir::kInput:
      return "INPUT";
    case PinDir::kOutput:
      return "OUTPUT";
    case PinDir::kInout:
      return "INOUT";
  }
  return "INOUT";
}

std::optional<PinDir> parsePinDir(std::string_view s)
{
  if (s == "INPUT") {
    return PinDir::kInput;
  }
  if (s == "OUTPUT") {
    return PinDir::kOutput;
  }
  if (s == "INOUT" || s == "FEEDTHRU") {
    return PinDir::kInout;
  }
  return std::nullopt;
}

std::string_view pinUseName(PinUse u)
{
  switch (u) {
    case PinUse::kSignal:
      return "SIGNAL";
    case PinUse::kClock:
      return "CLOCK";
    case PinUse::kPower:
      return "POWER";
    case PinUse::kGround:
      return "GROUND";
  }
  return "SIGNAL";
}

std::string_view tierName(Tier t)
{
  return t == Tier::kBottom ? "BOTTOM" : "UPPER";
}

std::string_view tierTagName(TierTag t)
{
  switch (t) {
    case TierTag::kNone:
      return "NONE";
    case TierTag::kBottom:
      return "BOTTOM";
    case TierTag::kUpper:
      return "UPPER";
  }
  return "NONE";
}

TierTag tagOf(Tier t)
{
  return t == Tier::kBottom ? TierTag::kBottom : TierTag::kUpper;
}

std::optional<Tier> tierOf(TierTag t)
{
  switch (t) {
    case TierTag::kBottom:
      return Tier::kBottom;
    case TierTag::kUpper:
      return Tier::kUpper;
    case TierTag::kNone:
      break;
  }
  return std::nullopt;
}

PinDir flipped(PinDir d)
{
  switch (d) {
    case PinDir::kInput:
      return PinDir::kOutput;
    case PinDir::kOutput:
      return PinDir::kInput;
    case PinDir::kInout:
      break;
  }
  return PinDir::kInout;
}

const MasterPin* Master::findPin(std::string_view pin) const
{
  for (const MasterPin& p : pins) {
    if (p.name == pin) {
      return &p;
    }
  }
  return nullptr;
}

std::size_t Master::signalPinCount() const
{
  std::size_t n = 0;
  for (const MasterPin& p : pins) {
    if (!p.hidden && p.use != PinUse::kPower && p.use != PinUse::kGround) {
      ++n;
    }
  }
  return n;
}

NetPin NetPin::instPin(std::string inst, std::string pin, PinDir dir)
{
  NetPin p;
  p.owner = std::move(inst);
  p.pin = std::move(pin);
  p.dir = dir;
  return p;
}

NetPin NetPin::ioPin(std::string name, PinDir dir, Point offset)
{
  NetPin p;
  p.owner = std::move(name);
  p.io = true;
  p.dir = dir;
  p.io_offset = offset;
  return p;
}

Dbu WireSegment::length() const
{
  return std::llabs(to.x - from.x) + std::llabs(to.y - from.y);
}

const Master* Design::findMaster(std::string_view n) const
{
  for (const Master& m : masters) {
    if (m.name == n) {
      return &m;
    }
  }
  return nullptr;
}

const Site* Design::findSite(std::string_view n) const
{
  for (const Site& s : sites) {
    if (s.name == n) {
      return &s;
    }
  }
  return nullptr;
}

DesignIndex::DesignIndex(const Design& design) : design_(&design)
{
  // First occurrence wins for duplicate names.
  for (std::size_t i = 0; i < design.masters.size(); ++i) {
    masters_.try_emplace(design.masters[i].name, i);
  }
  for (std::size_t i = 0; i < design.instances.size(); ++i) {
    instances_.try_emplace(design.instances[i].name, i);
  }
  for (std::size_t i = 0; i < design.io_pins.size(); ++i) {
    io_pins_.try_emplace(design.io_pins[i].name, i);
  }
  for (std::size_t i = 0; i < design.sites.size(); ++i) {
    sites_.try_emplace(design.sites[i].name, i);
  }
}

const Master* DesignIndex::master(std::string_view name) const
{
  auto it = masters_.find(name);
  return it == masters_.end() ? nullptr : &design_->masters[it->second];
}

const Instance* DesignIndex::instance(std::string_view name) const
{
  auto it = instances_.find(name);
  return it == instances_.end() ? nullptr : &design_->instances[it->second];
}

const IoPin* DesignIndex::ioPin(std::string_view name) const
{
  auto it = io_pins_.find(name);
  return it == io_pins_.end() ? nullptr : &design_->io_pins[it->second];
}

const Site* DesignIndex::site(std::string_view name) const
{
  auto it = sites_.find(name);
  return it == sites_.end() ? nullptr : &design_->sites[it->second];
}

const Master* DesignIndex::masterOf(std::string_view inst) const
{
  const Instance* i = instance(inst);
  return i == nullptr ? nullptr : master(i->master);
}

std::optional<std::size_t> DesignIndex::instanceIndex(
    std::string_view name) const
{
  auto it = instances_.find(name);
  if (it == instances_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<Point> pinLocation(const DesignIndex& index, const NetPin& pin)
{
  if (pin.io) {
    const IoPin* io = index.ioPin(pin.owner);
    if (io == nullptr || !io->location) {
      return std::nullopt;
    }
    return Point{io->location->x + pin.io_offset.x,
                 io->location->y + pin.io_offset.y};
  }
  const Instance* inst = index.instance(pin.owner);
  if (inst == nullptr || !inst->location) {
    return std::nullopt;
  }
  const Master* master = index.master(inst->master);
  if (master == nullptr) {
    return std::nullopt;
  }
  const MasterPin* mp = master->findPin(pin.pin);
  const Point offset = mp != nullptr ? mp->offset : Point{};
  const Point t
      = transformOffset(offset, inst->orient, master->width, master->height);
  return Point{inst->location->x + t.x, inst->location->y + t.y};
}

std::string_view layerKindName(LayerKind k)
{
  switch (k) {
    case LayerKind::kRouting:
      return "ROUTING";
    case LayerKind::kCut:
      return "CUT";
    case LayerKind::kMasterslice:
      return "MASTERSLICE";
  }
  return "ROUTING";
}

std::string_view layerDirName(LayerDir d)
{
  switch (d) {
    case LayerDir::kHorizontal:
      return "HORIZONTAL";
    case LayerDir::kVertical:
      return "VERTICAL";
    case LayerDir::kNone:
      break;
  }
  return "NONE";
}

std::string_view layerTierName(LayerTier t)
{
  switch (t) {
    case LayerTier::kBottom:
      return "BOTTOM";
    case LayerTier::kUpper:
      return "UPPER";
    case LayerTier::kBond:
      return "BOND";
  }
  return "BOTTOM";
}

const Layer* TechStack::findLayer(std::string_view n) const
{
  for (const Layer& l : layers) {
    if (l.name == n) {
      return &l;
    }
  }
  return nullptr;
}

std::optional<std::size_t> TechStack::layerIndex(std::string_view n) const
{
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].name == n) {
      return i;
    }
  }
  return std::nullopt;
}

const Site* TechStack::findSite(std::string_view n) const
{
  for (const Site& s : sites) {
    if (s.name == n) {
      return &s;
    }
  }
  return nullptr;
}

std::size_t TechStack::countKind(LayerKind kind) const
{
  std::size_t n = 0;
  for (const Layer& l : layers) {
    n += l.kind == kind ? 1 : 0;
  }
  return n;
}

}  // namespace rpd
