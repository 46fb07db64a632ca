// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/digest.h"

#include <fmt/core.h>
#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/core/validate.h"

namespace rpd {

std::string sha256Hex(std::string_view data)
{
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
      || EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1
      || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    fmt::format_to(std::back_inserter(hex), "{:02x}", md[i]);
  }
  return hex;
}

namespace {

std::string rectKey(const Rect& r)
{
  return fmt::format("{},{},{},{}", r.xlo, r.ylo, r.xhi, r.yhi);
}

std::string layerRectsKey(const std::vector<LayerRect>& shapes)
{
  std::vector<std::string> keys;
  keys.reserve(shapes.size());
  for (const LayerRect& s : shapes) {
    keys.push_back(s.layer + "@" + rectKey(s.rect));
  }
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const std::string& k : keys) {
    out += k;
    out += ';';
  }
  return out;
}

std::string masterKey(const Master& m)
{
  std::vector<std::string> pins;
  for (const MasterPin& p : m.pins) {
    pins.push_back(fmt::format("{}|{}|{}|{}|{},{}|{}",
                               p.name,
                               pinDirName(p.dir),
                               pinUseName(p.use),
                               p.hidden ? 1 : 0,
                               p.offset.x,
                               p.offset.y,
                               layerRectsKey(p.shapes)));
  }
  std::sort(pins.begin(), pins.end());
  std::string key = fmt::format("M|{}|{}|{}|{}|{}|{}|{}",
                                m.name,
                                m.width,
                                m.height,
                                m.isCover() ? "COVER" : "CORE",
                                m.site,
                                tierTagName(m.tier_tag),
                                layerRectsKey(m.obs));
  for (const std::string& p : pins) {
    key += "\n  ";
    key += p;
  }
  return key;
}

std::string instanceKey(const Instance& i)
{
  std::vector<std::string> ties = i.tie_offs;
  std::sort(ties.begin(), ties.end());
  std::string loc = i.location
                        ? fmt::format("{},{}", i.location->x, i.location->y)
                        : std::string("-");
  std::string key = fmt::format("I|{}|{}|{}|{}|{}|{}|",
                                i.name,
                                i.master,
                                loc,
                                orientName(i.orient),
                                i.fixed ? 1 : 0,
                                i.tier ? tierName(*i.tier) : "-");
  for (const std::string& t : ties) {
    key += t;
    key += ';';
  }
  return key;
}

std::string netPinKey(const NetPin& p)
{
  if (p.io) {
    return fmt::format("P:{}:{}:{},{}",
                       p.owner,
                       pinDirName(p.dir),
                       p.io_offset.x,
                       p.io_offset.y);
  }
  return fmt::format("I:{}:{}:{}", p.owner, p.pin, pinDirName(p.dir));
}

std::string netKey(const Net& n)
{
  std::vector<std::string> pins;
  pins.reserve(n.pins.size());
  for (const NetPin& p : n.pins) {
    pins.push_back(netPinKey(p));
  }
  std::sort(pins.begin(), pins.end());
  std::vector<std::string> wires;
  for (const WireSegment& w : n.wires) {
    wires.push_back(fmt::format(
        "{}:{},{}-{},{}", w.layer, w.from.x, w.from.y, w.to.x, w.to.y));
  }
  for (const ViaRef& v : n.vias) {
    wires.push_back(fmt::format("V:{}:{},{}", v.name, v.at.x, v.at.y));
  }
  std::sort(wires.begin(), wires.end());
  std::string key = fmt::format("N|{}|{}|", n.name, formatDouble(n.weight));
  for (const std::string& p : pins) {
    key += p;
    key += ';';
  }
  key += '|';
  for (const std::string& w : wires) {
    key += w;
    key += ';';
  }
  return key;
}

std::string rowKey(const Row& r)
{
  return fmt::format("R|{}|{}|{},{}|{}|{}|{}|{}",
                     r.name,
                     r.site,
                     r.origin.x,
                     r.origin.y,
                     r.num_sites,
                     r.step,
                     orientName(r.orient),
                     tierTagName(r.tier));
}

std::string ioKey(const IoPin& p)
{
  std::string loc = p.location
                        ? fmt::format("{},{}", p.location->x, p.location->y)
                        : std::string("-");
  return fmt::format("P|{}|{}|{}|{}|{}|{}",
                     p.name,
                     pinDirName(p.dir),
                     loc,
                     rectKey(p.shape),
                     p.layer,
                     p.tier ? tierName(*p.tier) : "-");
}

void appendSorted(std::string& out,
                  std::string_view section,
                  std::vector<std::string> keys)
{
  std::sort(keys.begin(), keys.end());
  out += fmt::format("#{} {}\n", section, keys.size());
  for (const std::string& k : keys) {
    out += k;
    out += '\n';
  }
}

template <typename T, typename F>
std::vector<std::string> keysOf(const std::vector<T>& items, F&& f)
{
  std::vector<std::string> keys;
  keys.reserve(items.size());
  for (const T& item : items) {
    keys.push_back(f(item));
  }
  return keys;
}

}  // namespace

std::string canonicalDigest(const Design& design)
{
  requireValid(design);
  std::string text = fmt::format("design|{}|{}|{}|{}\n",
                                 design.name,
                                 design.units,
                                 rectKey(design.die),
                                 rectKey(design.core));
  appendSorted(text, "sites", keysOf(design.sites, [](const Site& s) {
                 return fmt::format("S|{}|{}|{}", s.name, s.width, s.height);
               }));
  appendSorted(text, "masters", keysOf(design.masters, masterKey));
  appendSorted(text, "instances", keysOf(design.instances, instanceKey));
  appendSorted(text, "io", keysOf(design.io_pins, ioKey));
  appendSorted(text, "nets", keysOf(design.nets, netKey));
  appendSorted(text, "rows", keysOf(design.rows, rowKey));
  return sha256Hex(text);
}

std::string connectivityDigest(const Design& design)
{
  std::string text;
  appendSorted(text, "instances", keysOf(design.instances, [](const Instance& i) {
                 return i.name;
               }));
  appendSorted(text, "io", keysOf(design.io_pins, [](const IoPin& p) {
                 return p.name;
               }));
  appendSorted(text, "nets", keysOf(design.nets, [](const Net& n) {
                 std::vector<std::string> pins;
                 for (const NetPin& p : n.pins) {
                   pins.push_back(fmt::format(
                       "{}:{}:{}", p.io ? 'P' : 'I', p.owner, pinDirName(p.dir)));
                 }
                 std::sort(pins.begin(), pins.end());
                 std::string key;
                 for (const std::string& p : pins) {
                   key += p;
                   key += ';';
                 }
                 return key;
               }));
  return sha256Hex(text);
}

std::string libraryDigest(std::span<const Master> masters)
{
  std::vector<std::string> keys;
  keys.reserve(masters.size());
  for (const Master& m : masters) {
    keys.push_back(masterKey(m));
  }
  std::string text;
  appendSorted(text, "masters", std::move(keys));
  return sha256Hex(text);
}

}  // namespace rpd
