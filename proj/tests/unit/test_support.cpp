// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "test_support.h"

#include <fmt/core.h>

#include <random>

namespace rpd::test {

std::string fixture(const std::string& relative)
{
  return std::string(RPD_FIXTURE_DIR) + "/" + relative;
}

TempDir::TempDir()
{
  static int counter = 0;
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path()
          / fmt::format("rpd-test-{}-{}", rd(), counter++);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir()
{
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

namespace {

Master cell(const std::string& name, bool nand)
{
  Master m;
  m.name = name;
  m.width = nand ? 300 : 200;
  m.height = 1000;
  m.site = "unit";
  auto pin = [](std::string n, PinDir d, Dbu x) {
    MasterPin p;
    p.name = std::move(n);
    p.dir = d;
    p.shapes.push_back({"M1", {x - 10, 490, x + 10, 510}});
    p.offset = {x, 500};
    return p;
  };
  m.pins.push_back(pin("A", PinDir::kInput, 50));
  if (nand) {
    m.pins.push_back(pin("B", PinDir::kInput, 150));
  }
  m.pins.push_back(pin("Y", PinDir::kOutput, m.width - 50));
  return m;
}

}  // namespace

Design tinyLibraryDesign()
{
  Design d;
  d.name = "tiny";
  d.units = 1000;
  d.sites.push_back({"unit", 100, 1000});
  d.masters.push_back(cell("INV", false));
  d.masters.push_back(cell("NAND2", true));
  return d;
}

Design randomDesign(std::uint64_t seed, int instances, int nets, int ios)
{
  std::mt19937_64 rng(seed);
  Design d = tinyLibraryDesign();
  d.name = fmt::format("rand{}", seed);
  const int per_row = 40;
  const int rows = std::max(1, (instances + per_row - 1) / per_row * 2);
  for (int r = 0; r < rows; ++r) {
    Row row;
    row.name = fmt::format("ROW_{}", r);
    row.site = "unit";
    row.origin = {0, r * 1000};
    row.num_sites = per_row * 3 + 10;
    row.step = 100;
    d.rows.push_back(row);
  }
  d.die = {0, 0, (per_row * 3 + 10) * 100, rows * 1000};
  d.core = d.die;
  for (int i = 0; i < instances; ++i) {
    Instance inst;
    inst.name = fmt::format("u{}", i);
    inst.master = rng() % 2 == 0 ? "INV" : "NAND2";
    inst.location = Point{(i % per_row) * 300, (i / per_row) * 2000};
    d.instances.push_back(inst);
  }
  for (int i = 0; i < ios; ++i) {
    IoPin io;
    io.name = fmt::format("io{}", i);
    io.dir = i % 2 == 0 ? PinDir::kInput : PinDir::kOutput;
    io.location = Point{0, static_cast<Dbu>(i * 10)};
    io.shape = {-5, -5, 5, 5};
    io.layer = "M1";
    d.io_pins.push_back(io);
  }
  std::vector<std::vector<bool>> used(instances, std::vector<bool>(3, false));
  for (int n = 0; n < nets; ++n) {
    Net net;
    net.name = fmt::format("n{}", n);
    const int degree = 2 + static_cast<int>(rng() % 3);
    for (int k = 0; k < degree * 4 && static_cast<int>(net.pins.size()) < degree; ++k) {
      const int i = static_cast<int>(rng() % instances);
      const Master* m = d.findMaster(d.instances[i].master);
      const int p = static_cast<int>(rng() % m->pins.size());
      if (used[i][p]) {
        continue;
      }
      used[i][p] = true;
      net.pins.push_back(NetPin::instPin(d.instances[i].name, m->pins[p].name, m->pins[p].dir));
    }
    if (n < ios) {
      const IoPin& io = d.io_pins[n];
      net.pins.push_back(NetPin::ioPin(io.name, flipped(io.dir)));
    }
    if (!net.pins.empty()) {
      d.nets.push_back(std::move(net));
    }
  }
  return d;
}

}  // namespace rpd::test
