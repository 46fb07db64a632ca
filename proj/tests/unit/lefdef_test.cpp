// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <random>
#include <regex>

#include "json.hpp"
#include "rpd/core/digest.h"
#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/core/validate.h"
#include "rpd/io/lefdef.h"
#include "test_support.h"

namespace rpd::lefdef {
namespace {

Errc codeOf(const std::function<void()>& fn, std::string* what = nullptr)
{
  try {
    fn();
  } catch (const Error& e) {
    if (what != nullptr) {
      *what = e.what();
    }
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInvalidArgument;
}

nlohmann::json expected()
{
  std::ifstream in(test::fixture("lefdef/basic/expected.json"));
  return nlohmann::json::parse(in);
}

LefSubset basicLef()
{
  return parseLef(readFile(test::fixture("lefdef/basic/tech.lef")));
}

// Library matching test::tinyLibraryDesign(), as LEF.
LefSubset tinyLef()
{
  const Design d = test::tinyLibraryDesign();
  LefSubset lef;
  lef.tech.layers.push_back({"M1", LayerKind::kRouting, 200, 100, 100, LayerDir::kHorizontal});
  lef.tech.sites = d.sites;
  lef.macros = d.masters;
  return lef;
}

TEST(Lef, OneLayerOneMacro)
{
  const LefSubset lef = parseLef(R"(
UNITS DATABASE MICRONS 1000 ; END UNITS
LAYER M1 TYPE ROUTING ; DIRECTION HORIZONTAL ; PITCH 0.2 ; WIDTH 0.1 ; END M1
MACRO BUF SIZE 1 BY 1 ;
  PIN A DIRECTION INPUT ; PORT LAYER M1 ; RECT 0 0 0.2 0.2 ; END END A
END BUF
END LIBRARY
)");
  ASSERT_EQ(lef.tech.layers.size(), 1u);
  ASSERT_EQ(lef.macros.size(), 1u);
  ASSERT_EQ(lef.macros[0].pins.size(), 1u);
  EXPECT_EQ(lef.macros[0].width, 1000);
  EXPECT_EQ(lef.macros[0].pins[0].dir, PinDir::kInput);
  EXPECT_EQ(lef.macros[0].pins[0].offset, (Point{100, 100}));
  EXPECT_EQ(lef.tech.layers[0].pitch, 200);
}

TEST(Lef, UnitsOnlyGivesEmptyCollections)
{
  const LefSubset lef = parseLef("UNITS\n  DATABASE MICRONS 2000 ;\nEND UNITS\n");
  EXPECT_EQ(lef.tech.units, 2000);
  EXPECT_TRUE(lef.tech.layers.empty());
  EXPECT_TRUE(lef.tech.sites.empty());
  EXPECT_TRUE(lef.tech.vias.empty());
  EXPECT_TRUE(lef.macros.empty());
}

TEST(Lef, BasicFixtureCountsAndViaResistance)
{
  const auto ex = expected();
  const LefSubset lef = basicLef();
  EXPECT_EQ(lef.tech.layers.size(), ex["layers"].get<std::size_t>());
  EXPECT_EQ(lef.tech.countKind(LayerKind::kRouting), ex["routing_layers"].get<std::size_t>());
  EXPECT_EQ(lef.macros.size(), ex["macros"].get<std::size_t>());
  EXPECT_EQ(lef.tech.sites.size(), ex["sites"].get<std::size_t>());
  ASSERT_EQ(lef.tech.vias.size(), ex["vias"].get<std::size_t>());
  EXPECT_EQ(lef.tech.vias[0].resistance, ex["via_resistance"].get<double>());
  EXPECT_EQ(lef.tech.vias[0].bottom, "M1");
  EXPECT_EQ(lef.tech.vias[0].cut, "V1");
  EXPECT_EQ(lef.tech.vias[0].top, "M2");
  EXPECT_EQ(lef.tech.vias[0].cut_rect, (Rect{-35, -35, 35, 35}));
  // MANUFACTURINGGRID and the VIARULE block are skipped with warnings.
  EXPECT_EQ(lef.warnings.size(), 2u);
  const Master* inv = lef.findMacro("INV_X1");
  ASSERT_NE(inv, nullptr);
  EXPECT_EQ(inv->findPin("VDD")->use, PinUse::kPower);
  EXPECT_EQ(inv->obs.size(), 1u);
  EXPECT_EQ(lef.tech.findLayer("M1")->spacing, 65);
}

TEST(Lef, UndeclaredPortLayerIsSyntaxError)
{
  EXPECT_EQ(codeOf([] {
              parseLef("MACRO X SIZE 1 BY 1 ; PIN A PORT LAYER M9 ; RECT 0 0 1 1 ; END END A END X\n");
            }),
            Errc::kSyntax);
  EXPECT_EQ(codeOf([] { parseLef("MACRO X CLASS CORE ; END X\n"); }), Errc::kSyntax);
}

TEST(Lef, SequentialFilesMerge)
{
  const std::string tech = R"(UNITS DATABASE MICRONS 1000 ; END UNITS
LAYER M1 TYPE ROUTING ; END M1
)";
  const std::string cells = "MACRO C SIZE 1 BY 1 ; PIN Z DIRECTION OUTPUT ; PORT LAYER M1 ; RECT 0 0 1 1 ; END END Z END C\n";
  const LefSubset lef = parseLef(cells, parseLef(tech));
  EXPECT_EQ(lef.tech.layers.size(), 1u);
  EXPECT_EQ(lef.macros.size(), 1u);
}

TEST(Lef, TierTagsFromNames)
{
  const LefSubset lef = parseLef(R"(MACRO A_bottom SIZE 1 BY 1 ; END A_bottom
MACRO A_upper_cover CLASS COVER ; SIZE 1 BY 1 ; END A_upper_cover
MACRO A SIZE 1 BY 1 ; END A
)");
  EXPECT_EQ(lef.macros[0].tier_tag, TierTag::kBottom);
  EXPECT_EQ(lef.macros[1].tier_tag, TierTag::kUpper);
  EXPECT_TRUE(lef.macros[1].isCover());
  EXPECT_EQ(lef.macros[2].tier_tag, TierTag::kNone);
}

TEST(Lef, WriteParsePreservesLayersAndMasters)
{
  LefSubset lef = basicLef();
  lef.macros[0].pins[0].hidden = true;
  const std::string text = writeLef(lef);
  EXPECT_EQ(text.rfind("# generated-by rosetta-pd 0.1.0\n", 0), 0u);
  const LefSubset back = parseLef(text);
  EXPECT_EQ(back.tech.layers, lef.tech.layers);
  EXPECT_EQ(back.tech.sites, lef.tech.sites);
  EXPECT_EQ(back.tech.vias, lef.tech.vias);
  EXPECT_EQ(libraryDigest(back.macros), libraryDigest(lef.macros));
  EXPECT_TRUE(back.macros[0].pins[0].hidden);
}

TEST(Lef, CompatibilityLayerNamesRoundTrip)
{
  TechStack t;
  for (const char* name : {"M1", "V1", "M2", "V2", "M2_add", "V3", "M3_add"}) {
    const bool cut = name[0] == 'V';
    t.layers.push_back({name, cut ? LayerKind::kCut : LayerKind::kRouting,
                        cut ? 150 : 190, 70, cut ? 80 : 65,
                        cut ? LayerDir::kNone : LayerDir::kVertical});
  }
  const LefSubset back = parseLef(writeLef(t, {}));
  EXPECT_EQ(back.tech.layers, t.layers);
}

TEST(Def, TwoComponentsOneNet)
{
  const auto ex = expected();
  std::vector<std::string> warnings;
  const Design d = parseDef(readFile(test::fixture("lefdef/basic/two_comp.def")),
                            basicLef(),
                            &warnings);
  EXPECT_EQ(d.instances.size(), ex["components"].get<std::size_t>());
  EXPECT_EQ(d.nets.size(), ex["nets"].get<std::size_t>());
  EXPECT_EQ(d.io_pins.size(), ex["io_pins"].get<std::size_t>());
  EXPECT_EQ(d.rows.size(), ex["rows"].get<std::size_t>());
  EXPECT_TRUE(validateDesign(d).empty());
  EXPECT_EQ(d.name, "two_comp");
  EXPECT_EQ(d.die, (Rect{0, 0, 3800, 2800}));
  EXPECT_TRUE(d.instances[1].fixed);
  EXPECT_EQ(d.instances[1].orient, Orient::FS);
  EXPECT_EQ(d.nets[0].pins[0].dir, PinDir::kOutput);
  Dbu routed = 0;
  for (const WireSegment& w : d.nets[0].wires) {
    routed += w.length();
  }
  EXPECT_EQ(routed, ex["routed_length_dbu"].get<Dbu>());
  ASSERT_EQ(d.nets[0].vias.size(), 1u);
  EXPECT_EQ(d.nets[0].vias[0].at, (Point{1235, 700}));
  // TRACKS, GCELLGRID, VIAS, SPECIALNETS.
  EXPECT_EQ(warnings.size(), 4u);
  EXPECT_EQ(d.io_pins[0].shape, (Rect{-35, -70, 35, 70}));
}

TEST(Def, ZeroComponentsUsesDieArea)
{
  const Design d = parseDef("DESIGN e ;\nUNITS DISTANCE MICRONS 1000 ;\nDIEAREA ( 0 0 ) ( 500 700 ) ;\nEND DESIGN\n",
                            basicLef());
  EXPECT_TRUE(d.instances.empty());
  EXPECT_EQ(d.die, (Rect{0, 0, 500, 700}));
  EXPECT_EQ(d.core, d.die);
  EXPECT_TRUE(validateDesign(d).empty());
}

TEST(Def, UnknownMacroNamed)
{
  std::string what;
  EXPECT_EQ(codeOf([] {
              parseDef("DIEAREA ( 0 0 ) ( 10 10 ) ;\nCOMPONENTS 1 ;\n - u1 NOPE_X1 + UNPLACED ;\nEND COMPONENTS\nEND DESIGN\n",
                       basicLef());
            },
                   &what),
            Errc::kUnknownMaster);
  EXPECT_NE(what.find("NOPE_X1"), std::string::npos);
}

TEST(Def, NonCanonicalOrientationIsSyntax)
{
  EXPECT_EQ(codeOf([] {
              parseDef("DIEAREA ( 0 0 ) ( 9000 9000 ) ;\nCOMPONENTS 1 ;\n - u1 INV_X1 + PLACED ( 0 0 ) R90 ;\nEND COMPONENTS\nEND DESIGN\n",
                       basicLef());
            }),
            Errc::kSyntax);
}

TEST(Def, InconsistentContentIsRejected)
{
  // Component outside the die would fail validation; parse refuses it.
  EXPECT_EQ(codeOf([] {
              parseDef("DIEAREA ( 0 0 ) ( 100 100 ) ;\nCOMPONENTS 1 ;\n - u1 INV_X1 + PLACED ( 0 0 ) N ;\nEND COMPONENTS\nEND DESIGN\n",
                       basicLef());
            }),
            Errc::kSyntax);
}

TEST(Def, RoundTripTwoComponents)
{
  const LefSubset lef = basicLef();
  const Design d = parseDef(readFile(test::fixture("lefdef/basic/two_comp.def")), lef);
  const std::string text = writeDef(d);
  EXPECT_EQ(text.rfind("# generated-by rosetta-pd 0.1.0\n", 0), 0u);
  const Design back = parseDef(text, lef);
  EXPECT_EQ(canonicalDigest(back), canonicalDigest(d));
  EXPECT_EQ(writeDef(back), text);
}

TEST(Def, RoundTripKeepsWeightsTiersAndTies)
{
  Design d = test::randomDesign(4, 40, 45, 3);
  d.nets[0].weight = 2.5;
  d.nets[1].weight = 4;
  d.instances[0].tie_offs = {"B"};
  d.instances[1].tier = Tier::kUpper;
  d.core = {0, 0, 1000, 1000};
  LefSubset lef = tinyLef();
  const Design back = parseDef(writeDef(d), lef);
  EXPECT_EQ(back.nets[0].weight, 2.5);
  EXPECT_EQ(back.nets[1].weight, 4.0);
  EXPECT_EQ(back.instances[0].tie_offs, std::vector<std::string>{"B"});
  EXPECT_EQ(back.instances[1].tier, Tier::kUpper);
  EXPECT_EQ(back.core, d.core);
  EXPECT_EQ(canonicalDigest(back), canonicalDigest(d));
}

TEST(Def, TenThousandInstanceRoundTripIsFast)
{
  const Design d = test::randomDesign(8, 10000, 11000, 40);
  const LefSubset lef = tinyLef();
  const auto start = std::chrono::steady_clock::now();
  const Design back = parseDef(writeDef(d), lef);
  const double seconds
      = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(canonicalDigest(back), canonicalDigest(d));
  EXPECT_LT(seconds, 5.0);
}

// Damaged DEF text either fails with an error or yields a valid design.
TEST(Def, ParseNeverYieldsInvalidDesign)
{
  const LefSubset lef = tinyLef();
  const std::string text = writeDef(test::randomDesign(12, 30, 30, 3));
  std::mt19937 gen(3);
  int accepted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::string damaged = text;
    const int edits = 1 + static_cast<int>(gen() % 3);
    for (int e = 0; e < edits; ++e) {
      const std::size_t at = gen() % damaged.size();
      const std::size_t len = 1 + gen() % 12;
      switch (gen() % 3) {
        case 0:
          damaged.erase(at, len);
          break;
        case 1:
          damaged.insert(at, damaged.substr(gen() % damaged.size(), len));
          break;
        default:
          damaged[at] = "0123456789 ;()-+"[gen() % 16];
      }
    }
    try {
      const Design d = parseDef(damaged, lef);
      EXPECT_TRUE(validateDesign(d).empty());
      ++accepted;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(Netlist, SingleInstanceTwoPortConnections)
{
  Design d = test::tinyLibraryDesign();
  d.die = {0, 0, 1000, 1000};
  d.core = d.die;
  d.instances.push_back({"u0", "INV", {}, Orient::N, false, {}, {}});
  Net n;
  n.name = "loop";
  n.pins = {NetPin::instPin("u0", "Y", PinDir::kOutput), NetPin::instPin("u0", "A", PinDir::kInput)};
  d.nets.push_back(n);
  const std::string text = writeStructuralNetlist(d);
  const std::regex inst(R"(\bINV\s+u0\s*\()");
  EXPECT_EQ(std::distance(std::sregex_iterator(text.begin(), text.end(), inst),
                          std::sregex_iterator()),
            1);
  const std::regex conn(R"(\.\w+\(loop\))");
  EXPECT_EQ(std::distance(std::sregex_iterator(text.begin(), text.end(), conn),
                          std::sregex_iterator()),
            2);
  EXPECT_EQ(text.rfind("// generated-by rosetta-pd", 0), 0u);
}

TEST(Netlist, HiddenPinIsTiedToConstant)
{
  Design d = test::tinyLibraryDesign();
  d.die = {0, 0, 1000, 1000};
  d.core = d.die;
  d.masters[1].pins[1].hidden = true;  // NAND2.B
  d.instances.push_back({"g", "NAND2", {}, Orient::N, false, {}, {}});
  const std::string text = writeStructuralNetlist(d);
  EXPECT_NE(text.find(".B(1'b0)"), std::string::npos) << text;
  const Design back = readStructuralNetlist(text, d.masters);
  EXPECT_TRUE(back.instances[0].tie_offs.empty());
}

TEST(Netlist, ConnectivityDigestSurvivesReingestion)
{
  Design d = test::randomDesign(500, 499, 560, 12);
  d.instances.push_back({"spare", "NAND2", {}, Orient::N, false, {}, {"A", "B"}});
  const std::string text = writeStructuralNetlist(d);
  const Design back = readStructuralNetlist(text, d.masters);
  EXPECT_EQ(back.instances.size(), 500u);
  EXPECT_EQ(connectivityDigest(back), connectivityDigest(d));
  EXPECT_EQ(back.instances.back().tie_offs, (std::vector<std::string>{"A", "B"}));
}

TEST(Netlist, NetWithTwoIoPinsUsesAssign)
{
  Design d = test::randomDesign(9, 10, 10, 4);
  d.nets[0].pins.push_back(NetPin::ioPin("io3", PinDir::kInput));
  d.nets[3].pins.erase(std::remove_if(d.nets[3].pins.begin(), d.nets[3].pins.end(),
                                      [](const NetPin& p) { return p.io; }),
                       d.nets[3].pins.end());
  ASSERT_TRUE(validateDesign(d).empty());
  const std::string text = writeStructuralNetlist(d);
  EXPECT_NE(text.find("assign io3 = io0;"), std::string::npos) << text;
  EXPECT_EQ(connectivityDigest(readStructuralNetlist(text, d.masters)), connectivityDigest(d));
}

TEST(Netlist, SanitizationCollision)
{
  Design d = test::tinyLibraryDesign();
  d.die = {0, 0, 1000, 1000};
  d.core = d.die;
  d.instances.push_back({"a.b", "INV", {}, Orient::N, false, {}, {}});
  d.instances.push_back({"a_b", "INV", {}, Orient::N, false, {}, {}});
  EXPECT_EQ(codeOf([&] { writeStructuralNetlist(d); }), Errc::kNameCollision);
  EXPECT_EQ(sanitizeIdentifier("3x[1]"), "_3x_1_");
  EXPECT_EQ(sanitizeIdentifier("ok_name$1"), "ok_name$1");
}

}  // namespace
}  // namespace rpd::lefdef
