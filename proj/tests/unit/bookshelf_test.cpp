// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "rpd/core/digest.h"
#include "rpd/core/error.h"
#include "rpd/core/stats.h"
#include "rpd/core/text.h"
#include "rpd/core/validate.h"
#include "rpd/io/bookshelf.h"
#include "test_support.h"

namespace rpd::bookshelf {
namespace {

Errc codeOf(const std::function<void()>& fn)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInvalidArgument;
}

std::string auxOf(const Manifest& m)
{
  return m.directory + "/" + m.design + ".aux";
}

// Writes a bundle from literal member texts and returns the .aux path.
std::string writeMembers(const test::TempDir& dir,
                         const std::string& nodes,
                         const std::string& nets,
                         const std::string& pl,
                         const std::string& scl = "UCLA scl 1.0\nNumRows : 0\n")
{
  writeFile(dir.file("x.aux"), "RowBasedPlacement : x.nodes x.nets x.pl x.scl\n");
  writeFile(dir.file("x.nodes"), nodes);
  writeFile(dir.file("x.nets"), nets);
  writeFile(dir.file("x.pl"), pl);
  writeFile(dir.file("x.scl"), scl);
  return dir.file("x.aux");
}

TEST(Bookshelf, EmptyFixture)
{
  const Bundle b = parseBookshelf(test::fixture("bookshelf/empty/empty.aux"));
  EXPECT_TRUE(b.nodes.empty());
  EXPECT_TRUE(b.nets.empty());
  EXPECT_TRUE(b.pl.empty());
  EXPECT_TRUE(b.rows.empty());
  const Design d = bundleToDesign(b);
  EXPECT_TRUE(validateDesign(d).empty());
}

TEST(Bookshelf, ThreeNodeFixtureMatchesHandCount)
{
  std::ifstream in(test::fixture("bookshelf/tiny3/expected.json"));
  const auto expected = nlohmann::json::parse(in);
  const Bundle b = parseBookshelf(test::fixture("bookshelf/tiny3/tiny3.aux"));
  EXPECT_EQ(b.nodes.size(), expected["nodes"].get<std::size_t>());
  EXPECT_EQ(b.nets.size(), expected["nets"].get<std::size_t>());
  EXPECT_EQ(b.pinCount(), expected["pins"].get<std::size_t>());
  EXPECT_EQ(b.terminalCount(), expected["terminals"].get<std::size_t>());
  EXPECT_EQ(b.rows.size(), expected["rows"].get<std::size_t>());

  const Design d = bundleToDesign(b, 1000);
  EXPECT_TRUE(validateDesign(d).empty());
  const double area_um2 = static_cast<double>(designStats(d).stdcell_area) / 1e6;
  EXPECT_DOUBLE_EQ(area_um2, expected["movable_area_um2"].get<double>());
  // .wts entries that name a net become its weight.
  EXPECT_EQ(d.nets[1].weight, 3.0);
  EXPECT_EQ(d.nets[0].weight, 1.0);
}

TEST(Bookshelf, HeaderMismatch)
{
  EXPECT_EQ(codeOf([] {
              parseBookshelf(test::fixture("bookshelf/header_mismatch/hm.aux"));
            }),
            Errc::kHeaderMismatch);
}

TEST(Bookshelf, MissingMember)
{
  EXPECT_EQ(codeOf([] {
              parseBookshelf(test::fixture("bookshelf/missing_member/mm.aux"));
            }),
            Errc::kMissingFile);
  EXPECT_EQ(codeOf([] { parseBookshelf("/nonexistent/x.aux"); }), Errc::kMissingFile);
}

TEST(Bookshelf, SyntaxErrorReportsLineAndColumn)
{
  test::TempDir dir;
  const std::string aux = writeMembers(dir,
                                       "UCLA nodes 1.0\nNumNodes : 1\nNumTerminals : 0\n  a  x1  1\n",
                                       "UCLA nets 1.0\nNumNets : 0\nNumPins : 0\n",
                                       "UCLA pl 1.0\n");
  try {
    parseBookshelf(aux);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSyntax);
    EXPECT_NE(std::string(e.what()).find("x.nodes:4:6"), std::string::npos) << e.what();
  }
}

TEST(Bookshelf, TrailingTokensStrictVersusLenient)
{
  test::TempDir dir;
  const std::string aux = writeMembers(dir,
                                       "UCLA nodes 1.0\nNumNodes : 1\nNumTerminals : 0\n  a 1 1 extra\n",
                                       "UCLA nets 1.0\nNumNets : 0\nNumPins : 0\n",
                                       "UCLA pl 1.0\n");
  EXPECT_EQ(codeOf([&] { parseBookshelf(aux); }), Errc::kSyntax);
  ParseOptions lenient;
  lenient.strict = false;
  const Bundle b = parseBookshelf(aux, lenient);
  EXPECT_EQ(b.nodes.size(), 1u);
  EXPECT_EQ(b.warnings.size(), 1u);
}

TEST(Bookshelf, UnknownNode)
{
  test::TempDir dir;
  const std::string aux = writeMembers(dir,
                                       "UCLA nodes 1.0\nNumNodes : 1\nNumTerminals : 0\n  a 1 1\n",
                                       "UCLA nets 1.0\nNumNets : 1\nNumPins : 2\nNetDegree : 2 n\n a I\n b O\n",
                                       "UCLA pl 1.0\n");
  EXPECT_EQ(codeOf([&] { parseBookshelf(aux); }), Errc::kUnknownNode);
}

TEST(Bookshelf, ScaleOverflow)
{
  Bundle b;
  b.nodes.push_back({"a", 1, 1, NodeKind::kMovable});
  b.pl.push_back({"a", 5e9, 0, "N", false, false});
  EXPECT_EQ(codeOf([&] { bundleToDesign(b, 1000); }), Errc::kScaleOverflow);
}

TEST(Bookshelf, SingleMovableNode)
{
  Bundle b;
  b.nodes.push_back({"a", 1, 1, NodeKind::kMovable});
  const Design d = bundleToDesign(b, 1000);
  EXPECT_EQ(d.masters.size(), 1u);
  EXPECT_EQ(d.instances.size(), 1u);
  EXPECT_TRUE(d.nets.empty());
  EXPECT_EQ(d.masters[0].name, "BKS_w1000_h1000_mov");
}

TEST(Bookshelf, FixedTerminalBecomesIoPin)
{
  Bundle b;
  b.nodes.push_back({"t", 2, 2, NodeKind::kTerminal});
  b.pl.push_back({"t", 3, 4, "N", true, false});
  const Design d = bundleToDesign(b, 1000);
  EXPECT_EQ(d.io_pins.size(), 1u);
  EXPECT_TRUE(d.instances.empty());
  EXPECT_EQ(d.io_pins[0].location, (Point{3000, 4000}));
  EXPECT_TRUE(validateDesign(d).empty());
}

TEST(Bookshelf, ExcerptAreaMatchesNodeFileArithmetic)
{
  const std::string path = test::fixture("bookshelf/excerpt/adaptec_x.aux");
  const Design d = bundleToDesign(parseBookshelf(path), 1000);
  ASSERT_TRUE(validateDesign(d).empty());

  // Independent oracle: sum width*height over non-terminal .nodes lines.
  std::ifstream in(test::fixture("bookshelf/excerpt/adaptec_x.nodes"));
  std::string line;
  double area = 0;
  int movable = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string name, kind;
    double w = 0, h = 0;
    if (line.empty() || line[0] == '#' || line.rfind("UCLA", 0) == 0
        || line.find(':') != std::string::npos || !(ss >> name >> w >> h)) {
      continue;
    }
    if (ss >> kind) {
      continue;
    }
    area += w * h;
    ++movable;
  }
  EXPECT_EQ(movable, 7);
  EXPECT_EQ(static_cast<double>(designStats(d).stdcell_area), area * 1e6);
  EXPECT_EQ(d.io_pins.size(), 2u);
  EXPECT_EQ(d.rows.size(), 3u);
  EXPECT_EQ(d.rows[1].orient, Orient::FS);
}

TEST(Bookshelf, RoundTripThreeNodeFixture)
{
  const Design d = bundleToDesign(parseBookshelf(test::fixture("bookshelf/tiny3/tiny3.aux")));
  test::TempDir dir;
  const Manifest m = writeBookshelf(d, dir.path().string());
  const Design back = bundleToDesign(parseBookshelf(auxOf(m)));
  EXPECT_EQ(canonicalDigest(d), canonicalDigest(back));
}

TEST(Bookshelf, RoundTripExcerpt)
{
  const Design d = bundleToDesign(
      parseBookshelf(test::fixture("bookshelf/excerpt/adaptec_x.aux")));
  test::TempDir dir;
  const Manifest m = writeBookshelf(d, dir.path().string());
  const Design back = bundleToDesign(parseBookshelf(auxOf(m)));
  EXPECT_EQ(canonicalDigest(d), canonicalDigest(back));
}

TEST(Bookshelf, EmptyDesignWritesZeroHeaders)
{
  Design d;
  d.name = "nothing";
  test::TempDir dir;
  const Manifest m = writeBookshelf(d, dir.path().string());
  const std::string nodes = readFile(dir.file("nothing.nodes"));
  EXPECT_NE(nodes.find("NumNodes : 0"), std::string::npos);
  EXPECT_NE(readFile(dir.file("nothing.nets")).find("NumNets : 0"), std::string::npos);
  const Bundle b = parseBookshelf(auxOf(m));
  EXPECT_TRUE(b.nodes.empty());
  EXPECT_NE(nodes.find("# generated-by rosetta-pd"), std::string::npos);
}

TEST(Bookshelf, SharedOffsetPinsStayDistinct)
{
  test::TempDir dir;
  const std::string aux = writeMembers(
      dir,
      "UCLA nodes 1.0\nNumNodes : 2\nNumTerminals : 0\n a 1 1\n b 1 1\n",
      "UCLA nets 1.0\nNumNets : 2\nNumPins : 4\nNetDegree : 2 n0\n a O\n b I\nNetDegree : 2 n1\n a O\n b I\n",
      "UCLA pl 1.0\na 0 0 : N\nb 1 0 : N\n");
  const Design d = bundleToDesign(parseBookshelf(aux));
  EXPECT_TRUE(validateDesign(d).empty());
  EXPECT_NE(d.nets[0].pins[0].pin, d.nets[1].pins[0].pin);
  const Manifest m = writeBookshelf(d, dir.file("out"));
  EXPECT_EQ(canonicalDigest(bundleToDesign(parseBookshelf(auxOf(m)))), canonicalDigest(d));
}

// Header counts in written files equal the records that follow them.
TEST(Bookshelf, WrittenHeadersMatchRecordCounts)
{
  const Design src = test::randomDesign(21, 300, 320, 10);
  test::TempDir dir;
  writeBookshelf(src, dir.path().string());
  auto count = [&](const std::string& file, const std::string& header, auto pred) {
    std::istringstream in(readFile(dir.file(file)));
    std::string line;
    long declared = -1;
    long actual = 0;
    while (std::getline(in, line)) {
      if (line.rfind(header, 0) == 0) {
        declared = std::stol(line.substr(line.find(':') + 1));
      } else if (pred(line)) {
        ++actual;
      }
    }
    EXPECT_EQ(declared, actual) << file << " " << header;
  };
  const std::string name = src.name;
  count(name + ".nodes", "NumNodes", [](const std::string& l) {
    return l.rfind("  ", 0) == 0;
  });
  count(name + ".nets", "NumNets", [](const std::string& l) {
    return l.rfind("NetDegree", 0) == 0;
  });
  count(name + ".nets", "NumPins", [](const std::string& l) {
    return l.rfind("  ", 0) == 0;
  });
  count(name + ".scl", "NumRows", [](const std::string& l) {
    return l.rfind("CoreRow", 0) == 0;
  });
}

TEST(Bookshelf, TenThousandInstanceRoundTripIsFast)
{
  const Design src = test::randomDesign(99, 10000, 11000, 32);
  test::TempDir dir;
  const Manifest first = writeBookshelf(src, dir.file("a"));
  const Design d = bundleToDesign(parseBookshelf(auxOf(first)));
  ASSERT_TRUE(validateDesign(d).empty());

  const auto start = std::chrono::steady_clock::now();
  const Manifest m = writeBookshelf(d, dir.file("b"));
  const Design back = bundleToDesign(parseBookshelf(auxOf(m)));
  const double seconds
      = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(canonicalDigest(d), canonicalDigest(back));
  EXPECT_LT(seconds, 5.0);
}

}  // namespace
}  // namespace rpd::bookshelf
