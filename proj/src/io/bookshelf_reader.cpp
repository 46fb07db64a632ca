// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <fmt/core.h>

#include <filesystem>
#include <future>
#include <unordered_set>

#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/io/bookshelf.h"

namespace rpd::bookshelf {

std::size_t Bundle::pinCount() const
{
  std::size_t n = 0;
  for (const NetRecord& net : nets) {
    n += net.pins.size();
  }
  return n;
}

std::size_t Bundle::terminalCount() const
{
  std::size_t n = 0;
  for (const NodeRecord& node : nodes) {
    n += node.terminal() ? 1 : 0;
  }
  return n;
}

namespace {

struct Token
{
  std::string_view text;
  int col = 0;
};

// Line-oriented scanner: strips '#' comments, splits on whitespace and
// makes ':' a token of its own.
class LineScanner
{
 public:
  LineScanner(std::string file, std::string_view text)
      : file_(std::move(file)), text_(text)
  {
  }

  bool next()
  {
    while (!done_) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) {
        end = text_.size();
        done_ = true;
      }
      const std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      tokenize(line);
      if (!tokens_.empty()) {
        return true;
      }
    }
    return false;
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  int line() const { return line_no_; }

  [[noreturn]] void syntax(int col, const std::string& msg) const
  {
    fail(Errc::kSyntax, fmt::format("{}:{}:{}: {}", file_, line_no_, col, msg));
  }

  std::string where(int col) const
  {
    return fmt::format("{}:{}:{}", file_, line_no_, col);
  }

  double number(std::size_t i) const
  {
    if (i >= tokens_.size()) {
      syntax(endCol(), "expected a number");
    }
    auto v = parseDouble(tokens_[i].text);
    if (!v) {
      syntax(tokens_[i].col,
             fmt::format("expected a number, got '{}'", tokens_[i].text));
    }
    return *v;
  }

  std::int64_t integer(std::size_t i) const
  {
    if (i >= tokens_.size()) {
      syntax(endCol(), "expected an integer");
    }
    auto v = parseInt(tokens_[i].text);
    if (!v) {
      syntax(tokens_[i].col,
             fmt::format("expected an integer, got '{}'", tokens_[i].text));
    }
    return *v;
  }

  void expectColon(std::size_t i) const
  {
    if (i >= tokens_.size() || tokens_[i].text != ":") {
      syntax(i < tokens_.size() ? tokens_[i].col : endCol(), "expected ':'");
    }
  }

  int endCol() const
  {
    if (tokens_.empty()) {
      return 1;
    }
    return tokens_.back().col + static_cast<int>(tokens_.back().text.size());
  }

 private:
  void tokenize(std::string_view line)
  {
    tokens_.clear();
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
        ++i;
        continue;
      }
      if (c == ':') {
        tokens_.push_back({line.substr(i, 1), static_cast<int>(i) + 1});
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < line.size() && line[i] != ':' && line[i] != ' '
             && line[i] != '\t' && line[i] != '\r' && line[i] != '\v'
             && line[i] != '\f') {
        ++i;
      }
      tokens_.push_back(
          {line.substr(start, i - start), static_cast<int>(start) + 1});
    }
  }

  std::string file_;
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
  bool done_ = false;
  std::vector<Token> tokens_;
};

struct Declared
{
  std::optional<std::int64_t> value;
  std::string where;
};

void checkCount(const Declared& d,
                std::size_t actual,
                std::string_view what,
                const std::string& file)
{
  if (d.value && *d.value != static_cast<std::int64_t>(actual)) {
    fail(Errc::kHeaderMismatch,
         fmt::format("{}: {} declares {} at {} but the body holds {}",
                     file,
                     what,
                     *d.value,
                     d.where,
                     actual));
  }
}

// Handles "Key : value" header lines; returns true when consumed.
bool headerLine(const LineScanner& sc,
                std::string_view key,
                Declared& slot)
{
  const auto& t = sc.tokens();
  if (t[0].text != key) {
    return false;
  }
  sc.expectColon(1);
  slot.value = sc.integer(2);
  slot.where = sc.where(t[0].col);
  if (t.size() > 3) {
    sc.syntax(t[3].col, fmt::format("unexpected token '{}'", t[3].text));
  }
  return true;
}

void trailing(const LineScanner& sc,
              std::size_t used,
              bool strict,
              std::vector<std::string>& warnings)
{
  const auto& t = sc.tokens();
  if (t.size() <= used) {
    return;
  }
  const std::string msg = fmt::format("unexpected trailing token '{}'",
                                      t[used].text);
  if (strict) {
    sc.syntax(t[used].col, msg);
  }
  warnings.push_back(sc.where(t[used].col) + ": " + msg);
}

bool isFormatBanner(const LineScanner& sc)
{
  return sc.tokens()[0].text == "UCLA";
}

struct NodesPart
{
  std::vector<NodeRecord> nodes;
  std::vector<std::string> warnings;
};

NodesPart parseNodes(const std::string& file, std::string_view text, bool strict)
{
  NodesPart part;
  LineScanner sc(file, text);
  Declared num_nodes;
  Declared num_terminals;
  while (sc.next()) {
    if (isFormatBanner(sc) || headerLine(sc, "NumNodes", num_nodes)
        || headerLine(sc, "NumTerminals", num_terminals)) {
      continue;
    }
    const auto& t = sc.tokens();
    NodeRecord node;
    node.name = std::string(t[0].text);
    node.width = sc.number(1);
    node.height = sc.number(2);
    std::size_t used = 3;
    if (t.size() > 3) {
      if (t[3].text == "terminal") {
        node.kind = NodeKind::kTerminal;
        used = 4;
      } else if (t[3].text == "terminal_NI") {
        node.kind = NodeKind::kTerminalNi;
        used = 4;
      }
    }
    trailing(sc, used, strict, part.warnings);
    part.nodes.push_back(std::move(node));
  }
  checkCount(num_nodes, part.nodes.size(), "NumNodes", file);
  std::size_t terminals = 0;
  for (const NodeRecord& n : part.nodes) {
    terminals += n.terminal() ? 1 : 0;
  }
  checkCount(num_terminals, terminals, "NumTerminals", file);
  return part;
}

struct NetsPart
{
  std::vector<NetRecord> nets;
  std::vector<std::string> warnings;
};

NetsPart parseNets(const std::string& file, std::string_view text, bool strict)
{
  NetsPart part;
  LineScanner sc(file, text);
  Declared num_nets;
  Declared num_pins;
  std::int64_t remaining = 0;
  int degree_line = 0;
  std::size_t pins = 0;
  while (sc.next()) {
    const auto& t = sc.tokens();
    if (remaining == 0) {
      if (isFormatBanner(sc) || headerLine(sc, "NumNets", num_nets)
          || headerLine(sc, "NumPins", num_pins)) {
        continue;
      }
      if (t[0].text != "NetDegree") {
        sc.syntax(t[0].col,
                  fmt::format("expected NetDegree, got '{}'", t[0].text));
      }
      sc.expectColon(1);
      const std::int64_t degree = sc.integer(2);
      if (degree < 0) {
        sc.syntax(t[2].col, "negative net degree");
      }
      NetRecord net;
      net.name = t.size() > 3 ? std::string(t[3].text)
                              : fmt::format("net_{}", part.nets.size());
      trailing(sc, t.size() > 3 ? 4 : 3, strict, part.warnings);
      part.nets.push_back(std::move(net));
      remaining = degree;
      degree_line = sc.line();
      continue;
    }
    if (t[0].text == "NetDegree") {
      sc.syntax(t[0].col,
                fmt::format("net '{}' declared at line {} is missing {} pin(s)",
                            part.nets.back().name,
                            degree_line,
                            remaining));
    }
    PinRecord pin;
    pin.node = std::string(t[0].text);
    std::size_t i = 1;
    if (i < t.size() && t[i].text != ":") {
      const std::string_view d = t[i].text;
      if (d == "I" || d == "O" || d == "B") {
        pin.dir = d[0];
      } else {
        sc.syntax(t[i].col, fmt::format("bad pin direction '{}'", d));
      }
      ++i;
    }
    if (i < t.size() && t[i].text == ":") {
      pin.dx = sc.number(i + 1);
      pin.dy = sc.number(i + 2);
      i += 3;
    }
    trailing(sc, i, strict, part.warnings);
    part.nets.back().pins.push_back(std::move(pin));
    ++pins;
    --remaining;
  }
  if (remaining != 0) {
    fail(Errc::kSyntax,
         fmt::format("{}:{}: net '{}' is missing {} pin(s) at end of file",
                     file,
                     degree_line,
                     part.nets.back().name,
                     remaining));
  }
  checkCount(num_nets, part.nets.size(), "NumNets", file);
  checkCount(num_pins, pins, "NumPins", file);
  return part;
}

struct PlPart
{
  std::vector<PlRecord> pl;
  std::vector<std::string> warnings;
};

PlPart parsePl(const std::string& file, std::string_view text, bool strict)
{
  PlPart part;
  LineScanner sc(file, text);
  while (sc.next()) {
    if (isFormatBanner(sc)) {
      continue;
    }
    const auto& t = sc.tokens();
    PlRecord rec;
    rec.name = std::string(t[0].text);
    rec.x = sc.number(1);
    rec.y = sc.number(2);
    std::size_t i = 3;
    if (i < t.size() && t[i].text == ":") {
      if (i + 1 >= t.size()) {
        sc.syntax(sc.endCol(), "expected orientation after ':'");
      }
      rec.orient = std::string(t[i + 1].text);
      if (!parseOrient(rec.orient)) {
        sc.syntax(t[i + 1].col,
                  fmt::format("bad orientation '{}'", rec.orient));
      }
      i += 2;
    }
    if (i < t.size() && t[i].text == "/FIXED") {
      rec.fixed = true;
      ++i;
    } else if (i < t.size() && t[i].text == "/FIXED_NI") {
      rec.fixed = true;
      rec.fixed_ni = true;
      ++i;
    }
    trailing(sc, i, strict, part.warnings);
    part.pl.push_back(std::move(rec));
  }
  return part;
}

struct SclPart
{
  std::vector<RowRecord> rows;
  std::vector<std::string> warnings;
};

SclPart parseScl(const std::string& file, std::string_view text, bool strict)
{
  SclPart part;
  LineScanner sc(file, text);
  Declared num_rows;
  bool in_row = false;
  RowRecord row;
  while (sc.next()) {
    const auto& t = sc.tokens();
    if (!in_row) {
      if (isFormatBanner(sc) || headerLine(sc, "NumRows", num_rows)) {
        continue;
      }
      if (t[0].text != "CoreRow") {
        sc.syntax(t[0].col, fmt::format("expected CoreRow, got '{}'", t[0].text));
      }
      trailing(sc, 2, strict, part.warnings);
      in_row = true;
      row = RowRecord{};
      continue;
    }
    if (t[0].text == "End") {
      trailing(sc, 1, strict, part.warnings);
      part.rows.push_back(row);
      in_row = false;
      continue;
    }
    // One or more "Key : value" pairs on the line.
    std::size_t i = 0;
    while (i < t.size()) {
      const std::string_view key = t[i].text;
      sc.expectColon(i + 1);
      if (i + 2 >= t.size()) {
        sc.syntax(sc.endCol(), fmt::format("missing value for '{}'", key));
      }
      if (key == "Coordinate") {
        row.coordinate = sc.number(i + 2);
      } else if (key == "Height") {
        row.height = sc.number(i + 2);
      } else if (key == "Sitewidth") {
        row.site_width = sc.number(i + 2);
      } else if (key == "Sitespacing") {
        row.site_spacing = sc.number(i + 2);
      } else if (key == "Siteorient") {
        row.site_orient = std::string(t[i + 2].text);
      } else if (key == "Sitesymmetry") {
        row.site_symmetry = std::string(t[i + 2].text);
      } else if (key == "SubrowOrigin") {
        row.subrow_origin = sc.number(i + 2);
      } else if (key == "NumSites" || key == "Numsites") {
        row.num_sites = sc.integer(i + 2);
      } else {
        const std::string msg = fmt::format("unknown row key '{}'", key);
        if (strict) {
          sc.syntax(t[i].col, msg);
        }
        part.warnings.push_back(sc.where(t[i].col) + ": " + msg);
      }
      i += 3;
    }
  }
  if (in_row) {
    fail(Errc::kSyntax, fmt::format("{}: unterminated CoreRow", file));
  }
  checkCount(num_rows, part.rows.size(), "NumRows", file);
  return part;
}

struct WtsPart
{
  std::vector<WeightRecord> wts;
  std::vector<std::string> warnings;
};

WtsPart parseWts(const std::string& file, std::string_view text, bool strict)
{
  WtsPart part;
  LineScanner sc(file, text);
  while (sc.next()) {
    if (isFormatBanner(sc)) {
      continue;
    }
    WeightRecord rec;
    rec.name = std::string(sc.tokens()[0].text);
    rec.weight = sc.number(1);
    trailing(sc, 2, strict, part.warnings);
    part.wts.push_back(std::move(rec));
  }
  return part;
}

Manifest parseAux(const std::string& aux_path, std::vector<std::string>& warnings)
{
  const std::string text = readFile(aux_path);
  const std::filesystem::path path(aux_path);
  Manifest m;
  m.directory = path.parent_path().string();
  m.design = path.stem().string();
  LineScanner sc(aux_path, text);
  bool seen = false;
  while (sc.next()) {
    const auto& t = sc.tokens();
    sc.expectColon(1);
    seen = true;
    for (std::size_t i = 2; i < t.size(); ++i) {
      const std::string name(t[i].text);
      const std::string ext = std::filesystem::path(name).extension().string();
      if (ext == ".nodes") {
        m.nodes = name;
      } else if (ext == ".nets") {
        m.nets = name;
      } else if (ext == ".wts") {
        m.wts = name;
      } else if (ext == ".pl") {
        m.pl = name;
      } else if (ext == ".scl") {
        m.scl = name;
      } else {
        warnings.push_back(
            fmt::format("{}: ignoring manifest member '{}'", sc.where(t[i].col), name));
      }
    }
  }
  if (!seen) {
    fail(Errc::kSyntax, fmt::format("{}: empty manifest", aux_path));
  }
  if (m.nodes.empty() || m.nets.empty() || m.pl.empty() || m.scl.empty()) {
    fail(Errc::kMissingFile,
         fmt::format("{}: manifest must list .nodes, .nets, .pl and .scl",
                     aux_path));
  }
  return m;
}

std::string memberPath(const Manifest& m, const std::string& name)
{
  return (std::filesystem::path(m.directory) / name).string();
}

std::string readMember(const Manifest& m, const std::string& name)
{
  const std::string path = memberPath(m, name);
  if (!std::filesystem::exists(path)) {
    fail(Errc::kMissingFile,
         fmt::format("manifest member '{}' not found at '{}'", name, path));
  }
  return readFile(path);
}

template <typename F>
auto launch(bool parallel, F&& f)
{
  return std::async(parallel ? std::launch::async : std::launch::deferred,
                    std::forward<F>(f));
}

}  // namespace

Bundle parseBookshelf(const std::string& aux_path, const ParseOptions& opts)
{
  Bundle bundle;
  bundle.aux = parseAux(aux_path, bundle.warnings);
  const Manifest& m = bundle.aux;

  // Read every member up front so MISSING_FILE wins over parse errors.
  const std::string nodes_text = readMember(m, m.nodes);
  const std::string nets_text = readMember(m, m.nets);
  const std::string pl_text = readMember(m, m.pl);
  const std::string scl_text = readMember(m, m.scl);
  const std::string wts_text = m.wts.empty() ? std::string() : readMember(m, m.wts);

  const bool strict = opts.strict;
  auto nodes = launch(opts.parallel, [&] {
    return parseNodes(memberPath(m, m.nodes), nodes_text, strict);
  });
  auto nets = launch(opts.parallel, [&] {
    return parseNets(memberPath(m, m.nets), nets_text, strict);
  });
  auto pl = launch(opts.parallel,
                   [&] { return parsePl(memberPath(m, m.pl), pl_text, strict); });
  auto scl = launch(opts.parallel, [&] {
    return parseScl(memberPath(m, m.scl), scl_text, strict);
  });
  auto wts = launch(opts.parallel, [&] {
    return parseWts(memberPath(m, m.wts), wts_text, strict);
  });

  // Join in a fixed order so the first reported error is deterministic.
  NodesPart nodes_part = nodes.get();
  NetsPart nets_part = nets.get();
  PlPart pl_part = pl.get();
  SclPart scl_part = scl.get();
  WtsPart wts_part = wts.get();

  bundle.nodes = std::move(nodes_part.nodes);
  bundle.nets = std::move(nets_part.nets);
  bundle.pl = std::move(pl_part.pl);
  bundle.rows = std::move(scl_part.rows);
  bundle.wts = std::move(wts_part.wts);
  for (auto* w : {&nodes_part.warnings,
                  &nets_part.warnings,
                  &pl_part.warnings,
                  &scl_part.warnings,
                  &wts_part.warnings}) {
    bundle.warnings.insert(bundle.warnings.end(), w->begin(), w->end());
  }

  std::unordered_set<std::string_view> declared;
  declared.reserve(bundle.nodes.size());
  for (const NodeRecord& n : bundle.nodes) {
    declared.insert(n.name);
  }
  for (const NetRecord& net : bundle.nets) {
    for (const PinRecord& pin : net.pins) {
      if (!declared.contains(pin.node)) {
        fail(Errc::kUnknownNode,
             fmt::format("net '{}' references undeclared node '{}'",
                         net.name,
                         pin.node));
      }
    }
  }
  for (const PlRecord& rec : bundle.pl) {
    if (!declared.contains(rec.name)) {
      fail(Errc::kUnknownNode,
           fmt::format("{} places undeclared node '{}'", m.pl, rec.name));
    }
  }
  return bundle;
}

}  // namespace rpd::bookshelf
