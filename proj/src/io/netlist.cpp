// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <fmt/core.h>

#include <cctype>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "rpd/core/error.h"
#include "rpd/core/text.h"
#include "rpd/io/lefdef.h"

namespace rpd::lefdef {

namespace {

bool identStart(char c)
{
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool identChar(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'
         || c == '$';
}

// Tracks sanitized names within one namespace.
class NameScope
{
 public:
  explicit NameScope(std::string_view what) : what_(what) {}

  std::string add(std::string_view original)
  {
    std::string name = sanitizeIdentifier(original);
    auto [it, inserted] = owners_.try_emplace(name, original);
    if (!inserted) {
      fail(Errc::kNameCollision,
           fmt::format("{} '{}' and '{}' both sanitize to '{}'",
                       what_,
                       it->second,
                       original,
                       name));
    }
    return name;
  }

 private:
  std::string what_;
  std::unordered_map<std::string, std::string> owners_;
};

struct VToken
{
  std::string text;
  int line = 0;
};

std::vector<VToken> tokenizeVerilog(std::string_view text)
{
  std::vector<VToken> out;
  int line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
    } else if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') {
        ++i;
      }
    } else if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(text[i] == '*' && text[i + 1] == '/')) {
        line += text[i] == '\n' ? 1 : 0;
        ++i;
      }
      i += 2;
    } else if (c == '\\') {
      const std::size_t start = ++i;
      while (i < n && std::isspace(static_cast<unsigned char>(text[i])) == 0) {
        ++i;
      }
      out.push_back({std::string(text.substr(start, i - start)), line});
    } else if (identChar(c) || c == '\'') {
      const std::size_t start = i;
      while (i < n && (identChar(text[i]) || text[i] == '\'')) {
        ++i;
      }
      out.push_back({std::string(text.substr(start, i - start)), line});
    } else {
      out.push_back({std::string(1, c), line});
      ++i;
    }
  }
  return out;
}

bool isConstant(std::string_view t)
{
  return t.find('\'') != std::string_view::npos
         || (!t.empty() && std::isdigit(static_cast<unsigned char>(t[0])) != 0);
}

class NetlistReader
{
 public:
  NetlistReader(std::string_view text, std::span<const Master> masters)
      : tokens_(tokenizeVerilog(text))
  {
    for (const Master& m : masters) {
      masters_.try_emplace(sanitizeIdentifier(m.name), &m);
    }
    design_.masters.assign(masters.begin(), masters.end());
  }

  Design run()
  {
    expect("module");
    design_.name = word();
    if (accept("(")) {
      while (!accept(")")) {
        word();
        accept(",");
      }
    }
    expect(";");
    while (!accept("endmodule")) {
      const std::string kw = word();
      if (kw == "input" || kw == "output" || kw == "inout") {
        const PinDir dir = kw == "input"    ? PinDir::kInput
                           : kw == "output" ? PinDir::kOutput
                                            : PinDir::kInout;
        for (const std::string& name : nameList()) {
          IoPin io;
          io.name = name;
          io.dir = dir;
          design_.io_pins.push_back(io);
          node(name).io = design_.io_pins.size() - 1;
        }
      } else if (kw == "wire") {
        for (const std::string& name : nameList()) {
          node(name).wire = true;
        }
      } else if (kw == "assign") {
        const std::string lhs = word();
        expect("=");
        const std::string rhs = word();
        expect(";");
        unite(index(lhs), index(rhs));
      } else {
        instantiation(kw);
      }
    }
    return build();
  }

 private:
  struct Node
  {
    std::string name;
    std::optional<std::size_t> io;
    bool wire = false;
    std::vector<NetPin> pins;
  };

  [[noreturn]] void syntax(const std::string& msg) const
  {
    const int line = pos_ < tokens_.size() ? tokens_[pos_].line
                     : tokens_.empty()    ? 1
                                          : tokens_.back().line;
    fail(Errc::kSyntax, fmt::format("netlist:{}: {}", line, msg));
  }

  const std::string& peek() const
  {
    static const std::string eof;
    return pos_ < tokens_.size() ? tokens_[pos_].text : eof;
  }

  std::string word()
  {
    if (pos_ >= tokens_.size()) {
      syntax("unexpected end of file");
    }
    return tokens_[pos_++].text;
  }

  bool accept(std::string_view t)
  {
    if (peek() == t) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view t)
  {
    if (!accept(t)) {
      syntax(fmt::format("expected '{}', found '{}'", t, peek()));
    }
  }

  std::vector<std::string> nameList()
  {
    std::vector<std::string> names;
    do {
      names.push_back(word());
    } while (accept(","));
    expect(";");
    return names;
  }

  std::size_t index(const std::string& name)
  {
    auto [it, inserted] = node_index_.try_emplace(name, nodes_.size());
    if (inserted) {
      nodes_.push_back({name, {}, false, {}});
      parent_.push_back(parent_.size());
    }
    return it->second;
  }

  Node& node(const std::string& name) { return nodes_[index(name)]; }

  std::size_t find(std::size_t i)
  {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent_[std::max(a, b)] = std::min(a, b);
    }
  }

  void instantiation(const std::string& type)
  {
    auto m = masters_.find(type);
    if (m == masters_.end()) {
      fail(Errc::kUnknownMaster, fmt::format("netlist: unknown cell type '{}'", type));
    }
    const Master& master = *m->second;
    std::unordered_map<std::string, const MasterPin*> pins;
    for (const MasterPin& p : master.pins) {
      pins.try_emplace(sanitizeIdentifier(p.name), &p);
    }
    Instance inst;
    inst.name = word();
    inst.master = master.name;
    inst.tier = tierOf(master.tier_tag);
    expect("(");
    while (!accept(")")) {
      expect(".");
      const std::string port = word();
      auto pin = pins.find(port);
      if (pin == pins.end()) {
        syntax(fmt::format("cell '{}' has no pin '{}'", type, port));
      }
      expect("(");
      if (!accept(")")) {
        const std::string conn = word();
        expect(")");
        if (isConstant(conn)) {
          if (!pin->second->hidden) {
            inst.tie_offs.push_back(pin->second->name);
          }
        } else {
          node(conn).pins.push_back(
              NetPin::instPin(inst.name, pin->second->name, pin->second->dir));
        }
      }
      accept(",");
    }
    expect(";");
    design_.instances.push_back(std::move(inst));
  }

  Design build()
  {
    std::vector<std::vector<std::size_t>> groups(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      groups[find(i)].push_back(i);
    }
    for (const auto& members : groups) {
      if (members.empty()) {
        continue;
      }
      Net net;
      net.name = nodes_[members.front()].name;
      bool wire = false;
      std::size_t io_count = 0;
      for (std::size_t i : members) {
        const Node& n = nodes_[i];
        wire = wire || n.wire;
        if (n.io) {
          const IoPin& io = design_.io_pins[*n.io];
          net.pins.push_back(NetPin::ioPin(io.name, flipped(io.dir)));
          ++io_count;
        }
        net.pins.insert(net.pins.end(), n.pins.begin(), n.pins.end());
      }
      if (!wire && net.pins.size() == io_count && io_count <= 1) {
        continue;
      }
      design_.nets.push_back(std::move(net));
    }
    return std::move(design_);
  }

  std::vector<VToken> tokens_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, const Master*> masters_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> parent_;
  Design design_;
};

}  // namespace

std::string sanitizeIdentifier(std::string_view name)
{
  std::string out;
  out.reserve(name.size() + 1);
  if (name.empty() || (identChar(name.front()) && !identStart(name.front()))) {
    out += '_';
  }
  for (char c : name) {
    out += identChar(c) ? c : '_';
  }
  return out;
}

std::string writeStructuralNetlist(const Design& design)
{
  const DesignIndex index(design);

  NameScope cells("cell type");
  std::unordered_map<std::string_view, std::string> cell_names;
  std::unordered_map<std::string_view, std::unordered_map<std::string_view, std::string>>
      pin_names;
  for (const Master& m : design.masters) {
    cell_names.emplace(m.name, cells.add(m.name));
    NameScope scope(fmt::format("pin of '{}'", m.name));
    auto& pins = pin_names[m.name];
    for (const MasterPin& p : m.pins) {
      pins.emplace(p.name, scope.add(p.name));
    }
  }

  // Ports, wires and instances share the module namespace.
  NameScope module_scope("module-level name");
  std::vector<std::string> port_names;
  std::unordered_map<std::string_view, std::size_t> port_of;
  for (std::size_t i = 0; i < design.io_pins.size(); ++i) {
    port_names.push_back(module_scope.add(design.io_pins[i].name));
    port_of.emplace(design.io_pins[i].name, i);
  }

  std::vector<std::string> wires;
  std::vector<std::string> assigns;
  std::vector<std::string> net_names(design.nets.size());
  // instance -> (pin -> net name)
  std::unordered_map<std::string_view, std::unordered_map<std::string_view, std::size_t>>
      connections;
  for (std::size_t n = 0; n < design.nets.size(); ++n) {
    const Net& net = design.nets[n];
    std::string_view first_io;
    for (const NetPin& p : net.pins) {
      if (!p.io) {
        continue;
      }
      const std::string& port = port_names[port_of.at(p.owner)];
      if (first_io.empty()) {
        first_io = port;
      } else {
        assigns.push_back(fmt::format("  assign {} = {};\n", port, first_io));
      }
    }
    if (first_io.empty()) {
      net_names[n] = module_scope.add(net.name);
      wires.push_back(net_names[n]);
    } else {
      net_names[n] = std::string(first_io);
    }
    for (const NetPin& p : net.pins) {
      if (p.io) {
        continue;
      }
      auto [it, inserted] = connections[p.owner].try_emplace(p.pin, n);
      if (!inserted) {
        fail(Errc::kInvalidDesign,
             fmt::format("pin {}/{} is on nets '{}' and '{}'",
                         p.owner,
                         p.pin,
                         design.nets[it->second].name,
                         net.name));
      }
    }
  }

  std::string out;
  out.reserve(96 * design.instances.size() + 1024);
  out += fmt::format("// generated-by {} {}\n", kToolName, kToolVersion);
  const std::string module = sanitizeIdentifier(design.name.empty() ? "top" : design.name);
  out += fmt::format("module {} (", module);
  for (std::size_t i = 0; i < port_names.size(); ++i) {
    out += fmt::format("{}\n  {}", i == 0 ? "" : ",", port_names[i]);
  }
  out += port_names.empty() ? ");\n" : "\n);\n";
  for (std::size_t i = 0; i < design.io_pins.size(); ++i) {
    const PinDir d = design.io_pins[i].dir;
    out += fmt::format("  {} {};\n",
                       d == PinDir::kInput    ? "input"
                       : d == PinDir::kOutput ? "output"
                                              : "inout",
                       port_names[i]);
  }
  for (const std::string& w : wires) {
    out += fmt::format("  wire {};\n", w);
  }
  for (const std::string& a : assigns) {
    out += a;
  }

  std::vector<std::string> inst_names;
  inst_names.reserve(design.instances.size());
  for (const Instance& inst : design.instances) {
    inst_names.push_back(module_scope.add(inst.name));
  }
  for (std::size_t i = 0; i < design.instances.size(); ++i) {
    const Instance& inst = design.instances[i];
    const Master* master = index.master(inst.master);
    if (master == nullptr) {
      fail(Errc::kUnknownMaster,
           fmt::format("instance '{}' uses unknown master '{}'", inst.name, inst.master));
    }
    const auto& pins = pin_names.at(master->name);
    const auto conn = connections.find(inst.name);
    std::unordered_set<std::string_view> tied(inst.tie_offs.begin(), inst.tie_offs.end());
    std::vector<std::string> ports;
    for (const MasterPin& p : master->pins) {
      if (conn != connections.end()) {
        if (auto c = conn->second.find(p.name); c != conn->second.end()) {
          ports.push_back(fmt::format(".{}({})", pins.at(p.name), net_names[c->second]));
          continue;
        }
      }
      if (tied.contains(p.name) || (p.hidden && p.dir != PinDir::kOutput)) {
        ports.push_back(fmt::format(".{}(1'b0)", pins.at(p.name)));
      }
    }
    out += fmt::format("  {} {} (", cell_names.at(master->name), inst_names[i]);
    for (std::size_t k = 0; k < ports.size(); ++k) {
      out += fmt::format("{}\n    {}", k == 0 ? "" : ",", ports[k]);
    }
    out += ports.empty() ? ");\n" : "\n  );\n";
  }
  out += "endmodule\n";
  return out;
}

Design readStructuralNetlist(std::string_view text, std::span<const Master> masters)
{
  return NetlistReader(text, masters).run();
}

}  // namespace rpd::lefdef
