// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rpd::lefdef {

struct Token
{
  std::string_view text;
  int line = 0;
};

// LEF/DEF token stream: whitespace separated, ';' '(' ')' stand alone,
// '#' starts a comment, double-quoted strings are single tokens.
class TokenStream
{
 public:
  TokenStream(std::string source, std::string_view text);

  bool atEnd() const { return pos_ >= tokens_.size(); }
  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool accept(std::string_view text);
  void expect(std::string_view text);

  std::string_view word();
  double number();
  std::int64_t integer();

  // Skips through the next ';'.
  void skipStatement();
  // Skips to "END <name>" inclusive.
  void skipBlock(std::string_view name);
  // True when the statement begun by the previous token ends on its own
  // line with ';' (as opposed to opening a block).
  bool restOfLineHasSemicolon() const;

  int line() const;
  [[noreturn]] void syntax(const std::string& msg) const;

 private:
  std::string source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Token eof_;
};

}  // namespace rpd::lefdef
