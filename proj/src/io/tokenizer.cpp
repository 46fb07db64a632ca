// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "tokenizer.h"

#include <fmt/core.h>

#include "rpd/core/error.h"
#include "rpd/core/text.h"

namespace rpd::lefdef {

namespace {

bool isSpace(char c)
{
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f'
         || c == '\v';
}

bool isPunct(char c)
{
  return c == ';' || c == '(' || c == ')';
}

}  // namespace

TokenStream::TokenStream(std::string source, std::string_view text)
    : source_(std::move(source))
{
  int line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  tokens_.reserve(n / 4);
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (isSpace(c)) {
      ++i;
    } else if (c == '#') {
      while (i < n && text[i] != '\n') {
        ++i;
      }
    } else if (isPunct(c)) {
      tokens_.push_back({text.substr(i, 1), line});
      ++i;
    } else if (c == '"') {
      const std::size_t start = i++;
      const int start_line = line;
      while (i < n && text[i] != '"') {
        if (text[i] == '\n') {
          ++line;
        }
        ++i;
      }
      if (i >= n) {
        fail(Errc::kSyntax,
             fmt::format("{}:{}: unterminated string", source_, start_line));
      }
      ++i;
      tokens_.push_back({text.substr(start, i - start), start_line});
    } else {
      const std::size_t start = i;
      while (i < n && !isSpace(text[i]) && !isPunct(text[i])) {
        ++i;
      }
      tokens_.push_back({text.substr(start, i - start), line});
    }
  }
  eof_.line = line;
}

const Token& TokenStream::peek(std::size_t ahead) const
{
  const std::size_t at = pos_ + ahead;
  return at < tokens_.size() ? tokens_[at] : eof_;
}

const Token& TokenStream::next()
{
  if (atEnd()) {
    syntax("unexpected end of file");
  }
  return tokens_[pos_++];
}

bool TokenStream::accept(std::string_view text)
{
  if (!atEnd() && tokens_[pos_].text == text) {
    ++pos_;
    return true;
  }
  return false;
}

void TokenStream::expect(std::string_view text)
{
  if (atEnd()) {
    syntax(fmt::format("expected '{}' before end of file", text));
  }
  if (tokens_[pos_].text != text) {
    syntax(fmt::format("expected '{}', found '{}'", text, tokens_[pos_].text));
  }
  ++pos_;
}

std::string_view TokenStream::word()
{
  const Token& t = next();
  if (t.text.size() == 1 && isPunct(t.text[0])) {
    --pos_;
    syntax(fmt::format("expected a name, found '{}'", t.text));
  }
  return t.text;
}

double TokenStream::number()
{
  const Token& t = next();
  if (auto v = parseDouble(t.text)) {
    return *v;
  }
  --pos_;
  syntax(fmt::format("expected a number, found '{}'", t.text));
}

std::int64_t TokenStream::integer()
{
  const Token& t = next();
  if (auto v = parseInt(t.text)) {
    return *v;
  }
  --pos_;
  syntax(fmt::format("expected an integer, found '{}'", t.text));
}

void TokenStream::skipStatement()
{
  while (!atEnd()) {
    if (tokens_[pos_++].text == ";") {
      return;
    }
  }
}

void TokenStream::skipBlock(std::string_view name)
{
  while (!atEnd()) {
    if (tokens_[pos_].text == "END" && pos_ + 1 < tokens_.size()
        && tokens_[pos_ + 1].text == name) {
      pos_ += 2;
      return;
    }
    ++pos_;
  }
  syntax(fmt::format("missing 'END {}'", name));
}

bool TokenStream::restOfLineHasSemicolon() const
{
  if (pos_ == 0) {
    return false;
  }
  const int line = tokens_[pos_ - 1].line;
  for (std::size_t i = pos_; i < tokens_.size() && tokens_[i].line == line;
       ++i) {
    if (tokens_[i].text == ";") {
      return true;
    }
  }
  return false;
}

int TokenStream::line() const
{
  return atEnd() ? eof_.line : tokens_[pos_].line;
}

void TokenStream::syntax(const std::string& msg) const
{
  fail(Errc::kSyntax, fmt::format("{}:{}: {}", source_, line(), msg));
}

}  // namespace rpd::lefdef
