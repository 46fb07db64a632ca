// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <ostream>
#include <string>
#include <vector>

// The rosetta-pd command line.
namespace rpd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. Diagnostics go to `err` as single
// lines; usage text and summaries go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Output subdirectories created under --out.
inline constexpr const char* kLayout[] = {"designs", "tech", "reports", "views"};

}  // namespace rpd::cli
