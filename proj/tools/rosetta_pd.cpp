// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include <iostream>

#include "rpd/cli/cli.h"

int main(int argc, char** argv)
{
  return rpd::cli::run(argc, argv, std::cout, std::cerr);
}
