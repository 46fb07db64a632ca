// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <span>
#include <string>

#include "rpd/core/design.h"

namespace rpd {

// SHA-256 over a canonical serialization of the design (hex, 64 chars).
// Storage order of masters, instances, nets, rows, IO pins and of pins
// within a net does not matter. Throws kInvalidDesign on invalid input.
std::string canonicalDigest(const Design& design);

// Digest of the connectivity projection only: instance names, IO pin
// names, and the multiset of nets viewed as multisets of (owner, io,
// direction). Net names, pin names, masters and geometry are ignored, so
// it survives conversion through formats that cannot carry them.
std::string connectivityDigest(const Design& design);

// Canonical digest of a list of masters (order-independent).
std::string libraryDigest(std::span<const Master> masters);

std::string sha256Hex(std::string_view data);

}  // namespace rpd
