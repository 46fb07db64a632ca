// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/core/error.h"

#include <fmt/core.h>

namespace rpd {

std::string_view errcName(Errc code)
{
  switch (code) {
    case Errc::kInvalidDesign:
      return "INVALID_DESIGN";
    case Errc::kInvalidArgument:
      return "INVALID_ARGUMENT";
    case Errc::kMissingFile:
      return "MISSING_FILE";
    case Errc::kHeaderMismatch:
      return "HEADER_MISMATCH";
    case Errc::kSyntax:
      return "SYNTAX";
    case Errc::kUnknownNode:
      return "UNKNOWN_NODE";
    case Errc::kScaleOverflow:
      return "SCALE_OVERFLOW";
    case Errc::kIoFailure:
      return "IO_FAILURE";
    case Errc::kUnknownMaster:
      return "UNKNOWN_MASTER";
    case Errc::kNameCollision:
      return "NAME_COLLISION";
    case Errc::kThresholdUndefined:
      return "THRESHOLD_UNDEFINED";
    case Errc::kNoCandidate:
      return "NO_CANDIDATE";
    case Errc::kUnitMismatch:
      return "UNIT_MISMATCH";
    case Errc::kUnknownLayer:
      return "UNKNOWN_LAYER";
    case Errc::kEmptyIntersection:
      return "EMPTY_INTERSECTION";
    case Errc::kSiteTooLarge:
      return "SITE_TOO_LARGE";
    case Errc::kNonpositivePitch:
      return "NONPOSITIVE_PITCH";
    case Errc::kEmptyDesign:
      return "EMPTY_DESIGN";
    case Errc::kInfeasibleBalance:
      return "INFEASIBLE_BALANCE";
    case Errc::kEmptySamples:
      return "EMPTY_SAMPLES";
    case Errc::kCoverageGap:
      return "COVERAGE_GAP";
    case Errc::kMissingTierMaster:
      return "MISSING_TIER_MASTER";
    case Errc::kUnmappedPin:
      return "UNMAPPED_PIN";
    case Errc::kNoRouting:
      return "NO_ROUTING";
    case Errc::kNonpositiveInput:
      return "NONPOSITIVE_INPUT";
    case Errc::kSchemaViolation:
      return "SCHEMA_VIOLATION";
    case Errc::kDegenerateConfig:
      return "DEGENERATE_CONFIG";
  }
  return "UNKNOWN";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(what), code_(code)
{
}

void fail(Errc code, const std::string& message)
{
  throw Error(code, fmt::format("{}: {}", errcName(code), message));
}

}  // namespace rpd
