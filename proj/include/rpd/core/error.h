// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpd {

enum class Errc
{
  kInvalidDesign,
  kInvalidArgument,
  kMissingFile,
  kHeaderMismatch,
  kSyntax,
  kUnknownNode,
  kScaleOverflow,
  kIoFailure,
  kUnknownMaster,
  kNameCollision,
  kThresholdUndefined,
  kNoCandidate,
  kUnitMismatch,
  kUnknownLayer,
  kEmptyIntersection,
  kSiteTooLarge,
  kNonpositivePitch,
  kEmptyDesign,
  kInfeasibleBalance,
  kEmptySamples,
  kCoverageGap,
  kMissingTierMaster,
  kUnmappedPin,
  kNoRouting,
  kNonpositiveInput,
  kSchemaViolation,
  kDegenerateConfig,
};

// Upper-case code as it appears in diagnostics and reports, e.g.
// "HEADER_MISMATCH".
std::string_view errcName(Errc code);

class Error : public std::runtime_error
{
 public:
  Error(Errc code, const std::string& what);

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace rpd
