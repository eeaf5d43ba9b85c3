#pragma once

#include <optional>
#include <string_view>

namespace pagealign {

enum class MatchType {
  ExactHash,
  DrawingNumber,
  SectionTitle,
  PageShift,
  TextSimilar,
  PositionInterp,
  ContentSimilar,
  PositionMatch,
};

enum class MatchSource { LCS, SevenPhase, DP, Patch };

std::string_view to_string(MatchType type);
std::string_view to_string(MatchSource source);
std::optional<MatchType> parse_match_type(std::string_view name);

}  // namespace pagealign
