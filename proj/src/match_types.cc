#include "pagealign/match_types.h"

#include <array>
#include <utility>

namespace pagealign {

namespace {

constexpr std::array<std::pair<MatchType, std::string_view>, 8> kTypeNames{{
    {MatchType::ExactHash, "ExactHash"},
    {MatchType::DrawingNumber, "DrawingNumber"},
    {MatchType::SectionTitle, "SectionTitle"},
    {MatchType::PageShift, "PageShift"},
    {MatchType::TextSimilar, "TextSimilar"},
    {MatchType::PositionInterp, "PositionInterp"},
    {MatchType::ContentSimilar, "ContentSimilar"},
    {MatchType::PositionMatch, "PositionMatch"},
}};

}  // namespace

std::string_view to_string(MatchType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "?";
}

std::optional<MatchType> parse_match_type(std::string_view name) {
  for (const auto& [t, n] : kTypeNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

std::string_view to_string(MatchSource source) {
  switch (source) {
    case MatchSource::LCS: return "LCS";
    case MatchSource::SevenPhase: return "SevenPhase";
    case MatchSource::DP: return "DP";
    case MatchSource::Patch: return "Patch";
  }
  return "?";
}

}  // namespace pagealign
