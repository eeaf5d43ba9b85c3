#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pagealign/bundle.h"
#include "pagealign/fingerprint.h"
#include "pagealign/lcs_align.h"
#include "pagealign/match_types.h"

namespace pagealign {

struct DpConfig {
  double gap_penalty = -0.42;
  double content_similar_threshold = 0.28;
  double position_match_cap = 0.60;

  void validate() const;
};

// Pair-score weights. The sum of all of them (2.05) bounds PairScore::total.
namespace weights {
inline constexpr double kText = 0.40;  // inside the fused base similarity
inline constexpr double kVisual = 0.60;
inline constexpr double kBase = 0.55;
inline constexpr double kLength = 0.20;
inline constexpr double kPosition = 0.15;
inline constexpr double kHash = 0.50;
inline constexpr double kDrawing = 0.35;
inline constexpr double kDrawingSubstr = 0.10;
inline constexpr double kTitle = 0.20;
}  // namespace weights

struct PairScore {
  double s_t = 0;                 // text similarity
  std::optional<double> s_v;      // pHash similarity, when both pages have one
  double s_b = 0;                 // fused base similarity
  double s_len = 0;               // length ratio
  double p_pos = 0;               // positional score
  double bonus_hash = 0;
  double bonus_drawing = 0;
  double bonus_drawing_substr = 0;
  double bonus_title = 0;
  double total = 0;
};

// min/max of the character counts; 1 when both are 0, 0 when only one is.
double length_ratio(int old_chars, int new_chars);

// 1 - |i/m - j/n| on 0-based positions.
double positional_score(int i, int j, int m, int n);

// True when one drawing number is a proper substring of the other and the
// shorter one has at least two characters.
bool drawing_substring_match(const std::string& a, const std::string& b);

PairScore pair_score(const PageRecord& old_page, const PageFingerprint& old_fp,
                     const PageRecord& new_page, const PageFingerprint& new_fp, int i, int j,
                     int m, int n, double text_sim);

PairScore pair_score(const PageRecord& old_page, const PageFingerprint& old_fp,
                     const PageRecord& new_page, const PageFingerprint& new_fp, int i, int j,
                     int m, int n);

struct AlignedPair {
  int i = 0;
  int j = 0;
  double score = 0;
};

struct DpAlignment {
  std::vector<AlignedPair> pairs;  // strictly increasing in i and j
  std::vector<int> old_gaps;       // rows aligned to a gap
  std::vector<int> new_gaps;       // columns aligned to a gap
  double total = 0;                // sum of pair scores + gap * gap count
};

// Global alignment over a dense score matrix (score[i][j], m rows of n
// columns) with linear gaps. Ties prefer diagonal, then an old-side gap,
// then a new-side gap.
DpAlignment align_scores(const std::vector<std::vector<double>>& score, double gap);

struct DpMatch {
  int old_index = 0;
  int new_index = 0;
  PairScore score;
  MatchType type = MatchType::ContentSimilar;
  double confidence = 0;
};

// ContentSimilar with confidence min(1, score) at or above the threshold;
// PositionMatch with confidence clamped to [0, cap] below it.
std::pair<MatchType, double> classify_dp_score(double score, const DpConfig& cfg);

struct RegionAlignment {
  std::vector<DpMatch> matches;
  std::vector<int> old_gaps;  // document indices returned to the residual pool
  std::vector<int> new_gaps;
  double total = 0;
};

// Aligns the given pages (document indices, ascending) of one region.
// Positional scores use region-local positions.
RegionAlignment align_region(std::span<const int> old_pages, std::span<const int> new_pages,
                             const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                             std::span<const PageFingerprint> fps_old,
                             std::span<const PageFingerprint> fps_new, const TextSimilarity& sim,
                             const DpConfig& cfg);

}  // namespace pagealign
