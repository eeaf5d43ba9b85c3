#pragma once

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "pagealign/fingerprint.h"
#include "pagealign/lcs_align.h"
#include "pagealign/match_types.h"

namespace pagealign {

enum class Phase { ExactHash, DrawingNumber, SectionTitle, PageShift, TextSimilarity,
                   PositionInterpolation, VisualRematch };

// 1, 2, 3, 4, 5, 6 or 7.5.
double phase_number(Phase phase);

struct CandidateMatch {
  int old_index = 0;
  int new_index = 0;
  Phase phase = Phase::ExactHash;
  double confidence = 0.0;
  MatchType type = MatchType::ExactHash;
  // Phases 1-3 (and 7.5) are final; phases 4-6 are provisional and go to the
  // DP stage with `confidence` as an upper bound.
  bool final = true;

  friend bool operator==(const CandidateMatch&, const CandidateMatch&) = default;
};

struct SevenPhaseConfig {
  double tau_s = 0.5;            // text-similarity threshold (phases 4, 5)
  double shift_fraction = 0.30;  // phase-4 vote fraction of min(m_b, n_b)
  int shift_min_votes = 2;
  int adjacency_max_d = 3;
  double adjacency_accept = 0.3;
  double phash_accept = 0.45;

  // Throws std::invalid_argument when a threshold is out of range.
  void validate() const;
};

inline constexpr double kExactHashConfidence = 1.0;
inline constexpr double kDrawingNumberConfidence = 0.9;
inline constexpr double kSectionTitleConfidence = 0.8;
inline constexpr double kPageShiftConfidence = 0.85;
inline constexpr double kTextSimilarCeiling = 0.85;

// Document indices of the pages inside one non-Equal run of LCS blocks,
// ascending on each side.
struct Region {
  std::vector<int> old_pages;
  std::vector<int> new_pages;
};

// Maximal runs of consecutive non-Equal blocks, in document order.
std::vector<Region> replace_regions(const std::vector<AlignmentBlock>& blocks);

// Pages already consumed by earlier phases.
struct Claimed {
  std::set<int> old_pages;
  std::set<int> new_pages;

  bool has_old(int o) const { return old_pages.contains(o); }
  bool has_new(int n) const { return new_pages.contains(n); }
  void add(int o, int n) {
    old_pages.insert(o);
    new_pages.insert(n);
  }
};

enum class ExactKey { ContentHash, DrawingNumber, SectionTitle };

// Phases 1-3: equal, non-empty key values. Repeated values pair i-th
// occurrence to i-th occurrence in document order.
std::vector<CandidateMatch> match_exact_keys(const Region& region, ExactKey key,
                                             std::span<const PageFingerprint> fps_old,
                                             std::span<const PageFingerprint> fps_new,
                                             const Claimed& claimed);

struct PageShift {
  int delta = 0;
  int votes = 0;
  std::vector<CandidateMatch> matches;
};

// Phase 4. Votes are counted over region-local positions; claimed pages do
// not vote.
std::optional<PageShift> detect_page_shift(const Region& region, const Claimed& claimed,
                                           const TextSimilarity& sim,
                                           const SevenPhaseConfig& cfg);

// Phase 5: greedy one-to-one by descending similarity.
std::vector<CandidateMatch> match_text_similarity(const Region& region, const Claimed& claimed,
                                                  const TextSimilarity& sim,
                                                  const SevenPhaseConfig& cfg);

// Expected new position of `old_index` interpolated between the nearest
// anchors on either side; nullopt without anchors.
std::optional<double> interpolate_position(int old_index,
                                           std::span<const std::pair<int, int>> anchors);

// Phase 6. `anchors` are (old, new) pairs already matched anywhere in the
// document.
std::vector<CandidateMatch> match_position_interpolation(
    const Region& region, const Claimed& claimed, std::span<const std::pair<int, int>> anchors,
    const TextSimilarity& sim, const SevenPhaseConfig& cfg);

struct Residuals {
  std::vector<int> deleted;   // unmatched old pages (U_O)
  std::vector<int> inserted;  // unmatched new pages (U_N)
};

// Phase 7.
Residuals classify_residuals(const Region& region, const Claimed& claimed);

// Phase 7.5. Only pages with a perceptual hash participate.
std::vector<CandidateMatch> visual_rematch(std::span<const int> unmatched_old,
                                           std::span<const int> unmatched_new,
                                           std::span<const PageFingerprint> fps_old,
                                           std::span<const PageFingerprint> fps_new,
                                           const SevenPhaseConfig& cfg);

struct SevenPhaseResult {
  std::vector<CandidateMatch> matches;  // in phase order
  Residuals residuals;
  std::optional<int> shift;  // adopted phase-4 delta, if any
};

// Phases 1-7 on one region. Phase 7.5 runs separately over the pooled
// residuals of the whole document (see consensus).
SevenPhaseResult run_seven_phase(const Region& region, std::span<const PageFingerprint> fps_old,
                                 std::span<const PageFingerprint> fps_new,
                                 const TextSimilarity& sim,
                                 std::span<const std::pair<int, int>> anchors,
                                 const SevenPhaseConfig& cfg);

}  // namespace pagealign
