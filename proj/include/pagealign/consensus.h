#pragma once

#include <span>
#include <vector>

#include "pagealign/dp_align.h"
#include "pagealign/lcs_align.h"
#include "pagealign/match_types.h"
#include "pagealign/seven_phase.h"

namespace pagealign {

struct PageMatch {
  int old_index = 0;
  int new_index = 0;
  MatchType type = MatchType::ExactHash;
  double confidence = 1.0;
  MatchSource source = MatchSource::LCS;

  friend bool operator==(const PageMatch&, const PageMatch&) = default;
};

struct MatchResult {
  std::vector<PageMatch> matches;  // sorted by old index
  std::vector<int> inserted;       // new pages without a counterpart
  std::vector<int> deleted;        // old pages without a counterpart
  std::vector<int> orphans;        // patch mode: unmatched old pages kept in the report
  // Unmatched pages under the blank-page threshold (no content hash). They
  // are neither deleted nor inserted; a blank page carries no content to lose.
  std::vector<int> blank_old;
  std::vector<int> blank_new;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Every old index appears exactly once across matches, deleted, orphans and
// blank_old; every new index exactly once across matches, inserted and
// blank_new. Throws ConsistencyError otherwise.
void check_match_result(const MatchResult& result, int old_pages, int new_pages);

struct IntegrateOptions {
  bool visual_rematch = true;  // pooled phase 7.5 before classifying residuals
  SevenPhaseConfig seven;
};

// Three-step consensus. Step 1 accepts every Equal-block pair; step 2 the
// final (phase 1-3) seven-phase matches; step 3 the `refined` candidates
// (DP output). A candidate whose old or new page is already taken by an
// earlier step is dropped. Remaining pages go through phase 7.5 (if
// enabled) and are then classified deleted / inserted, or blank when they
// have no content hash.
MatchResult integrate(const std::vector<AlignmentBlock>& blocks,
                      const std::vector<SevenPhaseResult>& seven_phase,
                      const std::vector<PageMatch>& refined,
                      std::span<const PageFingerprint> fps_old,
                      std::span<const PageFingerprint> fps_new, const IntegrateOptions& opts);

inline constexpr double kPatchDrawingConfidence = 0.95;

// Lenient matching for partial updates: drawing numbers first, then exact
// hashes. Unmatched old pages become orphans, never deletions.
MatchResult patch_mode_match(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                             std::span<const PageFingerprint> fps_old,
                             std::span<const PageFingerprint> fps_new);

}  // namespace pagealign
