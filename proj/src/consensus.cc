#include "pagealign/consensus.h"

#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "pagealign/errors.h"

namespace pagealign {

void check_match_result(const MatchResult& result, int old_pages, int new_pages) {
  std::vector<int> old_seen(old_pages, 0);
  std::vector<int> new_seen(new_pages, 0);
  auto mark = [](std::vector<int>& seen, int idx, const char* side) {
    if (idx < 0 || idx >= static_cast<int>(seen.size())) {
      throw ConsistencyError(std::string(side) + " index " + std::to_string(idx) +
                             " out of range");
    }
    ++seen[idx];
  };
  for (const PageMatch& m : result.matches) {
    mark(old_seen, m.old_index, "old");
    mark(new_seen, m.new_index, "new");
    if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) {
      throw ConsistencyError("confidence outside [0, 1]");
    }
  }
  for (int o : result.deleted) mark(old_seen, o, "old");
  for (int o : result.orphans) mark(old_seen, o, "old");
  for (int o : result.blank_old) mark(old_seen, o, "old");
  for (int n : result.inserted) mark(new_seen, n, "new");
  for (int n : result.blank_new) mark(new_seen, n, "new");
  for (int i = 0; i < old_pages; ++i) {
    if (old_seen[i] != 1) {
      throw ConsistencyError("old page " + std::to_string(i) + " accounted for " +
                             std::to_string(old_seen[i]) + " times");
    }
  }
  for (int j = 0; j < new_pages; ++j) {
    if (new_seen[j] != 1) {
      throw ConsistencyError("new page " + std::to_string(j) + " accounted for " +
                             std::to_string(new_seen[j]) + " times");
    }
  }
}

namespace {

class Assignment {
 public:
  Assignment(int old_pages, int new_pages) : old_used_(old_pages, false), new_used_(new_pages, false) {}

  bool free(int o, int n) const { return !old_used_[o] && !new_used_[n]; }

  void take(const PageMatch& m) {
    old_used_[m.old_index] = true;
    new_used_[m.new_index] = true;
    matches_.push_back(m);
  }

  std::vector<int> free_old() const { return free_of(old_used_); }
  std::vector<int> free_new() const { return free_of(new_used_); }

  std::vector<PageMatch> release() {
    std::sort(matches_.begin(), matches_.end(),
              [](const PageMatch& a, const PageMatch& b) { return a.old_index < b.old_index; });
    return std::move(matches_);
  }

 private:
  static std::vector<int> free_of(const std::vector<bool>& used) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(used.size()); ++i) {
      if (!used[i]) out.push_back(i);
    }
    return out;
  }

  std::vector<bool> old_used_;
  std::vector<bool> new_used_;
  std::vector<PageMatch> matches_;
};

// Internal guard: a single stage must never pair an index twice.
template <class Pairs, class Old, class New>
void check_stage(const Pairs& pairs, Old old_of, New new_of, const char* stage, int m, int n) {
  std::vector<bool> o_seen(m, false);
  std::vector<bool> n_seen(n, false);
  for (const auto& p : pairs) {
    const int o = old_of(p);
    const int j = new_of(p);
    if (o < 0 || o >= m || j < 0 || j >= n) {
      throw ConsistencyError(std::string(stage) + ": pair index out of range");
    }
    if (o_seen[o] || n_seen[j]) {
      throw ConsistencyError(std::string(stage) + ": page paired twice (" + std::to_string(o) +
                             ", " + std::to_string(j) + ")");
    }
    o_seen[o] = n_seen[j] = true;
  }
}

}  // namespace

MatchResult integrate(const std::vector<AlignmentBlock>& blocks,
                      const std::vector<SevenPhaseResult>& seven_phase,
                      const std::vector<PageMatch>& refined,
                      std::span<const PageFingerprint> fps_old,
                      std::span<const PageFingerprint> fps_new, const IntegrateOptions& opts) {
  const int m = static_cast<int>(fps_old.size());
  const int n = static_cast<int>(fps_new.size());

  std::vector<PageMatch> lcs;
  for (const AlignmentBlock& b : blocks) {
    if (b.kind != BlockKind::Equal) continue;
    for (int k = 0; k < b.old_range.size(); ++k) {
      lcs.push_back({b.old_range.begin + k, b.new_range.begin + k, MatchType::ExactHash, 1.0,
                     MatchSource::LCS});
    }
  }
  std::vector<PageMatch> finals;
  for (const SevenPhaseResult& r : seven_phase) {
    for (const CandidateMatch& c : r.matches) {
      if (c.final) {
        finals.push_back({c.old_index, c.new_index, c.type, c.confidence,
                          MatchSource::SevenPhase});
      }
    }
  }
  auto old_of = [](const PageMatch& p) { return p.old_index; };
  auto new_of = [](const PageMatch& p) { return p.new_index; };
  check_stage(lcs, old_of, new_of, "lcs", m, n);
  check_stage(finals, old_of, new_of, "seven-phase", m, n);
  check_stage(refined, old_of, new_of, "dp", m, n);

  Assignment assign(m, n);
  const std::array<const std::vector<PageMatch>*, 3> stages{&lcs, &finals, &refined};
  for (const std::vector<PageMatch>* stage : stages) {
    for (const PageMatch& p : *stage) {
      if (assign.free(p.old_index, p.new_index)) assign.take(p);
    }
  }

  if (opts.visual_rematch) {
    const auto pool_old = assign.free_old();
    const auto pool_new = assign.free_new();
    for (const CandidateMatch& c :
         visual_rematch(pool_old, pool_new, fps_old, fps_new, opts.seven)) {
      assign.take({c.old_index, c.new_index, c.type, c.confidence, MatchSource::SevenPhase});
    }
  }

  MatchResult result;
  for (int o : assign.free_old()) {
    (fps_old[o].content_hash.empty() ? result.blank_old : result.deleted).push_back(o);
  }
  for (int j : assign.free_new()) {
    (fps_new[j].content_hash.empty() ? result.blank_new : result.inserted).push_back(j);
  }
  result.matches = assign.release();
  return result;
}

MatchResult patch_mode_match(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                             std::span<const PageFingerprint> fps_old,
                             std::span<const PageFingerprint> fps_new) {
  const int m = static_cast<int>(old_doc.pages.size());
  const int n = static_cast<int>(new_doc.pages.size());
  Region whole;
  for (int o = 0; o < m; ++o) whole.old_pages.push_back(o);
  for (int j = 0; j < n; ++j) whole.new_pages.push_back(j);

  Assignment assign(m, n);
  Claimed claimed;
  for (const CandidateMatch& c :
       match_exact_keys(whole, ExactKey::DrawingNumber, fps_old, fps_new, claimed)) {
    assign.take({c.old_index, c.new_index, MatchType::DrawingNumber, kPatchDrawingConfidence,
                 MatchSource::Patch});
    claimed.add(c.old_index, c.new_index);
  }
  for (const CandidateMatch& c :
       match_exact_keys(whole, ExactKey::ContentHash, fps_old, fps_new, claimed)) {
    assign.take({c.old_index, c.new_index, MatchType::ExactHash, kExactHashConfidence,
                 MatchSource::Patch});
  }

  MatchResult result;
  result.orphans = assign.free_old();
  result.inserted = assign.free_new();
  result.matches = assign.release();
  return result;
}

}  // namespace pagealign
