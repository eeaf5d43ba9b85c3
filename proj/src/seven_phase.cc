#include "pagealign/seven_phase.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace pagealign {

double phase_number(Phase phase) {
  switch (phase) {
    case Phase::ExactHash: return 1;
    case Phase::DrawingNumber: return 2;
    case Phase::SectionTitle: return 3;
    case Phase::PageShift: return 4;
    case Phase::TextSimilarity: return 5;
    case Phase::PositionInterpolation: return 6;
    case Phase::VisualRematch: return 7.5;
  }
  return 0;
}

void SevenPhaseConfig::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(tau_s, "tau_s");
  unit(shift_fraction, "shift_fraction");
  unit(adjacency_accept, "adjacency_accept");
  unit(phash_accept, "phash_accept");
  if (shift_min_votes < 1) throw std::invalid_argument("shift_min_votes must be >= 1");
  if (adjacency_max_d < 0) throw std::invalid_argument("adjacency_max_d must be >= 0");
}

std::vector<Region> replace_regions(const std::vector<AlignmentBlock>& blocks) {
  std::vector<Region> regions;
  bool open = false;
  for (const AlignmentBlock& b : blocks) {
    if (b.kind == BlockKind::Equal) {
      open = false;
      continue;
    }
    if (!open) {
      regions.emplace_back();
      open = true;
    }
    Region& r = regions.back();
    for (int o = b.old_range.begin; o < b.old_range.end; ++o) r.old_pages.push_back(o);
    for (int n = b.new_range.begin; n < b.new_range.end; ++n) r.new_pages.push_back(n);
  }
  return regions;
}

namespace {

const std::string& key_of(const PageFingerprint& fp, ExactKey key) {
  switch (key) {
    case ExactKey::ContentHash: return fp.content_hash;
    case ExactKey::DrawingNumber: return fp.drawing_number;
    case ExactKey::SectionTitle: return fp.section_title;
  }
  return fp.content_hash;
}

std::vector<int> unclaimed_old(const Region& region, const Claimed& claimed) {
  std::vector<int> out;
  for (int o : region.old_pages) {
    if (!claimed.has_old(o)) out.push_back(o);
  }
  return out;
}

std::vector<int> unclaimed_new(const Region& region, const Claimed& claimed) {
  std::vector<int> out;
  for (int n : region.new_pages) {
    if (!claimed.has_new(n)) out.push_back(n);
  }
  return out;
}

struct ScoredPair {
  double score;
  int old_index;
  int new_index;
};

// Greedy one-to-one: highest score first, ties to the smaller old index and
// then the smaller new index.
std::vector<ScoredPair> greedy_assign(std::vector<ScoredPair> pairs, double accept) {
  std::sort(pairs.begin(), pairs.end(), [](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.old_index, a.new_index) < std::tie(b.old_index, b.new_index);
  });
  std::set<int> used_old;
  std::set<int> used_new;
  std::vector<ScoredPair> taken;
  for (const ScoredPair& p : pairs) {
    if (p.score < accept) break;
    if (used_old.contains(p.old_index) || used_new.contains(p.new_index)) continue;
    used_old.insert(p.old_index);
    used_new.insert(p.new_index);
    taken.push_back(p);
  }
  return taken;
}

}  // namespace

std::vector<CandidateMatch> match_exact_keys(const Region& region, ExactKey key,
                                             std::span<const PageFingerprint> fps_old,
                                             std::span<const PageFingerprint> fps_new,
                                             const Claimed& claimed) {
  Phase phase = Phase::ExactHash;
  MatchType type = MatchType::ExactHash;
  double confidence = kExactHashConfidence;
  if (key == ExactKey::DrawingNumber) {
    phase = Phase::DrawingNumber;
    type = MatchType::DrawingNumber;
    confidence = kDrawingNumberConfidence;
  } else if (key == ExactKey::SectionTitle) {
    phase = Phase::SectionTitle;
    type = MatchType::SectionTitle;
    confidence = kSectionTitleConfidence;
  }

  std::map<std::string, std::vector<int>> new_by_key;
  for (int n : unclaimed_new(region, claimed)) {
    const std::string& k = key_of(fps_new[n], key);
    if (!k.empty()) new_by_key[k].push_back(n);
  }
  std::map<std::string, std::size_t> seen;
  std::vector<CandidateMatch> out;
  for (int o : unclaimed_old(region, claimed)) {
    const std::string& k = key_of(fps_old[o], key);
    if (k.empty()) continue;
    auto it = new_by_key.find(k);
    if (it == new_by_key.end()) continue;
    const std::size_t occurrence = seen[k]++;
    if (occurrence >= it->second.size()) continue;
    out.push_back({o, it->second[occurrence], phase, confidence, type, true});
  }
  return out;
}

std::optional<PageShift> detect_page_shift(const Region& region, const Claimed& claimed,
                                           const TextSimilarity& sim,
                                           const SevenPhaseConfig& cfg) {
  const int mb = static_cast<int>(region.old_pages.size());
  const int nb = static_cast<int>(region.new_pages.size());
  if (mb == 0 || nb == 0) return std::nullopt;

  std::optional<PageShift> best;
  for (int delta = -(mb / 2); delta <= nb / 2; ++delta) {
    PageShift cand;
    cand.delta = delta;
    for (int i = 0; i < mb; ++i) {
      const int j = i + delta;
      if (j < 0 || j >= nb) continue;
      const int o = region.old_pages[i];
      const int n = region.new_pages[j];
      if (claimed.has_old(o) || claimed.has_new(n)) continue;
      if (sim(o, n) >= cfg.tau_s) {
        cand.matches.push_back(
            {o, n, Phase::PageShift, kPageShiftConfidence, MatchType::PageShift, false});
      }
    }
    cand.votes = static_cast<int>(cand.matches.size());
    const bool better =
        !best || cand.votes > best->votes ||
        (cand.votes == best->votes &&
         (std::abs(delta) < std::abs(best->delta) ||
          (std::abs(delta) == std::abs(best->delta) && delta < best->delta)));
    if (better) best = std::move(cand);
  }
  // The small epsilon keeps e.g. 0.3 * 10 from rounding up to 4.
  const int fraction_votes =
      static_cast<int>(std::ceil(cfg.shift_fraction * std::min(mb, nb) - 1e-9));
  const int needed = std::max(cfg.shift_min_votes, fraction_votes);
  if (!best || best->votes < needed) return std::nullopt;
  return best;
}

std::vector<CandidateMatch> match_text_similarity(const Region& region, const Claimed& claimed,
                                                  const TextSimilarity& sim,
                                                  const SevenPhaseConfig& cfg) {
  std::vector<ScoredPair> pairs;
  const auto olds = unclaimed_old(region, claimed);
  const auto news = unclaimed_new(region, claimed);
  for (int o : olds) {
    for (int n : news) pairs.push_back({sim(o, n), o, n});
  }
  std::vector<CandidateMatch> out;
  for (const ScoredPair& p : greedy_assign(std::move(pairs), cfg.tau_s)) {
    out.push_back({p.old_index, p.new_index, Phase::TextSimilarity,
                   std::min(kTextSimilarCeiling, p.score), MatchType::TextSimilar, false});
  }
  return out;
}

std::optional<double> interpolate_position(int old_index,
                                           std::span<const std::pair<int, int>> anchors) {
  const std::pair<int, int>* prev = nullptr;
  const std::pair<int, int>* next = nullptr;
  for (const auto& a : anchors) {
    if (a.first < old_index && (!prev || a.first > prev->first)) prev = &a;
    if (a.first > old_index && (!next || a.first < next->first)) next = &a;
  }
  if (prev && next) {
    const double t = static_cast<double>(old_index - prev->first) / (next->first - prev->first);
    return prev->second + t * (next->second - prev->second);
  }
  if (prev) return static_cast<double>(prev->second + (old_index - prev->first));
  if (next) return static_cast<double>(next->second - (next->first - old_index));
  return std::nullopt;
}

std::vector<CandidateMatch> match_position_interpolation(
    const Region& region, const Claimed& claimed, std::span<const std::pair<int, int>> anchors,
    const TextSimilarity& sim, const SevenPhaseConfig& cfg) {
  std::vector<ScoredPair> pairs;
  const auto news = unclaimed_new(region, claimed);
  for (int o : unclaimed_old(region, claimed)) {
    const auto expected = interpolate_position(o, anchors);
    if (!expected) continue;
    const long center = std::lround(*expected);
    for (int n : news) {
      const long d = std::labs(n - center);
      if (d > cfg.adjacency_max_d) continue;
      const double adjusted = sim(o, n) * (1.0 - 0.1 * static_cast<double>(d));
      pairs.push_back({adjusted, o, n});
    }
  }
  std::vector<CandidateMatch> out;
  for (const ScoredPair& p : greedy_assign(std::move(pairs), cfg.adjacency_accept)) {
    out.push_back({p.old_index, p.new_index, Phase::PositionInterpolation,
                   std::clamp(p.score, 0.0, 1.0), MatchType::PositionInterp, false});
  }
  return out;
}

Residuals classify_residuals(const Region& region, const Claimed& claimed) {
  return {unclaimed_old(region, claimed), unclaimed_new(region, claimed)};
}

std::vector<CandidateMatch> visual_rematch(std::span<const int> unmatched_old,
                                           std::span<const int> unmatched_new,
                                           std::span<const PageFingerprint> fps_old,
                                           std::span<const PageFingerprint> fps_new,
                                           const SevenPhaseConfig& cfg) {
  std::vector<ScoredPair> pairs;
  for (int o : unmatched_old) {
    if (!fps_old[o].phash) continue;
    for (int n : unmatched_new) {
      if (!fps_new[n].phash) continue;
      pairs.push_back({phash_similarity(*fps_old[o].phash, *fps_new[n].phash), o, n});
    }
  }
  std::vector<CandidateMatch> out;
  for (const ScoredPair& p : greedy_assign(std::move(pairs), cfg.phash_accept)) {
    out.push_back({p.old_index, p.new_index, Phase::VisualRematch, p.score,
                   MatchType::ContentSimilar, true});
  }
  std::sort(out.begin(), out.end(), [](const CandidateMatch& a, const CandidateMatch& b) {
    return a.old_index < b.old_index;
  });
  return out;
}

SevenPhaseResult run_seven_phase(const Region& region, std::span<const PageFingerprint> fps_old,
                                 std::span<const PageFingerprint> fps_new,
                                 const TextSimilarity& sim,
                                 std::span<const std::pair<int, int>> anchors,
                                 const SevenPhaseConfig& cfg) {
  SevenPhaseResult result;
  Claimed claimed;
  auto take = [&](const std::vector<CandidateMatch>& found) {
    for (const CandidateMatch& m : found) {
      claimed.add(m.old_index, m.new_index);
      result.matches.push_back(m);
    }
  };

  take(match_exact_keys(region, ExactKey::ContentHash, fps_old, fps_new, claimed));
  take(match_exact_keys(region, ExactKey::DrawingNumber, fps_old, fps_new, claimed));
  take(match_exact_keys(region, ExactKey::SectionTitle, fps_old, fps_new, claimed));
  if (auto shift = detect_page_shift(region, claimed, sim, cfg)) {
    result.shift = shift->delta;
    take(shift->matches);
  }
  take(match_text_similarity(region, claimed, sim, cfg));

  std::vector<std::pair<int, int>> all_anchors(anchors.begin(), anchors.end());
  for (const CandidateMatch& m : result.matches) {
    all_anchors.emplace_back(m.old_index, m.new_index);
  }
  take(match_position_interpolation(region, claimed, all_anchors, sim, cfg));

  result.residuals = classify_residuals(region, claimed);
  return result;
}

}  // namespace pagealign
