#include "pagealign/pipeline.h"

#include <algorithm>
#include <map>

namespace pagealign {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Sequential: return "sequential";
    case Variant::LcsOnly: return "lcs_only";
    case Variant::SevenPhaseOnly: return "seven_phase_only";
    case Variant::Full: return "full";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::Sequential, Variant::LcsOnly, Variant::SevenPhaseOnly,
                    Variant::Full}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

std::string_view to_string(Mode m) { return m == Mode::Patch ? "patch" : "full"; }

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "full") return Mode::Full;
  if (name == "patch") return Mode::Patch;
  return std::nullopt;
}

namespace {

MatchResult sequential(int m, int n) {
  MatchResult r;
  const int k = std::min(m, n);
  for (int i = 0; i < k; ++i) {
    r.matches.push_back({i, i, MatchType::PositionMatch, 1.0, MatchSource::LCS});
  }
  for (int i = k; i < m; ++i) r.deleted.push_back(i);
  for (int j = k; j < n; ++j) r.inserted.push_back(j);
  return r;
}

// DP over the pages that received a provisional (phase 4-6) match. The
// resulting confidence never exceeds the provisional confidences involved.
std::vector<PageMatch> refine_with_dp(const Region& region, const SevenPhaseResult& seven,
                                      const DocumentBundle& old_doc,
                                      const DocumentBundle& new_doc,
                                      std::span<const PageFingerprint> fps_old,
                                      std::span<const PageFingerprint> fps_new,
                                      const TextSimilarity& sim, const DpConfig& cfg,
                                      RegionAlignment* out) {
  std::map<int, double> old_cap;
  std::map<int, double> new_cap;
  for (const CandidateMatch& c : seven.matches) {
    if (c.final) continue;
    old_cap[c.old_index] = c.confidence;
    new_cap[c.new_index] = c.confidence;
  }
  std::vector<int> olds;
  std::vector<int> news;
  for (int o : region.old_pages) {
    if (old_cap.contains(o)) olds.push_back(o);
  }
  for (int j : region.new_pages) {
    if (new_cap.contains(j)) news.push_back(j);
  }
  RegionAlignment aligned =
      align_region(olds, news, old_doc, new_doc, fps_old, fps_new, sim, cfg);
  std::vector<PageMatch> refined;
  for (const DpMatch& d : aligned.matches) {
    const double cap = std::min(old_cap[d.old_index], new_cap[d.new_index]);
    refined.push_back(
        {d.old_index, d.new_index, d.type, std::min(d.confidence, cap), MatchSource::DP});
  }
  if (out) *out = std::move(aligned);
  return refined;
}

}  // namespace

MatchResult match_documents(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                            std::span<const PageFingerprint> fps_old,
                            std::span<const PageFingerprint> fps_new, const MatchConfig& cfg,
                            Variant variant, MatchTrace* trace) {
  cfg.validate();
  const int m = static_cast<int>(fps_old.size());
  const int n = static_cast<int>(fps_new.size());
  if (variant == Variant::Sequential) return sequential(m, n);

  std::vector<std::string> old_hashes;
  std::vector<std::string> new_hashes;
  for (const auto& fp : fps_old) old_hashes.push_back(fp.content_hash);
  for (const auto& fp : fps_new) new_hashes.push_back(fp.content_hash);

  MatchTrace local;
  MatchTrace& t = trace ? *trace : local;
  t.blocks = sequence_blocks(old_hashes, new_hashes);
  t.regions = replace_regions(t.blocks);

  IntegrateOptions opts;
  opts.seven = cfg.seven;
  if (variant == Variant::LcsOnly) {
    opts.visual_rematch = false;
    return integrate(t.blocks, {}, {}, fps_old, fps_new, opts);
  }

  std::vector<std::pair<int, int>> anchors;
  for (const AlignmentBlock& b : t.blocks) {
    if (b.kind != BlockKind::Equal) continue;
    for (int k = 0; k < b.old_range.size(); ++k) {
      anchors.emplace_back(b.old_range.begin + k, b.new_range.begin + k);
    }
  }

  const TextSimilarity sim(old_doc, new_doc);
  std::vector<PageMatch> refined;
  for (const Region& region : t.regions) {
    t.seven_phase.push_back(run_seven_phase(region, fps_old, fps_new, sim, anchors, cfg.seven));
    const SevenPhaseResult& seven = t.seven_phase.back();
    if (variant == Variant::SevenPhaseOnly) {
      for (const CandidateMatch& c : seven.matches) {
        if (!c.final) {
          refined.push_back(
              {c.old_index, c.new_index, c.type, c.confidence, MatchSource::SevenPhase});
        }
      }
      continue;
    }
    t.dp.emplace_back();
    for (PageMatch& p : refine_with_dp(region, seven, old_doc, new_doc, fps_old, fps_new, sim,
                                       cfg.dp, &t.dp.back())) {
      refined.push_back(p);
    }
  }
  return integrate(t.blocks, t.seven_phase, refined, fps_old, fps_new, opts);
}

MatchResult match_documents(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                            const MatchConfig& cfg, Variant variant) {
  const auto fps_old = fingerprint_bundle(old_doc);
  const auto fps_new = fingerprint_bundle(new_doc);
  return match_documents(old_doc, new_doc, fps_old, fps_new, cfg, variant);
}

}  // namespace pagealign
