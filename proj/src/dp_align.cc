#include "pagealign/dp_align.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pagealign {

void DpConfig::validate() const {
  if (!(gap_penalty < 0)) throw std::invalid_argument("gap_penalty must be negative");
  if (!(content_similar_threshold >= 0)) {
    throw std::invalid_argument("content_similar_threshold must be non-negative");
  }
  if (!(position_match_cap >= 0 && position_match_cap <= 1)) {
    throw std::invalid_argument("position_match_cap must lie in [0, 1]");
  }
}

double length_ratio(int old_chars, int new_chars) {
  if (old_chars == 0 && new_chars == 0) return 1.0;
  const int hi = std::max(old_chars, new_chars);
  if (std::min(old_chars, new_chars) <= 0) return 0.0;
  return static_cast<double>(std::min(old_chars, new_chars)) / hi;
}

double positional_score(int i, int j, int m, int n) {
  return 1.0 - std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n);
}

bool drawing_substring_match(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty() || a == b) return false;
  const std::string& shorter = a.size() < b.size() ? a : b;
  const std::string& longer = a.size() < b.size() ? b : a;
  return shorter.size() >= 2 && longer.find(shorter) != std::string::npos;
}

PairScore pair_score(const PageRecord& old_page, const PageFingerprint& old_fp,
                     const PageRecord& new_page, const PageFingerprint& new_fp, int i, int j,
                     int m, int n, double text_sim) {
  PairScore s;
  s.s_t = text_sim;
  if (old_fp.phash && new_fp.phash) s.s_v = phash_similarity(*old_fp.phash, *new_fp.phash);
  s.s_b = s.s_v ? weights::kText * s.s_t + weights::kVisual * *s.s_v : s.s_t;
  s.s_len = length_ratio(old_page.char_count, new_page.char_count);
  s.p_pos = positional_score(i, j, m, n);
  auto same = [](const std::string& a, const std::string& b) { return !a.empty() && a == b; };
  s.bonus_hash = same(old_fp.content_hash, new_fp.content_hash) ? weights::kHash : 0.0;
  s.bonus_drawing = same(old_fp.drawing_number, new_fp.drawing_number) ? weights::kDrawing : 0.0;
  s.bonus_drawing_substr =
      drawing_substring_match(old_fp.drawing_number, new_fp.drawing_number)
          ? weights::kDrawingSubstr
          : 0.0;
  s.bonus_title = same(old_fp.section_title, new_fp.section_title) ? weights::kTitle : 0.0;
  s.total = weights::kBase * s.s_b + weights::kLength * s.s_len + weights::kPosition * s.p_pos +
            s.bonus_hash + s.bonus_drawing + s.bonus_drawing_substr + s.bonus_title;
  return s;
}

PairScore pair_score(const PageRecord& old_page, const PageFingerprint& old_fp,
                     const PageRecord& new_page, const PageFingerprint& new_fp, int i, int j,
                     int m, int n) {
  return pair_score(old_page, old_fp, new_page, new_fp, i, j, m, n,
                    text_similarity(old_page.text, new_page.text));
}

DpAlignment align_scores(const std::vector<std::vector<double>>& score, double gap) {
  const int m = static_cast<int>(score.size());
  const int n = m == 0 ? 0 : static_cast<int>(score[0].size());
  enum Move : unsigned char { kDiag, kUp, kLeft };
  std::vector<std::vector<double>> d(m + 1, std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<Move>> back(m + 1, std::vector<Move>(n + 1, kDiag));
  for (int i = 1; i <= m; ++i) {
    d[i][0] = i * gap;
    back[i][0] = kUp;
  }
  for (int j = 1; j <= n; ++j) {
    d[0][j] = j * gap;
    back[0][j] = kLeft;
  }
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double diag = d[i - 1][j - 1] + score[i - 1][j - 1];
      const double up = d[i - 1][j] + gap;
      const double left = d[i][j - 1] + gap;
      if (diag >= up && diag >= left) {
        d[i][j] = diag;
        back[i][j] = kDiag;
      } else if (up >= left) {
        d[i][j] = up;
        back[i][j] = kUp;
      } else {
        d[i][j] = left;
        back[i][j] = kLeft;
      }
    }
  }

  DpAlignment out;
  out.total = d[m][n];
  int i = m;
  int j = n;
  while (i > 0 || j > 0) {
    switch (back[i][j]) {
      case kDiag:
        out.pairs.push_back({i - 1, j - 1, score[i - 1][j - 1]});
        --i;
        --j;
        break;
      case kUp:
        out.old_gaps.push_back(--i);
        break;
      case kLeft:
        out.new_gaps.push_back(--j);
        break;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  std::reverse(out.old_gaps.begin(), out.old_gaps.end());
  std::reverse(out.new_gaps.begin(), out.new_gaps.end());
  return out;
}

std::pair<MatchType, double> classify_dp_score(double score, const DpConfig& cfg) {
  if (score >= cfg.content_similar_threshold) {
    return {MatchType::ContentSimilar, std::min(1.0, score)};
  }
  return {MatchType::PositionMatch, std::clamp(score, 0.0, cfg.position_match_cap)};
}

RegionAlignment align_region(std::span<const int> old_pages, std::span<const int> new_pages,
                             const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                             std::span<const PageFingerprint> fps_old,
                             std::span<const PageFingerprint> fps_new, const TextSimilarity& sim,
                             const DpConfig& cfg) {
  const int m = static_cast<int>(old_pages.size());
  const int n = static_cast<int>(new_pages.size());
  std::vector<std::vector<PairScore>> parts(m, std::vector<PairScore>(n));
  std::vector<std::vector<double>> totals(m, std::vector<double>(n, 0.0));
  for (int i = 0; i < m; ++i) {
    const int o = old_pages[i];
    for (int j = 0; j < n; ++j) {
      const int nj = new_pages[j];
      parts[i][j] = pair_score(old_doc.pages[o], fps_old[o], new_doc.pages[nj], fps_new[nj], i,
                               j, m, n, sim(o, nj));
      totals[i][j] = parts[i][j].total;
    }
  }
  DpAlignment aligned = align_scores(totals, cfg.gap_penalty);
  if (m == 0) {
    // A matrix without rows cannot carry its column count.
    for (int j = 0; j < n; ++j) aligned.new_gaps.push_back(j);
    aligned.total = n * cfg.gap_penalty;
  }

  RegionAlignment out;
  out.total = aligned.total;
  for (const AlignedPair& p : aligned.pairs) {
    const auto [type, confidence] = classify_dp_score(p.score, cfg);
    out.matches.push_back({old_pages[p.i], new_pages[p.j], parts[p.i][p.j], type, confidence});
  }
  for (int i : aligned.old_gaps) out.old_gaps.push_back(old_pages[i]);
  for (int j : aligned.new_gaps) out.new_gaps.push_back(new_pages[j]);
  return out;
}

}  // namespace pagealign
