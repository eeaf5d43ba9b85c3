#include "pagealign/lcs_align.h"

#include "pagealign/fingerprint.h"
#include "pagealign/utf8.h"

namespace pagealign {

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Equal: return "equal";
    case BlockKind::Replace: return "replace";
    case BlockKind::Insert: return "insert";
    case BlockKind::Delete: return "delete";
  }
  return "?";
}

std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b) {
  const std::vector<char32_t> av(a.begin(), a.end());
  const std::vector<char32_t> bv(b.begin(), b.end());
  return matching_blocks(av, bv);
}

std::vector<AlignmentBlock> blocks_from_matches(const std::vector<MatchingBlock>& matches,
                                                int old_size, int new_size) {
  std::vector<AlignmentBlock> blocks;
  int i = 0;
  int j = 0;
  auto flush_gap = [&](int ai, int bj) {
    if (i < ai && j < bj) {
      blocks.push_back({BlockKind::Replace, {i, ai}, {j, bj}});
    } else if (i < ai) {
      blocks.push_back({BlockKind::Delete, {i, ai}, {j, j}});
    } else if (j < bj) {
      blocks.push_back({BlockKind::Insert, {i, i}, {j, bj}});
    }
  };
  for (const MatchingBlock& m : matches) {
    const int ai = static_cast<int>(m.a);
    const int bj = static_cast<int>(m.b);
    const int size = static_cast<int>(m.size);
    flush_gap(ai, bj);
    if (size > 0) blocks.push_back({BlockKind::Equal, {ai, ai + size}, {bj, bj + size}});
    i = ai + size;
    j = bj + size;
  }
  flush_gap(old_size, new_size);
  return blocks;
}

std::vector<AlignmentBlock> sequence_blocks(const std::vector<std::string>& old_hashes,
                                            const std::vector<std::string>& new_hashes) {
  const auto matches = matching_blocks(old_hashes, new_hashes,
                                       [](const std::string& h) { return h.empty(); });
  return blocks_from_matches(matches, static_cast<int>(old_hashes.size()),
                             static_cast<int>(new_hashes.size()));
}

double similarity_ratio(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 0.0;
  std::size_t matched = 0;
  for (const MatchingBlock& m : matching_blocks(a, b)) matched += m.size;
  return 2.0 * static_cast<double>(matched) / static_cast<double>(total);
}

double text_similarity(std::string_view a, std::string_view b) {
  return similarity_ratio(utf8::decode(normalize_text(a)), utf8::decode(normalize_text(b)));
}

TextSimilarity::TextSimilarity(const DocumentBundle& old_doc, const DocumentBundle& new_doc) {
  old_.reserve(old_doc.pages.size());
  for (const PageRecord& p : old_doc.pages) old_.push_back(utf8::decode(normalize_text(p.text)));
  new_.reserve(new_doc.pages.size());
  for (const PageRecord& p : new_doc.pages) new_.push_back(utf8::decode(normalize_text(p.text)));
}

TextSimilarity::TextSimilarity(const std::vector<std::string>& old_texts,
                               const std::vector<std::string>& new_texts) {
  for (const auto& t : old_texts) old_.push_back(utf8::decode(normalize_text(t)));
  for (const auto& t : new_texts) new_.push_back(utf8::decode(normalize_text(t)));
}

double TextSimilarity::operator()(int old_index, int new_index) const {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(old_index) << 32) | static_cast<std::uint32_t>(new_index);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const double s = similarity_ratio(old_[old_index], new_[new_index]);
  memo_.emplace(key, s);
  return s;
}

}  // namespace pagealign
