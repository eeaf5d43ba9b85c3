#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pagealign/bundle.h"

namespace pagealign {

struct MatchingBlock {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
  friend bool operator==(const MatchingBlock&, const MatchingBlock&) = default;
};

// Ratcliff/Obershelp ("gestalt") decomposition: find the longest common
// contiguous run, then recurse on both sides of it. Ties go to the run that
// starts earliest in `a`, then earliest in `b`. Elements for which is_junk()
// is true never take part in a match. Returned blocks are sorted and
// adjacent blocks are coalesced.
template <class T, class IsJunk>
std::vector<MatchingBlock> matching_blocks(const std::vector<T>& a, const std::vector<T>& b,
                                           IsJunk is_junk);

template <class T>
std::vector<MatchingBlock> matching_blocks(const std::vector<T>& a, const std::vector<T>& b) {
  return matching_blocks(a, b, [](const T&) { return false; });
}

std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b);

struct Range {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const Range&, const Range&) = default;
};

enum class BlockKind { Equal, Replace, Insert, Delete };

const char* to_string(BlockKind kind);

struct AlignmentBlock {
  BlockKind kind = BlockKind::Equal;
  Range old_range;
  Range new_range;
  friend bool operator==(const AlignmentBlock&, const AlignmentBlock&) = default;
};

// Turns matching blocks into a partition of both sequences.
std::vector<AlignmentBlock> blocks_from_matches(const std::vector<MatchingBlock>& matches,
                                                int old_size, int new_size);

// Block alignment over page content hashes. Empty hashes (short pages) are
// junk and never anchor an Equal block.
std::vector<AlignmentBlock> sequence_blocks(const std::vector<std::string>& old_hashes,
                                            const std::vector<std::string>& new_hashes);

// 2M/T over already-normalized scalar sequences; 0 when both are empty.
double similarity_ratio(std::u32string_view a, std::u32string_view b);

// 2M/T over the normalized forms of two raw texts.
double text_similarity(std::string_view a, std::string_view b);

// Memoized text_similarity between pages of two bundles. Normalization runs
// once per page. Not thread-safe.
class TextSimilarity {
 public:
  TextSimilarity(const DocumentBundle& old_doc, const DocumentBundle& new_doc);
  TextSimilarity(const std::vector<std::string>& old_texts,
                 const std::vector<std::string>& new_texts);

  double operator()(int old_index, int new_index) const;

  int old_size() const { return static_cast<int>(old_.size()); }
  int new_size() const { return static_cast<int>(new_.size()); }

 private:
  std::vector<std::u32string> old_;
  std::vector<std::u32string> new_;
  mutable std::unordered_map<std::uint64_t, double> memo_;
};

// ---------------------------------------------------------------------------

namespace detail {

template <class T, class Index>
MatchingBlock find_longest_match(const std::vector<T>& a, const Index& b2j, std::size_t alo,
                                 std::size_t ahi, std::size_t blo, std::size_t bhi,
                                 std::vector<std::size_t>& len_prev,
                                 std::vector<std::size_t>& len_cur,
                                 std::vector<std::size_t>& touched_prev,
                                 std::vector<std::size_t>& touched_cur) {
  // len_*[j + 1] = length of the match ending at (i, j); only entries listed
  // in touched_* are non-zero.
  MatchingBlock best{alo, blo, 0};
  for (std::size_t i = alo; i < ahi; ++i) {
    touched_cur.clear();
    auto it = b2j.find(a[i]);
    if (it != b2j.end()) {
      for (std::size_t j : it->second) {
        if (j < blo) continue;
        if (j >= bhi) break;
        const std::size_t k = len_prev[j] + 1;
        len_cur[j + 1] = k;
        touched_cur.push_back(j + 1);
        if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
      }
    }
    for (std::size_t t : touched_prev) len_prev[t] = 0;
    std::swap(len_prev, len_cur);
    std::swap(touched_prev, touched_cur);
  }
  for (std::size_t t : touched_prev) len_prev[t] = 0;
  touched_prev.clear();
  return best;
}

}  // namespace detail

template <class T, class IsJunk>
std::vector<MatchingBlock> matching_blocks(const std::vector<T>& a, const std::vector<T>& b,
                                           IsJunk is_junk) {
  std::unordered_map<T, std::vector<std::size_t>> b2j;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!is_junk(b[j])) b2j[b[j]].push_back(j);
  }
  std::vector<std::size_t> len_prev(b.size() + 1, 0);
  std::vector<std::size_t> len_cur(b.size() + 1, 0);
  std::vector<std::size_t> touched_prev;
  std::vector<std::size_t> touched_cur;

  std::vector<MatchingBlock> found;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> stack;
  stack.emplace_back(0, a.size(), 0, b.size());
  while (!stack.empty()) {
    const auto [alo, ahi, blo, bhi] = stack.back();
    stack.pop_back();
    const MatchingBlock m = detail::find_longest_match(a, b2j, alo, ahi, blo, bhi, len_prev,
                                                       len_cur, touched_prev, touched_cur);
    if (m.size == 0) continue;
    found.push_back(m);
    if (alo < m.a && blo < m.b) stack.emplace_back(alo, m.a, blo, m.b);
    if (m.a + m.size < ahi && m.b + m.size < bhi) {
      stack.emplace_back(m.a + m.size, ahi, m.b + m.size, bhi);
    }
  }
  std::sort(found.begin(), found.end(), [](const MatchingBlock& x, const MatchingBlock& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  std::vector<MatchingBlock> merged;
  for (const MatchingBlock& m : found) {
    if (!merged.empty() && merged.back().a + merged.back().size == m.a &&
        merged.back().b + merged.back().size == m.b) {
      merged.back().size += m.size;
    } else {
      merged.push_back(m);
    }
  }
  return merged;
}

}  // namespace pagealign
