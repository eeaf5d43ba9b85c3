#include "pagealign/diff_engine.h"

#include <algorithm>
#include <cstdlib>
#include <string_view>
#include <tuple>
#include <utility>

#include "pagealign/errors.h"
#include "pagealign/utf8.h"

namespace pagealign {

const char* to_string(SpanKind kind) {
  switch (kind) {
    case SpanKind::Unchanged: return "unchanged";
    case SpanKind::Added: return "added";
    case SpanKind::Deleted: return "deleted";
  }
  return "?";
}

int TextDiff::change_count() const {
  return static_cast<int>(std::count_if(spans.begin(), spans.end(), [](const TextSpan& s) {
    return s.kind != SpanKind::Unchanged;
  }));
}

TextDiff text_diff(std::string_view old_text, std::string_view new_text) {
  std::u32string a = utf8::decode(old_text);
  std::u32string b = utf8::decode(new_text);
  if (a.size() > kTextDiffMaxChars) a.resize(kTextDiffMaxChars);
  if (b.size() > kTextDiffMaxChars) b.resize(kTextDiffMaxChars);

  auto blocks = matching_blocks(a, b);
  blocks.push_back({a.size(), b.size(), 0});

  TextDiff diff;
  int i = 0;
  int j = 0;
  for (const MatchingBlock& m : blocks) {
    const int ai = static_cast<int>(m.a);
    const int bj = static_cast<int>(m.b);
    const int size = static_cast<int>(m.size);
    if (i < ai) {
      diff.spans.push_back({SpanKind::Deleted, {i, ai}, {j, j},
                            utf8::encode(std::u32string_view(a).substr(i, ai - i))});
    }
    if (j < bj) {
      diff.spans.push_back({SpanKind::Added, {ai, ai}, {j, bj},
                            utf8::encode(std::u32string_view(b).substr(j, bj - j))});
    }
    if (size > 0) {
      diff.spans.push_back({SpanKind::Unchanged, {ai, ai + size}, {bj, bj + size},
                            utf8::encode(std::u32string_view(a).substr(ai, size))});
    }
    i = ai + size;
    j = bj + size;
  }
  return diff;
}

namespace {

std::string_view trim(std::string_view s) {
  // ASCII and ideographic whitespace at either end.
  auto is_ws = [](std::string_view v, bool front) -> std::size_t {
    if (v.empty()) return 0;
    if (front) {
      const unsigned char c = v.front();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
      if (v.starts_with("\xE3\x80\x80")) return 3;
    } else {
      const unsigned char c = v.back();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
      if (v.ends_with("\xE3\x80\x80")) return 3;
    }
    return 0;
  };
  while (std::size_t k = is_ws(s, true)) s.remove_prefix(k);
  while (std::size_t k = is_ws(s, false)) s.remove_suffix(k);
  return s;
}

const std::string& cell_or_empty(const TableGrid& t, std::size_t r, std::size_t c) {
  static const std::string kEmpty;
  if (r >= t.rows.size() || c >= t.rows[r].size()) return kEmpty;
  return t.rows[r][c];
}

}  // namespace

TableDiff table_diff(const std::vector<TableGrid>& old_tables,
                     const std::vector<TableGrid>& new_tables) {
  TableDiff diff;
  const std::size_t shared = std::min(old_tables.size(), new_tables.size());
  for (std::size_t t = 0; t < shared; ++t) {
    const TableGrid& a = old_tables[t];
    const TableGrid& b = new_tables[t];
    const std::size_t rows = std::max(a.rows.size(), b.rows.size());
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t cols = std::max(r < a.rows.size() ? a.rows[r].size() : 0,
                                        r < b.rows.size() ? b.rows[r].size() : 0);
      for (std::size_t c = 0; c < cols; ++c) {
        const std::string& ov = cell_or_empty(a, r, c);
        const std::string& nv = cell_or_empty(b, r, c);
        const bool old_has = r < a.rows.size() && c < a.rows[r].size();
        const bool new_has = r < b.rows.size() && c < b.rows[r].size();
        if (old_has != new_has || trim(ov) != trim(nv)) {
          diff.changed_cells.push_back({static_cast<int>(t), static_cast<int>(r),
                                        static_cast<int>(c), ov, nv});
        }
      }
    }
  }
  for (std::size_t t = shared; t < old_tables.size(); ++t) {
    diff.removed_tables.push_back(static_cast<int>(t));
  }
  for (std::size_t t = shared; t < new_tables.size(); ++t) {
    diff.added_tables.push_back(static_cast<int>(t));
  }
  return diff;
}

Image difference_mask(const Image& old_gray, const Image& new_gray, int threshold) {
  Image mask(old_gray.width, old_gray.height, 1);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    const int d = std::abs(int{old_gray.data[i]} - int{new_gray.data[i]});
    mask.data[i] = d > threshold ? 1 : 0;
  }
  return mask;
}

namespace {

// Square-kernel morphology. Pixels outside the image take `border`.
Image morph(const Image& mask, int kernel, bool dilation) {
  const int r = kernel / 2;
  const std::uint8_t border = dilation ? 0 : 1;
  Image out(mask.width, mask.height, 1);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      std::uint8_t acc = dilation ? 0 : 1;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          const int yy = y + dy;
          const bool inside = xx >= 0 && yy >= 0 && xx < mask.width && yy < mask.height;
          const std::uint8_t v = inside ? mask.at(xx, yy) : border;
          acc = dilation ? std::max(acc, v) : std::min(acc, v);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

bool expanded_overlap(const Rect& a, const Rect& b, int margin) {
  return a.x - margin < b.right() + margin && b.x - margin < a.right() + margin &&
         a.y - margin < b.bottom() + margin && b.y - margin < a.bottom() + margin;
}

Rect unite(const Rect& a, const Rect& b) {
  const int x = std::min(a.x, b.x);
  const int y = std::min(a.y, b.y);
  return {x, y, std::max(a.right(), b.right()) - x, std::max(a.bottom(), b.bottom()) - y};
}

}  // namespace

Image dilate(const Image& mask, int kernel) { return morph(mask, kernel, true); }
Image erode(const Image& mask, int kernel) { return morph(mask, kernel, false); }

std::vector<Rect> component_boxes(const Image& mask, int min_area) {
  std::vector<Rect> boxes;
  std::vector<bool> seen(mask.pixel_count(), false);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
      if (!mask.data[idx] || seen[idx]) continue;
      int x0 = x, x1 = x, y0 = y, y1 = y, area = 0;
      seen[idx] = true;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++area;
        x0 = std::min(x0, cx);
        x1 = std::max(x1, cx);
        y0 = std::min(y0, cy);
        y1 = std::max(y1, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
            if (mask.data[nidx] && !seen[nidx]) {
              seen[nidx] = true;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
      if (area >= min_area) boxes.push_back({x0, y0, x1 - x0 + 1, y1 - y0 + 1});
    }
  }
  return boxes;
}

std::vector<Rect> merge_rects(std::vector<Rect> rects, int margin) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < rects.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < rects.size(); ++j) {
        if (expanded_overlap(rects[i], rects[j], margin)) {
          rects[i] = unite(rects[i], rects[j]);
          rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
      }
    }
  }
  std::sort(rects.begin(), rects.end(), [](const Rect& a, const Rect& b) {
    return std::tie(a.y, a.x, a.height, a.width) < std::tie(b.y, b.x, b.height, b.width);
  });
  return rects;
}

VisualDiff visual_diff(const Image& old_raster, const Image& new_raster,
                       const VisualDiffConfig& cfg) {
  if (old_raster.empty() || new_raster.empty()) {
    throw RasterMissing("visual diff needs both high-resolution rasters");
  }
  const int w = std::max(old_raster.width, new_raster.width);
  const int h = std::max(old_raster.height, new_raster.height);
  const Image a = resize_bilinear(to_gray(old_raster), w, h);
  const Image b = resize_bilinear(to_gray(new_raster), w, h);

  const Image mask = difference_mask(a, b, cfg.pixel_threshold);
  std::size_t changed = 0;
  for (auto v : mask.data) changed += v;

  VisualDiff diff;
  diff.width = w;
  diff.height = h;
  diff.changed_pixel_fraction = static_cast<double>(changed) / static_cast<double>(mask.pixel_count());
  if (changed == 0) return diff;
  const Image cleaned = erode(dilate(mask, cfg.kernel_size), cfg.kernel_size);
  diff.regions = merge_rects(component_boxes(cleaned, cfg.min_component_area), cfg.merge_margin);
  return diff;
}

PairDiff diff_pair(const PageRecord& old_page, const PageRecord& new_page, const DiffConfig& cfg) {
  PairDiff d;
  d.old_index = old_page.index;
  d.new_index = new_page.index;
  d.text = text_diff(old_page.text, new_page.text);
  d.tables = table_diff(old_page.tables, new_page.tables);
  if (old_page.raster_high && new_page.raster_high) {
    d.visual = visual_diff(*old_page.raster_high, *new_page.raster_high, cfg.visual);
  }
  return d;
}

}  // namespace pagealign
