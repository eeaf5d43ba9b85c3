#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pagealign/bundle.h"
#include "pagealign/image.h"
#include "pagealign/lcs_align.h"

namespace pagealign {

inline constexpr std::size_t kTextDiffMaxChars = 5000;

enum class SpanKind { Unchanged, Added, Deleted };
const char* to_string(SpanKind kind);

// Ranges are scalar-value offsets into the truncated texts.
struct TextSpan {
  SpanKind kind = SpanKind::Unchanged;
  Range old_range;
  Range new_range;
  std::string excerpt;
};

struct TextDiff {
  std::vector<TextSpan> spans;
  // Number of Added/Deleted spans.
  int change_count() const;
};

struct CellChange {
  int table_index = 0;
  int row = 0;
  int col = 0;
  std::string old_value;
  std::string new_value;
};

struct TableDiff {
  std::vector<CellChange> changed_cells;
  std::vector<int> added_tables;
  std::vector<int> removed_tables;
  bool empty() const {
    return changed_cells.empty() && added_tables.empty() && removed_tables.empty();
  }
};

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  int right() const { return x + width; }
  int bottom() const { return y + height; }
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct VisualDiffConfig {
  int pixel_threshold = 32;  // absolute intensity difference, of 255
  int kernel_size = 3;       // square structuring element for dilate/erode
  int min_component_area = 25;
  int merge_margin = 5;
};

struct VisualDiff {
  std::vector<Rect> regions;
  double changed_pixel_fraction = 0;  // before morphology
  int width = 0;   // common canvas the rectangles refer to
  int height = 0;
};

struct PairDiff {
  int old_index = 0;
  int new_index = 0;
  TextDiff text;
  TableDiff tables;
  std::optional<VisualDiff> visual;
};

struct DiffConfig {
  VisualDiffConfig visual;
};

// Character-level Ratcliff/Obershelp diff of the first 5000 scalar values of
// each text. A replaced run becomes a Deleted span followed by an Added span.
TextDiff text_diff(std::string_view old_text, std::string_view new_text);

TableDiff table_diff(const std::vector<TableGrid>& old_tables,
                     const std::vector<TableGrid>& new_tables);

// Binary change mask of two equally sized gray images.
Image difference_mask(const Image& old_gray, const Image& new_gray, int threshold);
Image dilate(const Image& mask, int kernel);
Image erode(const Image& mask, int kernel);

// Bounding boxes of 8-connected components with at least `min_area` pixels.
std::vector<Rect> component_boxes(const Image& mask, int min_area);

// Repeatedly merges rectangles whose margin-expanded boxes overlap.
std::vector<Rect> merge_rects(std::vector<Rect> rects, int margin);

// The smaller raster is scaled up to the larger canvas before differencing.
// Throws RasterMissing when either input is empty.
VisualDiff visual_diff(const Image& old_raster, const Image& new_raster,
                       const VisualDiffConfig& cfg = {});

PairDiff diff_pair(const PageRecord& old_page, const PageRecord& new_page,
                   const DiffConfig& cfg = {});

}  // namespace pagealign
