#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pagealign/image.h"

namespace pagealign {

inline constexpr int kLowRasterSize = 32;

// Cell strings are kept verbatim; ragged rows are allowed.
struct TableGrid {
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const TableGrid&, const TableGrid&) = default;
};

struct PageRecord {
  int index = 0;
  std::string text;
  int char_count = 0;  // scalar values in `text`
  std::vector<TableGrid> tables;
  std::optional<Image> raster_low;   // 32x32 gray when present
  std::optional<Image> raster_high;  // gray or RGB, nominally 150 DPI

  friend bool operator==(const PageRecord&, const PageRecord&) = default;
};

struct DocumentBundle {
  std::string doc_id;
  int page_count = 0;
  std::vector<PageRecord> pages;  // ordered by index

  friend bool operator==(const DocumentBundle&, const DocumentBundle&) = default;
};

struct GroundTruth {
  std::vector<std::pair<int, int>> matches;  // (old, new)
  std::vector<int> inserted;                 // new indices
  std::vector<int> deleted;                  // old indices
};

// Builds a page from text alone, filling char_count.
PageRecord make_page(int index, std::string text);

// Reads `<dir>/manifest.json` and every referenced raster. Throws
// MissingManifest, SchemaViolation, RasterDimensionError, IndexGapError or
// IoError; never returns a partially validated bundle.
DocumentBundle load_bundle(const std::filesystem::path& dir);

// Checks the in-memory invariants load_bundle enforces.
void validate_bundle(const DocumentBundle& bundle);

// Writes manifest.json plus rasters/ PNGs. Pages are written in index order
// and raster file names are derived from the page index.
void save_bundle(const DocumentBundle& bundle, const std::filesystem::path& dir);

GroundTruth load_ground_truth(const std::filesystem::path& path);
GroundTruth parse_ground_truth(const std::string& json_text);

// Throws IndexOutOfRange if any index falls outside [0, old_pages) or
// [0, new_pages) on its side.
void check_ground_truth_bounds(const GroundTruth& gt, int old_pages, int new_pages);

}  // namespace pagealign
