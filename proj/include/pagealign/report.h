#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pagealign/consensus.h"
#include "pagealign/diff_engine.h"
#include "pagealign/pipeline.h"

namespace pagealign {

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr int kCompositeGutter = 16;
inline constexpr int kCompositeStroke = 2;

// Every tunable a comparison run depends on.
struct EngineConfig {
  Mode mode = Mode::Full;
  MatchConfig match;
  DiffConfig diff;
};

nlohmann::json config_to_json(const EngineConfig& cfg);

struct PairSummary {
  int old_index = 0;
  int new_index = 0;
  MatchType type = MatchType::ExactHash;
  double confidence = 0;
  MatchSource source = MatchSource::LCS;
  int text_spans = 0;      // Added + Deleted spans
  int changed_cells = 0;   // changed cells plus added/removed tables
  int visual_regions = 0;
  std::optional<double> changed_pixel_fraction;
};

struct ComparisonReport {
  std::string old_doc_id;
  std::string new_doc_id;
  Mode mode = Mode::Full;
  std::vector<PairSummary> matches;
  std::vector<int> inserted;
  std::vector<int> deleted;
  std::vector<int> orphans;
  std::vector<int> blank_old;
  std::vector<int> blank_new;
  std::string engine_version = kEngineVersion;
  EngineConfig config;

  // True when no matched pair carries a text, table or visual change.
  bool all_diffs_empty() const;
};

ComparisonReport build_report(const std::string& old_doc_id, const std::string& new_doc_id,
                              const MatchResult& result, const std::vector<PairDiff>& diffs,
                              const EngineConfig& cfg);

// Canonical form: no timestamps, lists sorted by index.
nlohmann::json report_to_json(const ComparisonReport& report);

// Old raster left, new raster right, both scaled to the common canvas, with
// the visual-diff rectangles outlined on the right pane.
Image render_side_by_side(const PairDiff& diff, const Image& old_raster, const Image& new_raster);

// Writes `index.html`; `composites` maps (old, new) to a path relative to
// out_dir. Returns the written path.
std::filesystem::path emit_html(const ComparisonReport& report,
                                const std::map<std::pair<int, int>, std::string>& composites,
                                const std::filesystem::path& out_dir);

struct ComparisonOutput {
  ComparisonReport report;
  MatchResult result;
  std::vector<PairDiff> diffs;
};

// Fingerprint, match (full or patch mode) and diff two bundles.
ComparisonOutput compare_bundles(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                                 const EngineConfig& cfg);

// report.json, report.meta.json (timestamp sidecar), composites/*.png and
// index.html under out_dir.
void write_outputs(const ComparisonOutput& out, const DocumentBundle& old_doc,
                   const DocumentBundle& new_doc, const std::filesystem::path& out_dir);

}  // namespace pagealign
