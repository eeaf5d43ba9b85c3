#include "pagealign/report.h"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "pagealign/errors.h"
#include "pagealign/fingerprint.h"
#include "pagealign/parallel.h"

namespace pagealign {

namespace fs = std::filesystem;
using nlohmann::json;

json config_to_json(const EngineConfig& cfg) {
  const SevenPhaseConfig& s = cfg.match.seven;
  const DpConfig& d = cfg.match.dp;
  const VisualDiffConfig& v = cfg.diff.visual;
  return {
      {"mode", std::string(to_string(cfg.mode))},
      {"seven_phase",
       {{"tau_s", s.tau_s},
        {"shift_fraction", s.shift_fraction},
        {"shift_min_votes", s.shift_min_votes},
        {"adjacency_max_d", s.adjacency_max_d},
        {"adjacency_accept", s.adjacency_accept},
        {"phash_accept", s.phash_accept}}},
      {"dp",
       {{"gap_penalty", d.gap_penalty},
        {"content_similar_threshold", d.content_similar_threshold},
        {"position_match_cap", d.position_match_cap}}},
      {"visual_diff",
       {{"pixel_threshold", v.pixel_threshold},
        {"kernel_size", v.kernel_size},
        {"min_component_area", v.min_component_area},
        {"merge_margin", v.merge_margin}}},
      {"fingerprint",
       {{"content_hash_min_chars", kContentHashMinChars},
        {"phash_max_chars", kPhashMaxChars},
        {"section_title_min_chars", kSectionTitleMinChars},
        {"section_title_max_chars", kSectionTitleMaxChars}}},
      {"text_diff_max_chars", kTextDiffMaxChars},
  };
}

bool ComparisonReport::all_diffs_empty() const {
  return std::all_of(matches.begin(), matches.end(), [](const PairSummary& p) {
    return p.text_spans == 0 && p.changed_cells == 0 && p.visual_regions == 0 &&
           (!p.changed_pixel_fraction || *p.changed_pixel_fraction == 0.0);
  });
}

ComparisonReport build_report(const std::string& old_doc_id, const std::string& new_doc_id,
                              const MatchResult& result, const std::vector<PairDiff>& diffs,
                              const EngineConfig& cfg) {
  std::map<std::pair<int, int>, const PairDiff*> by_pair;
  for (const PairDiff& d : diffs) by_pair[{d.old_index, d.new_index}] = &d;

  ComparisonReport r;
  r.old_doc_id = old_doc_id;
  r.new_doc_id = new_doc_id;
  r.mode = cfg.mode;
  r.config = cfg;
  for (const PageMatch& m : result.matches) {
    PairSummary s;
    s.old_index = m.old_index;
    s.new_index = m.new_index;
    s.type = m.type;
    s.confidence = m.confidence;
    s.source = m.source;
    if (auto it = by_pair.find({m.old_index, m.new_index}); it != by_pair.end()) {
      const PairDiff& d = *it->second;
      s.text_spans = d.text.change_count();
      s.changed_cells = static_cast<int>(d.tables.changed_cells.size() +
                                         d.tables.added_tables.size() +
                                         d.tables.removed_tables.size());
      if (d.visual) {
        s.visual_regions = static_cast<int>(d.visual->regions.size());
        s.changed_pixel_fraction = d.visual->changed_pixel_fraction;
      }
    }
    r.matches.push_back(s);
  }
  std::sort(r.matches.begin(), r.matches.end(), [](const PairSummary& a, const PairSummary& b) {
    return std::tie(a.old_index, a.new_index) < std::tie(b.old_index, b.new_index);
  });
  r.inserted = result.inserted;
  r.deleted = result.deleted;
  r.orphans = result.orphans;
  r.blank_old = result.blank_old;
  r.blank_new = result.blank_new;
  for (auto* v : {&r.inserted, &r.deleted, &r.orphans, &r.blank_old, &r.blank_new}) {
    std::sort(v->begin(), v->end());
  }
  return r;
}

json report_to_json(const ComparisonReport& report) {
  json matches = json::array();
  for (const PairSummary& s : report.matches) {
    matches.push_back({
        {"old", s.old_index},
        {"new", s.new_index},
        {"type", std::string(to_string(s.type))},
        {"confidence", s.confidence},
        {"source", std::string(to_string(s.source))},
        {"text_spans", s.text_spans},
        {"changed_cells", s.changed_cells},
        {"visual_regions", s.visual_regions},
        {"changed_pixel_fraction",
         s.changed_pixel_fraction ? json(*s.changed_pixel_fraction) : json(nullptr)},
    });
  }
  return {
      {"old_doc_id", report.old_doc_id},
      {"new_doc_id", report.new_doc_id},
      {"mode", std::string(to_string(report.mode))},
      {"matches", matches},
      {"inserted", report.inserted},
      {"deleted", report.deleted},
      {"orphans", report.orphans},
      {"blank_old", report.blank_old},
      {"blank_new", report.blank_new},
      {"engine_version", report.engine_version},
      {"config", config_to_json(report.config)},
  };
}

namespace {

void stroke_rect(Image& canvas, const Rect& r, int offset_x, int thickness) {
  auto paint = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= canvas.width || y >= canvas.height) return;
    canvas.at(x, y, 0) = 255;
    canvas.at(x, y, 1) = 0;
    canvas.at(x, y, 2) = 0;
  };
  for (int t = 0; t < thickness; ++t) {
    for (int x = r.x; x < r.right(); ++x) {
      paint(offset_x + x, r.y + t);
      paint(offset_x + x, r.bottom() - 1 - t);
    }
    for (int y = r.y; y < r.bottom(); ++y) {
      paint(offset_x + r.x + t, y);
      paint(offset_x + r.right() - 1 - t, y);
    }
  }
}

void blit(Image& canvas, const Image& src, int offset_x) {
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      for (int c = 0; c < 3; ++c) canvas.at(offset_x + x, y, c) = src.at(x, y, c);
    }
  }
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

Image render_side_by_side(const PairDiff& diff, const Image& old_raster, const Image& new_raster) {
  if (old_raster.empty() || new_raster.empty()) {
    throw RasterMissing("side-by-side view needs both rasters");
  }
  const int w = std::max(old_raster.width, new_raster.width);
  const int h = std::max(old_raster.height, new_raster.height);
  Image canvas(2 * w + kCompositeGutter, h, 3, 255);
  blit(canvas, to_rgb(resize_bilinear(old_raster, w, h)), 0);
  blit(canvas, to_rgb(resize_bilinear(new_raster, w, h)), w + kCompositeGutter);
  if (diff.visual) {
    for (const Rect& r : diff.visual->regions) {
      stroke_rect(canvas, r, w + kCompositeGutter, kCompositeStroke);
    }
  }
  return canvas;
}

fs::path emit_html(const ComparisonReport& report,
                   const std::map<std::pair<int, int>, std::string>& composites,
                   const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path path = out_dir / "index.html";
  std::ofstream html(path);
  if (!html) throw IoError("cannot write " + path.string());

  int changed_pairs = 0;
  for (const PairSummary& s : report.matches) {
    if (s.text_spans || s.changed_cells || s.visual_regions) ++changed_pairs;
  }
  const int total_changes = changed_pairs + static_cast<int>(report.inserted.size() +
                                                             report.deleted.size() +
                                                             report.orphans.size());

  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
       << "<title>Comparison " << html_escape(report.old_doc_id) << " vs "
       << html_escape(report.new_doc_id) << "</title>\n"
       << "<style>table{border-collapse:collapse}td,th{border:1px solid #999;padding:2px 6px}"
       << ".changed{background:#fdd}</style></head><body>\n"
       << "<h1>" << html_escape(report.old_doc_id) << " &rarr; "
       << html_escape(report.new_doc_id) << "</h1>\n"
       << "<p>Mode: " << to_string(report.mode) << ". Matched pairs: " << report.matches.size()
       << ". Pairs with changes: " << changed_pairs << ".</p>\n";
  if (total_changes == 0) html << "<p class=\"summary\">No changes detected (0 changes).</p>\n";

  auto list = [&](const char* title, const char* cls, const std::vector<int>& pages) {
    html << "<h2>" << title << " (" << pages.size() << ")</h2>\n<ul class=\"" << cls << "\">";
    for (int p : pages) html << "<li>page " << p << "</li>";
    html << "</ul>\n";
  };
  list("Inserted pages (new)", "inserted", report.inserted);
  list("Deleted pages (old)", "deleted", report.deleted);
  list("Orphan pages (old, kept)", "orphans", report.orphans);
  list("Unmatched blank pages (old)", "blank-old", report.blank_old);
  list("Unmatched blank pages (new)", "blank-new", report.blank_new);

  html << "<h2>Matched pages</h2>\n<table>\n<tr><th>old</th><th>new</th><th>type</th>"
       << "<th>confidence</th><th>source</th><th>text spans</th><th>changed cells</th>"
       << "<th>visual regions</th><th>view</th></tr>\n";
  for (const PairSummary& s : report.matches) {
    const bool changed = s.text_spans || s.changed_cells || s.visual_regions;
    html << "<tr class=\"pair" << (changed ? " changed" : "") << "\"><td>" << s.old_index
         << "</td><td>" << s.new_index << "</td><td>" << to_string(s.type) << "</td><td>"
         << s.confidence << "</td><td>" << to_string(s.source) << "</td><td>" << s.text_spans
         << "</td><td>" << s.changed_cells << "</td><td>" << s.visual_regions << "</td><td>";
    if (auto it = composites.find({s.old_index, s.new_index}); it != composites.end()) {
      html << "<a href=\"" << html_escape(it->second) << "\">side by side</a>";
    }
    html << "</td></tr>\n";
  }
  html << "</table>\n";
  html << "</body></html>\n";
  if (!html) throw IoError("failed writing " + path.string());
  return path;
}

ComparisonOutput compare_bundles(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                                 const EngineConfig& cfg) {
  const auto fps_old = fingerprint_bundle(old_doc);
  const auto fps_new = fingerprint_bundle(new_doc);

  ComparisonOutput out;
  out.result = cfg.mode == Mode::Patch
                   ? patch_mode_match(old_doc, new_doc, fps_old, fps_new)
                   : match_documents(old_doc, new_doc, fps_old, fps_new, cfg.match);
  check_match_result(out.result, old_doc.page_count, new_doc.page_count);

  out.diffs.resize(out.result.matches.size());
  parallel_for(out.diffs.size(), [&](std::size_t k) {
    const PageMatch& m = out.result.matches[k];
    out.diffs[k] = diff_pair(old_doc.pages[m.old_index], new_doc.pages[m.new_index], cfg.diff);
  });
  out.report = build_report(old_doc.doc_id, new_doc.doc_id, out.result, out.diffs, cfg);
  return out;
}

void write_outputs(const ComparisonOutput& out, const DocumentBundle& old_doc,
                   const DocumentBundle& new_doc, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir / "composites", ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::map<std::pair<int, int>, std::string> composites;
  std::vector<const PairDiff*> visual;
  for (const PairDiff& d : out.diffs) {
    if (d.visual) visual.push_back(&d);
  }
  std::vector<std::string> names(visual.size());
  parallel_for(visual.size(), [&](std::size_t k) {
    const PairDiff& d = *visual[k];
    names[k] = "composites/pair_" + std::to_string(d.old_index) + "_" +
               std::to_string(d.new_index) + ".png";
    write_png(out_dir / names[k],
              render_side_by_side(d, *old_doc.pages[d.old_index].raster_high,
                                  *new_doc.pages[d.new_index].raster_high));
  });
  for (std::size_t k = 0; k < visual.size(); ++k) {
    composites[{visual[k]->old_index, visual[k]->new_index}] = names[k];
  }

  {
    std::ofstream f(out_dir / "report.json");
    if (!f) throw IoError("cannot write report.json");
    f << report_to_json(out.report).dump(2) << "\n";
  }
  {
    const auto now = std::chrono::system_clock::now();
    const auto secs =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream f(out_dir / "report.meta.json");
    if (!f) throw IoError("cannot write report.meta.json");
    f << json{{"generated_unix", secs}, {"engine_version", kEngineVersion}}.dump(2) << "\n";
  }
  emit_html(out.report, composites, out_dir);
}

}  // namespace pagealign
