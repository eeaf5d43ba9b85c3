#include "pagealign/bundle.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pagealign/errors.h"
#include "pagealign/utf8.h"

namespace pagealign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string field(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaViolation(field(where, key), "missing required key");
  return *it;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw SchemaViolation(field(where, key), "unknown key");
    }
  }
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) throw SchemaViolation(field(where, key), "expected integer");
  return v.get<int>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaViolation(field(where, key), "expected string");
  return v.get<std::string>();
}

std::vector<TableGrid> parse_tables(const json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaViolation(where, "expected array of tables");
  std::vector<TableGrid> tables;
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::string tw = where + "[" + std::to_string(t) + "]";
    if (!v[t].is_array()) throw SchemaViolation(tw, "expected array of rows");
    TableGrid grid;
    for (std::size_t r = 0; r < v[t].size(); ++r) {
      const json& row = v[t][r];
      const std::string rw = tw + "[" + std::to_string(r) + "]";
      if (!row.is_array()) throw SchemaViolation(rw, "expected array of cells");
      std::vector<std::string> cells;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (!row[c].is_string()) {
          throw SchemaViolation(rw + "[" + std::to_string(c) + "]", "expected string cell");
        }
        cells.push_back(row[c].get<std::string>());
      }
      grid.rows.push_back(std::move(cells));
    }
    tables.push_back(std::move(grid));
  }
  return tables;
}

std::optional<Image> load_raster(const json& page, const char* key, const std::string& where,
                                 const fs::path& base) {
  const json& v = require(page, key, where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw SchemaViolation(field(where, key), "expected string or null");
  try {
    return read_png(base / v.get<std::string>());
  } catch (const IoError& e) {
    throw SchemaViolation(field(where, key), e.what());
  }
}

std::string raster_name(int index, const char* kind) {
  std::ostringstream os;
  os << "rasters/page_" << index << "_" << kind << ".png";
  return os.str();
}

std::vector<int> parse_index_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaViolation(where, "expected array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      throw SchemaViolation(where + "[" + std::to_string(i) + "]", "expected integer");
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

}  // namespace

PageRecord make_page(int index, std::string text) {
  PageRecord page;
  page.index = index;
  page.char_count = static_cast<int>(utf8::length(text));
  page.text = std::move(text);
  return page;
}

void validate_bundle(const DocumentBundle& bundle) {
  if (bundle.page_count <= 0) throw SchemaViolation("page_count", "must be positive");
  if (static_cast<int>(bundle.pages.size()) != bundle.page_count) {
    throw SchemaViolation("pages", "length " + std::to_string(bundle.pages.size()) +
                                       " does not equal page_count " +
                                       std::to_string(bundle.page_count));
  }
  for (int i = 0; i < bundle.page_count; ++i) {
    const PageRecord& p = bundle.pages[i];
    const std::string where = "pages[" + std::to_string(i) + "]";
    if (p.index != i) {
      throw IndexGapError(where + ": expected index " + std::to_string(i) + ", found " +
                          std::to_string(p.index));
    }
    if (static_cast<std::size_t>(p.char_count) != utf8::length(p.text)) {
      throw SchemaViolation(where + ".char_count",
                            "declared " + std::to_string(p.char_count) + " but text has " +
                                std::to_string(utf8::length(p.text)) + " characters");
    }
    if (p.raster_low && (p.raster_low->width != kLowRasterSize ||
                         p.raster_low->height != kLowRasterSize ||
                         p.raster_low->channels != 1)) {
      throw RasterDimensionError(where + ".raster_low: expected 32x32 single-channel, got " +
                                 std::to_string(p.raster_low->width) + "x" +
                                 std::to_string(p.raster_low->height) + "x" +
                                 std::to_string(p.raster_low->channels));
    }
  }
}

DocumentBundle load_bundle(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  if (!fs::is_regular_file(manifest)) {
    throw MissingManifest("no manifest.json in " + dir.string());
  }
  std::ifstream in(manifest);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaViolation("manifest.json", e.what());
  }
  if (!doc.is_object()) throw SchemaViolation("manifest.json", "expected object");

  reject_unknown(doc, {"doc_id", "page_count", "pages"}, "");
  DocumentBundle bundle;
  bundle.doc_id = require_string(doc, "doc_id", "");
  bundle.page_count = require_int(doc, "page_count", "");
  const json& pages = require(doc, "pages", "");
  if (!pages.is_array()) throw SchemaViolation("pages", "expected array");

  for (std::size_t i = 0; i < pages.size(); ++i) {
    const json& pj = pages[i];
    const std::string where = "pages[" + std::to_string(i) + "]";
    if (!pj.is_object()) throw SchemaViolation(where, "expected object");
    reject_unknown(pj, {"index", "text", "char_count", "tables", "raster_low", "raster_high"},
                   where);
    PageRecord page;
    page.index = require_int(pj, "index", where);
    page.text = require_string(pj, "text", where);
    page.char_count = require_int(pj, "char_count", where);
    page.tables = parse_tables(require(pj, "tables", where), where + ".tables");
    page.raster_low = load_raster(pj, "raster_low", where, dir);
    page.raster_high = load_raster(pj, "raster_high", where, dir);
    bundle.pages.push_back(std::move(page));
  }

  std::stable_sort(bundle.pages.begin(), bundle.pages.end(),
                   [](const PageRecord& a, const PageRecord& b) { return a.index < b.index; });
  validate_bundle(bundle);
  return bundle;
}

void save_bundle(const DocumentBundle& bundle, const fs::path& dir) {
  validate_bundle(bundle);
  fs::create_directories(dir / "rasters");
  json pages = json::array();
  for (const PageRecord& p : bundle.pages) {
    json tables = json::array();
    for (const TableGrid& t : p.tables) tables.push_back(t.rows);
    json pj = {{"index", p.index},       {"text", p.text},     {"char_count", p.char_count},
               {"tables", tables},       {"raster_low", nullptr}, {"raster_high", nullptr}};
    if (p.raster_low) {
      const std::string name = raster_name(p.index, "low");
      write_png(dir / name, *p.raster_low);
      pj["raster_low"] = name;
    }
    if (p.raster_high) {
      const std::string name = raster_name(p.index, "high");
      write_png(dir / name, *p.raster_high);
      pj["raster_high"] = name;
    }
    pages.push_back(std::move(pj));
  }
  json doc = {{"doc_id", bundle.doc_id}, {"page_count", bundle.page_count}, {"pages", pages}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << doc.dump(2) << "\n";
}

GroundTruth parse_ground_truth(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaViolation("ground_truth", e.what());
  }
  if (!doc.is_object()) throw SchemaViolation("ground_truth", "expected object");

  reject_unknown(doc, {"matches", "inserted", "deleted"}, "");
  GroundTruth gt;
  const json& matches = require(doc, "matches", "");
  if (!matches.is_array()) throw SchemaViolation("matches", "expected array");
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const json& m = matches[i];
    const std::string where = "matches[" + std::to_string(i) + "]";
    if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() ||
        !m[1].is_number_integer()) {
      throw SchemaViolation(where, "expected [old, new] integer pair");
    }
    gt.matches.emplace_back(m[0].get<int>(), m[1].get<int>());
  }
  gt.inserted = parse_index_list(require(doc, "inserted", ""), "inserted");
  gt.deleted = parse_index_list(require(doc, "deleted", ""), "deleted");

  std::set<int> olds;
  std::set<int> news;
  auto claim = [](std::set<int>& seen, int idx, const char* side) {
    if (idx < 0) throw SchemaViolation(side, "negative index " + std::to_string(idx));
    if (!seen.insert(idx).second) {
      throw DuplicateIndexError(std::string(side) + " index " + std::to_string(idx) +
                                " appears in more than one ground-truth entry");
    }
  };
  for (const auto& [o, n] : gt.matches) {
    claim(olds, o, "old");
    claim(news, n, "new");
  }
  for (int n : gt.inserted) claim(news, n, "new");
  for (int o : gt.deleted) claim(olds, o, "old");
  return gt;
}

GroundTruth load_ground_truth(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read ground truth " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ground_truth(ss.str());
}

void check_ground_truth_bounds(const GroundTruth& gt, int old_pages, int new_pages) {
  auto check = [](int idx, int limit, const char* side) {
    if (idx < 0 || idx >= limit) {
      throw IndexOutOfRange(std::string(side) + " index " + std::to_string(idx) +
                            " outside [0, " + std::to_string(limit) + ")");
    }
  };
  for (const auto& [o, n] : gt.matches) {
    check(o, old_pages, "old");
    check(n, new_pages, "new");
  }
  for (int n : gt.inserted) check(n, new_pages, "new");
  for (int o : gt.deleted) check(o, old_pages, "old");
}

}  // namespace pagealign
