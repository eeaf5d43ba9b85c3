#include "pagealign/cli.h"

#include <algorithm>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "pagealign/bundle.h"
#include "pagealign/errors.h"
#include "pagealign/eval.h"
#include "pagealign/fingerprint.h"
#include "pagealign/report.h"

namespace pagealign {

namespace {

void add_threshold_flags(CLI::App& cmd, EngineConfig& cfg) {
  SevenPhaseConfig& s = cfg.match.seven;
  DpConfig& d = cfg.match.dp;
  VisualDiffConfig& v = cfg.diff.visual;
  cmd.add_option("--tau-s", s.tau_s, "Text-similarity threshold")->capture_default_str();
  cmd.add_option("--shift-fraction", s.shift_fraction, "Page-shift vote fraction")
      ->capture_default_str();
  cmd.add_option("--shift-min-votes", s.shift_min_votes, "Page-shift minimum votes")
      ->capture_default_str();
  cmd.add_option("--adjacency-max-d", s.adjacency_max_d, "Position interpolation reach")
      ->capture_default_str();
  cmd.add_option("--adjacency-accept", s.adjacency_accept,
                 "Position interpolation acceptance")
      ->capture_default_str();
  cmd.add_option("--phash-accept", s.phash_accept, "Visual rematch threshold")
      ->capture_default_str();
  cmd.add_option("--gap-penalty", d.gap_penalty, "DP gap penalty")->capture_default_str();
  cmd.add_option("--content-similar", d.content_similar_threshold,
                 "DP ContentSimilar threshold")
      ->capture_default_str();
  cmd.add_option("--position-cap", d.position_match_cap, "DP PositionMatch confidence cap")
      ->capture_default_str();
  cmd.add_option("--pixel-threshold", v.pixel_threshold, "Visual diff intensity threshold")
      ->capture_default_str();
  cmd.add_option("--kernel-size", v.kernel_size, "Morphology kernel size")
      ->capture_default_str();
  cmd.add_option("--min-area", v.min_component_area, "Minimum changed component area")
      ->capture_default_str();
  cmd.add_option("--merge-margin", v.merge_margin, "Rectangle merge margin")
      ->capture_default_str();
}

int cmd_compare(const std::string& old_path, const std::string& new_path,
                const std::string& out_dir, const EngineConfig& cfg, std::ostream& out) {
  cfg.match.validate();
  const DocumentBundle old_doc = load_bundle(old_path);
  const DocumentBundle new_doc = load_bundle(new_path);
  const ComparisonOutput result = compare_bundles(old_doc, new_doc, cfg);
  write_outputs(result, old_doc, new_doc, out_dir);
  out << "matched " << result.report.matches.size() << ", inserted "
      << result.report.inserted.size() << ", deleted " << result.report.deleted.size()
      << ", orphans " << result.report.orphans.size() << ", unmatched blank "
      << result.report.blank_old.size() + result.report.blank_new.size() << "; report written to " << out_dir
      << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& old_path, const std::string& new_path, const std::string& gt_path,
             Variant variant, const MatchConfig& cfg, std::ostream& out) {
  cfg.validate();
  const DocumentBundle old_doc = load_bundle(old_path);
  const DocumentBundle new_doc = load_bundle(new_path);
  const GroundTruth gt = load_ground_truth(gt_path);
  const MatchResult predicted = run_variant(old_doc, new_doc, variant, cfg);
  const EvalMetrics m = compute_prf(predicted, gt, old_doc.page_count, new_doc.page_count);
  out << metrics_to_json(m, variant, 2).dump() << "\n";
  return kExitOk;
}

int cmd_fingerprint(const std::string& path, std::ostream& out) {
  const DocumentBundle doc = load_bundle(path);
  const auto fps = fingerprint_bundle(doc);
  for (std::size_t i = 0; i < fps.size(); ++i) {
    const PageFingerprint& fp = fps[i];
    nlohmann::json line = {{"index", doc.pages[i].index},
                           {"char_count", doc.pages[i].char_count},
                           {"content_hash", fp.content_hash},
                           {"drawing_number", fp.drawing_number},
                           {"section_title", fp.section_title},
                           {"phash", fp.phash ? nlohmann::json(phash_hex(*fp.phash))
                                              : nlohmann::json(nullptr)}};
    out << line.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Page alignment and revision diffing for multi-page documents", "pagealign"};
  app.require_subcommand(1);

  EngineConfig cfg;
  std::string old_path;
  std::string new_path;
  std::string out_dir;
  std::string mode_name = "full";
  auto* compare = app.add_subcommand("compare", "Align two bundles and write a diff report");
  compare->add_option("old", old_path, "Old revision bundle directory")->required();
  compare->add_option("new", new_path, "New revision bundle directory")->required();
  compare->add_option("--out", out_dir, "Output directory")->required();
  compare->add_option("--mode", mode_name, "full or patch")
      ->check(CLI::IsMember({"full", "patch"}))
      ->capture_default_str();
  add_threshold_flags(*compare, cfg);

  std::string gt_path;
  std::string variant_name = "full";
  auto* eval = app.add_subcommand("eval", "Score a matcher variant against ground truth");
  eval->add_option("old", old_path, "Old revision bundle directory")->required();
  eval->add_option("new", new_path, "New revision bundle directory")->required();
  eval->add_option("--gt", gt_path, "Ground-truth JSON")->required();
  eval->add_option("--variant", variant_name, "sequential, lcs_only, seven_phase_only, full")
      ->check(CLI::IsMember({"sequential", "lcs_only", "seven_phase_only", "full"}))
      ->capture_default_str();
  add_threshold_flags(*eval, cfg);

  std::string bundle_path;
  auto* fingerprint = app.add_subcommand("fingerprint", "Print per-page fingerprints");
  fingerprint->add_option("bundle", bundle_path, "Bundle directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return kExitValidation;
  }

  try {
    if (*compare) {
      cfg.mode = *parse_mode(mode_name);
      return cmd_compare(old_path, new_path, out_dir, cfg, out);
    }
    if (*eval) {
      return cmd_eval(old_path, new_path, gt_path, *parse_variant(variant_name), cfg.match, out);
    }
    if (*fingerprint) return cmd_fingerprint(bundle_path, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace pagealign
