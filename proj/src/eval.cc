#include "pagealign/eval.h"

#include <cmath>
#include <set>
#include <utility>

#include "pagealign/errors.h"

namespace pagealign {

EvalMetrics metrics_from_counts(int tp, int fp, int fn) {
  EvalMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
  m.recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
  const double pr = m.precision + m.recall;
  m.f1 = pr == 0 ? 0.0 : 2 * m.precision * m.recall / pr;
  return m;
}

EvalMetrics compute_prf(const MatchResult& predicted, const GroundTruth& gt, int old_pages,
                        int new_pages) {
  check_ground_truth_bounds(gt, old_pages, new_pages);
  std::set<std::pair<int, int>> truth(gt.matches.begin(), gt.matches.end());
  std::set<std::pair<int, int>> pred;
  for (const PageMatch& m : predicted.matches) {
    if (m.old_index < 0 || m.old_index >= old_pages || m.new_index < 0 ||
        m.new_index >= new_pages) {
      throw IndexOutOfRange("predicted pair (" + std::to_string(m.old_index) + ", " +
                            std::to_string(m.new_index) + ") outside the bundles");
    }
    pred.emplace(m.old_index, m.new_index);
  }
  int tp = 0;
  for (const auto& p : pred) tp += truth.contains(p) ? 1 : 0;
  return metrics_from_counts(tp, static_cast<int>(pred.size()) - tp,
                             static_cast<int>(truth.size()) - tp);
}

MatchResult run_variant(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                        Variant variant, const MatchConfig& cfg) {
  return match_documents(old_doc, new_doc, cfg, variant);
}

nlohmann::json metrics_to_json(const EvalMetrics& m, Variant variant, std::optional<int> digits) {
  auto shown = [&](double v) {
    if (!digits) return v;
    const double scale = std::pow(10.0, *digits);
    return std::round(v * scale) / scale;
  };
  return {{"variant", std::string(to_string(variant))},
          {"tp", m.tp},
          {"fp", m.fp},
          {"fn", m.fn},
          {"precision", shown(m.precision)},
          {"recall", shown(m.recall)},
          {"f1", shown(m.f1)}};
}

}  // namespace pagealign
