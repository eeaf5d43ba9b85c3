#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "pagealign/bundle.h"
#include "pagealign/consensus.h"
#include "pagealign/pipeline.h"

namespace pagealign {

struct EvalMetrics {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Pair-exact scoring of predicted matches against ground-truth matches.
// Throws IndexOutOfRange when an index in either input exceeds the bundle
// sizes.
EvalMetrics compute_prf(const MatchResult& predicted, const GroundTruth& gt, int old_pages,
                        int new_pages);

// Precision/recall/F1 from raw counts; 1.0 for an empty denominator and 0 F1
// when precision + recall is 0.
EvalMetrics metrics_from_counts(int tp, int fp, int fn);

MatchResult run_variant(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                        Variant variant, const MatchConfig& cfg = {});

// {"variant", "tp", "fp", "fn", "precision", "recall", "f1"}; ratios are
// rounded to `digits` decimals when given.
nlohmann::json metrics_to_json(const EvalMetrics& m, Variant variant,
                               std::optional<int> digits = std::nullopt);

}  // namespace pagealign
