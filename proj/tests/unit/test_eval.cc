#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "pagealign/errors.h"
#include "pagealign/eval.h"
#include "test_support.h"

using namespace pagealign;

namespace {

MatchResult predicted(std::vector<std::pair<int, int>> pairs) {
  MatchResult r;
  for (auto [o, n] : pairs) r.matches.push_back({o, n, MatchType::ExactHash, 1.0, MatchSource::LCS});
  return r;
}

double round2(double v) { return std::round(v * 100) / 100; }

struct Pair1 {
  DocumentBundle old_doc = load_bundle(testing::fixture_dir() / "pair1/old");
  DocumentBundle new_doc = load_bundle(testing::fixture_dir() / "pair1/new");
  GroundTruth gt = load_ground_truth(testing::fixture_dir() / "pair1/gt.json");
  GroundTruth gt_nonblank = load_ground_truth(testing::fixture_dir() / "pair1/gt_nonblank.json");
};

}  // namespace

TEST_CASE("metrics_from_counts") {
  const EvalMetrics m = metrics_from_counts(6, 0, 3);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(0.8));
  const EvalMetrics none = metrics_from_counts(0, 0, 0);
  CHECK(none.precision == 1.0);
  CHECK(none.recall == 1.0);
  CHECK(none.f1 == 1.0);
  const EvalMetrics miss = metrics_from_counts(0, 2, 2);
  CHECK(miss.precision == 0.0);
  CHECK(miss.f1 == 0.0);
}

TEST_CASE("compute_prf examples") {
  GroundTruth gt;
  gt.matches = {{0, 0}, {1, 1}, {2, 3}};
  const EvalMetrics m = compute_prf(predicted({{0, 0}, {1, 2}, {2, 3}}), gt, 3, 4);
  CHECK(m.tp == 2);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));

  const EvalMetrics empty = compute_prf(MatchResult{}, gt, 3, 4);
  CHECK(empty.tp == 0);
  CHECK(empty.precision == 1.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
}

TEST_CASE("compute_prf rejects out-of-range indices") {
  GroundTruth gt;
  gt.matches = {{0, 0}};
  CHECK_THROWS_AS(compute_prf(predicted({{0, 5}}), gt, 1, 1), IndexOutOfRange);
  CHECK_THROWS_AS(compute_prf(predicted({{-1, 0}}), gt, 1, 1), IndexOutOfRange);
  gt.matches = {{3, 0}};
  CHECK_THROWS_AS(compute_prf(MatchResult{}, gt, 1, 1), IndexOutOfRange);
}

TEST_CASE("property: compute_prf is invariant under permutation of the prediction (1000 cases)") {
  std::mt19937 rng(71);
  std::uniform_int_distribution<int> idx(0, 7);
  for (int k = 0; k < 1000; ++k) {
    GroundTruth gt;
    std::vector<std::pair<int, int>> pairs;
    for (int t = 0; t < 5; ++t) {
      gt.matches.emplace_back(t, idx(rng));
      pairs.emplace_back(idx(rng), idx(rng));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    const EvalMetrics a = compute_prf(predicted(pairs), gt, 8, 8);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const EvalMetrics b = compute_prf(predicted(pairs), gt, 8, 8);
    REQUIRE(a.tp == b.tp);
    REQUIRE(a.f1 == b.f1);
    REQUIRE(a.tp + a.fp == static_cast<int>(pairs.size()));
    REQUIRE(a.f1 >= 0.0);
    REQUIRE(a.f1 <= 1.0);
  }
}

TEST_CASE("run_variant on identical documents") {
  const DocumentBundle doc = load_bundle(testing::fixture_dir() / "self90");
  GroundTruth gt;
  for (int k = 0; k < 90; ++k) gt.matches.emplace_back(k, k);
  for (Variant v : {Variant::Sequential, Variant::LcsOnly, Variant::SevenPhaseOnly, Variant::Full}) {
    CAPTURE(to_string(v));
    const EvalMetrics m = compute_prf(run_variant(doc, doc, v), gt, 90, 90);
    CHECK(m.tp == 90);
    CHECK(m.f1 == 1.0);
  }
}

TEST_CASE("run_variant on Pair-1") {
  const Pair1 p;
  SUBCASE("sequential") {
    const MatchResult r = run_variant(p.old_doc, p.new_doc, Variant::Sequential);
    const EvalMetrics m = compute_prf(r, p.gt, 9, 10);
    CHECK(m.tp == 2);
    CHECK(round2(m.f1) == 0.22);
  }
  for (Variant v : {Variant::LcsOnly, Variant::SevenPhaseOnly, Variant::Full}) {
    CAPTURE(to_string(v));
    const MatchResult r = run_variant(p.old_doc, p.new_doc, v);
    const EvalMetrics m = compute_prf(r, p.gt, 9, 10);
    CHECK(m.tp == 6);
    CHECK(m.fp == 0);
    CHECK(round2(m.precision) == 1.0);
    CHECK(round2(m.recall) == 0.67);
    CHECK(round2(m.f1) == 0.8);
    CHECK(r.inserted == std::vector<int>{2});
    CHECK(r.deleted.empty());
    CHECK(compute_prf(r, p.gt_nonblank, 9, 10).f1 == 1.0);
  }
}

TEST_CASE("metrics_to_json") {
  const EvalMetrics m = metrics_from_counts(2, 7, 7);
  const auto raw = metrics_to_json(m, Variant::Sequential);
  CHECK(raw["variant"] == "sequential");
  CHECK(raw["tp"] == 2);
  CHECK(raw["f1"].get<double>() == doctest::Approx(2.0 / 9.0));
  const auto shown = metrics_to_json(m, Variant::Sequential, 2);
  CHECK(shown["f1"].get<double>() == 0.22);
  CHECK(shown.dump() ==
        R"({"f1":0.22,"fn":7,"fp":7,"precision":0.22,"recall":0.22,"tp":2,"variant":"sequential"})");
}
