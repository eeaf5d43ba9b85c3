#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"

#include "pagealign/pipeline.h"
#include "pagealign/seven_phase.h"
#include "test_support.h"

using namespace pagealign;

namespace {

Region region_of(std::vector<int> olds, std::vector<int> news) { return {std::move(olds), std::move(news)}; }

Region full_region(int m, int n) {
  Region r;
  for (int i = 0; i < m; ++i) r.old_pages.push_back(i);
  for (int j = 0; j < n; ++j) r.new_pages.push_back(j);
  return r;
}

std::vector<PageFingerprint> fps_of(const std::vector<std::string>& texts) {
  std::vector<PageFingerprint> out;
  for (const auto& t : texts) out.push_back(fingerprint_page(make_page(0, t)));
  return out;
}

std::vector<std::pair<int, int>> pairs_of(const std::vector<CandidateMatch>& ms) {
  std::vector<std::pair<int, int>> out;
  for (const auto& m : ms) out.emplace_back(m.old_index, m.new_index);
  return out;
}

using Pairs = std::vector<std::pair<int, int>>;

// Distinct filler of `n` ideographs; `salt` picks a disjoint block.
std::string filler(int salt, int n = 60) { return testing::ideographs(0, n, salt); }

}  // namespace

TEST_CASE("phase numbers") {
  CHECK(phase_number(Phase::ExactHash) == 1);
  CHECK(phase_number(Phase::PositionInterpolation) == 6);
  CHECK(phase_number(Phase::VisualRematch) == 7.5);
}

TEST_CASE("config validation") {
  SevenPhaseConfig cfg;
  cfg.validate();
  cfg.tau_s = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.shift_min_votes = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("match_exact_keys: phases 1-3") {
  std::vector<PageFingerprint> fo(3), fn(3);
  fo[1].content_hash = fn[2].content_hash = "h";
  auto m = match_exact_keys(full_region(3, 3), ExactKey::ContentHash, fo, fn, {});
  REQUIRE(m.size() == 1);
  CHECK(m[0].old_index == 1);
  CHECK(m[0].new_index == 2);
  CHECK(m[0].confidence == 1.0);
  CHECK(m[0].type == MatchType::ExactHash);
  CHECK(m[0].final);

  fo[0].drawing_number = fn[0].drawing_number = "A-01";
  fo[0].content_hash = "x";
  fn[0].content_hash = "y";
  m = match_exact_keys(full_region(3, 3), ExactKey::DrawingNumber, fo, fn, {});
  REQUIRE(m.size() == 1);
  CHECK(m[0].confidence == 0.9);
  CHECK(m[0].type == MatchType::DrawingNumber);

  // Empty keys never pair.
  CHECK(match_exact_keys(full_region(3, 3), ExactKey::SectionTitle, fo, fn, {}).empty());

  fo[2].section_title = fn[1].section_title = "2.1 荷重条件";
  m = match_exact_keys(full_region(3, 3), ExactKey::SectionTitle, fo, fn, {});
  REQUIRE(m.size() == 1);
  CHECK(m[0].confidence == 0.8);

  // Claimed pages sit out.
  Claimed claimed;
  claimed.add(2, 0);
  CHECK(match_exact_keys(full_region(3, 3), ExactKey::SectionTitle, fo, fn, claimed).empty());
}

TEST_CASE("match_exact_keys: repeated values pair in document order") {
  std::vector<PageFingerprint> fo(3), fn(4);
  fo[0].content_hash = fo[2].content_hash = "h";
  fn[1].content_hash = fn[2].content_hash = fn[3].content_hash = "h";
  const auto m = match_exact_keys(full_region(3, 4), ExactKey::ContentHash, fo, fn, {});
  CHECK(pairs_of(m) == Pairs{{0, 1}, {2, 2}});
}

TEST_CASE("detect_page_shift: uniform +1 shift") {
  std::vector<std::string> olds, news = {filler(9)};
  for (int k = 0; k < 4; ++k) {
    olds.push_back(filler(k));
    news.push_back(filler(k));
  }
  TextSimilarity sim(olds, news);
  const auto shift = detect_page_shift(full_region(4, 5), {}, sim, {});
  REQUIRE(shift.has_value());
  CHECK(shift->delta == 1);
  CHECK(shift->votes == 4);
  CHECK(pairs_of(shift->matches) == Pairs{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  for (const auto& m : shift->matches) {
    CHECK(m.confidence == 0.85);
    CHECK(m.type == MatchType::PageShift);
    CHECK_FALSE(m.final);
  }
}

TEST_CASE("detect_page_shift: dissimilar pages adopt no shift") {
  std::vector<std::string> olds, news;
  for (int k = 0; k < 4; ++k) {
    olds.push_back(filler(k));
    news.push_back(filler(k + 10));
  }
  TextSimilarity sim(olds, news);
  CHECK_FALSE(detect_page_shift(full_region(4, 4), {}, sim, {}).has_value());
}

TEST_CASE("detect_page_shift: 4v4 region with two votes at +1") {
  const std::vector<std::string> olds = {filler(1), filler(2), filler(3), filler(4)};
  const std::vector<std::string> news = {filler(5), filler(1), filler(2), filler(6)};
  TextSimilarity sim(olds, news);
  const SevenPhaseConfig cfg;

  // Brute-force vote count for every admissible shift.
  std::map<int, int> votes;
  for (int d = -2; d <= 2; ++d) {
    for (int i = 0; i < 4; ++i) {
      if (i + d >= 0 && i + d < 4 && sim(i, i + d) >= cfg.tau_s) ++votes[d];
    }
  }
  CHECK(votes[1] == 2);
  for (int d : {-2, -1, 0, 2}) CHECK(votes[d] <= 1);

  const auto shift = detect_page_shift(full_region(4, 4), {}, sim, cfg);
  REQUIRE(shift.has_value());
  CHECK(shift->delta == 1);
  CHECK(pairs_of(shift->matches) == Pairs{{0, 1}, {1, 2}});

  // A single vote never suffices.
  const std::vector<std::string> one = {filler(5), filler(1), filler(7), filler(6)};
  TextSimilarity sim1(olds, one);
  CHECK_FALSE(detect_page_shift(full_region(4, 4), {}, sim1, cfg).has_value());
}

TEST_CASE("detect_page_shift: ties prefer the smaller shift, then the negative one") {
  // delta -1 and +1 both get two votes.
  const std::vector<std::string> olds = {filler(1), filler(2), filler(3), filler(4), filler(5)};
  const std::vector<std::string> news = {filler(2), filler(3), filler(8), filler(3), filler(4)};
  TextSimilarity sim(olds, news);
  const auto shift = detect_page_shift(full_region(5, 5), {}, sim, {});
  REQUIRE(shift.has_value());
  CHECK(shift->delta == -1);
}

TEST_CASE("match_text_similarity: ceiling and threshold") {
  {
    TextSimilarity sim(std::vector<std::string>{testing::ideographs(9, 10, 1)}, std::vector<std::string>{testing::ideographs(9, 10, 2)});
    REQUIRE(sim(0, 0) == doctest::Approx(0.9));
    const auto m = match_text_similarity(full_region(1, 1), {}, sim, {});
    REQUIRE(m.size() == 1);
    CHECK(m[0].confidence == 0.85);
    CHECK(m[0].type == MatchType::TextSimilar);
    CHECK_FALSE(m[0].final);
  }
  {
    TextSimilarity sim(std::vector<std::string>{testing::ideographs(49, 100, 1)}, std::vector<std::string>{testing::ideographs(49, 100, 2)});
    REQUIRE(sim(0, 0) == doctest::Approx(0.49));
    CHECK(match_text_similarity(full_region(1, 1), {}, sim, {}).empty());
  }
}

TEST_CASE("match_text_similarity: greedy pick equals best assignment by enumeration") {
  const std::vector<std::string> olds = {filler(30), "abcdefghxy", "abcdefrvwz"};
  const std::vector<std::string> news = {filler(31), "abcdefghpq", "abcdefrstu"};
  TextSimilarity sim(olds, news);
  REQUIRE(sim(1, 1) == doctest::Approx(0.8));
  REQUIRE(sim(1, 2) == doctest::Approx(0.6));
  REQUIRE(sim(2, 2) == doctest::Approx(0.7));

  const Region r = region_of({1, 2}, {1, 2});
  const auto m = match_text_similarity(r, {}, sim, {});
  CHECK(pairs_of(m) == Pairs{{1, 1}, {2, 2}});

  // Enumerate every one-to-one assignment of {1,2} onto {1,2} and compare.
  std::vector<int> perm = {1, 2};
  double best = -1;
  Pairs best_pairs;
  do {
    double total = 0;
    Pairs ps;
    for (int k = 0; k < 2; ++k) {
      const double s = sim(k + 1, perm[k]);
      if (s >= 0.5) {
        total += s;
        ps.emplace_back(k + 1, perm[k]);
      }
    }
    if (total > best) {
      best = total;
      best_pairs = ps;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(best_pairs == pairs_of(m));
}

TEST_CASE("match_text_similarity: ties break by old then new index") {
  const std::string t = filler(3);
  TextSimilarity sim(std::vector<std::string>{t, t}, std::vector<std::string>{t, t});
  CHECK(pairs_of(match_text_similarity(full_region(2, 2), {}, sim, {})) == Pairs{{0, 0}, {1, 1}});
}

TEST_CASE("interpolate_position") {
  const Pairs anchors = {{0, 0}, {4, 8}};
  CHECK(*interpolate_position(2, anchors) == 4.0);
  CHECK(*interpolate_position(6, anchors) == 10.0);  // beyond the last anchor
  CHECK(*interpolate_position(6, Pairs{{8, 3}}) == 1.0);
  CHECK_FALSE(interpolate_position(1, Pairs{}).has_value());
}

TEST_CASE("match_position_interpolation arithmetic") {
  const SevenPhaseConfig cfg;
  const Pairs anchors = {{0, 0}, {4, 4}};
  SUBCASE("d = 1, similarity 0.4 -> 0.36 accepted") {
    std::vector<std::string> olds(5, ""), news(5, "");
    olds[2] = testing::ideographs(4, 10, 1);
    news[3] = testing::ideographs(4, 10, 2);
    TextSimilarity sim(olds, news);
    const auto m = match_position_interpolation(region_of({1, 2, 3}, {1, 2, 3}), {}, anchors, sim, cfg);
    REQUIRE(m.size() == 1);
    CHECK(m[0].old_index == 2);
    CHECK(m[0].new_index == 3);
    CHECK(m[0].confidence == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(m[0].type == MatchType::PositionInterp);
  }
  SUBCASE("d = 3, similarity 0.42 -> 0.294 rejected") {
    std::vector<std::string> olds(11, ""), news(11, "");
    olds[5] = testing::ideographs(21, 50, 1);
    news[8] = testing::ideographs(21, 50, 2);
    TextSimilarity sim(olds, news);
    REQUIRE(sim(5, 8) == doctest::Approx(0.42));
    const Pairs far = {{0, 0}, {10, 10}};
    CHECK(match_position_interpolation(region_of({5}, {2, 3, 4, 5, 6, 7, 8}), {}, far, sim, cfg)
              .empty());
  }
  SUBCASE("d = 0, similarity 0.3 -> accepted at the boundary") {
    std::vector<std::string> olds(5, ""), news(5, "");
    olds[2] = testing::ideographs(3, 10, 1);
    news[2] = testing::ideographs(3, 10, 2);
    TextSimilarity sim(olds, news);
    REQUIRE(sim(2, 2) == 0.3);
    const auto m = match_position_interpolation(region_of({2}, {2}), {}, anchors, sim, cfg);
    REQUIRE(m.size() == 1);
    CHECK(m[0].confidence == 0.3);
  }
  SUBCASE("no anchors -> nothing") {
    TextSimilarity sim(std::vector<std::string>{"abc"}, std::vector<std::string>{"abc"});
    CHECK(match_position_interpolation(full_region(1, 1), {}, Pairs{}, sim, cfg).empty());
  }
}

TEST_CASE("classify_residuals") {
  Claimed all;
  all.add(0, 0);
  CHECK(classify_residuals(full_region(1, 1), all).deleted.empty());
  CHECK(classify_residuals(full_region(1, 1), all).inserted.empty());
  const Residuals r = classify_residuals(full_region(1, 2), all);
  CHECK(r.deleted.empty());
  CHECK(r.inserted == std::vector<int>{1});
}

TEST_CASE("visual_rematch: 34 differing bits accepted, 35 rejected") {
  const std::uint64_t base = 0x5555555555555555ULL & ((1ULL << 63) - 1);
  std::vector<PageFingerprint> fo(1), fn(2);
  fo[0].phash = base;
  fn[0].phash = base ^ ((1ULL << 34) - 1);
  fn[1].phash = base ^ ((1ULL << 35) - 1);
  const std::vector<int> uo = {0};

  const auto hit = visual_rematch(uo, std::vector<int>{0}, fo, fn, {});
  REQUIRE(hit.size() == 1);
  CHECK(hit[0].type == MatchType::ContentSimilar);
  CHECK(hit[0].confidence == doctest::Approx(1.0 - 34.0 / 63.0));
  CHECK(hit[0].phase == Phase::VisualRematch);

  CHECK(visual_rematch(uo, std::vector<int>{1}, fo, fn, {}).empty());

  // Pages without a hash do not participate.
  std::vector<PageFingerprint> bare(1);
  CHECK(visual_rematch(uo, std::vector<int>{0}, bare, fn, {}).empty());

  // Identical hashes are the best pick.
  fn[1].phash = base;
  const auto both = visual_rematch(uo, std::vector<int>{0, 1}, fo, fn, {});
  REQUIRE(both.size() == 1);
  CHECK(both[0].new_index == 1);
  CHECK(both[0].confidence == 1.0);
}

TEST_CASE("run_seven_phase: identical pages all finish in phase 1") {
  std::vector<std::string> texts;
  for (int k = 0; k < 4; ++k) texts.push_back(filler(k));
  const auto fps = fps_of(texts);
  TextSimilarity sim(texts, texts);
  const auto r = run_seven_phase(full_region(4, 4), fps, fps, sim, {}, {});
  REQUIRE(r.matches.size() == 4);
  for (const auto& m : r.matches) {
    CHECK(m.phase == Phase::ExactHash);
    CHECK(m.final);
    CHECK(m.old_index == m.new_index);
  }
  CHECK(r.residuals.deleted.empty());
  CHECK(r.residuals.inserted.empty());
}

TEST_CASE("run_seven_phase: drawing numbers only") {
  const std::vector<std::string> olds = {"A-01", "A-02", "S-03"};
  const std::vector<std::string> news = {"S-03 改", "A-01 改", "A-02 改"};
  TextSimilarity sim(olds, news);
  const auto r = run_seven_phase(full_region(3, 3), fps_of(olds), fps_of(news), sim, {}, {});
  CHECK(pairs_of(r.matches) == Pairs{{0, 1}, {1, 2}, {2, 0}});
  for (const auto& m : r.matches) {
    CHECK(m.phase == Phase::DrawingNumber);
    CHECK(m.confidence == 0.9);
  }
}

TEST_CASE("run_seven_phase: Pair-1 fixture regions") {
  const DocumentBundle old_doc = load_bundle(testing::fixture_dir() / "pair1/old");
  const DocumentBundle new_doc = load_bundle(testing::fixture_dir() / "pair1/new");
  const auto fo = fingerprint_bundle(old_doc);
  const auto fn = fingerprint_bundle(new_doc);
  MatchTrace trace;
  const MatchResult result = match_documents(old_doc, new_doc, fo, fn, {}, Variant::Full, &trace);

  std::vector<int> uo, un;
  for (const auto& r : trace.seven_phase) {
    CHECK(r.matches.empty());
    uo.insert(uo.end(), r.residuals.deleted.begin(), r.residuals.deleted.end());
    un.insert(un.end(), r.residuals.inserted.begin(), r.residuals.inserted.end());
  }
  std::sort(uo.begin(), uo.end());
  std::sort(un.begin(), un.end());
  CHECK(uo == std::vector<int>{4, 5, 6});
  CHECK(un == std::vector<int>{2, 5, 6, 7});

  // The two pages after the insertion point are recovered exactly.
  const PageMatch m23{2, 3, MatchType::ExactHash, 1.0, MatchSource::LCS};
  const PageMatch m34{3, 4, MatchType::ExactHash, 1.0, MatchSource::LCS};
  CHECK(std::find(result.matches.begin(), result.matches.end(), m23) != result.matches.end());
  CHECK(std::find(result.matches.begin(), result.matches.end(), m34) != result.matches.end());
  CHECK(result.inserted == std::vector<int>{2});
}

TEST_CASE("property: one-to-one, ceilings, phase order, determinism (1500 regions)") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> size(0, 7);
  std::uniform_int_distribution<int> word(0, 5);
  std::uniform_int_distribution<int> coin(0, 3);
  const std::vector<std::string> vocab = {"耐力壁の検定 ", "梁の断面算定 ", "A-01 ", "S-02 ",
                                          "荷重条件 ", "基礎の設計 "};
  for (int k = 0; k < 1500; ++k) {
    const int m = size(rng);
    const int n = size(rng);
    auto page = [&]() {
      std::string t;
      const int words = coin(rng) == 0 ? 0 : word(rng) + 8;
      for (int w = 0; w < words; ++w) t += vocab[word(rng)];
      return t;
    };
    std::vector<std::string> olds, news;
    for (int i = 0; i < m; ++i) olds.push_back(page());
    for (int j = 0; j < n; ++j) news.push_back(page());
    const auto fo = fps_of(olds);
    const auto fn = fps_of(news);
    TextSimilarity sim(olds, news);
    const Region region = full_region(m, n);
    Pairs anchors;
    if (m > 0 && n > 0 && coin(rng) == 0) anchors.emplace_back(0, 0);

    const auto r = run_seven_phase(region, fo, fn, sim, anchors, {});
    const auto again = run_seven_phase(region, fo, fn, sim, anchors, {});
    REQUIRE(r.matches == again.matches);

    std::set<int> used_o, used_n;
    double last_phase = 0;
    for (const auto& c : r.matches) {
      REQUIRE(used_o.insert(c.old_index).second);
      REQUIRE(used_n.insert(c.new_index).second);
      const double ph = phase_number(c.phase);
      REQUIRE(ph >= last_phase);
      last_phase = ph;
      REQUIRE(c.confidence >= 0.0);
      REQUIRE(c.confidence <= 1.0);
      switch (c.phase) {
        case Phase::ExactHash:
          REQUIRE(c.confidence == 1.0);
          REQUIRE_FALSE(fo[c.old_index].content_hash.empty());
          REQUIRE(fo[c.old_index].content_hash == fn[c.new_index].content_hash);
          break;
        case Phase::DrawingNumber: REQUIRE(c.confidence == 0.9); break;
        case Phase::SectionTitle: REQUIRE(c.confidence == 0.8); break;
        case Phase::PageShift: REQUIRE(c.confidence == 0.85); break;
        case Phase::TextSimilarity: REQUIRE(c.confidence <= 0.85); break;
        case Phase::PositionInterpolation: REQUIRE(c.confidence >= 0.3); break;
        case Phase::VisualRematch: FAIL("phase 7.5 runs outside the region"); break;
      }
      REQUIRE(c.final == (ph <= 3));
    }
    REQUIRE(used_o.size() + r.residuals.deleted.size() == static_cast<std::size_t>(m));
    REQUIRE(used_n.size() + r.residuals.inserted.size() == static_cast<std::size_t>(n));
    for (int o : r.residuals.deleted) REQUIRE_FALSE(used_o.contains(o));
    for (int j : r.residuals.inserted) REQUIRE_FALSE(used_n.contains(j));
  }
}
