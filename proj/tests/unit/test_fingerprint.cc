#include <bit>
#include <cmath>

#include "doctest.h"

#include "pagealign/errors.h"
#include "pagealign/fingerprint.h"
#include "test_support.h"

using namespace pagealign;

namespace {

Image checkerboard(int cell) {
  Image img(32, 32, 1);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) img.at(x, y) = ((x / cell + y / cell) % 2) ? 255 : 0;
  }
  return img;
}

Image ramp_noise() {
  Image img(32, 32, 1);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) img.at(x, y) = static_cast<std::uint8_t>((x * 37 + y * 91 + x * y * 13) % 256);
  }
  return img;
}

Image random_raster(std::mt19937& rng) {
  Image img(32, 32, 1);
  std::uniform_int_distribution<int> px(0, 255);
  // Mix of smooth structure and noise so hashes are not all degenerate.
  const int fx = px(rng) % 5 + 1;
  const int fy = px(rng) % 5 + 1;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      const double base = 127.5 + 100 * std::sin(fx * x / 5.0) * std::cos(fy * y / 7.0);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(base + (px(rng) - 128) / 4.0, 0.0, 255.0));
    }
  }
  return img;
}

const std::u32string kAlphabet = U"aAbBzZ éÉ全角　\t\n\r ΣσＡ１－-0123456789";

}  // namespace

TEST_CASE("normalize_text examples") {
  CHECK(normalize_text("A   B\n C") == "a b c");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("　全角　SPACE") == "全角 space");
  CHECK(normalize_text("  \t\n ") == "");
  CHECK(normalize_text("ÉCOLE Σ") == "école σ");
}

TEST_CASE("content_hash: 50-character rule and normalization") {
  CHECK(content_hash(make_page(0, std::string(49, 'a'))) == "");
  CHECK(content_hash(make_page(0, std::string(50, 'a'))).size() == 32);

  const std::string base = "Structural calculation sheet for the second floor beams";
  const std::string noisy = "  STRUCTURAL   calculation\nsheet for the Second floor\tbeams ";
  REQUIRE(utf8::length(base) >= 50);
  REQUIRE(utf8::length(noisy) >= 50);
  CHECK(content_hash(make_page(0, base)) == content_hash(make_page(1, noisy)));
}

TEST_CASE("content_hash golden digest (reference MD5)") {
  const std::string s60 = "The quick brown fox jumps over the lazy dog; pack my box now";
  REQUIRE(s60.size() == 60);
  CHECK(content_hash(make_page(0, s60)) == "a70d0540589013dfb5bd923245a1126c");
  CHECK(md5_hex("") == "d41d8cd98f00b204e9800998ecf8427e");
}

TEST_CASE("extract_drawing_number examples") {
  CHECK(extract_drawing_number("図面番号 A-01 平面図") == "A-01");
  CHECK(extract_drawing_number("ＫＯ－１") == "KO-1");
  CHECK(extract_drawing_number("no drawing id here") == "");
  CHECK(extract_drawing_number("sheet s-03 rev") == "S-03");
  CHECK(extract_drawing_number("KO−1") == "KO-1");  // U+2212 minus
  CHECK(extract_drawing_number("A12b detail") == "A12B");
  CHECK(extract_drawing_number("ABCD-01") == "");  // four letters
  CHECK(extract_drawing_number("A-1234") == "A-1234");  // digit suffix
  CHECK(extract_drawing_number("A-12345") == "");
  CHECK(extract_drawing_number("S-01 then A-02") == "S-01");
}

TEST_CASE("extract_section_title examples") {
  CHECK(extract_section_title("\n\n2.1 荷重条件\n...") == "2.1 荷重条件");
  CHECK(extract_section_title("  \n \n") == "");
  CHECK(extract_section_title("§\n耐力壁の検定") == "耐力壁の検定");
  CHECK(extract_section_title("  Load   Case  A \nmore") == "Load Case A");
  const std::string longline(100, 'x');
  CHECK(utf8::length(extract_section_title(longline)) == kSectionTitleMaxChars);
}

TEST_CASE("compute_phash: constant image hashes to zero") {
  CHECK(compute_phash(Image(32, 32, 1, 128)) == 0);
  CHECK(compute_phash(Image(32, 32, 1, 0)) == 0);
}

TEST_CASE("compute_phash: pinned values from a direct-summation DCT") {
  CHECK(compute_phash(checkerboard(8)) == 0x0500050050005000ULL);
  CHECK(compute_phash(checkerboard(4)) == 0);
  CHECK(compute_phash(ramp_noise()) == 0x647938c65119cdd6ULL);
  CHECK(compute_phash(ramp_noise()) == compute_phash(ramp_noise()));
}

TEST_CASE("dct32 matches direct summation on a few coefficients") {
  const Image img = ramp_noise();
  const std::vector<double> c = dct32(img);
  for (auto [v, u] : {std::pair{0, 0}, {0, 1}, {3, 5}, {7, 7}, {12, 2}}) {
    double acc = 0;
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        acc += img.at(x, y) * std::cos(M_PI * (2 * y + 1) * v / 64.0) *
               std::cos(M_PI * (2 * x + 1) * u / 64.0);
      }
    }
    const double au = u == 0 ? std::sqrt(1.0 / 32) : std::sqrt(2.0 / 32);
    const double av = v == 0 ? std::sqrt(1.0 / 32) : std::sqrt(2.0 / 32);
    CHECK(c[v * 32 + u] == doctest::Approx(au * av * acc).epsilon(1e-9));
  }
}

TEST_CASE("compute_phash rejects wrong dimensions") {
  CHECK_THROWS_AS(compute_phash(Image(16, 16, 1)), DimensionError);
  CHECK_THROWS_AS(compute_phash(Image(32, 32, 3)), DimensionError);
}

TEST_CASE("phash_similarity examples") {
  const std::uint64_t a = 0x2A2A2A2A2A2A2A2AULL & ((1ULL << 63) - 1);
  CHECK(phash_similarity(a, a) == 1.0);
  CHECK(phash_similarity(a, ~a & ((1ULL << 63) - 1)) == 0.0);
  const std::uint64_t b = a ^ ((1ULL << 34) - 1);
  CHECK(phash_similarity(a, b) == doctest::Approx(1.0 - 34.0 / 63.0).epsilon(1e-12));
  CHECK(phash_similarity(a, b) == doctest::Approx(0.4603).epsilon(1e-4));
}

TEST_CASE("fingerprint_page examples") {
  PageRecord blank = make_page(0, "");
  blank.raster_low = checkerboard(8);
  const PageFingerprint fb = fingerprint_page(blank);
  CHECK(fb.content_hash.empty());
  CHECK(fb.drawing_number.empty());
  CHECK(fb.section_title.empty());
  CHECK(fb.phash.has_value());

  PageRecord dense = make_page(0, std::string(300, 'q'));
  dense.raster_low = checkerboard(8);
  CHECK_FALSE(fingerprint_page(dense).phash.has_value());

  const PageFingerprint f60 = fingerprint_page(make_page(0, std::string(60, 'r')));
  CHECK_FALSE(f60.phash.has_value());
  CHECK_FALSE(f60.content_hash.empty());

  const PageFingerprint labelled = fingerprint_page(make_page(0, "図面番号 A-01\n1階 平面図"));
  CHECK(labelled.drawing_number == "A-01");
  CHECK(labelled.section_title == "図面番号 A-01");
}

TEST_CASE("fingerprint_bundle is page-aligned and deterministic") {
  const DocumentBundle doc = load_bundle(testing::fixture_dir() / "self90");
  const auto a = fingerprint_bundle(doc);
  const auto b = fingerprint_bundle(doc);
  REQUIRE(a.size() == 90);
  CHECK(a == b);
  for (int i = 0; i < 90; ++i) CHECK(a[i] == fingerprint_page(doc.pages[i]));
}

TEST_CASE("phash_hex") {
  CHECK(phash_hex(0) == "0000000000000000");
  CHECK(phash_hex(0x647938c65119cdd6ULL) == "647938c65119cdd6");
}

TEST_CASE("property: normalize_text is idempotent and canonical (2000 cases)") {
  std::mt19937 rng(11);
  for (int k = 0; k < 2000; ++k) {
    const std::string s = testing::random_text(rng, 40, kAlphabet);
    const std::string once = normalize_text(s);
    REQUIRE(normalize_text(once) == once);
    REQUIRE(once.find("  ") == std::string::npos);
    REQUIRE((once.empty() || (once.front() != ' ' && once.back() != ' ')));
    for (char32_t c : utf8::decode(once)) REQUIRE((c == U' ' || !utf8::is_space(c)));
  }
}

TEST_CASE("property: fingerprint ceilings hold (2000 cases)") {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int k = 0; k < 2000; ++k) {
    PageRecord page = make_page(0, testing::random_text(rng, 260, kAlphabet));
    if (coin(rng)) page.raster_low = random_raster(rng);
    const PageFingerprint fp = fingerprint_page(page);
    REQUIRE(fp.content_hash.empty() == (page.char_count < kContentHashMinChars));
    REQUIRE(fp.phash.has_value() == (page.char_count < kPhashMaxChars && page.raster_low.has_value()));
    if (fp.phash) REQUIRE((*fp.phash >> 63) == 0);
    REQUIRE(utf8::length(fp.section_title) <= kSectionTitleMaxChars);
  }
}

TEST_CASE("property: phash similarity lattice and symmetry (1000 cases)") {
  std::mt19937 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const std::uint64_t a = compute_phash(random_raster(rng));
    const std::uint64_t b = compute_phash(random_raster(rng));
    REQUIRE((a >> 63) == 0);
    const double s = phash_similarity(a, b);
    REQUIRE(s == phash_similarity(b, a));
    REQUIRE(phash_similarity(a, a) == 1.0);
    const int dist = std::popcount(a ^ b);
    REQUIRE(s == 1.0 - dist / 63.0);
    REQUIRE(s >= 0.0);
    REQUIRE(s <= 1.0);
  }
}
