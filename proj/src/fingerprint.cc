#include "pagealign/fingerprint.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <regex>

#include "pagealign/errors.h"
#include "pagealign/parallel.h"
#include "pagealign/utf8.h"

namespace pagealign {

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8::append(out, utf8::to_lower(cp));
  }
  return out;
}

std::string md5_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_md5(), nullptr) != 1) {
    throw Error("MD5 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string content_hash(const PageRecord& page) {
  if (page.char_count < kContentHashMinChars) return {};
  return md5_hex(normalize_text(page.text));
}

std::string extract_drawing_number(std::string_view text) {
  std::string folded;
  folded.reserve(text.size());
  for (char32_t cp : utf8::decode(text)) {
    cp = utf8::fold_width(cp);
    if (cp == 0x2212) cp = U'-';  // minus sign used as a separator
    utf8::append(folded, cp);
  }
  // Letters, optional hyphen, digits, optional one-character suffix; must not
  // sit inside a longer ASCII alphanumeric run.
  static const std::regex kPattern(
      "(?:^|[^A-Za-z0-9])([A-Za-z]{1,3}-?[0-9]{1,3}[A-Za-z0-9]?)(?![A-Za-z0-9])");
  std::smatch m;
  if (!std::regex_search(folded, m, kPattern)) return {};
  std::string id = m[1].str();
  std::transform(id.begin(), id.end(), id.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return id;
}

std::string extract_section_title(std::string_view text) {
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    if (utf8::length(normalize_text(line)) >= kSectionTitleMinChars) {
      // Collapse whitespace but keep the original case.
      std::u32string title;
      bool pending_space = false;
      for (char32_t cp : utf8::decode(line)) {
        if (utf8::is_space(cp)) {
          pending_space = !title.empty();
          continue;
        }
        if (pending_space) {
          title.push_back(U' ');
          pending_space = false;
        }
        title.push_back(cp);
      }
      if (title.size() > kSectionTitleMaxChars) title.resize(kSectionTitleMaxChars);
      return utf8::encode(title);
    }
    start = end + 1;
  }
  return {};
}

std::vector<double> dct32(const Image& raster_low) {
  constexpr int N = kLowRasterSize;
  if (raster_low.width != N || raster_low.height != N || raster_low.channels != 1) {
    throw DimensionError("perceptual hash needs a 32x32 single-channel raster, got " +
                         std::to_string(raster_low.width) + "x" +
                         std::to_string(raster_low.height) + "x" +
                         std::to_string(raster_low.channels));
  }
  // basis[k][x] = alpha(k) * cos(pi * (2x + 1) * k / 2N)
  static const auto basis = [] {
    std::array<std::array<double, N>, N> b{};
    for (int k = 0; k < N; ++k) {
      const double alpha = k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
      for (int x = 0; x < N; ++x) {
        b[k][x] = alpha * std::cos(std::numbers::pi * (2 * x + 1) * k / (2.0 * N));
      }
    }
    return b;
  }();

  // Separable: rows first, then columns.
  std::vector<double> rows(N * N, 0.0);
  for (int y = 0; y < N; ++y) {
    for (int u = 0; u < N; ++u) {
      double s = 0;
      for (int x = 0; x < N; ++x) s += basis[u][x] * raster_low.at(x, y);
      rows[y * N + u] = s;
    }
  }
  std::vector<double> coeffs(N * N, 0.0);
  for (int v = 0; v < N; ++v) {
    for (int u = 0; u < N; ++u) {
      double s = 0;
      for (int y = 0; y < N; ++y) s += basis[v][y] * rows[y * N + u];
      // Round-off on flat inputs must not decide a median comparison.
      coeffs[v * N + u] = std::abs(s) < 1e-9 ? 0.0 : s;
    }
  }
  return coeffs;
}

std::uint64_t compute_phash(const Image& raster_low) {
  const std::vector<double> coeffs = dct32(raster_low);
  std::array<double, kPhashBits> ac{};
  int k = 0;
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      if (v == 0 && u == 0) continue;
      ac[k++] = coeffs[v * kLowRasterSize + u];
    }
  }
  std::array<double, kPhashBits> sorted = ac;
  std::nth_element(sorted.begin(), sorted.begin() + kPhashBits / 2, sorted.end());
  const double median = sorted[kPhashBits / 2];
  std::uint64_t hash = 0;
  for (int i = 0; i < kPhashBits; ++i) {
    if (ac[i] > median) hash |= std::uint64_t{1} << i;
  }
  return hash;
}

double phash_similarity(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kMask = (std::uint64_t{1} << kPhashBits) - 1;
  return 1.0 - static_cast<double>(std::popcount((a ^ b) & kMask)) / kPhashBits;
}

PageFingerprint fingerprint_page(const PageRecord& page) {
  PageFingerprint fp;
  fp.content_hash = content_hash(page);
  fp.drawing_number = extract_drawing_number(page.text);
  fp.section_title = extract_section_title(page.text);
  if (page.char_count < kPhashMaxChars && page.raster_low) {
    fp.phash = compute_phash(*page.raster_low);
  }
  return fp;
}

std::vector<PageFingerprint> fingerprint_bundle(const DocumentBundle& bundle) {
  std::vector<PageFingerprint> fps(bundle.pages.size());
  parallel_for(fps.size(), [&](std::size_t i) { fps[i] = fingerprint_page(bundle.pages[i]); });
  return fps;
}

std::string phash_hex(std::uint64_t h) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = kHex[h & 0xF];
    h >>= 4;
  }
  return s;
}

}  // namespace pagealign
