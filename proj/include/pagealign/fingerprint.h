#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pagealign/bundle.h"

namespace pagealign {

// Pages shorter than this carry no content hash.
inline constexpr int kContentHashMinChars = 50;
// Pages shorter than this are "text-sparse" and get a perceptual hash.
inline constexpr int kPhashMaxChars = 200;
inline constexpr int kPhashBits = 63;
inline constexpr std::size_t kSectionTitleMinChars = 4;
inline constexpr std::size_t kSectionTitleMaxChars = 80;

struct PageFingerprint {
  std::string content_hash;    // hex MD5, empty for short pages
  std::string drawing_number;  // normalized, empty if none found
  std::string section_title;   // empty if no substantive line
  std::optional<std::uint64_t> phash;

  friend bool operator==(const PageFingerprint&, const PageFingerprint&) = default;
};

// Collapses Unicode whitespace runs to one ASCII space, trims, lowercases.
std::string normalize_text(std::string_view text);

std::string md5_hex(std::string_view bytes);
std::string content_hash(const PageRecord& page);

// First token shaped like an architectural sheet id (A-01, S-03, KO-1),
// width-folded and uppercased.
std::string extract_drawing_number(std::string_view text);

std::string extract_section_title(std::string_view text);

// 63-bit DCT perceptual hash of a 32x32 gray raster. Bit k holds the
// comparison for the k-th AC coefficient of the top-left 8x8 block in
// row-major order, so bit 0 is coefficient (0,1). Bit 63 is always clear.
std::uint64_t compute_phash(const Image& raster_low);

// Orthonormal 2-D type-II DCT of a 32x32 gray raster, row-major (v*32+u
// indexes vertical frequency v, horizontal frequency u).
std::vector<double> dct32(const Image& raster_low);

double phash_similarity(std::uint64_t a, std::uint64_t b);

PageFingerprint fingerprint_page(const PageRecord& page);
std::vector<PageFingerprint> fingerprint_bundle(const DocumentBundle& bundle);

// Hex form used in reports and the fingerprint command (16 digits).
std::string phash_hex(std::uint64_t h);

}  // namespace pagealign
