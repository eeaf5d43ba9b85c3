#pragma once

#include <string>
#include <string_view>

namespace pagealign::utf8 {

// Decodes UTF-8 into scalar values. Malformed sequences decode to U+FFFD,
// one replacement per offending byte.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

// Number of scalar values in `text` (same rule as decode()).
std::size_t length(std::string_view text);

bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);

// Maps full-width ASCII variants (U+FF01..U+FF5E) and the ideographic space
// to their half-width forms; everything else passes through.
char32_t fold_width(char32_t cp);

}  // namespace pagealign::utf8
