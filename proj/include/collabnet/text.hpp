#pragma once

#include <string>
#include <string_view>

namespace collabnet {

// Decodes UTF-8 into code points. Throws DataError on malformed input.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);
bool is_valid_utf8(std::string_view text);

// Case fold (Unicode simple folding) plus whitespace trim and collapse.
// Diacritics and punctuation are left untouched.
std::u32string normalize_title(std::u32string_view title);
std::string normalize_title(std::string_view title);

}  // namespace collabnet
