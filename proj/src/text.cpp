#include "collabnet/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "collabnet/error.hpp"

namespace collabnet {

namespace {

// Returns false on the first malformed sequence.
template <typename Sink>
bool decode_into(std::string_view text, Sink&& sink) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;
    sink(static_cast<char32_t>(c));
  }
  return true;
}

}  // namespace

std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  if (!decode_into(text, [&](char32_t c) { out.push_back(c); })) {
    throw DataError("invalid UTF-8 sequence");
  }
  return out;
}

bool is_valid_utf8(std::string_view text) {
  return decode_into(text, [](char32_t) {});
}

std::string utf8_encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    std::uint8_t buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) throw DataError("code point cannot be encoded as UTF-8");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::u32string normalize_title(std::u32string_view title) {
  std::u32string out;
  out.reserve(title.size());
  bool pending_space = false;
  for (char32_t c : title) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT)));
  }
  return out;
}

std::string normalize_title(std::string_view title) {
  return utf8_encode(normalize_title(utf8_decode(title)));
}

}  // namespace collabnet
