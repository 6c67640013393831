#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace collabnet {

enum class Gender : std::uint8_t { Female, Male, Unknown };

enum class MajorField : std::uint8_t { AGR, SOC, BIO, EXA, HUM, HEA, ENG, LIN, Unknown };

inline constexpr std::size_t kNumFields = 8;

inline constexpr std::array<MajorField, kNumFields> kAllFields = {
    MajorField::AGR, MajorField::SOC, MajorField::BIO, MajorField::EXA,
    MajorField::HUM, MajorField::HEA, MajorField::ENG, MajorField::LIN};

std::string_view to_string(MajorField field);
std::string_view to_string(Gender gender);  // "F", "M" or "" for Unknown

std::optional<MajorField> parse_field(std::string_view code);
// Accepts "F" / "M"; the empty token maps to Unknown.
std::optional<Gender> parse_gender(std::string_view token);

struct PublicationRecord {
  std::string title;
  int year = 0;
  int author_count = 1;
  std::optional<std::string> doi;
};

struct ScientistRecord {
  std::string scientist_id;
  Gender gender = Gender::Unknown;
  std::vector<MajorField> fields;  // ordered as displayed, at most 3
  std::vector<PublicationRecord> publications;
};

// First displayed major field, Unknown when none is declared.
MajorField primary_field(const ScientistRecord& record);

}  // namespace collabnet
