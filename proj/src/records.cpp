#include "collabnet/records.hpp"

namespace collabnet {

std::string_view to_string(MajorField field) {
  switch (field) {
    case MajorField::AGR: return "AGR";
    case MajorField::SOC: return "SOC";
    case MajorField::BIO: return "BIO";
    case MajorField::EXA: return "EXA";
    case MajorField::HUM: return "HUM";
    case MajorField::HEA: return "HEA";
    case MajorField::ENG: return "ENG";
    case MajorField::LIN: return "LIN";
    case MajorField::Unknown: break;
  }
  return "";
}

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::Female: return "F";
    case Gender::Male: return "M";
    case Gender::Unknown: break;
  }
  return "";
}

std::optional<MajorField> parse_field(std::string_view code) {
  for (MajorField f : kAllFields) {
    if (to_string(f) == code) return f;
  }
  return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view token) {
  if (token == "F") return Gender::Female;
  if (token == "M") return Gender::Male;
  if (token.empty()) return Gender::Unknown;
  return std::nullopt;
}

MajorField primary_field(const ScientistRecord& record) {
  return record.fields.empty() ? MajorField::Unknown : record.fields.front();
}

}  // namespace collabnet
