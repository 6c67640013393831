#include "collabnet/ingest.hpp"

#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "collabnet/csv.hpp"
#include "collabnet/text.hpp"

namespace collabnet {

namespace {

using nlohmann::json;

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string msg;
  for (const auto& d : diagnostics) {
    if (!msg.empty()) msg += '\n';
    msg += "line " + std::to_string(d.line) + ": " + d.message;
  }
  return msg;
}

struct LineError {
  std::string message;
};

[[noreturn]] void fail(std::string message) { throw LineError{std::move(message)}; }

// ';' and '#' delimit record ids in the cluster report.
void check_id(const std::string& id) {
  if (id.find_first_of(";#") != std::string::npos) fail("scientist_id \"" + id + "\" contains ';' or '#'");
}

std::vector<MajorField> check_fields(const std::vector<std::string>& codes) {
  if (codes.size() > 3) fail("more than 3 major fields");
  std::vector<MajorField> fields;
  for (const auto& code : codes) {
    auto f = parse_field(code);
    if (!f) fail("invalid field token \"" + code + "\"");
    for (MajorField seen : fields) {
      if (seen == *f) fail("duplicate field \"" + code + "\"");
    }
    fields.push_back(*f);
  }
  return fields;
}

void check_publication(const PublicationRecord& pub, const IngestOptions& options) {
  if (pub.title.empty()) fail("empty title");
  if (!is_valid_utf8(pub.title)) fail("title is not valid UTF-8");
  if (pub.author_count < 1) fail("n_authors must be >= 1, got " + std::to_string(pub.author_count));
  if (pub.year < options.min_year || pub.year > options.max_year) {
    fail("year " + std::to_string(pub.year) + " outside [" + std::to_string(options.min_year) +
         ", " + std::to_string(options.max_year) + "]");
  }
}

int json_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string("missing \"") + key + "\"");
  if (!it->is_number_integer()) fail(std::string("\"") + key + "\" must be an integer");
  auto v = it->get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) fail(std::string("\"") + key + "\" out of range");
  return static_cast<int>(v);
}

ScientistRecord parse_json_line(const std::string& line, const IngestOptions& options) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) fail("expected a JSON object");

  ScientistRecord rec;
  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    fail("missing or empty \"id\"");
  }
  rec.scientist_id = id->get<std::string>();
  check_id(rec.scientist_id);

  if (auto g = obj.find("gender"); g != obj.end() && !g->is_null()) {
    if (!g->is_string()) fail("\"gender\" must be a string or null");
    const auto& token = g->get_ref<const std::string&>();
    auto parsed = token.empty() ? std::nullopt : parse_gender(token);
    if (!parsed) fail("invalid gender token \"" + token + "\"");
    rec.gender = *parsed;
  }

  if (auto f = obj.find("fields"); f != obj.end() && !f->is_null()) {
    if (!f->is_array()) fail("\"fields\" must be an array");
    std::vector<std::string> codes;
    for (const auto& c : *f) {
      if (!c.is_string()) fail("field codes must be strings");
      codes.push_back(c.get<std::string>());
    }
    rec.fields = check_fields(codes);
  }

  if (auto p = obj.find("pubs"); p != obj.end() && !p->is_null()) {
    if (!p->is_array()) fail("\"pubs\" must be an array");
    for (const auto& item : *p) {
      if (!item.is_object()) fail("publication entries must be objects");
      PublicationRecord pub;
      auto title = item.find("title");
      if (title == item.end() || !title->is_string()) fail("publication without a string \"title\"");
      pub.title = title->get<std::string>();
      pub.year = json_int(item, "year");
      pub.author_count = json_int(item, "n_authors");
      if (auto doi = item.find("doi"); doi != item.end() && !doi->is_null()) {
        if (!doi->is_string()) fail("\"doi\" must be a string or null");
        if (!doi->get_ref<const std::string&>().empty()) pub.doi = doi->get<std::string>();
      }
      check_publication(pub, options);
      rec.publications.push_back(std::move(pub));
    }
  }
  return rec;
}

int csv_int(const std::string& token, const char* name) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(token, &used);
  } catch (const std::exception&) {
    fail(std::string("invalid integer for ") + name + ": \"" + token + "\"");
  }
  if (used != token.size() || v < INT32_MIN || v > INT32_MAX) {
    fail(std::string("invalid integer for ") + name + ": \"" + token + "\"");
  }
  return static_cast<int>(v);
}

std::vector<std::string> split_semicolons(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(';', start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

const std::vector<std::string> kCsvHeader = {"id", "gender", "fields", "title", "year", "n_authors", "doi"};

std::vector<ScientistRecord> parse_jsonl(std::istream& in, const IngestOptions& options) {
  std::vector<ScientistRecord> records;
  std::vector<Diagnostic> diagnostics;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = parse_json_line(line, options);
      if (!seen.insert(rec.scientist_id).second) {
        fail("duplicate scientist_id \"" + rec.scientist_id + "\"");
      }
      records.push_back(std::move(rec));
    } catch (const LineError& e) {
      diagnostics.push_back({line_no, e.message});
    }
  }
  if (!diagnostics.empty()) throw IngestError(std::move(diagnostics));
  return records;
}

std::vector<ScientistRecord> parse_csv(std::istream& in, const IngestOptions& options) {
  std::vector<ScientistRecord> records;
  std::vector<Diagnostic> diagnostics;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::string last_id;
  std::string last_gender_token;
  std::string last_fields_token;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto cols = split_csv_line(line);
      if (!cols) fail("malformed CSV quoting");
      if (!header_seen) {
        header_seen = true;
        if (*cols != kCsvHeader) fail("expected header id,gender,fields,title,year,n_authors,doi");
        continue;
      }
      if (cols->size() != kCsvHeader.size()) {
        fail("expected 7 columns, got " + std::to_string(cols->size()));
      }
      const auto& c = *cols;
      if (c[0].empty()) fail("empty scientist id");

      const bool continues = !records.empty() && c[0] == last_id;
      if (continues) {
        if (c[1] != last_gender_token || c[2] != last_fields_token) {
          fail("scientist columns differ between rows of \"" + c[0] + "\"");
        }
      } else {
        if (index.count(c[0])) fail("duplicate scientist_id \"" + c[0] + "\" (rows not contiguous)");
        ScientistRecord rec;
        check_id(c[0]);
        rec.scientist_id = c[0];
        auto g = parse_gender(c[1]);
        if (!g) fail("invalid gender token \"" + c[1] + "\"");
        rec.gender = *g;
        rec.fields = check_fields(split_semicolons(c[2]));
        index.emplace(c[0], records.size());
        records.push_back(std::move(rec));
        last_id = c[0];
        last_gender_token = c[1];
        last_fields_token = c[2];
      }

      if (c[3].empty() && c[4].empty() && c[5].empty()) {
        if (!c[6].empty()) fail("doi given without a publication");
        continue;
      }
      PublicationRecord pub;
      pub.title = c[3];
      pub.year = csv_int(c[4], "year");
      pub.author_count = csv_int(c[5], "n_authors");
      if (!c[6].empty()) pub.doi = c[6];
      check_publication(pub, options);
      records.back().publications.push_back(std::move(pub));
    } catch (const LineError& e) {
      diagnostics.push_back({line_no, e.message});
    }
  }
  if (!diagnostics.empty()) throw IngestError(std::move(diagnostics));
  return records;
}

}  // namespace

IngestError::IngestError(std::vector<Diagnostic> diagnostics)
    : DataError(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<ScientistRecord> parse_records(std::istream& in, InputFormat format,
                                           const IngestOptions& options) {
  return format == InputFormat::JSONL ? parse_jsonl(in, options) : parse_csv(in, options);
}

void write_records_jsonl(std::ostream& out, const std::vector<ScientistRecord>& records) {
  for (const auto& rec : records) {
    nlohmann::ordered_json obj;
    obj["id"] = rec.scientist_id;
    if (rec.gender == Gender::Unknown) {
      obj["gender"] = nullptr;
    } else {
      obj["gender"] = std::string(to_string(rec.gender));
    }
    obj["fields"] = nlohmann::ordered_json::array();
    for (MajorField f : rec.fields) obj["fields"].push_back(std::string(to_string(f)));
    obj["pubs"] = nlohmann::ordered_json::array();
    for (const auto& pub : rec.publications) {
      nlohmann::ordered_json p;
      p["title"] = pub.title;
      p["year"] = pub.year;
      p["n_authors"] = pub.author_count;
      if (pub.doi) p["doi"] = *pub.doi;
      obj["pubs"].push_back(std::move(p));
    }
    out << obj.dump() << '\n';
  }
}

}  // namespace collabnet
