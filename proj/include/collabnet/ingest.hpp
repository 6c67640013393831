#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "collabnet/error.hpp"
#include "collabnet/records.hpp"

namespace collabnet {

enum class InputFormat { JSONL, CSV };

struct IngestOptions {
  int min_year = 1900;
  int max_year = 2100;
};

struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Thrown by parse_records; carries every diagnostic found in the input.
class IngestError : public DataError {
 public:
  explicit IngestError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Reads scientist records.
///
/// JSONL: one scientist per non-blank line,
///   {"id": "...", "gender": "F"|"M"|null, "fields": ["BIO", ...],
///    "pubs": [{"title": "...", "year": 2001, "n_authors": 3, "doi": "..."}]}
///
/// CSV: header `id,gender,fields,title,year,n_authors,doi`, one publication
/// per row. Scientist columns repeat on every row of the same scientist and
/// those rows must be contiguous; `fields` is `;`-separated. A row whose
/// title, year and n_authors are all empty declares a scientist with no
/// publications.
///
/// Record order follows the input. All problems are collected and reported
/// together through IngestError.
std::vector<ScientistRecord> parse_records(std::istream& in, InputFormat format,
                                           const IngestOptions& options = {});

// Canonical JSONL encoding (the format parse_records reads back).
void write_records_jsonl(std::ostream& out, const std::vector<ScientistRecord>& records);

}  // namespace collabnet
