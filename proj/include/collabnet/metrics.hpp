#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "collabnet/binning.hpp"
#include "collabnet/graph.hpp"

namespace collabnet {

// Integer numerator and denominator of a weight ratio. The ratio is
// undefined (absent, never 0) when the denominator is 0.
struct RatioParts {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  std::optional<double> value() const {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// g-ratio: share of i's collaboration weight spent with women.
/// Neighbors of unknown gender are left out of both sums.
RatioParts g_ratio_parts(const CollaborationNetwork& tcn, std::size_t i);
std::optional<double> g_ratio(const CollaborationNetwork& tcn, std::size_t i);

/// m-ratio: share of i's collaboration weight spent with scientists whose
/// primary field differs from i's. Neighbors of unknown field are left out
/// of both sums; undefined when i's own field is unknown.
RatioParts m_ratio_parts(const CollaborationNetwork& tcn, std::size_t i);
std::optional<double> m_ratio(const CollaborationNetwork& tcn, std::size_t i);

enum class RatioMetric { GRatio, MRatio };

struct MeanSE {
  std::size_t n = 0;
  std::optional<double> mean;  // absent when n == 0
  std::optional<double> se;    // sample std / sqrt(n), absent when n < 2
};

MeanSE summarize(std::span<const double> values);

struct FieldRow {
  MajorField field = MajorField::Unknown;
  std::size_t scientists = 0;
  std::size_t women = 0;
  std::size_t men = 0;
  double tcn_fraction = 0.0;
  std::optional<double> female_proportion;  // women / (women + men)
  // Indexed by gender: [0] = Female, [1] = Male.
  std::array<MeanSE, 2> collaborators;
  std::array<MeanSE, 2> papers;
  std::array<MeanSE, 2> m_ratio;
  std::array<MeanSE, 2> g_ratio;
  bool empty() const { return scientists == 0; }
};

struct FieldStats {
  std::array<FieldRow, kNumFields> rows;
  std::size_t total_scientists = 0;
  std::size_t unknown_field = 0;
};

// Scientists grouped by (primary field, gender).
FieldStats field_stats(const CollaborationNetwork& tcn);

struct CurvePoint {
  std::uint64_t bin_lo = 0;
  std::uint64_t bin_hi = 0;
  double mean = 0.0;
  std::optional<double> se;
  std::size_t n = 0;
};

using BinnedCurve = std::vector<CurvePoint>;

// Mean metric per geometric degree bin for one (field, gender) group.
// Scientists whose metric is undefined are skipped; empty bins are omitted.
BinnedCurve binned_curve(const CollaborationNetwork& tcn, RatioMetric metric, MajorField field,
                         Gender gender, const GeometricBinSpec& bins = {});

struct HistogramPoint {
  std::uint64_t value = 0;
  std::uint64_t count = 0;
  double probability = 0.0;
};

struct Histogram {
  std::vector<HistogramPoint> points;  // sorted by value, counts > 0
  std::uint64_t total = 0;
};

// Normalized histogram of positive integer samples; zeros are ignored.
Histogram make_histogram(std::span<const std::uint64_t> samples);

// P(k) over scientists with k >= 1. No gender filter when nullopt.
Histogram degree_distribution(const CollaborationNetwork& tcn, std::optional<Gender> gender = std::nullopt);

// P(w) over edges. An edge belongs to a gender's distribution when at
// least one endpoint has that gender, so mixed edges count for both.
Histogram weight_distribution(const CollaborationNetwork& tcn, std::optional<Gender> gender = std::nullopt);

// CSV emitters. Column order is part of the output contract.
void write_field_stats_csv(std::ostream& out, const FieldStats& stats);
void write_curve_csv(std::ostream& out, const BinnedCurve& curve);       // bin_lo,bin_hi,mean,se,n
void write_histogram_csv(std::ostream& out, const Histogram& histogram);  // value,probability

}  // namespace collabnet
