#include "collabnet/metrics.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "collabnet/csv.hpp"

namespace collabnet {

RatioParts g_ratio_parts(const CollaborationNetwork& tcn, std::size_t i) {
  RatioParts parts;
  for (const auto& nb : tcn.neighbors(i)) {
    const Gender g = tcn.node(nb.node).gender;
    if (g == Gender::Unknown) continue;
    parts.denominator += nb.weight;
    if (g == Gender::Female) parts.numerator += nb.weight;
  }
  return parts;
}

std::optional<double> g_ratio(const CollaborationNetwork& tcn, std::size_t i) {
  return g_ratio_parts(tcn, i).value();
}

RatioParts m_ratio_parts(const CollaborationNetwork& tcn, std::size_t i) {
  RatioParts parts;
  const MajorField own = tcn.node(i).field;
  if (own == MajorField::Unknown) return parts;
  for (const auto& nb : tcn.neighbors(i)) {
    const MajorField f = tcn.node(nb.node).field;
    if (f == MajorField::Unknown) continue;
    parts.denominator += nb.weight;
    if (f != own) parts.numerator += nb.weight;
  }
  return parts;
}

std::optional<double> m_ratio(const CollaborationNetwork& tcn, std::size_t i) {
  return m_ratio_parts(tcn, i).value();
}

MeanSE summarize(std::span<const double> values) {
  MeanSE s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(s.n);
  s.mean = mean;
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.se = sd / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

namespace {

int gender_slot(Gender g) {
  switch (g) {
    case Gender::Female: return 0;
    case Gender::Male: return 1;
    case Gender::Unknown: break;
  }
  return -1;
}

std::optional<double> metric_value(const CollaborationNetwork& tcn, RatioMetric metric, std::size_t i) {
  return metric == RatioMetric::GRatio ? g_ratio(tcn, i) : m_ratio(tcn, i);
}

}  // namespace

FieldStats field_stats(const CollaborationNetwork& tcn) {
  FieldStats stats;
  stats.total_scientists = tcn.node_count();
  struct Samples {
    std::vector<double> k, papers, m, g;
  };
  std::array<std::array<Samples, 2>, kNumFields> samples;

  for (std::size_t f = 0; f < kNumFields; ++f) stats.rows[f].field = kAllFields[f];
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    const auto& node = tcn.node(i);
    if (node.field == MajorField::Unknown) {
      ++stats.unknown_field;
      continue;
    }
    auto& row = stats.rows[static_cast<std::size_t>(node.field)];
    ++row.scientists;
    const int slot = gender_slot(node.gender);
    if (slot < 0) continue;
    (slot == 0 ? row.women : row.men) += 1;
    auto& s = samples[static_cast<std::size_t>(node.field)][static_cast<std::size_t>(slot)];
    s.k.push_back(static_cast<double>(tcn.degree(i)));
    s.papers.push_back(static_cast<double>(tcn.paper_count(i)));
    if (auto m = m_ratio(tcn, i)) s.m.push_back(*m);
    if (auto g = g_ratio(tcn, i)) s.g.push_back(*g);
  }

  for (std::size_t f = 0; f < kNumFields; ++f) {
    auto& row = stats.rows[f];
    if (stats.total_scientists > 0) {
      row.tcn_fraction = static_cast<double>(row.scientists) / static_cast<double>(stats.total_scientists);
    }
    if (row.women + row.men > 0) {
      row.female_proportion = static_cast<double>(row.women) / static_cast<double>(row.women + row.men);
    }
    for (std::size_t slot = 0; slot < 2; ++slot) {
      const auto& s = samples[f][slot];
      row.collaborators[slot] = summarize(s.k);
      row.papers[slot] = summarize(s.papers);
      row.m_ratio[slot] = summarize(s.m);
      row.g_ratio[slot] = summarize(s.g);
    }
  }
  return stats;
}

BinnedCurve binned_curve(const CollaborationNetwork& tcn, RatioMetric metric, MajorField field,
                         Gender gender, const GeometricBinSpec& spec) {
  std::uint64_t max_degree = 1;
  for (std::size_t i = 0; i < tcn.node_count(); ++i) max_degree = std::max<std::uint64_t>(max_degree, tcn.degree(i));
  const auto bins = geometric_bins(max_degree, spec);
  std::vector<std::vector<double>> values(bins.size());
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    const auto& node = tcn.node(i);
    if (node.field != field || node.gender != gender) continue;
    const auto k = tcn.degree(i);
    if (k == 0) continue;
    auto v = metric_value(tcn, metric, i);
    if (!v) continue;
    const auto b = find_bin(bins, k);
    if (b < bins.size()) values[b].push_back(*v);
  }
  BinnedCurve curve;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (values[b].empty()) continue;
    const auto s = summarize(values[b]);
    curve.push_back({bins[b].lo, bins[b].hi, *s.mean, s.se, s.n});
  }
  return curve;
}

Histogram make_histogram(std::span<const std::uint64_t> samples) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto v : samples) {
    if (v > 0) ++counts[v];
  }
  Histogram h;
  for (const auto& [v, c] : counts) h.total += c;
  for (const auto& [v, c] : counts) {
    h.points.push_back({v, c, static_cast<double>(c) / static_cast<double>(h.total)});
  }
  return h;
}

Histogram degree_distribution(const CollaborationNetwork& tcn, std::optional<Gender> gender) {
  std::vector<std::uint64_t> degrees;
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    if (gender && tcn.node(i).gender != *gender) continue;
    degrees.push_back(tcn.degree(i));
  }
  return make_histogram(degrees);
}

Histogram weight_distribution(const CollaborationNetwork& tcn, std::optional<Gender> gender) {
  std::vector<std::uint64_t> weights;
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    for (const auto& nb : tcn.neighbors(i)) {
      if (nb.node <= i) continue;
      if (gender && tcn.node(i).gender != *gender && tcn.node(nb.node).gender != *gender) continue;
      weights.push_back(nb.weight);
    }
  }
  return make_histogram(weights);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void write_field_stats_csv(std::ostream& out, const FieldStats& stats) {
  out << "field,scientists,tcn_fraction,female_proportion,"
         "mean_collaborators_female,mean_collaborators_male,"
         "mean_papers_female,mean_papers_male,"
         "mean_m_ratio_female,se_m_ratio_female,mean_m_ratio_male,se_m_ratio_male,"
         "mean_g_ratio_female,se_g_ratio_female,mean_g_ratio_male,se_g_ratio_male,empty\n";
  for (const auto& row : stats.rows) {
    out << join_csv({std::string(to_string(row.field)), std::to_string(row.scientists),
                     format_double(row.tcn_fraction), opt(row.female_proportion),
                     opt(row.collaborators[0].mean), opt(row.collaborators[1].mean),
                     opt(row.papers[0].mean), opt(row.papers[1].mean),
                     opt(row.m_ratio[0].mean), opt(row.m_ratio[0].se),
                     opt(row.m_ratio[1].mean), opt(row.m_ratio[1].se),
                     opt(row.g_ratio[0].mean), opt(row.g_ratio[0].se),
                     opt(row.g_ratio[1].mean), opt(row.g_ratio[1].se),
                     row.empty() ? "1" : "0"})
        << '\n';
  }
}

void write_curve_csv(std::ostream& out, const BinnedCurve& curve) {
  out << "bin_lo,bin_hi,mean,se,n\n";
  for (const auto& p : curve) {
    out << p.bin_lo << ',' << p.bin_hi << ',' << format_double(p.mean) << ',' << opt(p.se) << ','
        << p.n << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << "value,probability\n";
  // Full precision so the emitted column still sums to 1.
  for (const auto& p : histogram.points) out << p.value << ',' << format_double_exact(p.probability) << '\n';
}

}  // namespace collabnet
