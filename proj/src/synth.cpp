#include "collabnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "collabnet/error.hpp"
#include "collabnet/fit.hpp"
#include "collabnet/random.hpp"
#include "collabnet/text.hpp"

namespace collabnet {

namespace {

// Words of at least two letters, so no edit can leave two spaces adjacent.
constexpr std::string_view kVocabulary[] = {
    "analysis", "adaptive", "assessment", "bacterial", "behavior", "biomass", "brazilian",
    "cellular", "chemical", "climate", "coastal", "comparative", "dynamics", "diversity",
    "distribution", "design", "ecology", "effects", "evaluation", "evidence", "experimental",
    "fluid", "forest", "functional", "genetic", "growth", "gender", "health", "heat", "human",
    "impact", "infection", "interaction", "kinetics", "knowledge", "landscape", "language",
    "learning", "magnetic", "model", "molecular", "network", "nonlinear", "numerical",
    "observation", "optimal", "oxidative", "patterns", "performance", "plant", "population",
    "quality", "quantum", "regional", "response", "river", "rural", "scattering", "social",
    "soil", "spatial", "structure", "study", "surface", "synthesis", "theory", "thermal",
    "transport", "treatment", "tropical", "urban", "under", "variation", "vector", "water",
    "wave", "yield", "young", "zinc", "zone", "of", "in", "and", "for", "on", "the", "with",
    "from", "by", "an", "as", "at", "to", "new", "two", "case", "data", "field", "method",
    "process", "system", "control", "cancer", "children", "energy", "flow", "ion", "jet",
    "law", "mass", "policy", "risk", "state", "time", "use", "virus", "work"};

constexpr std::size_t kVocabularySize = std::size(kVocabulary);

std::string random_title(Rng& rng, std::size_t min_chars, std::size_t max_chars) {
  const std::size_t target = min_chars + uniform_below(rng, max_chars - min_chars + 1);
  std::string title;
  while (title.size() < target) {
    if (!title.empty()) title.push_back(' ');
    title += kVocabulary[uniform_below(rng, kVocabularySize)];
  }
  title[0] = static_cast<char>(title[0] - 'a' + 'A');
  return title;
}

char32_t random_letter(Rng& rng) { return static_cast<char32_t>(U'a' + uniform_below(rng, 26)); }

char32_t different_letter(Rng& rng, char32_t avoid) {
  char32_t c;
  do {
    c = random_letter(rng);
  } while (c == avoid);
  return c;
}

// Pool of remaining stubs per (gender, field) class.
constexpr std::size_t kGenderClasses = 3;
constexpr std::size_t kFieldClasses = kNumFields + 1;
constexpr std::size_t kPools = kGenderClasses * kFieldClasses;

std::size_t pool_index(Gender g, MajorField f) {
  return static_cast<std::size_t>(g) * kFieldClasses + static_cast<std::size_t>(f);
}

class StubPools {
 public:
  void add(std::size_t pool, std::uint32_t scientist) {
    pools_[pool].push_back(scientist);
    ++total_;
  }
  std::size_t total() const { return total_; }
  std::size_t size(std::size_t pool) const { return pools_[pool].size(); }

  // Removes and returns a uniformly chosen stub among the allowed pools.
  std::uint32_t take(Rng& rng, const std::array<bool, kPools>& allowed, std::size_t allowed_total) {
    std::uint64_t r = uniform_below(rng, allowed_total);
    for (std::size_t p = 0; p < kPools; ++p) {
      if (!allowed[p]) continue;
      if (r < pools_[p].size()) return remove(p, static_cast<std::size_t>(r));
      r -= pools_[p].size();
    }
    throw std::logic_error("stub selection out of range");
  }

  std::uint32_t remove(std::size_t pool, std::size_t index) {
    auto& v = pools_[pool];
    const std::uint32_t s = v[index];
    v[index] = v.back();
    v.pop_back();
    --total_;
    return s;
  }

  void put_back(std::size_t pool, std::uint32_t scientist) { add(pool, scientist); }

 private:
  std::array<std::vector<std::uint32_t>, kPools> pools_;
  std::size_t total_ = 0;
};

struct Paper {
  std::size_t first_author;
  std::size_t second_author;  // == first_author for solo papers
  int year;
  int author_count;
  std::string title;
  std::optional<std::string> doi;
};

void check(bool ok, const std::string& message) {
  if (!ok) throw UsageError("synthetic corpus: " + message);
}

}  // namespace

void validate(const SynthConfig& c) {
  check(c.n_scientists >= 2, "need at least 2 scientists");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  double sum = 0.0;
  for (std::size_t f = 0; f < kNumFields; ++f) {
    check(unit(c.field_proportions[f]), "field proportions must lie in [0, 1]");
    check(unit(c.female_proportions[f]), "female proportions must lie in [0, 1]");
    sum += c.field_proportions[f];
  }
  check(std::abs(sum - 1.0) < 1e-6, "field proportions must sum to 1");
  check(unit(c.unknown_field_fraction) && c.unknown_field_fraction < 1.0,
        "unknown_field_fraction must lie in [0, 1)");
  check(unit(c.unknown_field_female_proportion), "unknown_field_female_proportion must lie in [0, 1]");
  check(unit(c.unknown_gender_fraction), "unknown_gender_fraction must lie in [0, 1]");
  check(unit(c.homophily), "homophily must lie in [0, 1]");
  check(unit(c.interdisciplinarity), "interdisciplinarity must lie in [0, 1]");
  check(c.degree_alpha > 0.0 && c.degree_beta > 0.0, "degree model needs alpha > 0 and beta > 0");
  check(c.degree_k_min >= 1, "degree_k_min must be >= 1");
  check(c.degree_k_min <= c.n_scientists - 1,
        "degree model demands more collaborators than there are other scientists");
  check(c.weight_lambda > 1.0, "weight_lambda must be > 1");
  check(c.solo_paper_mean >= 0.0, "solo_paper_mean must be >= 0");
  check(c.max_external_authors >= 0, "max_external_authors must be >= 0");
  check(c.year_min <= c.year_max, "year_min must not exceed year_max");
  check(c.title_min_chars >= 2 && c.title_min_chars <= c.title_max_chars,
        "title length range must satisfy 2 <= min <= max");
  check(unit(c.typo_rate), "typo_rate must lie in [0, 1]");
  check(unit(c.doi_fraction), "doi_fraction must lie in [0, 1]");
}

double expected_g_ratio(double homophily, double female_share, Gender gender) {
  switch (gender) {
    case Gender::Female: return homophily + (1.0 - homophily) * female_share;
    case Gender::Male: return (1.0 - homophily) * female_share;
    case Gender::Unknown: break;
  }
  return female_share;
}

std::size_t typo_edit_count(double rate, std::size_t length) {
  if (rate <= 0.0 || length == 0) return 0;
  // The slack keeps products such as 0.05 * 60 from rounding up past 3.
  const double edits = std::ceil(rate * static_cast<double>(length) - 1e-9);
  return static_cast<std::size_t>(std::max(edits, 0.0));
}

std::string inject_typos(std::string_view title, double rate, std::uint64_t seed, bool allow_first_char) {
  std::u32string text = utf8_decode(title);
  const std::size_t edits = typo_edit_count(rate, text.size());
  if (edits == 0) return std::string(title);
  Rng rng(seed);
  const std::size_t start = allow_first_char ? 0 : 1;
  const std::size_t length = text.size();
  const std::size_t usable = length > start ? length - start : 0;

  // Non-overlapping edits: pick sorted distinct offsets v_0 < ... < v_{e-1}
  // from [0, usable - 2(e-1)) and spread them to v_k + 2k.
  if (usable + 2 >= 3 * edits) {
    const std::size_t range = usable - 2 * (edits - 1);
    std::vector<std::size_t> offsets(range);
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    for (std::size_t k = 0; k < edits; ++k) {
      std::swap(offsets[k], offsets[k + uniform_below(rng, range - k)]);
    }
    offsets.resize(edits);
    std::sort(offsets.begin(), offsets.end());

    std::u32string out;
    out.reserve(length + edits);
    std::size_t next = 0;
    for (std::size_t i = 0; i < length; ++i) {
      if (next < edits && i == start + offsets[next] + 2 * next) {
        ++next;
        switch (uniform_below(rng, 4)) {
          case 0:  // insert before i
            out.push_back(random_letter(rng));
            out.push_back(text[i]);
            break;
          case 1:  // delete
            break;
          case 2:  // transpose with i + 1 when that changes the text
            if (i + 1 < length && text[i] != text[i + 1]) {
              out.push_back(text[i + 1]);
              out.push_back(text[i]);
              ++i;
              break;
            }
            [[fallthrough]];
          default:
            out.push_back(different_letter(rng, text[i]));
            break;
        }
        continue;
      }
      out.push_back(text[i]);
    }
    return utf8_encode(out);
  }

  // Dense regime: sequential insert / delete / substitute.
  for (std::size_t k = 0; k < edits; ++k) {
    const std::size_t size = text.size();
    const std::uint64_t op = size > start ? uniform_below(rng, 3) : 0;
    if (op == 0) {
      const std::size_t pos = start + uniform_below(rng, size - std::min(size, start) + 1);
      text.insert(text.begin() + static_cast<std::ptrdiff_t>(std::min(pos, size)), random_letter(rng));
    } else {
      const std::size_t pos = start + uniform_below(rng, size - start);
      if (op == 1) {
        text.erase(text.begin() + static_cast<std::ptrdiff_t>(pos));
      } else {
        text[pos] = different_letter(rng, text[pos]);
      }
    }
  }
  return utf8_encode(text);
}

std::string record_id(const ScientistRecord& record, std::size_t publication) {
  return record.scientist_id + "#" + std::to_string(publication);
}

SyntheticCorpus generate_corpus(const SynthConfig& config) {
  validate(config);
  const std::size_t n = config.n_scientists;
  // Independent streams so that changing one stage leaves the others alone.
  Rng people_rng(derive_seed(config.seed, 0));
  Rng degree_rng(derive_seed(config.seed, 1));
  Rng pairing_rng(derive_seed(config.seed, 2));
  Rng paper_rng(derive_seed(config.seed, 3));

  // Scientists.
  std::vector<Gender> gender(n);
  std::vector<MajorField> field(n);
  std::discrete_distribution<int> pick_field(config.field_proportions.begin(), config.field_proportions.end());
  for (std::size_t i = 0; i < n; ++i) {
    double female_share = config.unknown_field_female_proportion;
    if (uniform01(people_rng) < config.unknown_field_fraction) {
      field[i] = MajorField::Unknown;
    } else {
      // discrete_distribution draws through the engine, so it stays seeded.
      const int f = pick_field(people_rng);
      field[i] = kAllFields[static_cast<std::size_t>(f)];
      female_share = config.female_proportions[static_cast<std::size_t>(f)];
    }
    if (uniform01(people_rng) < config.unknown_gender_fraction) {
      gender[i] = Gender::Unknown;
    } else {
      gender[i] = uniform01(people_rng) < female_share ? Gender::Female : Gender::Male;
    }
  }

  // Stubs from the degree model, capped at n - 1 collaborators.
  TruncatedPowerLawSampler degree_model(config.degree_alpha, config.degree_beta, config.degree_k_min);
  StubPools pools;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t target = std::min<std::uint64_t>(degree_model(degree_rng), n - 1);
    for (std::uint64_t s = 0; s < target; ++s) pools.add(pool_index(gender[i], field[i]), static_cast<std::uint32_t>(i));
  }

  // Pairing.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_count;
  const std::array<bool, kPools> everything = [] {
    std::array<bool, kPools> a{};
    a.fill(true);
    return a;
  }();
  while (pools.total() >= 2) {
    const std::uint32_t i = pools.take(pairing_rng, everything, pools.total());
    const bool same_gender = gender[i] != Gender::Unknown && uniform01(pairing_rng) < config.homophily;
    const bool cross_field = uniform01(pairing_rng) < config.interdisciplinarity;

    auto allowed_pools = [&](bool field_rule) {
      std::array<bool, kPools> allowed{};
      for (std::size_t g = 0; g < kGenderClasses; ++g) {
        for (std::size_t f = 0; f < kFieldClasses; ++f) {
          const auto pg = static_cast<Gender>(g);
          const auto pf = static_cast<MajorField>(f);
          bool ok = true;
          if (same_gender && pg != gender[i]) ok = false;
          if (field_rule && field[i] != MajorField::Unknown) {
            if (cross_field) {
              ok = ok && pf != field[i] && pf != MajorField::Unknown;
            } else {
              ok = ok && pf == field[i];
            }
          }
          allowed[pool_index(pg, pf)] = ok;
        }
      }
      return allowed;
    };

    std::array<bool, kPools> allowed{};
    std::size_t allowed_total = 0;
    for (bool field_rule : {true, false}) {
      allowed = allowed_pools(field_rule);
      allowed_total = 0;
      for (std::size_t p = 0; p < kPools; ++p) {
        if (allowed[p]) allowed_total += pools.size(p);
      }
      if (allowed_total > 0) break;
    }
    if (allowed_total == 0) continue;  // gender rule unsatisfiable: drop the stub

    // Self pairs are redrawn a few times, then the initiating stub is dropped.
    std::uint32_t j = i;
    for (int attempt = 0; attempt < 8 && j == i; ++attempt) {
      j = pools.take(pairing_rng, allowed, allowed_total);
      if (j == i) {
        pools.put_back(pool_index(gender[j], field[j]), j);
      }
    }
    if (j == i) continue;
    ++pair_count[{std::min(i, j), std::max(i, j)}];
  }

  // Papers.
  TruncatedPowerLawSampler weight_model(config.weight_lambda, std::numeric_limits<double>::infinity(), 1);
  SyntheticCorpus corpus;
  std::vector<Paper> papers;
  auto new_paper = [&](std::size_t a, std::size_t b, int author_count) {
    Paper p;
    p.first_author = a;
    p.second_author = b;
    p.year = config.year_min + static_cast<int>(uniform_below(paper_rng, static_cast<std::uint64_t>(config.year_max - config.year_min + 1)));
    p.author_count = author_count;
    p.title = random_title(paper_rng, config.title_min_chars, config.title_max_chars);
    if (uniform01(paper_rng) < config.doi_fraction) p.doi = "10.5555/synth." + std::to_string(papers.size());
    papers.push_back(std::move(p));
  };
  for (const auto& [pair, matches] : pair_count) {
    std::uint64_t weight = 0;
    for (std::uint32_t m = 0; m < matches; ++m) weight += weight_model(paper_rng);
    corpus.truth_edges.push_back({pair.first, pair.second, weight});
    for (std::uint64_t w = 0; w < weight; ++w) {
      const int external = static_cast<int>(uniform_below(paper_rng, static_cast<std::uint64_t>(config.max_external_authors + 1)));
      new_paper(pair.first, pair.second, 2 + external);
    }
  }
  if (config.solo_paper_mean > 0.0) {
    std::poisson_distribution<int> solo(config.solo_paper_mean);
    for (std::size_t i = 0; i < n; ++i) {
      const int count = solo(paper_rng);
      for (int s = 0; s < count; ++s) {
        const int external = static_cast<int>(uniform_below(paper_rng, static_cast<std::uint64_t>(config.max_external_authors + 1)));
        new_paper(i, i, 1 + external);
      }
    }
  }
  corpus.paper_count = papers.size();

  // Per-author copies, each corrupted independently.
  std::vector<std::vector<std::size_t>> authored(n);
  for (std::size_t p = 0; p < papers.size(); ++p) {
    authored[papers[p].first_author].push_back(p);
    if (papers[p].second_author != papers[p].first_author) authored[papers[p].second_author].push_back(p);
  }
  const int width = static_cast<int>(std::to_string(n).size());
  const std::uint64_t typo_seed = derive_seed(config.seed, 4);
  std::uint64_t copy_index = 0;
  corpus.records.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& rec = corpus.records[i];
    std::string id = std::to_string(i + 1);
    rec.scientist_id = "s" + std::string(static_cast<std::size_t>(width) - id.size(), '0') + id;
    rec.gender = gender[i];
    if (field[i] != MajorField::Unknown) {
      rec.fields.push_back(field[i]);
      // Secondary fields are never consulted; one extra keeps the list realistic.
      if (uniform01(people_rng) < 0.3) {
        const MajorField extra = kAllFields[uniform_below(people_rng, kNumFields)];
        if (extra != field[i]) rec.fields.push_back(extra);
      }
    }
    std::stable_sort(authored[i].begin(), authored[i].end(),
                     [&](std::size_t x, std::size_t y) { return papers[x].year < papers[y].year; });
    for (std::size_t p : authored[i]) {
      const Paper& paper = papers[p];
      PublicationRecord pub;
      pub.title = inject_typos(paper.title, config.typo_rate, derive_seed(typo_seed, copy_index++),
                               config.typos_on_first_char);
      pub.year = paper.year;
      pub.author_count = paper.author_count;
      pub.doi = paper.doi;
      rec.publications.push_back(std::move(pub));
      corpus.truth_labels.push_back(p);
    }
  }
  return corpus;
}

void write_truth_clusters_csv(std::ostream& out, const SyntheticCorpus& corpus) {
  out << "record_id,cluster_id\n";
  std::size_t k = 0;
  for (const auto& rec : corpus.records) {
    for (std::size_t p = 0; p < rec.publications.size(); ++p) {
      out << record_id(rec, p) << ',' << corpus.truth_labels[k++] << '\n';
    }
  }
}

void write_truth_edges_csv(std::ostream& out, const SyntheticCorpus& corpus) {
  out << "id_i,id_j,weight\n";
  for (const auto& e : corpus.truth_edges) {
    out << corpus.records[e.a].scientist_id << ',' << corpus.records[e.b].scientist_id << ',' << e.weight << '\n';
  }
}

}  // namespace collabnet
