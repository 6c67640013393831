#include "collabnet/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/fit.hpp"
#include "collabnet/metrics.hpp"

namespace collabnet {

namespace fs = std::filesystem;

void validate(const PipelineConfig& config) {
  if (!(config.dedup_threshold > 0.0 && config.dedup_threshold < 1.0)) {
    throw UsageError("dedup threshold must lie in (0, 1)");
  }
  if (!(config.bin_ratio > 1.0)) throw UsageError("bin ratio must be > 1");
  if (config.degree_fit_min < 1 || config.weight_fit_min < 1) throw UsageError("fit ranges must start at >= 1");
  if (config.threads < 1) throw UsageError("threads must be >= 1");
  if (config.ingest.min_year > config.ingest.max_year) throw UsageError("min year exceeds max year");
}

fs::path input_path(const PipelineConfig& config) {
  return config.input ? *config.input : config.output_dir / artifacts::kCorpus;
}

namespace {

std::ifstream open_input(const fs::path& path, const char* hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("missing input " + path.string() + (hint ? std::string(" (") + hint + ")" : std::string()));
  }
  return in;
}

class OutputFile {
 public:
  OutputFile(const fs::path& dir, const std::string& name) : path_(dir / name), out_(path_, std::ios::binary) {
    if (!out_) throw DataError("cannot write " + path_.string());
  }
  std::ostream& stream() { return out_; }
  ~OutputFile() = default;

 private:
  fs::path path_;
  std::ofstream out_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::vector<ScientistRecord> load_records(const PipelineConfig& config) {
  auto in = open_input(input_path(config), "pass --input or run `synth` first");
  return parse_records(in, config.format, config.ingest);
}

std::vector<PaperCluster> load_clusters(const PipelineConfig& config, const std::vector<ScientistRecord>& records) {
  auto in = open_input(config.output_dir / artifacts::kClusters, "run `dedup` first");
  return read_clusters_csv(in, records);
}

CollaborationNetwork load_network(const PipelineConfig& config) {
  auto nodes = open_input(config.output_dir / artifacts::kNodes, "run `build` first");
  auto edges = open_input(config.output_dir / artifacts::kEdges, "run `build` first");
  return read_network_csv(nodes, edges);
}

std::size_t publication_count(const std::vector<ScientistRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.publications.size();
  return n;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

std::uint64_t parse_unsigned(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s[0] == '-') throw DataError("invalid " + what + " \"" + s + "\"");
  return v;
}

// Reads a CSV file line by line, checking the header.
template <typename RowFn>
void read_csv(std::istream& in, const std::vector<std::string>& header, const std::string& name, RowFn&& row_fn) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cols = split_csv_line(line);
    if (!cols) throw DataError(name + " line " + std::to_string(line_no) + ": malformed CSV");
    if (!header_seen) {
      if (*cols != header) throw DataError(name + ": unexpected header");
      header_seen = true;
      continue;
    }
    if (cols->size() != header.size()) {
      throw DataError(name + " line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " columns");
    }
    try {
      row_fn(*cols);
    } catch (const DataError& e) {
      throw DataError(name + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw DataError(name + ": empty file");
}

}  // namespace

void write_clusters_csv(std::ostream& out, const std::vector<ScientistRecord>& records,
                        const std::vector<PaperCluster>& clusters) {
  out << "cluster_id,members,title\n";
  for (const auto& c : clusters) {
    std::string members;
    for (const auto& m : c.members) {
      if (!members.empty()) members.push_back(';');
      members += records[m.scientist].scientist_id + "#" + std::to_string(m.publication);
    }
    const auto& first = c.members.front();
    out << join_csv({std::to_string(c.cluster_id), members,
                     records[first.scientist].publications[first.publication].title})
        << '\n';
  }
}

std::vector<PaperCluster> read_clusters_csv(std::istream& in, const std::vector<ScientistRecord>& records) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].scientist_id, i);
  std::vector<std::vector<bool>> used(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) used[i].assign(records[i].publications.size(), false);

  std::vector<PaperCluster> clusters;
  read_csv(in, {"cluster_id", "members", "title"}, artifacts::kClusters, [&](const std::vector<std::string>& c) {
    PaperCluster cluster;
    cluster.cluster_id = parse_unsigned(c[0], "cluster id");
    if (cluster.cluster_id != clusters.size()) throw DataError("cluster ids must be 0, 1, 2, ... in order");
    for (const auto& member : split(c[1], ';')) {
      const auto hash = member.rfind('#');
      if (hash == std::string::npos) throw DataError("member \"" + member + "\" lacks a publication index");
      auto it = index.find(member.substr(0, hash));
      if (it == index.end()) throw DataError("cluster references unknown scientist_id \"" + member.substr(0, hash) + "\"");
      const auto pub = parse_unsigned(member.substr(hash + 1), "publication index");
      if (pub >= records[it->second].publications.size()) throw DataError("no publication " + member);
      if (used[it->second][pub]) throw DataError("publication " + member + " appears in two clusters");
      used[it->second][pub] = true;
      cluster.members.push_back({it->second, pub});
    }
    const auto& first = records[cluster.members.front().scientist].publications[cluster.members.front().publication];
    cluster.year = first.year;
    cluster.author_count = first.author_count;
    clusters.push_back(std::move(cluster));
  });
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t p = 0; p < used[i].size(); ++p) {
      if (!used[i][p]) {
        throw DataError(std::string(artifacts::kClusters) + ": publication " + records[i].scientist_id + "#" +
                        std::to_string(p) + " is in no cluster (stale cluster file?)");
      }
    }
  }
  return clusters;
}

void write_network_csv(std::ostream& nodes, std::ostream& edges, const CollaborationNetwork& tcn) {
  nodes << "id,gender,field,papers\n";
  for (std::size_t i = 0; i < tcn.node_count(); ++i) {
    const auto& n = tcn.node(i);
    nodes << join_csv({n.id, std::string(to_string(n.gender)), std::string(to_string(n.field)),
                       std::to_string(tcn.paper_count(i))})
          << '\n';
  }
  edges << "id_i,id_j,weight\n";
  for (const auto& e : tcn.edges()) {
    edges << join_csv({tcn.node(e.a).id, tcn.node(e.b).id, std::to_string(e.weight)}) << '\n';
  }
}

CollaborationNetwork read_network_csv(std::istream& nodes_in, std::istream& edges_in) {
  std::vector<ScientistNode> nodes;
  std::vector<std::uint32_t> papers;
  std::unordered_map<std::string, std::uint32_t> index;
  read_csv(nodes_in, {"id", "gender", "field", "papers"}, artifacts::kNodes, [&](const std::vector<std::string>& c) {
    ScientistNode node;
    node.id = c[0];
    auto g = parse_gender(c[1]);
    if (!g) throw DataError("invalid gender \"" + c[1] + "\"");
    node.gender = *g;
    if (!c[2].empty()) {
      auto f = parse_field(c[2]);
      if (!f) throw DataError("invalid field \"" + c[2] + "\"");
      node.field = *f;
    }
    if (!index.emplace(node.id, static_cast<std::uint32_t>(nodes.size())).second) {
      throw DataError("duplicate node \"" + node.id + "\"");
    }
    papers.push_back(static_cast<std::uint32_t>(parse_unsigned(c[3], "paper count")));
    nodes.push_back(std::move(node));
  });
  std::vector<WeightedEdge> edges;
  read_csv(edges_in, {"id_i", "id_j", "weight"}, artifacts::kEdges, [&](const std::vector<std::string>& c) {
    auto a = index.find(c[0]);
    auto b = index.find(c[1]);
    if (a == index.end() || b == index.end()) throw DataError("edge references an unknown node");
    edges.push_back({a->second, b->second, static_cast<std::uint32_t>(parse_unsigned(c[2], "weight"))});
  });
  return CollaborationNetwork(std::move(nodes), std::move(papers), edges);
}

std::string sha256_hex(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read " + file.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

StageSummary run_synth(const PipelineConfig& config) {
  validate(config);
  ensure_dir(config.output_dir);
  const auto corpus = generate_corpus(config.synth);
  {
    OutputFile out(config.output_dir, artifacts::kCorpus);
    write_records_jsonl(out.stream(), corpus.records);
  }
  {
    OutputFile out(config.output_dir, artifacts::kTruthClusters);
    write_truth_clusters_csv(out.stream(), corpus);
  }
  {
    OutputFile out(config.output_dir, artifacts::kTruthEdges);
    write_truth_edges_csv(out.stream(), corpus);
  }
  StageSummary s;
  s.scientists = corpus.records.size();
  s.publications = corpus.truth_labels.size();
  s.clusters = corpus.paper_count;
  s.edges = corpus.truth_edges.size();
  return s;
}

StageSummary run_ingest(const PipelineConfig& config) {
  validate(config);
  const auto records = load_records(config);
  ensure_dir(config.output_dir);
  OutputFile out(config.output_dir, artifacts::kRecords);
  write_records_jsonl(out.stream(), records);
  StageSummary s;
  s.scientists = records.size();
  s.publications = publication_count(records);
  return s;
}

StageSummary run_dedup(const PipelineConfig& config) {
  validate(config);
  const auto records = load_records(config);
  const auto clusters = cluster_duplicates(records, {config.dedup_threshold, config.threads});
  ensure_dir(config.output_dir);
  OutputFile out(config.output_dir, artifacts::kClusters);
  write_clusters_csv(out.stream(), records, clusters);
  StageSummary s;
  s.scientists = records.size();
  s.publications = publication_count(records);
  s.clusters = clusters.size();
  return s;
}

StageSummary run_build(const PipelineConfig& config) {
  validate(config);
  const auto records = load_records(config);
  const auto clusters = load_clusters(config, records);
  const auto tcn = project_tcn(build_bipartite(records, clusters));
  {
    std::ofstream nodes(config.output_dir / artifacts::kNodes, std::ios::binary);
    std::ofstream edges(config.output_dir / artifacts::kEdges, std::ios::binary);
    if (!nodes || !edges) throw DataError("cannot write network files in " + config.output_dir.string());
    write_network_csv(nodes, edges, tcn);
  }
  const auto giant = giant_component(tcn);
  StageSummary s;
  s.scientists = records.size();
  s.publications = publication_count(records);
  s.clusters = clusters.size();
  s.edges = tcn.edge_count();
  s.giant_component_size = giant.nodes.size();
  s.giant_component_fraction = giant.fraction;
  return s;
}

namespace {

struct GenderSlice {
  const char* suffix;
  std::optional<Gender> gender;
};

constexpr std::array<GenderSlice, 3> kSlices = {
    GenderSlice{"all", std::nullopt}, GenderSlice{"female", Gender::Female}, GenderSlice{"male", Gender::Male}};

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void write_tables(const fs::path& dir, const FieldStats& stats) {
  {
    OutputFile out(dir, "field_stats.csv");
    write_field_stats_csv(out.stream(), stats);
  }
  {
    OutputFile out(dir, "collaborators_papers_by_field.csv");
    out.stream() << "field,mean_collaborators_female,mean_collaborators_male,mean_papers_female,mean_papers_male\n";
    for (const auto& r : stats.rows) {
      out.stream() << join_csv({std::string(to_string(r.field)), opt(r.collaborators[0].mean),
                                opt(r.collaborators[1].mean), opt(r.papers[0].mean), opt(r.papers[1].mean)})
                   << '\n';
    }
  }
  {
    OutputFile out(dir, "m_ratio_by_field.csv");
    out.stream() << "field,mean_female,se_female,n_female,mean_male,se_male,n_male\n";
    for (const auto& r : stats.rows) {
      out.stream() << join_csv({std::string(to_string(r.field)), opt(r.m_ratio[0].mean), opt(r.m_ratio[0].se),
                                std::to_string(r.m_ratio[0].n), opt(r.m_ratio[1].mean), opt(r.m_ratio[1].se),
                                std::to_string(r.m_ratio[1].n)})
                   << '\n';
    }
  }
  {
    OutputFile out(dir, "field_proportions.csv");
    out.stream() << "field,scientists,tcn_fraction,female_proportion\n";
    for (const auto& r : stats.rows) {
      out.stream() << join_csv({std::string(to_string(r.field)), std::to_string(r.scientists),
                                format_double(r.tcn_fraction), opt(r.female_proportion)})
                   << '\n';
    }
  }
  {
    OutputFile out(dir, "g_ratio_by_field.csv");
    out.stream() << "field,mean_g_ratio_male,se_male,mean_g_ratio_female,se_female,female_proportion\n";
    for (const auto& r : stats.rows) {
      out.stream() << join_csv({std::string(to_string(r.field)), opt(r.g_ratio[1].mean), opt(r.g_ratio[1].se),
                                opt(r.g_ratio[0].mean), opt(r.g_ratio[0].se), opt(r.female_proportion)})
                   << '\n';
    }
  }
}

}  // namespace

StageSummary run_metrics(const PipelineConfig& config) {
  validate(config);
  const auto tcn = load_network(config);
  const auto& dir = config.output_dir;
  write_tables(dir, field_stats(tcn));

  const GeometricBinSpec bins{config.bin_ratio, 1};
  for (MajorField field : kAllFields) {
    for (auto [gender, tag] : {std::pair{Gender::Female, "F"}, std::pair{Gender::Male, "M"}}) {
      const std::string suffix = std::string(to_string(field)) + "_" + tag + ".csv";
      {
        OutputFile out(dir, "g_ratio_curve_" + suffix);
        write_curve_csv(out.stream(), binned_curve(tcn, RatioMetric::GRatio, field, gender, bins));
      }
      {
        OutputFile out(dir, "m_ratio_curve_" + suffix);
        write_curve_csv(out.stream(), binned_curve(tcn, RatioMetric::MRatio, field, gender, bins));
      }
    }
  }
  for (const auto& slice : kSlices) {
    {
      OutputFile out(dir, std::string("degree_hist_") + slice.suffix + ".csv");
      write_histogram_csv(out.stream(), degree_distribution(tcn, slice.gender));
    }
    {
      OutputFile out(dir, std::string("weight_hist_") + slice.suffix + ".csv");
      write_histogram_csv(out.stream(), weight_distribution(tcn, slice.gender));
    }
  }
  StageSummary s;
  s.scientists = tcn.node_count();
  s.edges = tcn.edge_count();
  return s;
}

namespace {

// Writes the fit JSON and the binned points with the model curve. Returns
// false when the histogram has too few points to fit.
bool write_fit(const fs::path& dir, const std::string& stem, const Histogram& histogram, bool truncated,
               std::uint64_t min_value, double bin_ratio) {
  FitOptions options;
  options.bin_ratio = bin_ratio;
  FitResult fit;
  std::string error;
  try {
    fit = truncated ? fit_truncated_power_law(histogram, min_value, options)
                    : fit_power_law(histogram, min_value, options);
  } catch (const FitError& e) {
    if (e.last_iterate().iterations > 0) throw;  // non-convergence is a numerical failure
    error = e.what();
  }
  if (!error.empty()) {
    OutputFile out(dir, stem + ".json");
    nlohmann::ordered_json j;
    j["model"] = truncated ? "truncated_power_law" : "power_law";
    j["error"] = error;
    out.stream() << j.dump(2) << '\n';
    return false;
  }
  {
    OutputFile out(dir, stem + ".json");
    out.stream() << fit_to_json(fit) << '\n';
  }
  OutputFile out(dir, stem + ".csv");
  out.stream() << "x,bin_lo,bin_hi,density,model_density\n";
  for (const auto& p : log_bin(histogram, bin_ratio, min_value)) {
    out.stream() << join_csv({format_double(p.x), std::to_string(p.lo), std::to_string(p.hi), format_double(p.density),
                              format_double(model_bin_density(fit, p.lo, p.hi))})
                 << '\n';
  }
  return true;
}

}  // namespace

StageSummary run_fit(const PipelineConfig& config) {
  validate(config);
  const auto tcn = load_network(config);
  StageSummary s;
  s.scientists = tcn.node_count();
  s.edges = tcn.edge_count();
  for (const auto& slice : kSlices) {
    if (!write_fit(config.output_dir, std::string("degree_fit_") + slice.suffix,
                   degree_distribution(tcn, slice.gender), true, config.degree_fit_min, config.bin_ratio)) {
      ++s.fit_failures;
    }
    if (!write_fit(config.output_dir, std::string("weight_fit_") + slice.suffix,
                   weight_distribution(tcn, slice.gender), false, config.weight_fit_min, config.bin_ratio)) {
      ++s.fit_failures;
    }
  }
  return s;
}

namespace {

nlohmann::ordered_json config_json(const PipelineConfig& c) {
  // Output directory and thread count are left out: neither may change
  // the content of a run.
  nlohmann::ordered_json j;
  j["input"] = c.input ? c.input->generic_string() : std::string(artifacts::kCorpus);
  j["format"] = c.format == InputFormat::JSONL ? "jsonl" : "csv";
  j["min_year"] = c.ingest.min_year;
  j["max_year"] = c.ingest.max_year;
  j["dedup_threshold"] = std::stod(format_double(c.dedup_threshold));
  j["bin_ratio"] = std::stod(format_double(c.bin_ratio));
  j["degree_fit_min"] = c.degree_fit_min;
  j["weight_fit_min"] = c.weight_fit_min;
  return j;
}

}  // namespace

StageSummary run_report(const PipelineConfig& config) {
  validate(config);
  ensure_dir(config.output_dir);
  const auto ingest = run_ingest(config);
  run_dedup(config);
  const auto build = run_build(config);
  run_metrics(config);
  const auto fit = run_fit(config);

  StageSummary s = build;
  s.fit_failures = fit.fit_failures;

  nlohmann::ordered_json manifest;
  manifest["tool"] = "collabnet";
  manifest["version"] = kVersion;
  manifest["config"] = config_json(config);
  manifest["counts"] = {{"scientists", ingest.scientists},
                        {"publications", ingest.publications},
                        {"paper_clusters", build.clusters},
                        {"collaborations", build.edges},
                        {"fit_failures", fit.fit_failures}};
  manifest["giant_component"] = {{"size", build.giant_component_size},
                                 {"fraction", std::stod(format_double(build.giant_component_fraction))}};
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(config.output_dir)) {
    if (entry.is_regular_file() && entry.path().filename() != artifacts::kManifest) {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  auto files = nlohmann::ordered_json::array();
  for (const auto& name : names) {
    const auto path = config.output_dir / name;
    files.push_back({{"name", name}, {"bytes", fs::file_size(path)}, {"sha256", sha256_hex(path)}});
  }
  manifest["files"] = files;
  OutputFile out(config.output_dir, artifacts::kManifest);
  out.stream() << manifest.dump(2) << '\n';
  return s;
}

}  // namespace collabnet
