#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collabnet/dedup.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/synth.hpp"

namespace collabnet {

inline constexpr const char* kVersion = "1.0.0";

struct PipelineConfig {
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> input;  // defaults to <output_dir>/corpus.jsonl
  InputFormat format = InputFormat::JSONL;
  IngestOptions ingest;
  double dedup_threshold = kDefaultDedupThreshold;
  double bin_ratio = 2.0;
  std::uint64_t degree_fit_min = 1;
  std::uint64_t weight_fit_min = 1;
  unsigned threads = 1;  // never changes any output byte
  SynthConfig synth;
};

// Throws UsageError on out-of-range settings.
void validate(const PipelineConfig& config);

std::filesystem::path input_path(const PipelineConfig& config);

// Stage artifacts, all inside output_dir.
namespace artifacts {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kTruthClusters = "truth_clusters.csv";
inline constexpr const char* kTruthEdges = "truth_edges.csv";
inline constexpr const char* kRecords = "records.jsonl";
inline constexpr const char* kClusters = "clusters.csv";
inline constexpr const char* kNodes = "nodes.csv";
inline constexpr const char* kEdges = "edges.csv";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifacts

struct StageSummary {
  std::size_t scientists = 0;
  std::size_t publications = 0;
  std::size_t clusters = 0;
  std::size_t edges = 0;
  std::size_t giant_component_size = 0;
  double giant_component_fraction = 0.0;
  std::size_t fit_failures = 0;
};

// Each stage reads what earlier stages wrote and throws DataError when an
// input is missing or malformed.
StageSummary run_synth(const PipelineConfig& config);
StageSummary run_ingest(const PipelineConfig& config);
StageSummary run_dedup(const PipelineConfig& config);
StageSummary run_build(const PipelineConfig& config);
StageSummary run_metrics(const PipelineConfig& config);
StageSummary run_fit(const PipelineConfig& config);
// ingest, dedup, build, metrics and fit in sequence, then manifest.json.
StageSummary run_report(const PipelineConfig& config);

// Cluster report: cluster_id,members,title with members as
// `scientist_id#publication_index` joined by ';'.
void write_clusters_csv(std::ostream& out, const std::vector<ScientistRecord>& records,
                        const std::vector<PaperCluster>& clusters);
std::vector<PaperCluster> read_clusters_csv(std::istream& in, const std::vector<ScientistRecord>& records);

// nodes.csv: id,gender,field,papers. edges.csv: id_i,id_j,weight.
void write_network_csv(std::ostream& nodes, std::ostream& edges, const CollaborationNetwork& tcn);
CollaborationNetwork read_network_csv(std::istream& nodes, std::istream& edges);

std::string sha256_hex(const std::filesystem::path& file);

}  // namespace collabnet
