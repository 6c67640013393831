// Command-line driver: one subcommand per pipeline stage.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "collabnet/error.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/pipeline.hpp"

namespace {

using namespace collabnet;

void print_summary(const std::string& stage, const StageSummary& s) {
  std::cout << stage << ": scientists=" << s.scientists << " publications=" << s.publications
            << " clusters=" << s.clusters << " edges=" << s.edges;
  if (s.giant_component_size > 0) {
    std::cout << " giant_component=" << s.giant_component_size << " (" << s.giant_component_fraction << ")";
  }
  if (s.fit_failures > 0) std::cout << " fit_failures=" << s.fit_failures;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  PipelineConfig config;
  std::string output_dir = config.output_dir.string();
  std::string input;
  std::string format = "jsonl";
  bool first_char_typos = false;

  CLI::App app{"Collaboration network pipeline: dedup, projection, homophily metrics and heavy-tail fits"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key=value configuration file; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("-o,--out", output_dir, "Output directory")->capture_default_str();
  app.add_option("-i,--input", input, "Input corpus (default: <out>/corpus.jsonl)");
  app.add_option("--format", format, "Input format")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  app.add_option("--min-year", config.ingest.min_year, "Earliest accepted publication year")->capture_default_str();
  app.add_option("--max-year", config.ingest.max_year, "Latest accepted publication year")->capture_default_str();
  app.add_option("--dedup-threshold", config.dedup_threshold, "Duplicate bound as a fraction of the longer title")
      ->capture_default_str();
  app.add_option("--bin-ratio", config.bin_ratio, "Geometric bin ratio for curves and fits")->capture_default_str();
  app.add_option("--degree-fit-min", config.degree_fit_min, "Smallest degree used by the degree fit")
      ->capture_default_str();
  app.add_option("--weight-fit-min", config.weight_fit_min, "Smallest weight used by the weight fit")
      ->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads (never changes outputs)")->capture_default_str();

  auto& synth = config.synth;
  const std::string group = "Synthetic corpus";
  app.add_option("--seed", synth.seed, "Generator seed")->capture_default_str()->group(group);
  app.add_option("--n-scientists", synth.n_scientists, "Number of scientists")->capture_default_str()->group(group);
  app.add_option("--homophily", synth.homophily, "P(partner restricted to the same gender)")
      ->capture_default_str()
      ->group(group);
  app.add_option("--interdisciplinarity", synth.interdisciplinarity, "P(partner restricted to another field)")
      ->capture_default_str()
      ->group(group);
  app.add_option("--degree-alpha", synth.degree_alpha, "Degree model exponent")->capture_default_str()->group(group);
  app.add_option("--degree-beta", synth.degree_beta, "Degree model cutoff")->capture_default_str()->group(group);
  app.add_option("--weight-lambda", synth.weight_lambda, "Weight model exponent")->capture_default_str()->group(group);
  app.add_option("--solo-paper-mean", synth.solo_paper_mean, "Mean single-author papers per scientist")
      ->capture_default_str()
      ->group(group);
  app.add_option("--typo-rate", synth.typo_rate, "Edits per title character on each copy")
      ->capture_default_str()
      ->group(group);
  app.add_flag("--typos-on-first-char", first_char_typos, "Allow typos in the first title character")->group(group);
  app.add_option("--doi-fraction", synth.doi_fraction, "Share of papers carrying a DOI")
      ->capture_default_str()
      ->group(group);

  app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  app.add_subcommand("ingest", "Validate the input and write records.jsonl");
  app.add_subcommand("dedup", "Cluster duplicate publications into clusters.csv");
  app.add_subcommand("build", "Project clusters onto nodes.csv and edges.csv");
  app.add_subcommand("metrics", "Write tables, histograms and binned curves");
  app.add_subcommand("fit", "Fit degree and weight distributions");
  app.add_subcommand("report", "Run ingest through fit and write manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  config.output_dir = output_dir;
  if (!input.empty()) config.input = input;
  config.format = format == "csv" ? InputFormat::CSV : InputFormat::JSONL;
  synth.typos_on_first_char = first_char_typos;

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    StageSummary summary;
    if (stage == "synth") {
      validate(synth);
      summary = run_synth(config);
    } else if (stage == "ingest") {
      summary = run_ingest(config);
    } else if (stage == "dedup") {
      summary = run_dedup(config);
    } else if (stage == "build") {
      summary = run_build(config);
    } else if (stage == "metrics") {
      summary = run_metrics(config);
    } else if (stage == "fit") {
      summary = run_fit(config);
    } else {
      summary = run_report(config);
    }
    print_summary(stage, summary);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IngestError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << input_path(config).string() << ":" << d.line << ": " << d.message << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
