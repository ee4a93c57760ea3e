#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aida/core.hpp"
#include "aida/errors.hpp"
#include "aida/graph.hpp"
#include "aida/linker.hpp"
#include "aida/nanopub.hpp"
#include "aida/validate.hpp"
#include "aida/version.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

double round_digits(double value, double factor) {
  return std::round(value * factor) / factor;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw aida::FormatError("cannot write output file '" + path + "'");
  out << bytes;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw aida::FormatError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ordered_json stats_json(const aida::NetworkStats& stats) {
  return ordered_json{{"node_count", stats.node_count},
                      {"claim_count", stats.claim_count},
                      {"publication_count", stats.publication_count},
                      {"entity_count", stats.entity_count},
                      {"edge_count", stats.edge_count},
                      {"component_count", stats.component_count},
                      {"largest_component_node_count", stats.largest_component_node_count},
                      {"largest_component_claim_count", stats.largest_component_claim_count},
                      {"largest_component_claim_fraction",
                       round_digits(stats.largest_component_claim_fraction, 1000.0)},
                      {"mean_annotations_per_claim",
                       round_digits(stats.mean_annotations_per_claim, 100.0)}};
}

ordered_json merge_json(const aida::MergeReport& report) {
  return ordered_json{{"components_before", report.components_before},
                      {"components_after", report.components_after},
                      {"merged_fraction", round_digits(report.merged_fraction, 1000.0)}};
}

// ---- validate ----------------------------------------------------------

struct ValidateOptions {
  std::string corpus;
  std::string lexicon;
  std::string format = "text";
};

int run_validate(const ValidateOptions& opt) {
  const aida::IngestResult ingest = aida::ingest_corpus_file(opt.corpus);
  const aida::Lexicon lexicon =
      opt.lexicon.empty() ? aida::default_lexicon() : aida::load_lexicon(opt.lexicon);

  std::size_t pass = 0, warn = 0, fail = 0;
  std::vector<std::pair<aida::ClaimId, aida::ValidationReport>> reports;
  reports.reserve(ingest.claim_order.size());
  for (const auto& id : ingest.claim_order) {
    reports.emplace_back(id, aida::validate(ingest.corpus.claims.at(id).text, lexicon));
    switch (reports.back().second.verdict) {
      case aida::Verdict::PASS: ++pass; break;
      case aida::Verdict::PASS_WITH_WARNINGS: ++warn; break;
      case aida::Verdict::FAIL: ++fail; break;
    }
  }

  if (opt.format == "json") {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["reports"] = ordered_json::array();
    for (const auto& [id, report] : reports) {
      ordered_json findings = ordered_json::array();
      for (const auto& f : report.findings)
        findings.push_back(ordered_json{{"dimension", aida::to_string(f.dimension)},
                                        {"severity", aida::to_string(f.severity)},
                                        {"rule_id", f.rule_id},
                                        {"start", f.start},
                                        {"end", f.end},
                                        {"matched", f.matched},
                                        {"message", f.message}});
      doc["reports"].push_back(ordered_json{{"claim_id", id},
                                            {"text", report.text},
                                            {"verdict", aida::to_string(report.verdict)},
                                            {"findings", std::move(findings)}});
    }
    doc["summary"] = ordered_json{{"pass", pass}, {"warn", warn}, {"fail", fail}};
    std::cout << doc.dump(2) << '\n';
  } else {
    for (const auto& [id, report] : reports) {
      std::cout << aida::to_string(report.verdict) << ' ' << id << ' ' << report.text << '\n';
      for (const auto& f : report.findings)
        std::cout << "  " << aida::to_string(f.dimension) << ' ' << aida::to_string(f.severity)
                  << ' ' << f.rule_id << " [" << f.start << ',' << f.end << "): " << f.message
                  << '\n';
    }
    std::cout << "summary: " << pass << " pass, " << warn << " warn, " << fail << " fail\n";
  }
  return fail > 0 ? 1 : 0;
}

// ---- annotate ----------------------------------------------------------

struct AnnotateOptions {
  std::string corpus;
  std::string backend = "http";
  std::string endpoint;
  std::string gazetteer;
  double confidence = 0.5;
  std::string out;
};

int run_annotate(const AnnotateOptions& opt) {
  const aida::IngestResult ingest = aida::ingest_corpus_file(opt.corpus);
  std::vector<aida::Claim> claims;
  claims.reserve(ingest.claim_order.size());
  for (const auto& id : ingest.claim_order) claims.push_back(ingest.corpus.claims.at(id));

  aida::AnnotatorConfig config;
  config.endpoint_url = opt.endpoint;
  config.confidence_threshold = opt.confidence;

  std::vector<aida::Annotation> annotations;
  if (opt.backend == "gazetteer") {
    if (opt.gazetteer.empty())
      throw aida::FormatError("--gazetteer is required with the gazetteer backend");
    const aida::GazetteerAnnotator backend(aida::load_gazetteer(opt.gazetteer));
    annotations = aida::annotate(claims, config, backend);
  } else {
    if (opt.endpoint.empty())
      throw aida::FormatError("an endpoint is required (--endpoint or AIDA_ENDPOINT)");
    const aida::SpotlightAnnotator backend(config);
    annotations = aida::annotate(claims, config, backend);
  }

  aida::write_annotations_file(opt.out, annotations);
  const double mean = claims.empty()
                          ? 0.0
                          : static_cast<double>(annotations.size()) /
                                static_cast<double>(claims.size());
  char line[160];
  std::snprintf(line, sizeof line, "kept %zu annotations over %zu claims, mean %.2f per claim\n",
                annotations.size(), claims.size(), mean);
  std::cout << line;
  return 0;
}

// ---- stats -------------------------------------------------------------

struct StatsOptions {
  std::string corpus;
  std::string graph_json;
  std::string annotations;
  std::string layer = "base";
  bool compare_layers = false;
};

int run_stats(const StatsOptions& opt) {
  std::vector<aida::Annotation> annotations;
  const bool have_annotations = !opt.annotations.empty();
  if (have_annotations) annotations = aida::read_annotations_file(opt.annotations);

  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;

  if (!opt.graph_json.empty()) {
    if (!opt.corpus.empty())
      throw aida::FormatError("give either a corpus file or --graph-json, not both");
    const aida::Graph graph = aida::import_graph_json(read_file(opt.graph_json));
    const aida::Partition partition = aida::connected_components(graph);
    doc["stats"] = stats_json(aida::network_stats(graph, partition, annotations));
    std::cout << doc.dump(2) << '\n';
    return 0;
  }

  if (opt.corpus.empty()) throw aida::FormatError("a corpus file or --graph-json is required");
  const aida::Corpus corpus = aida::ingest_corpus_file(opt.corpus).corpus;

  if (opt.compare_layers) {
    if (!have_annotations)
      throw aida::FormatError("--annotations is required for the linked layer");
    aida::Partition partitions[3];
    doc["layers"] = ordered_json::object();
    for (const aida::Layer layer : {aida::Layer::BASE, aida::Layer::CURATED, aida::Layer::LINKED}) {
      const aida::Graph graph = aida::build_graph(corpus, annotations, layer);
      auto& partition = partitions[static_cast<int>(layer)];
      partition = aida::connected_components(graph);
      doc["layers"][aida::to_string(layer)] =
          stats_json(aida::network_stats(graph, partition, annotations));
    }
    doc["merges"] = ordered_json{
        {"base_to_curated", merge_json(aida::component_merge_report(partitions[0], partitions[1]))},
        {"curated_to_linked",
         merge_json(aida::component_merge_report(partitions[1], partitions[2]))},
        {"base_to_linked",
         merge_json(aida::component_merge_report(partitions[0], partitions[2]))}};
  } else {
    const aida::Layer layer = aida::parse_layer(opt.layer);
    if (layer == aida::Layer::LINKED && !have_annotations)
      throw aida::FormatError("--annotations is required for the linked layer");
    const aida::Graph graph = aida::build_graph(corpus, annotations, layer);
    const aida::Partition partition = aida::connected_components(graph);
    doc["layer"] = opt.layer;
    doc["stats"] = stats_json(aida::network_stats(graph, partition, annotations));
  }
  std::cout << doc.dump(2) << '\n';
  return 0;
}

// ---- export ------------------------------------------------------------

struct ExportOptions {
  std::string corpus;
  std::string annotations;
  std::string layer = "base";
  std::string format;
  std::string out;
  std::string timestamp;
  std::string base_namespace;
  bool per_claim = false;
};

int run_export(const ExportOptions& opt) {
  const aida::Corpus corpus = aida::ingest_corpus_file(opt.corpus).corpus;
  std::vector<aida::Annotation> annotations;
  if (!opt.annotations.empty()) annotations = aida::read_annotations_file(opt.annotations);

  if (opt.format == "nanopub-trig") {
    aida::NanopubOptions options;
    if (!opt.base_namespace.empty()) options.base_namespace = opt.base_namespace;
    options.timestamp = opt.timestamp.empty() ? utc_now() : opt.timestamp;

    if (opt.per_claim) {
      if (opt.out.empty()) throw aida::FormatError("--per-claim requires --out <directory>");
      std::filesystem::create_directories(opt.out);
      for (const auto& [id, claim] : corpus.claims) {
        const aida::NanopubBundle bundle = aida::export_nanopub(id, corpus, annotations, options);
        write_output((std::filesystem::path(opt.out) / (id + ".trig")).string(),
                     aida::serialize_trig({bundle}));
      }
      return 0;
    }
    std::vector<aida::NanopubBundle> bundles;
    bundles.reserve(corpus.claims.size());
    for (const auto& [id, claim] : corpus.claims)
      bundles.push_back(aida::export_nanopub(id, corpus, annotations, options));
    write_output(opt.out, aida::serialize_trig(bundles));
    return 0;
  }

  if (opt.per_claim) throw aida::FormatError("--per-claim only applies to nanopub-trig");
  const aida::Layer layer = aida::parse_layer(opt.layer);
  if (layer == aida::Layer::LINKED && opt.annotations.empty())
    throw aida::FormatError("--annotations is required for the linked layer");
  const aida::Graph graph = aida::build_graph(corpus, annotations, layer);
  const aida::GraphFormat format =
      opt.format == "edge-tsv" ? aida::GraphFormat::EDGE_TSV : aida::GraphFormat::GRAPH_JSON;
  write_output(opt.out, aida::export_graph(graph, format));
  return 0;
}

// ---- sample ------------------------------------------------------------

struct SampleOptions {
  std::string annotations;
  double fraction = 0.0;
  std::uint64_t seed = 42;
};

int run_sample(const SampleOptions& opt) {
  const auto annotations = aida::read_annotations_file(opt.annotations);
  const auto sampled = aida::sample_annotations(annotations, opt.fraction, opt.seed);
  aida::write_annotations(std::cout, sampled);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validate, link, analyze and export networks of scientific claims"};
  app.set_version_flag("--version", aida::kVersion);
  app.require_subcommand(1);

  ValidateOptions validate_opt;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check each claim against the four sentence constraints");
  validate_cmd->add_option("corpus", validate_opt.corpus, "Corpus file (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  validate_cmd->add_option("--lexicon", validate_opt.lexicon, "Lexicon TSV replacing the built-in")
      ->check(CLI::ExistingFile);
  validate_cmd->add_option("--format", validate_opt.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));

  AnnotateOptions annotate_opt;
  CLI::App* annotate_cmd =
      app.add_subcommand("annotate", "Link claim texts to entity IRIs and write annotations");
  annotate_cmd->add_option("corpus", annotate_opt.corpus, "Corpus file (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  annotate_cmd->add_option("--backend", annotate_opt.backend, "Annotation backend")
      ->check(CLI::IsMember({"http", "gazetteer"}));
  annotate_cmd->add_option("--endpoint", annotate_opt.endpoint, "Annotation service URL")
      ->envname("AIDA_ENDPOINT");
  annotate_cmd->add_option("--gazetteer", annotate_opt.gazetteer, "Gazetteer TSV file")
      ->check(CLI::ExistingFile);
  annotate_cmd
      ->add_option("--confidence", annotate_opt.confidence, "Confidence threshold (default 0.5)")
      ->check(CLI::Range(0.0, 1.0));
  annotate_cmd->add_option("--out", annotate_opt.out, "Annotation output file (JSON Lines)")
      ->required();

  StatsOptions stats_opt;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Report network statistics for a corpus or exported graph");
  stats_cmd->add_option("corpus", stats_opt.corpus, "Corpus file (JSON Lines)")
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--graph-json", stats_opt.graph_json, "Previously exported graph JSON")
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--annotations", stats_opt.annotations, "Annotation file (JSON Lines)")
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--layer", stats_opt.layer, "Graph layer")
      ->check(CLI::IsMember({"base", "curated", "linked"}));
  stats_cmd->add_flag("--compare-layers", stats_opt.compare_layers,
                      "Report all three layers plus merge reports");

  ExportOptions export_opt;
  CLI::App* export_cmd = app.add_subcommand("export", "Write the graph or nanopublication form");
  export_cmd->add_option("corpus", export_opt.corpus, "Corpus file (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--annotations", export_opt.annotations, "Annotation file (JSON Lines)")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--layer", export_opt.layer, "Graph layer")
      ->check(CLI::IsMember({"base", "curated", "linked"}));
  export_cmd->add_option("--format", export_opt.format, "Output format")
      ->required()
      ->check(CLI::IsMember({"edge-tsv", "graph-json", "nanopub-trig"}));
  export_cmd->add_option("--out", export_opt.out, "Output file (stdout when omitted)");
  export_cmd->add_option("--timestamp", export_opt.timestamp,
                         "Pinned creation timestamp for nanopublications");
  export_cmd->add_option("--namespace", export_opt.base_namespace,
                         "Claim IRI namespace for nanopublications");
  export_cmd->add_flag("--per-claim", export_opt.per_claim,
                       "Write one .trig file per claim into --out directory");

  SampleOptions sample_opt;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "Print a deterministic random sample of annotations");
  sample_cmd->add_option("--annotations", sample_opt.annotations, "Annotation file (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  sample_cmd->add_option("--fraction", sample_opt.fraction, "Sample fraction in (0, 1]")
      ->required();
  sample_cmd->add_option("--seed", sample_opt.seed, "Random seed (default 42)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(validate_opt);
    if (annotate_cmd->parsed()) return run_annotate(annotate_opt);
    if (stats_cmd->parsed()) return run_stats(stats_opt);
    if (export_cmd->parsed()) return run_export(export_opt);
    if (sample_cmd->parsed()) return run_sample(sample_opt);
  } catch (const aida::ServiceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
