// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit when
// any criterion fails or overruns its runtime budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aida/core.hpp"
#include "aida/graph.hpp"
#include "aida/linker.hpp"
#include "aida/nanopub.hpp"
#include "aida/validate.hpp"
#include "support/study_fixture.hpp"
#include "support/reachability_oracle.hpp"
#include "support/trig_reader.hpp"

using namespace aida;

namespace {

struct CheckList {
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

std::string read_golden(const char* name) {
  std::ifstream in(std::string(AIDA_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Claim make_claim(const std::string& raw) {
  const std::string norm = normalize_text(raw);
  return Claim{claim_id(norm), norm, {raw}};
}

// ---- 1: validator sanity -------------------------------------------------

void check_validator_sanity(CheckList& c) {
  const Lexicon lexicon = default_lexicon();
  const char* good[] = {
      "A combination of system and searcher biases lead search engine users to settle on the "
      "incorrect answer to yes/no-questions around half of the time.",
      "Teenagers reply on average faster to emails than adults.",
      "Deep learning is a powerful and accurate method for automatic speech recognition.",
  };
  for (const char* sentence : good) {
    const ValidationReport report = validate(sentence, lexicon);
    c.expect(report.verdict == Verdict::PASS && report.findings.empty(),
             std::string("reference sentence should pass cleanly: ") + sentence);
  }

  const std::pair<const char*, Dimension> bad[] = {
      {"Aspirin reduces fever. It also reduces pain.", Dimension::ATOMIC},
      {"We observed this effect in the population.", Dimension::INDEPENDENT},
      {"Is deep learning accurate?", Dimension::DECLARATIVE},
      {"Aspirin probably reduces fever.", Dimension::ABSOLUTE},
  };
  for (const auto& [sentence, dimension] : bad) {
    const ValidationReport report = validate(sentence, lexicon);
    c.expect(report.verdict == Verdict::FAIL,
             std::string("violation should fail: ") + sentence);
    const bool in_dimension =
        std::any_of(report.findings.begin(), report.findings.end(), [&](const Finding& f) {
          return f.dimension == dimension && f.severity == Severity::ERROR;
        });
    c.expect(in_dimension, std::string("expected an error finding in ") + to_string(dimension) +
                               " for: " + sentence);
  }
}

// ---- 2: dedup arithmetic ---------------------------------------------------

void check_dedup_arithmetic(CheckList& c) {
  const testsupport::StudyFixture fx = testsupport::make_study_fixture();
  c.expect(fx.records.size() == 650,
           "fixture should hold 650 records, got " + std::to_string(fx.records.size()));
  c.expect(fx.records_read == 650,
           "ingest should read 650 records, got " + std::to_string(fx.records_read));
  c.expect(fx.corpus.claims.size() == 615,
           "650 records should collapse to 615 unique claims, got " +
               std::to_string(fx.corpus.claims.size()));
}

// ---- 3: component oracle ---------------------------------------------------

void check_component_oracle(CheckList& c) {
  std::mt19937 rng(424242);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<std::string> ids;
    ids.reserve(n);
    Graph g;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("n" + std::to_string(i));
      g.add_node(ids.back(), NodeKind::CLAIM, "");
    }
    std::vector<std::pair<std::string, std::string>> edges;
    const std::size_t edge_budget = rng() % (3 * n);
    for (std::size_t e = 0; e < edge_budget; ++e) {
      const std::string& a = ids[rng() % n];
      const std::string& b = ids[rng() % n];
      if (a == b) continue;
      g.add_edge(a, Relation::SAME_MEANING, b);
      edges.emplace_back(a, b);
    }
    if (connected_components(g).components != testsupport::brute_force_components(ids, edges)) {
      c.expect(false, "partition mismatch against the oracle in round " + std::to_string(round));
      return;
    }
  }
}

// ---- 4: fixture network statistics ----------------------------------------

void check_fixture_statistics(CheckList& c) {
  const testsupport::StudyFixture fx = testsupport::make_study_fixture();
  auto near = [](double value, double target) { return std::fabs(value - target) <= 0.0005; };

  const Graph base = build_graph(fx.corpus, fx.annotations, Layer::BASE);
  const Partition base_partition = connected_components(base);
  const NetworkStats base_stats = network_stats(base, base_partition, fx.annotations);
  c.expect(base_stats.component_count == 332,
           "base component count should be 332, got " +
               std::to_string(base_stats.component_count));
  c.expect(near(base_stats.largest_component_claim_fraction, 0.101),
           "base largest-component claim fraction should be 0.101 +- 0.0005, got " +
               std::to_string(base_stats.largest_component_claim_fraction));

  const Graph curated = build_graph(fx.corpus, fx.annotations, Layer::CURATED);
  const NetworkStats curated_stats =
      network_stats(curated, connected_components(curated), fx.annotations);
  c.expect(curated_stats.largest_component_claim_count == 149,
           "curated largest component should hold 149 claims, got " +
               std::to_string(curated_stats.largest_component_claim_count));
  c.expect(near(curated_stats.largest_component_claim_fraction, 0.242),
           "curated largest-component claim fraction should be 0.242 +- 0.0005, got " +
               std::to_string(curated_stats.largest_component_claim_fraction));

  const Graph linked = build_graph(fx.corpus, fx.annotations, Layer::LINKED);
  const Partition linked_partition = connected_components(linked);
  const NetworkStats linked_stats = network_stats(linked, linked_partition, fx.annotations);
  c.expect(linked_stats.entity_count == 711,
           "linked layer should hold 711 entity nodes, got " +
               std::to_string(linked_stats.entity_count));
  c.expect(linked_stats.component_count == 66,
           "linked component count should be 66, got " +
               std::to_string(linked_stats.component_count));
  c.expect(near(linked_stats.largest_component_claim_fraction, 0.481),
           "linked largest-component claim fraction should be 0.481 +- 0.0005, got " +
               std::to_string(linked_stats.largest_component_claim_fraction));

  const MergeReport merge = component_merge_report(base_partition, linked_partition);
  c.expect(near(merge.merged_fraction, 0.801),
           "merged fraction base->linked should be 0.801 +- 0.0005, got " +
               std::to_string(merge.merged_fraction));
}

// ---- 5: annotation volume arithmetic ---------------------------------------

void check_annotation_volume(CheckList& c) {
  const std::size_t kept = 1726;
  const std::size_t claims = 650;
  const double mean = static_cast<double>(kept) / static_cast<double>(claims);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", mean);
  c.expect(std::string(buf) == "2.66",
           std::string("1726 annotations over 650 claims should print as 2.66, got ") + buf);

  std::vector<Annotation> annotations;
  annotations.reserve(kept);
  for (std::size_t i = 0; i < kept; ++i)
    annotations.push_back(Annotation{"claim" + std::to_string(i % claims), "abcd", 0, 4,
                                     "http://example.org/e/" + std::to_string(i), 1.0});
  const auto sample = sample_annotations(annotations, 0.1, 42);
  c.expect(sample.size() == 173, "a 0.1 sample of 1726 should hold exactly 173 items, got " +
                                     std::to_string(sample.size()));
}

// ---- 6: wire format ----------------------------------------------------

class CannedAnnotator : public Annotator {
 public:
  explicit CannedAnnotator(std::string body) : body_(std::move(body)) {}
  std::vector<SpanCandidate> run(const std::string& text) const override {
    return parse_spotlight_response(body_, text);
  }
  std::string name() const override { return "canned"; }

 private:
  std::string body_;
};

void check_wire_format(CheckList& c) {
  const std::string text = "A placebo treatment reduces anxiety.";

  const char* normal_body = R"({"Resources": [
    {"@URI": "http://dbpedia.org/resource/Placebo", "@surfaceForm": "placebo treatment",
     "@offset": "2", "@similarityScore": "0.9"},
    {"@URI": "http://dbpedia.org/resource/Anxiety", "@surfaceForm": "anxiety",
     "@offset": "28", "@similarityScore": "0.5"},
    {"@URI": "http://dbpedia.org/resource/Reduction", "@surfaceForm": "reduces",
     "@offset": "20", "@similarityScore": "0.4"}
  ]})";
  const auto spans = parse_spotlight_response(normal_body, text);
  c.expect(spans.size() == 3, "normal response should parse into 3 candidates, got " +
                                  std::to_string(spans.size()));

  // A threshold of 0.5 keeps the 0.5-scored candidate: the cut is inclusive.
  const std::vector<Claim> claims{make_claim(text)};
  AnnotatorConfig config;
  config.confidence_threshold = 0.5;
  const auto kept = annotate(claims, config, CannedAnnotator(normal_body));
  c.expect(kept.size() == 2, "threshold 0.5 should keep the 0.9 and 0.5 candidates, got " +
                                 std::to_string(kept.size()));
  c.expect(std::any_of(kept.begin(), kept.end(),
                       [](const Annotation& a) { return a.confidence == 0.5; }),
           "the candidate scored exactly 0.5 should survive an inclusive threshold");

  c.expect(parse_spotlight_response(R"({"Resources": []})", text).empty(),
           "empty Resources should yield zero candidates");
  c.expect(parse_spotlight_response(R"({"@text": "x"})", text).empty(),
           "absent Resources should yield zero candidates");

  const char* corrupted_body = R"({"Resources": [
    {"@URI": "http://dbpedia.org/resource/Placebo", "@surfaceForm": "placebo",
     "@offset": "5", "@similarityScore": "0.9"}
  ]})";
  bool data_error = false;
  try {
    parse_spotlight_response(corrupted_body, text);
  } catch (const DataError& e) {
    data_error = std::string(e.what()).find("http://dbpedia.org/resource/Placebo") !=
                 std::string::npos;
  }
  c.expect(data_error, "a corrupted offset should raise a data error naming the resource");
}

// ---- 7: property suites --------------------------------------------------

void check_normalization_idempotence(CheckList& c, std::mt19937& rng) {
  const char* fragments[] = {"a",  "Bc", " ",  "  ", "\t", "\n",
                             "\xC2\xA0" /* no-break space */,
                             "e\xCC\x81" /* e + combining acute */,
                             "X.", "word", "10.5", "\r\n"};
  for (int round = 0; round < 150; ++round) {
    std::string raw;
    const int pieces = static_cast<int>(rng() % 20);
    for (int i = 0; i < pieces; ++i) raw += fragments[rng() % std::size(fragments)];
    const std::string once = normalize_text(raw);
    if (normalize_text(once) != once) {
      c.expect(false, "normalization should be idempotent, broke on round " +
                          std::to_string(round));
      return;
    }
  }
}

void check_order_invariance(CheckList& c, std::mt19937& rng) {
  std::vector<std::string> records{
      R"({"text": "Aspirin reduces fever.", "publications": ["10.77/a"], "entities": [{"uri": "http://x.org/gene/1", "kind": "GENE"}]})",
      R"({"text": "Analgesics reduce fever.", "publications": ["10.77/a", "10.77/b"]})",
      R"({"text": "Aspirin  reduces   fever.", "publications": ["10.77/c"]})",
      R"({"text": "Teenagers reply on average faster to emails than adults."})",
      R"({"text": "Aspirin reduces fever.", "relations": [{"type": "MORE_SPECIFIC_THAN", "target": "Analgesics reduce fever."}]})",
      R"({"text": "Mice respond to the treatment.", "entities": [{"uri": "http://x.org/mouse", "kind": "ORGANISM", "label": "Mouse"}]})",
      R"({"text": "Rats respond to the treatment.", "relations": [{"type": "SAME_MEANING", "target": "Mice respond to the treatment."}]})",
      R"({"text": "The treatment lowers blood pressure.", "relations": [{"type": "FOLLOWS_FROM", "target": "Aspirin reduces fever."}], "publications": ["10.77/b"]})",
      R"({"text": "Analgesics  reduce fever."})",
      R"({"text": "Deep learning is a powerful and accurate method for automatic speech recognition.", "entities": [{"uri": "http://x.org/dl", "kind": "DBPEDIA"}]})",
  };

  // Surface forms are recorded in input order by contract, so shuffling the
  // records may only permute each claim's raw_texts; everything else must be
  // identical. Canonicalize raw_texts before comparing.
  auto ingest_lines = [](const std::vector<std::string>& lines) {
    std::string joined;
    for (const auto& line : lines) joined += line + "\n";
    std::istringstream in(joined);
    Corpus corpus = ingest_corpus(in).corpus;
    for (auto& [id, claim] : corpus.claims)
      std::sort(claim.raw_texts.begin(), claim.raw_texts.end());
    return corpus;
  };
  const Corpus reference = ingest_lines(records);

  for (int round = 0; round < 120; ++round) {
    std::shuffle(records.begin(), records.end(), rng);
    if (!(ingest_lines(records) == reference)) {
      c.expect(false, "ingestion should be order-invariant, broke on round " +
                          std::to_string(round));
      return;
    }
  }
}

void check_layer_monotonicity(CheckList& c, std::mt19937& rng) {
  const char* kinds[] = {"GENE", "ORGANISM", "DBPEDIA", "OTHER"};
  for (int round = 0; round < 120; ++round) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::string lines;
    for (int i = 0; i < n; ++i) {
      std::string rec = R"({"text": "Synthetic claim number )" + std::to_string(i) +
                        R"( states an outcome.")";
      if (rng() % 2)
        rec += R"(, "publications": ["10.88/p)" + std::to_string(rng() % 4) + R"("])";
      if (rng() % 2)
        rec += R"(, "entities": [{"uri": "http://x.org/e)" + std::to_string(rng() % 6) +
               R"(", "kind": ")" + kinds[rng() % 4] + R"("}])";
      lines += rec + "}\n";
    }
    Corpus corpus;
    try {
      std::istringstream in(lines);
      corpus = ingest_corpus(in).corpus;
    } catch (const FormatError&) {
      // Conflicting random entity kinds across records: skip the round.
      continue;
    }

    std::vector<Annotation> annotations;
    for (const auto& [id, claim] : corpus.claims)
      if (rng() % 2)
        annotations.push_back(Annotation{id, claim.text.substr(0, 4), 0, 4,
                                         "http://x.org/a" + std::to_string(rng() % 5), 1.0});

    const Graph base = build_graph(corpus, annotations, Layer::BASE);
    const Graph curated = build_graph(corpus, annotations, Layer::CURATED);
    const Graph linked = build_graph(corpus, annotations, Layer::LINKED);
    const bool nodes_grow = base.node_count() <= curated.node_count() &&
                            curated.node_count() <= linked.node_count();
    const bool edges_grow =
        base.edge_count() <= curated.edge_count() && curated.edge_count() <= linked.edge_count();
    const bool claims_stable =
        base.count_kind(NodeKind::CLAIM) == curated.count_kind(NodeKind::CLAIM) &&
        curated.count_kind(NodeKind::CLAIM) == linked.count_kind(NodeKind::CLAIM);
    const std::size_t base_parts = connected_components(base).components.size();
    const std::size_t curated_parts = connected_components(curated).components.size();
    const std::size_t linked_parts = connected_components(linked).components.size();
    const bool parts_merge = base_parts >= curated_parts && curated_parts >= linked_parts;
    if (!(nodes_grow && edges_grow && claims_stable && parts_merge)) {
      c.expect(false, "layer monotonicity broke on round " + std::to_string(round));
      return;
    }
  }
}

void check_edge_insertion(CheckList& c, std::mt19937& rng) {
  for (int round = 0; round < 100; ++round) {
    Graph g;
    const std::size_t n = 2 + rng() % 25;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("n" + std::to_string(i));
      g.add_node(ids.back(), NodeKind::CLAIM, "");
    }
    std::size_t previous = connected_components(g).components.size();
    const std::size_t inserts = rng() % (2 * n);
    for (std::size_t e = 0; e < inserts; ++e) {
      const std::string& a = ids[rng() % n];
      const std::string& b = ids[rng() % n];
      if (a == b) continue;
      g.add_edge(a, Relation::FOLLOWS_FROM, b);
      const std::size_t current = connected_components(g).components.size();
      if (current > previous) {
        c.expect(false, "edge insertion increased the component count in round " +
                            std::to_string(round));
        return;
      }
      previous = current;
    }
  }
}

void check_filter_monotonicity(CheckList& c, std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; round < 150; ++round) {
    std::vector<Annotation> annotations;
    const int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i)
      annotations.push_back(
          Annotation{"c" + std::to_string(i), "abcd", 0, 4, "http://x.org/e", unit(rng)});
    double t1 = unit(rng);
    double t2 = unit(rng);
    if (t1 > t2) std::swap(t1, t2);
    const auto loose = filter_by_confidence(annotations, t1);
    const auto strict = filter_by_confidence(annotations, t2);
    if (strict.size() > loose.size()) {
      c.expect(false, "a higher threshold kept more annotations in round " +
                          std::to_string(round));
      return;
    }
    // Order is preserved, so the strict result must be a subsequence of the
    // loose one.
    std::size_t j = 0;
    for (const auto& a : strict) {
      while (j < loose.size() && !(loose[j] == a)) ++j;
      if (j == loose.size()) {
        c.expect(false, "strict filter output was not a subsequence in round " +
                            std::to_string(round));
        return;
      }
      ++j;
    }
  }
}

void check_span_agreement(CheckList& c, std::mt19937& rng) {
  const char* words[] = {"aspirin", "fever",   "gene",  "placebo", "therapy",
                         "cohort",  "outcome", "trial", "marker",  "mice"};
  Gazetteer gazetteer;
  for (const char* w : words)
    if (rng() % 2) gazetteer[w] = std::string("http://x.org/") + w;
  gazetteer["placebo therapy"] = "http://x.org/placebo-therapy";
  const GazetteerAnnotator backend(gazetteer);

  AnnotatorConfig config;
  for (int round = 0; round < 100; ++round) {
    std::vector<Claim> claims;
    std::map<ClaimId, std::string> text_of;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      std::string sentence;
      const int len = 3 + static_cast<int>(rng() % 8);
      for (int k = 0; k < len; ++k) {
        std::string w = words[rng() % std::size(words)];
        if (k == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
        sentence += w;
        sentence += k + 1 == len ? "." : " ";
      }
      sentence += " Variant " + std::to_string(round) + "-" + std::to_string(i) + ".";
      Claim claim = make_claim(sentence);
      text_of[claim.id] = claim.text;
      claims.push_back(std::move(claim));
    }
    for (const Annotation& a : annotate(claims, config, backend)) {
      const std::string& text = text_of.at(a.claim_id);
      const bool span_ok = a.start < a.end && a.end <= text.size() &&
                           text.substr(a.start, a.end - a.start) == a.surface_form;
      const bool confidence_ok = a.confidence >= 0.0 && a.confidence <= 1.0;
      if (!(span_ok && confidence_ok)) {
        c.expect(false, "annotation span or confidence broke on round " +
                            std::to_string(round));
        return;
      }
    }
  }
}

void check_properties(CheckList& c) {
  std::mt19937 rng(20240814);
  check_normalization_idempotence(c, rng);
  check_order_invariance(c, rng);
  check_layer_monotonicity(c, rng);
  check_edge_insertion(c, rng);
  check_filter_monotonicity(c, rng);
  check_span_agreement(c, rng);
}

// ---- 8: round trips -------------------------------------------------------

void check_round_trips(CheckList& c) {
  const testsupport::StudyFixture fx = testsupport::make_study_fixture();
  const Graph linked = build_graph(fx.corpus, fx.annotations, Layer::LINKED);
  c.expect(import_graph_json(export_graph(linked, GraphFormat::GRAPH_JSON)) == linked,
           "graph JSON should import back to an equal graph");

  std::istringstream in(
      R"({"text": "Aspirin reduces fever.", "publications": ["10.1234/example"], "relations": [{"type": "MORE_SPECIFIC_THAN", "target": "Analgesics reduce fever."}], "entities": [{"uri": "http://dbpedia.org/resource/Aspirin", "kind": "DBPEDIA"}]})"
      "\n"
      R"({"text": "Analgesics reduce fever.", "publications": ["10.1234/other"]})"
      "\n"
      R"({"text": "A placebo treatment reduces anxiety."})"
      "\n");
  const Corpus corpus = ingest_corpus(in).corpus;
  NanopubOptions options;
  options.timestamp = "2024-01-01T00:00:00Z";

  std::vector<NanopubBundle> bundles;
  for (const auto& [id, claim] : corpus.claims)
    bundles.push_back(export_nanopub(id, corpus, {}, options));
  const testsupport::TrigDocument doc = testsupport::parse_trig(serialize_trig(bundles));
  c.expect(doc.graph_order.size() == 4 * corpus.claims.size(),
           "the TriG document should hold exactly 4 named graphs per claim, got " +
               std::to_string(doc.graph_order.size()));
  for (const auto& [id, claim] : corpus.claims)
    for (const char* role : {"#head", "#assertion", "#provenance", "#pubinfo"}) {
      const std::string graph_iri = "http://example.org/aida/claim/" + id + role;
      c.expect(doc.graphs.count(graph_iri) == 1, "missing named graph " + graph_iri);
    }

  const std::string single =
      serialize_trig({export_nanopub("faa81f740b497e74", corpus, {}, options)});
  c.expect(single == read_golden("minimal_nanopub.trig"),
           "pinned-timestamp TriG should match the golden file byte for byte");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<void(CheckList&)> fn;
  };
  const Criterion criteria[] = {
      {"validator-sanity", 1.0, check_validator_sanity},
      {"dedup-arithmetic", 1.0, check_dedup_arithmetic},
      {"component-oracle", 30.0, check_component_oracle},
      {"fixture-network-statistics", 5.0, check_fixture_statistics},
      {"annotation-volume-arithmetic", 1.0, check_annotation_volume},
      {"wire-format-conformance", 1.0, check_wire_format},
      {"property-suites", 60.0, check_properties},
      {"round-trips", 5.0, check_round_trips},
  };

  int failed = 0;
  for (const Criterion& criterion : criteria) {
    CheckList checks;
    const auto started = std::chrono::steady_clock::now();
    try {
      criterion.fn(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (elapsed > criterion.budget_seconds)
      checks.expect(false, "runtime " + std::to_string(elapsed) + " s exceeds the budget");

    const bool ok = checks.problems.empty();
    failed += ok ? 0 : 1;
    std::printf("%s %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", criterion.name, elapsed,
                criterion.budget_seconds);
    for (const auto& problem : checks.problems) std::printf("    - %s\n", problem.c_str());
  }
  return failed == 0 ? 0 : 1;
}
