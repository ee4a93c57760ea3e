#pragma once

// Pluggable entity annotation: an HTTP client for a Spotlight-style
// annotation API and a deterministic offline gazetteer, plus confidence
// filtering and evaluation sampling.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aida/core.hpp"
#include "aida/errors.hpp"

namespace aida {

struct Annotation {
  ClaimId claim_id;
  std::string surface_form;  // equals claim text[start..end)
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity_uri;  // absolute IRI
  double confidence = 1.0;  // in [0, 1]

  bool operator==(const Annotation&) const = default;
};

struct AnnotatorConfig {
  std::string endpoint_url;  // HTTP backend only
  double confidence_threshold = 0.5;
  std::chrono::milliseconds timeout{30000};
  int max_parallel_requests = 4;
  int retries = 2;  // additional attempts after the first
};

// One backend hit: a span into the submitted text plus entity URI and score.
struct SpanCandidate {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string uri;
  double confidence = 1.0;

  bool operator==(const SpanCandidate&) const = default;
};

// Backend contract: text in, span/URI/confidence list out, spans valid for
// the given text. Implementations must be callable from multiple threads.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual std::vector<SpanCandidate> run(const std::string& text) const = 0;
  virtual std::string name() const = 0;
};

// Lowercase whitespace-normalized phrase -> entity IRI.
using Gazetteer = std::map<std::string, std::string>;

// Case-insensitive, word-boundary, longest-match-first, left-to-right,
// non-overlapping matching; every match gets confidence 1.0.
std::vector<SpanCandidate> gazetteer_annotate(std::string_view text, const Gazetteer& gazetteer);

// TSV file: `<phrase>\t<iri>` per line; '#' starts a comment line.
Gazetteer load_gazetteer(const std::filesystem::path& path);
Gazetteer parse_gazetteer(std::istream& in);

class GazetteerAnnotator : public Annotator {
 public:
  explicit GazetteerAnnotator(Gazetteer gazetteer) : gazetteer_(std::move(gazetteer)) {}
  std::vector<SpanCandidate> run(const std::string& text) const override {
    return gazetteer_annotate(text, gazetteer_);
  }
  std::string name() const override { return "gazetteer"; }

 private:
  Gazetteer gazetteer_;
};

// One POST per text: `text=<urlencoded>&confidence=<threshold>` with
// `Accept: application/json`. Offsets are taken verbatim from the response
// and verified against the submitted text.
std::vector<SpanCandidate> spotlight_annotate(const std::string& text,
                                              const AnnotatorConfig& config);

// Parses a Spotlight-style JSON body (`Resources` array of `@URI`,
// `@surfaceForm`, `@offset`, `@similarityScore`) against the submitted text.
// Absent `Resources` means zero annotations. Exposed for wire-format tests.
std::vector<SpanCandidate> parse_spotlight_response(std::string_view body,
                                                    std::string_view submitted_text);

class SpotlightAnnotator : public Annotator {
 public:
  explicit SpotlightAnnotator(AnnotatorConfig config) : config_(std::move(config)) {}
  std::vector<SpanCandidate> run(const std::string& text) const override {
    return spotlight_annotate(text, config_);
  }
  std::string name() const override { return "http"; }

 private:
  AnnotatorConfig config_;
};

// Runs the backend over every claim (up to config.max_parallel_requests
// concurrently), drops candidates below confidence_threshold, resolves
// per-claim overlaps (higher confidence wins, then longer span, then lower
// start) and returns annotations in input-claim order. A backend failure for
// any claim aborts the whole batch with an AnnotateError naming the claim.
std::vector<Annotation> annotate(const std::vector<Claim>& claims, const AnnotatorConfig& config,
                                 const Annotator& backend);

// Keeps annotations with confidence >= threshold, order preserved.
std::vector<Annotation> filter_by_confidence(const std::vector<Annotation>& annotations,
                                             double threshold);

// Uniform sample without replacement of ceil(fraction * count) annotations,
// deterministic for a given seed, sorted by (claim_id, start).
std::vector<Annotation> sample_annotations(const std::vector<Annotation>& annotations,
                                           double fraction, std::uint64_t seed);

// JSON Lines with the Annotation fields, one annotation per line.
void write_annotations(std::ostream& out, const std::vector<Annotation>& annotations);
void write_annotations_file(const std::filesystem::path& path,
                            const std::vector<Annotation>& annotations);
std::vector<Annotation> read_annotations(std::istream& in);
std::vector<Annotation> read_annotations_file(const std::filesystem::path& path);

}  // namespace aida
