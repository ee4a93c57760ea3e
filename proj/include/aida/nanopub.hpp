#pragma once

// Packages one claim with its entity links and provenance as four named RDF
// graphs (head, assertion, provenance, pubinfo) and serializes bundles as
// TriG. Deterministic output when the timestamp is pinned.

#include <string>
#include <string_view>
#include <vector>

#include "aida/core.hpp"
#include "aida/errors.hpp"
#include "aida/linker.hpp"
#include "aida/version.hpp"

namespace aida {

namespace vocab {

inline constexpr std::string_view kAida = "http://example.org/aida/vocab#";
inline constexpr std::string_view kNanopub = "http://www.nanopub.org/nschema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

inline constexpr std::string_view kStatementText = "http://example.org/aida/vocab#statement-text";
inline constexpr std::string_view kMentions = "http://example.org/aida/vocab#mentions";
inline constexpr std::string_view kMoreSpecificThan =
    "http://example.org/aida/vocab#more-specific-than";
inline constexpr std::string_view kSameMeaning = "http://example.org/aida/vocab#same-meaning";
inline constexpr std::string_view kFollowsFrom = "http://example.org/aida/vocab#follows-from";
inline constexpr std::string_view kAttributedTo = "http://example.org/aida/vocab#attributed-to";
inline constexpr std::string_view kCreated = "http://example.org/aida/vocab#created";
inline constexpr std::string_view kGeneratedBy = "http://example.org/aida/vocab#generated-by";

inline constexpr std::string_view kHasAssertion =
    "http://www.nanopub.org/nschema#hasAssertion";
inline constexpr std::string_view kHasProvenance =
    "http://www.nanopub.org/nschema#hasProvenance";
inline constexpr std::string_view kHasPublicationInfo =
    "http://www.nanopub.org/nschema#hasPublicationInfo";
inline constexpr std::string_view kNanopublication =
    "http://www.nanopub.org/nschema#Nanopublication";
inline constexpr std::string_view kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";

}  // namespace vocab

struct RdfTerm {
  enum class Kind { IRI, LITERAL, TYPED_LITERAL };

  Kind kind = Kind::IRI;
  std::string value;     // IRI or literal lexical form
  std::string datatype;  // full IRI, TYPED_LITERAL only

  static RdfTerm iri(std::string v) { return {Kind::IRI, std::move(v), {}}; }
  static RdfTerm literal(std::string v) { return {Kind::LITERAL, std::move(v), {}}; }
  static RdfTerm typed_literal(std::string v, std::string dt) {
    return {Kind::TYPED_LITERAL, std::move(v), std::move(dt)};
  }

  auto operator<=>(const RdfTerm&) const = default;
};

struct RdfTriple {
  std::string subject;    // IRI
  std::string predicate;  // IRI
  RdfTerm object;

  auto operator<=>(const RdfTriple&) const = default;
};

struct NanopubBundle {
  std::string nanopub_iri;  // also the claim IRI; graph IRIs append #head etc.
  std::vector<RdfTriple> head;
  std::vector<RdfTriple> assertion;
  std::vector<RdfTriple> provenance;
  std::vector<RdfTriple> pubinfo;

  bool operator==(const NanopubBundle&) const = default;
};

struct NanopubOptions {
  std::string base_namespace = "http://example.org/aida/claim/";
  std::string publication_namespace = "http://example.org/aida/publication/";
  std::string generator = kGeneratorName;
  std::string timestamp;  // xsd:dateTime lexical form; empty means now (UTC)
};

std::string claim_iri(const ClaimId& id, const NanopubOptions& options);

// Publication ids that are absolute IRIs pass through; bare DOIs gain the
// https://doi.org/ prefix; anything else is percent-encoded into the
// publication namespace.
std::string publication_iri(const std::string& publication_id, const NanopubOptions& options);

// Builds the four graphs for one claim. Annotations may cover the whole
// corpus; only this claim's are used. Unknown claim id -> FormatError.
NanopubBundle export_nanopub(const ClaimId& id, const Corpus& corpus,
                             const std::vector<Annotation>& annotations,
                             const NanopubOptions& options = {});

// Shared prefix block, then per bundle (sorted by nanopub IRI) the four
// graph blocks in head/assertion/provenance/pubinfo order, triples sorted by
// subject, predicate, object.
std::string serialize_trig(const std::vector<NanopubBundle>& bundles);

}  // namespace aida
