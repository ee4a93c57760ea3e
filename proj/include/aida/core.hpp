#pragma once

// Domain types, sentence normalization, content-addressed claim identity,
// and corpus ingestion with deduplication.

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aida/errors.hpp"

namespace aida {

// 16 lowercase hex chars: truncated SHA-256 of the normalized text.
using ClaimId = std::string;

struct Claim {
  ClaimId id;
  std::string text;  // normalized sentence
  std::vector<std::string> raw_texts;  // original surface forms, input order, duplicates retained

  bool operator==(const Claim&) const = default;
};

struct Publication {
  std::string id;  // DOI or URL; non-empty, no whitespace
  std::string label;

  bool operator==(const Publication&) const = default;
};

enum class EntityKind { DBPEDIA, GENE, ORGANISM, OTHER };

struct DomainEntity {
  std::string uri;  // absolute IRI
  std::string label;
  EntityKind kind = EntityKind::OTHER;

  bool operator==(const DomainEntity&) const = default;
};

enum class Relation {
  HAS_CLAIM,           // publication -> claim
  MORE_SPECIFIC_THAN,  // claim -> claim, stored specific -> general only
  SAME_MEANING,        // claim -> claim
  FOLLOWS_FROM,        // claim -> claim
  MENTIONS,            // claim -> entity
};

const char* to_string(Relation r);
const char* to_string(EntityKind k);
Relation parse_relation(std::string_view s);      // throws FormatError on unknown name
EntityKind parse_entity_kind(std::string_view s); // throws FormatError on unknown name

struct CorpusEdge {
  std::string source;
  Relation relation;
  std::string target;

  auto operator<=>(const CorpusEdge&) const = default;
};

struct Corpus {
  std::map<ClaimId, Claim> claims;
  std::map<std::string, Publication> publications;
  std::map<std::string, DomainEntity> entities;  // keyed by URI
  std::set<CorpusEdge> edges;

  bool operator==(const Corpus&) const = default;
};

// Trims, collapses every internal whitespace run (Unicode White_Space) to a
// single space, and normalizes to NFC. Case and punctuation are preserved.
// Idempotent; empty input yields the empty string.
std::string normalize_text(std::string_view raw);

// Lowercase-hex SHA-256 of the UTF-8 bytes, truncated to 16 hex chars.
// Rejects empty input.
ClaimId claim_id(std::string_view normalized_text);

// True if s is 16 lowercase-hex characters. Relation targets of this shape
// are resolved as claim ids; anything else is resolved as claim text.
bool looks_like_claim_id(std::string_view s);

// True if s has an IRI scheme prefix ("scheme:").
bool is_absolute_iri(std::string_view s);

struct IngestResult {
  Corpus corpus;
  std::size_t records_read = 0;
  std::vector<ClaimId> claim_order;  // first-appearance order, for reporting
};

// Reads UTF-8 JSON Lines records:
//   {"text": "...", "publications": [...], "relations": [{"type","target"}], "entities": [{"uri","kind"}]}
// Claims are deduplicated by claim_id after normalization; links of merged
// duplicates are unioned and duplicate edges dropped. Errors carry the
// 1-based line number of the offending record.
IngestResult ingest_corpus(std::istream& in);
IngestResult ingest_corpus_file(const std::filesystem::path& path);

// Deterministic JSON Lines form of a corpus: one record per raw surface
// form, claims in id order, the first record of a claim carrying its links.
// Re-ingesting the output reproduces an equal corpus.
std::string serialize_corpus(const Corpus& corpus);

}  // namespace aida
