#include "aida/core.hpp"

#include <openssl/evp.h>
#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "json.hpp"

namespace aida {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::HAS_CLAIM: return "HAS_CLAIM";
    case Relation::MORE_SPECIFIC_THAN: return "MORE_SPECIFIC_THAN";
    case Relation::SAME_MEANING: return "SAME_MEANING";
    case Relation::FOLLOWS_FROM: return "FOLLOWS_FROM";
    case Relation::MENTIONS: return "MENTIONS";
  }
  return "?";
}

const char* to_string(EntityKind k) {
  switch (k) {
    case EntityKind::DBPEDIA: return "DBPEDIA";
    case EntityKind::GENE: return "GENE";
    case EntityKind::ORGANISM: return "ORGANISM";
    case EntityKind::OTHER: return "OTHER";
  }
  return "?";
}

Relation parse_relation(std::string_view s) {
  if (s == "HAS_CLAIM") return Relation::HAS_CLAIM;
  if (s == "MORE_SPECIFIC_THAN") return Relation::MORE_SPECIFIC_THAN;
  if (s == "SAME_MEANING") return Relation::SAME_MEANING;
  if (s == "FOLLOWS_FROM") return Relation::FOLLOWS_FROM;
  if (s == "MENTIONS") return Relation::MENTIONS;
  throw FormatError("unknown relation name '" + std::string(s) + "'");
}

EntityKind parse_entity_kind(std::string_view s) {
  if (s == "DBPEDIA") return EntityKind::DBPEDIA;
  if (s == "GENE") return EntityKind::GENE;
  if (s == "ORGANISM") return EntityKind::ORGANISM;
  if (s == "OTHER") return EntityKind::OTHER;
  throw FormatError("unknown entity kind '" + std::string(s) + "'");
}

std::string normalize_text(std::string_view raw) {
  if (raw.empty()) return {};

  UErrorCode ec = U_ZERO_ERROR;

  // UTF-8 -> UTF-16, substituting U+FFFD for ill-formed sequences.
  std::vector<UChar> utf16(raw.size() + 1);
  int32_t ulen = 0;
  u_strFromUTF8WithSub(utf16.data(), static_cast<int32_t>(utf16.size()), &ulen, raw.data(),
                       static_cast<int32_t>(raw.size()), 0xFFFD, nullptr, &ec);
  if (U_FAILURE(ec)) throw Error("text decoding failed");

  // Collapse White_Space runs to one U+0020, trim the ends.
  std::vector<UChar> collapsed;
  collapsed.reserve(static_cast<std::size_t>(ulen));
  bool pending_space = false;
  int32_t i = 0;
  while (i < ulen) {
    UChar32 cp;
    U16_NEXT(utf16.data(), i, ulen, cp);
    if (u_isUWhiteSpace(cp)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) {
      collapsed.push_back(0x20);
      pending_space = false;
    }
    UChar units[2];
    int32_t n = 0;
    UBool err = false;
    U16_APPEND(units, n, 2, cp, err);
    if (err) throw Error("text decoding failed");
    collapsed.insert(collapsed.end(), units, units + n);
  }
  if (collapsed.empty()) return {};

  const UNormalizer2* nfc = unorm2_getNFCInstance(&ec);
  if (U_FAILURE(ec)) throw Error("NFC normalizer unavailable");

  std::vector<UChar> nfc_out(collapsed.size() * 2 + 16);
  int32_t nlen = unorm2_normalize(nfc, collapsed.data(), static_cast<int32_t>(collapsed.size()),
                                  nfc_out.data(), static_cast<int32_t>(nfc_out.size()), &ec);
  if (ec == U_BUFFER_OVERFLOW_ERROR) {
    ec = U_ZERO_ERROR;
    nfc_out.resize(static_cast<std::size_t>(nlen) + 1);
    nlen = unorm2_normalize(nfc, collapsed.data(), static_cast<int32_t>(collapsed.size()),
                            nfc_out.data(), static_cast<int32_t>(nfc_out.size()), &ec);
  }
  if (U_FAILURE(ec)) throw Error("NFC normalization failed");

  std::string out(static_cast<std::size_t>(nlen) * 4 + 1, '\0');
  int32_t olen = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &olen, nfc_out.data(), nlen, &ec);
  if (U_FAILURE(ec)) throw Error("text encoding failed");
  out.resize(static_cast<std::size_t>(olen));
  return out;
}

ClaimId claim_id(std::string_view normalized_text) {
  if (normalized_text.empty()) throw FormatError("claim_id: empty text");
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (EVP_Digest(normalized_text.data(), normalized_text.size(), digest, &digest_len,
                 EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string id;
  id.reserve(16);
  for (unsigned int i = 0; i < 8; ++i) {  // 8 bytes = 16 hex chars
    id.push_back(hex[digest[i] >> 4]);
    id.push_back(hex[digest[i] & 0xF]);
  }
  return id;
}

bool looks_like_claim_id(std::string_view s) {
  if (s.size() != 16) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  });
}

bool is_absolute_iri(std::string_view s) {
  if (s.empty()) return false;
  const char first = s.front();
  if (!((first >= 'A' && first <= 'Z') || (first >= 'a' && first <= 'z'))) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char c = s[i];
    if (c == ':') return i + 1 < s.size();
    const bool scheme_char = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                             (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
    if (!scheme_char) return false;
  }
  return false;
}

namespace {

using nlohmann::json;

bool contains_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

struct PendingRelation {
  std::size_t line;
  ClaimId source;
  Relation relation;
  std::string target;  // claim id or exact claim text
};

const json* get_array(const json& rec, const char* field, std::size_t line) {
  auto it = rec.find(field);
  if (it == rec.end()) return nullptr;
  if (!it->is_array()) throw FormatError(line, std::string("'") + field + "' must be an array");
  return &*it;
}

}  // namespace

IngestResult ingest_corpus(std::istream& in) {
  IngestResult result;
  Corpus& corpus = result.corpus;
  std::vector<PendingRelation> pending;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++result.records_read;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw FormatError(line_no, "record must be a JSON object");

    auto text_it = rec.find("text");
    if (text_it == rec.end() || !text_it->is_string())
      throw FormatError(line_no, "missing required string field 'text'");
    const std::string raw = text_it->get<std::string>();
    const std::string text = normalize_text(raw);
    if (text.empty()) throw FormatError(line_no, "'text' is empty after normalization");

    const ClaimId id = claim_id(text);
    auto [claim_it, inserted] = corpus.claims.try_emplace(id, Claim{id, text, {}});
    if (!inserted && claim_it->second.text != text)
      throw FormatError(line_no, "claim id collision on '" + id + "'");
    claim_it->second.raw_texts.push_back(raw);
    if (inserted) result.claim_order.push_back(id);

    if (const json* pubs = get_array(rec, "publications", line_no)) {
      for (const auto& p : *pubs) {
        if (!p.is_string()) throw FormatError(line_no, "publication entries must be strings");
        const std::string pub_id = p.get<std::string>();
        if (pub_id.empty() || contains_whitespace(pub_id))
          throw FormatError(line_no, "publication id must be non-empty without whitespace");
        corpus.publications.try_emplace(pub_id, Publication{pub_id, ""});
        corpus.edges.insert({pub_id, Relation::HAS_CLAIM, id});
      }
    }

    if (const json* ents = get_array(rec, "entities", line_no)) {
      for (const auto& e : *ents) {
        if (!e.is_object() || !e.contains("uri") || !e["uri"].is_string() ||
            !e.contains("kind") || !e["kind"].is_string())
          throw FormatError(line_no, "entity entries must be objects with string 'uri' and 'kind'");
        const std::string uri = e["uri"].get<std::string>();
        if (!is_absolute_iri(uri))
          throw FormatError(line_no, "entity uri '" + uri + "' is not an absolute IRI");
        EntityKind kind;
        try {
          kind = parse_entity_kind(e["kind"].get<std::string>());
        } catch (const FormatError& err) {
          throw FormatError(line_no, err.what());
        }
        std::string label = e.value("label", std::string());
        auto [ent_it, ent_new] = corpus.entities.try_emplace(uri, DomainEntity{uri, label, kind});
        if (!ent_new && ent_it->second.kind != kind)
          throw FormatError(line_no, "conflicting kind for entity '" + uri + "'");
        if (!ent_new && ent_it->second.label.empty() && !label.empty())
          ent_it->second.label = std::move(label);
        corpus.edges.insert({id, Relation::MENTIONS, uri});
      }
    }

    if (const json* rels = get_array(rec, "relations", line_no)) {
      for (const auto& r : *rels) {
        if (!r.is_object() || !r.contains("type") || !r["type"].is_string() ||
            !r.contains("target") || !r["target"].is_string())
          throw FormatError(line_no, "relation entries must be objects with string 'type' and 'target'");
        Relation rel;
        try {
          rel = parse_relation(r["type"].get<std::string>());
        } catch (const FormatError& err) {
          throw FormatError(line_no, err.what());
        }
        if (rel != Relation::MORE_SPECIFIC_THAN && rel != Relation::SAME_MEANING &&
            rel != Relation::FOLLOWS_FROM)
          throw FormatError(line_no, std::string("relation type '") + to_string(rel) +
                                         "' not allowed in records");
        pending.push_back({line_no, id, rel, r["target"].get<std::string>()});
      }
    }
  }
  // Second pass: claim-claim relation targets may reference claims defined
  // on later lines, so resolve only after all records are read.
  for (const auto& p : pending) {
    ClaimId target_id;
    if (looks_like_claim_id(p.target)) {
      target_id = p.target;
    } else {
      const std::string norm = normalize_text(p.target);
      if (norm.empty()) throw FormatError(p.line, "relation target is empty after normalization");
      target_id = claim_id(norm);
    }
    if (!corpus.claims.contains(target_id))
      throw FormatError(p.line, "relation target references unknown claim id '" + target_id + "'");
    if (target_id == p.source) continue;  // self-loop after dedup, drop
    corpus.edges.insert({p.source, p.relation, target_id});
  }

  return result;
}

IngestResult ingest_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus file '" + path.string() + "'");
  return ingest_corpus(in);
}

std::string serialize_corpus(const Corpus& corpus) {
  using ordered = nlohmann::ordered_json;
  std::ostringstream out;
  for (const auto& [id, claim] : corpus.claims) {
    std::vector<std::string> pubs;
    std::vector<std::pair<std::string, std::string>> rels;  // (type, target id)
    std::vector<std::string> ents;
    for (const auto& e : corpus.edges) {
      if (e.relation == Relation::HAS_CLAIM && e.target == id) pubs.push_back(e.source);
      if (e.source != id) continue;
      if (e.relation == Relation::MENTIONS) ents.push_back(e.target);
      if (e.relation == Relation::MORE_SPECIFIC_THAN || e.relation == Relation::SAME_MEANING ||
          e.relation == Relation::FOLLOWS_FROM)
        rels.emplace_back(to_string(e.relation), e.target);
    }
    std::sort(pubs.begin(), pubs.end());
    std::sort(rels.begin(), rels.end());
    std::sort(ents.begin(), ents.end());

    const std::vector<std::string> surfaces =
        claim.raw_texts.empty() ? std::vector<std::string>{claim.text} : claim.raw_texts;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
      ordered rec;
      rec["text"] = surfaces[i];
      if (i == 0) {
        if (!pubs.empty()) rec["publications"] = pubs;
        if (!rels.empty()) {
          ordered arr = ordered::array();
          for (const auto& [type, target] : rels) arr.push_back({{"type", type}, {"target", target}});
          rec["relations"] = arr;
        }
        if (!ents.empty()) {
          ordered arr = ordered::array();
          for (const auto& uri : ents) {
            const auto& ent = corpus.entities.at(uri);
            ordered e{{"uri", uri}, {"kind", to_string(ent.kind)}};
            if (!ent.label.empty()) e["label"] = ent.label;
            arr.push_back(e);
          }
          rec["entities"] = arr;
        }
      }
      out << rec.dump() << '\n';
    }
  }
  return out.str();
}

}  // namespace aida
