#include "aida/nanopub.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <set>

#include "text_util.hpp"

namespace aida {

namespace {

std::string now_utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

bool valid_local_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::string render_iri(const std::string& iri) {
  static constexpr std::pair<std::string_view, std::string_view> prefixes[] = {
      {"av", vocab::kAida}, {"np", vocab::kNanopub}, {"xsd", vocab::kXsd}};
  for (const auto& [prefix, ns] : prefixes) {
    if (iri.size() > ns.size() && std::string_view(iri).substr(0, ns.size()) == ns) {
      const std::string_view local = std::string_view(iri).substr(ns.size());
      if (valid_local_name(local)) return std::string(prefix) + ':' + std::string(local);
    }
  }
  return '<' + iri + '>';
}

std::string escape_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_term(const RdfTerm& term) {
  switch (term.kind) {
    case RdfTerm::Kind::IRI: return render_iri(term.value);
    case RdfTerm::Kind::LITERAL: return '"' + escape_literal(term.value) + '"';
    case RdfTerm::Kind::TYPED_LITERAL:
      return '"' + escape_literal(term.value) + "\"^^" + render_iri(term.datatype);
  }
  return {};
}

std::string render_predicate(const std::string& predicate) {
  if (predicate == vocab::kRdfType) return "a";
  return render_iri(predicate);
}

void append_graph(std::string& out, const std::string& graph_iri,
                  std::vector<RdfTriple> triples) {
  std::sort(triples.begin(), triples.end());
  out += '\n';
  out += '<' + graph_iri + "> {\n";
  for (const auto& t : triples) {
    out += "    <" + t.subject + "> " + render_predicate(t.predicate) + ' ' +
           render_term(t.object) + " .\n";
  }
  out += "}\n";
}

// Percent-encodes only the characters the TriG grammar forbids between
// < and >; DOIs keep their slashes readable.
std::string sanitize_for_iriref(std::string_view s) {
  static const char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      out.push_back('%');
      out.push_back(hex[u >> 4]);
      out.push_back(hex[u & 0xf]);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string claim_iri(const ClaimId& id, const NanopubOptions& options) {
  return options.base_namespace + id;
}

std::string publication_iri(const std::string& publication_id, const NanopubOptions& options) {
  if (is_absolute_iri(publication_id)) return publication_id;
  if (publication_id.size() >= 4 && publication_id.compare(0, 3, "10.") == 0 &&
      std::isdigit(static_cast<unsigned char>(publication_id[3])))
    return "https://doi.org/" + sanitize_for_iriref(publication_id);
  return options.publication_namespace + detail::percent_encode(publication_id);
}

NanopubBundle export_nanopub(const ClaimId& id, const Corpus& corpus,
                             const std::vector<Annotation>& annotations,
                             const NanopubOptions& options) {
  const auto claim_it = corpus.claims.find(id);
  if (claim_it == corpus.claims.end()) throw FormatError("unknown claim '" + id + "'");
  if (!is_absolute_iri(options.base_namespace))
    throw FormatError("base namespace '" + options.base_namespace + "' is not an absolute IRI");
  if (!is_absolute_iri(options.publication_namespace))
    throw FormatError("publication namespace '" + options.publication_namespace +
                      "' is not an absolute IRI");

  NanopubBundle bundle;
  bundle.nanopub_iri = claim_iri(id, options);
  const std::string assertion_iri = bundle.nanopub_iri + "#assertion";
  const std::string provenance_iri = bundle.nanopub_iri + "#provenance";
  const std::string pubinfo_iri = bundle.nanopub_iri + "#pubinfo";

  bundle.head = {
      {bundle.nanopub_iri, std::string(vocab::kHasAssertion), RdfTerm::iri(assertion_iri)},
      {bundle.nanopub_iri, std::string(vocab::kHasProvenance), RdfTerm::iri(provenance_iri)},
      {bundle.nanopub_iri, std::string(vocab::kHasPublicationInfo), RdfTerm::iri(pubinfo_iri)},
      {bundle.nanopub_iri, std::string(vocab::kRdfType),
       RdfTerm::iri(std::string(vocab::kNanopublication))},
  };

  bundle.assertion.push_back({bundle.nanopub_iri, std::string(vocab::kStatementText),
                              RdfTerm::literal(claim_it->second.text)});

  std::set<std::string> mentioned;
  std::set<std::string> publications;
  for (const auto& edge : corpus.edges) {
    if (edge.relation == Relation::MENTIONS && edge.source == id) {
      mentioned.insert(edge.target);
    } else if (edge.relation == Relation::HAS_CLAIM && edge.target == id) {
      publications.insert(edge.source);
    } else if (edge.source == id && edge.relation != Relation::HAS_CLAIM &&
               edge.relation != Relation::MENTIONS) {
      const std::string_view predicate = edge.relation == Relation::MORE_SPECIFIC_THAN
                                             ? vocab::kMoreSpecificThan
                                             : edge.relation == Relation::SAME_MEANING
                                                   ? vocab::kSameMeaning
                                                   : vocab::kFollowsFrom;
      bundle.assertion.push_back({bundle.nanopub_iri, std::string(predicate),
                                  RdfTerm::iri(claim_iri(edge.target, options))});
    }
  }
  for (const auto& a : annotations)
    if (a.claim_id == id) mentioned.insert(a.entity_uri);
  for (const auto& uri : mentioned)
    bundle.assertion.push_back(
        {bundle.nanopub_iri, std::string(vocab::kMentions), RdfTerm::iri(uri)});

  for (const auto& pub : publications)
    bundle.provenance.push_back({assertion_iri, std::string(vocab::kAttributedTo),
                                 RdfTerm::iri(publication_iri(pub, options))});
  bundle.provenance.push_back(
      {assertion_iri, std::string(vocab::kGeneratedBy), RdfTerm::literal(options.generator)});

  const std::string timestamp =
      options.timestamp.empty() ? now_utc_timestamp() : options.timestamp;
  bundle.pubinfo = {
      {bundle.nanopub_iri, std::string(vocab::kCreated),
       RdfTerm::typed_literal(timestamp, std::string(vocab::kXsdDateTime))},
      {bundle.nanopub_iri, std::string(vocab::kGeneratedBy), RdfTerm::literal(options.generator)},
  };
  return bundle;
}

std::string serialize_trig(const std::vector<NanopubBundle>& bundles) {
  std::vector<const NanopubBundle*> ordered;
  ordered.reserve(bundles.size());
  for (const auto& b : bundles) ordered.push_back(&b);
  std::sort(ordered.begin(), ordered.end(), [](const NanopubBundle* a, const NanopubBundle* b) {
    return a->nanopub_iri < b->nanopub_iri;
  });

  std::string out;
  out += "@prefix av: <" + std::string(vocab::kAida) + "> .\n";
  out += "@prefix np: <" + std::string(vocab::kNanopub) + "> .\n";
  out += "@prefix xsd: <" + std::string(vocab::kXsd) + "> .\n";
  for (const NanopubBundle* b : ordered) {
    append_graph(out, b->nanopub_iri + "#head", b->head);
    append_graph(out, b->nanopub_iri + "#assertion", b->assertion);
    append_graph(out, b->nanopub_iri + "#provenance", b->provenance);
    append_graph(out, b->nanopub_iri + "#pubinfo", b->pubinfo);
  }
  return out;
}

}  // namespace aida
