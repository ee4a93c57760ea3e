#include "aida/linker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <thread>

#include "json.hpp"
#include "text_util.hpp"

namespace aida {

namespace {

using detail::ascii_lowercase;
using detail::is_word_char;

struct ClaimFailure {
  std::size_t index;
  ClaimId claim_id;
  std::string message;
};

// Higher confidence wins, ties go to the longer span, then the lower start,
// then the lexically smaller URI so resolution is total and deterministic.
bool better_candidate(const SpanCandidate& a, const SpanCandidate& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  const std::size_t la = a.end - a.start;
  const std::size_t lb = b.end - b.start;
  if (la != lb) return la > lb;
  if (a.start != b.start) return a.start < b.start;
  return a.uri < b.uri;
}

bool overlaps(const SpanCandidate& a, const SpanCandidate& b) {
  return a.start < b.end && b.start < a.end;
}

std::vector<Annotation> assemble_claim_annotations(const Claim& claim,
                                                   std::vector<SpanCandidate> candidates,
                                                   double threshold) {
  for (const auto& c : candidates) {
    if (c.start >= c.end || c.end > claim.text.size())
      throw AnnotateError(claim.id, "backend returned an invalid span [" +
                                        std::to_string(c.start) + ", " + std::to_string(c.end) +
                                        ") for a text of length " +
                                        std::to_string(claim.text.size()));
    if (!(c.confidence >= 0.0 && c.confidence <= 1.0))
      throw AnnotateError(claim.id, "backend returned confidence outside [0, 1]");
  }

  std::erase_if(candidates, [threshold](const SpanCandidate& c) {
    return c.confidence < threshold;
  });

  std::sort(candidates.begin(), candidates.end(), better_candidate);
  std::vector<SpanCandidate> kept;
  for (const auto& c : candidates) {
    const bool clash = std::any_of(kept.begin(), kept.end(),
                                   [&c](const SpanCandidate& k) { return overlaps(k, c); });
    if (!clash) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const SpanCandidate& a, const SpanCandidate& b) { return a.start < b.start; });

  std::vector<Annotation> out;
  out.reserve(kept.size());
  for (const auto& c : kept) {
    out.push_back(Annotation{claim.id, claim.text.substr(c.start, c.end - c.start), c.start,
                             c.end, c.uri, c.confidence});
  }
  return out;
}

}  // namespace

std::vector<Annotation> annotate(const std::vector<Claim>& claims, const AnnotatorConfig& config,
                                 const Annotator& backend) {
  if (!(config.confidence_threshold >= 0.0 && config.confidence_threshold <= 1.0))
    throw FormatError("confidence threshold must be in [0, 1]");
  if (config.max_parallel_requests < 1)
    throw FormatError("max_parallel_requests must be >= 1");

  const std::size_t n = claims.size();
  std::vector<std::vector<SpanCandidate>> raw(n);
  std::vector<std::optional<ClaimFailure>> failures(n);

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.max_parallel_requests), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        raw[i] = backend.run(claims[i].text);
      } catch (const std::exception& e) {
        throw AnnotateError(claims[i].id, e.what());
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    auto work = [&] {
      while (!abort.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          raw[i] = backend.run(claims[i].text);
        } catch (const std::exception& e) {
          failures[i] = ClaimFailure{i, claims[i].id, e.what()};
          abort.store(true);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    // Report the failure with the smallest claim index for determinism.
    for (const auto& f : failures) {
      if (f) throw AnnotateError(f->claim_id, f->message);
    }
  }

  std::vector<Annotation> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto per_claim =
        assemble_claim_annotations(claims[i], std::move(raw[i]), config.confidence_threshold);
    out.insert(out.end(), std::make_move_iterator(per_claim.begin()),
               std::make_move_iterator(per_claim.end()));
  }
  return out;
}

std::vector<SpanCandidate> gazetteer_annotate(std::string_view text, const Gazetteer& gazetteer) {
  std::vector<SpanCandidate> out;
  if (gazetteer.empty() || text.empty()) return out;

  // Longest phrase first; ties broken lexically so insertion order of the
  // map never matters.
  std::vector<std::pair<std::string_view, std::string_view>> phrases;
  phrases.reserve(gazetteer.size());
  for (const auto& [phrase, uri] : gazetteer) phrases.emplace_back(phrase, uri);
  std::sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });

  const std::string hay = ascii_lowercase(text);
  std::size_t i = 0;
  while (i < hay.size()) {
    bool matched = false;
    for (const auto& [phrase, uri] : phrases) {
      if (phrase.empty() || hay.compare(i, phrase.size(), phrase) != 0) continue;
      const std::size_t end = i + phrase.size();
      const bool ok_front = !is_word_char(static_cast<unsigned char>(phrase.front())) || i == 0 ||
                            !is_word_char(static_cast<unsigned char>(hay[i - 1]));
      const bool ok_back = !is_word_char(static_cast<unsigned char>(phrase.back())) ||
                           end == hay.size() ||
                           !is_word_char(static_cast<unsigned char>(hay[end]));
      if (!ok_front || !ok_back) continue;
      out.push_back(SpanCandidate{i, end, std::string(uri), 1.0});
      i = end;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return out;
}

Gazetteer parse_gazetteer(std::istream& in) {
  Gazetteer gaz;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(line_no, "expected <phrase>\\t<iri>");
    const std::string phrase = ascii_lowercase(normalize_text(line.substr(0, tab)));
    const std::string iri = line.substr(tab + 1);
    if (phrase.empty()) throw FormatError(line_no, "empty phrase");
    if (!is_absolute_iri(iri))
      throw FormatError(line_no, "'" + iri + "' is not an absolute IRI");
    if (!gaz.emplace(phrase, iri).second)
      throw FormatError(line_no, "duplicate phrase '" + phrase + "'");
  }
  return gaz;
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open gazetteer file '" + path.string() + "'");
  return parse_gazetteer(in);
}

std::vector<Annotation> filter_by_confidence(const std::vector<Annotation>& annotations,
                                             double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw FormatError("confidence threshold must be in [0, 1]");
  std::vector<Annotation> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations)
    if (a.confidence >= threshold) out.push_back(a);
  return out;
}

std::vector<Annotation> sample_annotations(const std::vector<Annotation>& annotations,
                                           double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw FormatError("sample fraction must be in (0, 1]");
  const std::size_t n = annotations.size();
  if (n == 0) return {};

  // ceil with a small guard against products like 0.2 * 5 landing a hair
  // above the true integer value.
  std::size_t k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);

  // Partial Fisher-Yates over explicit modulo draws; mt19937_64 output is
  // pinned by the standard, so the sample is identical across platforms.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t pick = j + static_cast<std::size_t>(rng() % (n - j));
    std::swap(idx[j], idx[pick]);
  }

  std::vector<Annotation> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back(annotations[idx[j]]);
  std::sort(out.begin(), out.end(), [](const Annotation& a, const Annotation& b) {
    if (a.claim_id != b.claim_id) return a.claim_id < b.claim_id;
    return a.start < b.start;
  });
  return out;
}

void write_annotations(std::ostream& out, const std::vector<Annotation>& annotations) {
  using ordered = nlohmann::ordered_json;
  for (const auto& a : annotations) {
    ordered rec{{"claim_id", a.claim_id}, {"surface_form", a.surface_form},
                {"start", a.start},       {"end", a.end},
                {"entity_uri", a.entity_uri}, {"confidence", a.confidence}};
    out << rec.dump() << '\n';
  }
}

void write_annotations_file(const std::filesystem::path& path,
                            const std::vector<Annotation>& annotations) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write annotation file '" + path.string() + "'");
  write_annotations(out, annotations);
}

std::vector<Annotation> read_annotations(std::istream& in) {
  using nlohmann::json;
  std::vector<Annotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("claim_id") || !rec["claim_id"].is_string() ||
        !rec.contains("surface_form") || !rec["surface_form"].is_string() ||
        !rec.contains("start") || !rec["start"].is_number_unsigned() || !rec.contains("end") ||
        !rec["end"].is_number_unsigned() || !rec.contains("entity_uri") ||
        !rec["entity_uri"].is_string() || !rec.contains("confidence") ||
        !rec["confidence"].is_number())
      throw FormatError(line_no, "annotation record is missing required fields");
    Annotation a{rec["claim_id"].get<std::string>(), rec["surface_form"].get<std::string>(),
                 rec["start"].get<std::size_t>(),    rec["end"].get<std::size_t>(),
                 rec["entity_uri"].get<std::string>(), rec["confidence"].get<double>()};
    if (a.start >= a.end || a.end - a.start != a.surface_form.size())
      throw FormatError(line_no, "span does not match surface form length");
    if (!(a.confidence >= 0.0 && a.confidence <= 1.0))
      throw FormatError(line_no, "confidence outside [0, 1]");
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Annotation> read_annotations_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open annotation file '" + path.string() + "'");
  return read_annotations(in);
}

}  // namespace aida
