#include "aida/validate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "aida/core.hpp"
#include "text_util.hpp"

namespace aida {

const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::ATOMIC: return "atomic";
    case Dimension::INDEPENDENT: return "independent";
    case Dimension::DECLARATIVE: return "declarative";
    case Dimension::ABSOLUTE: return "absolute";
  }
  return "?";
}

const char* to_string(Severity s) {
  return s == Severity::ERROR ? "error" : "warning";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::PASS_WITH_WARNINGS: return "PASS_WITH_WARNINGS";
    case Verdict::FAIL: return "FAIL";
  }
  return "?";
}

namespace {

using detail::ascii_lowercase;
using detail::is_word_char;

// All case-insensitive occurrences of phrase in text. Word boundaries are
// required only at phrase ends that are themselves word characters, so
// markers like ", and" anchor on the comma but still refuse ", andy".
std::vector<std::pair<std::size_t, std::size_t>> find_phrase(std::string_view text,
                                                             std::string_view phrase) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  if (phrase.empty() || phrase.size() > text.size()) return spans;
  const std::string hay = ascii_lowercase(text);
  const std::string needle = ascii_lowercase(phrase);
  const bool bound_front = is_word_char(static_cast<unsigned char>(needle.front()));
  const bool bound_back = is_word_char(static_cast<unsigned char>(needle.back()));
  std::size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    const std::size_t end = pos + needle.size();
    const bool ok_front =
        !bound_front || pos == 0 || !is_word_char(static_cast<unsigned char>(hay[pos - 1]));
    const bool ok_back =
        !bound_back || end == hay.size() || !is_word_char(static_cast<unsigned char>(hay[end]));
    if (ok_front && ok_back) {
      spans.emplace_back(pos, end);
      pos = end;
    } else {
      ++pos;
    }
  }
  return spans;
}

Finding make_finding(Dimension dim, Severity sev, std::string_view text, std::size_t start,
                     std::size_t end, std::string message, std::string rule_id) {
  return Finding{dim, sev, start, end, std::string(text.substr(start, end - start)),
                 std::move(message), std::move(rule_id)};
}

// Demonstratives are flagged only in sentence-initial position; mid-sentence
// they are usually bound within the sentence itself.
const std::set<std::string>& sentence_initial_terms() {
  static const std::set<std::string> kTerms{"this", "these", "that", "those", "it"};
  return kTerms;
}

void match_terms(std::string_view text, const std::vector<LexiconEntry>& terms, Dimension dim,
                 const char* what, const char* rule_id, bool positional,
                 std::vector<Finding>& out) {
  for (const auto& entry : terms) {
    const bool initial_only = positional && sentence_initial_terms().contains(entry.phrase);
    for (const auto& [start, end] : find_phrase(text, entry.phrase)) {
      if (initial_only && start != 0) continue;
      out.push_back(make_finding(dim, entry.severity, text, start, end,
                                 std::string(what) + " \"" + entry.phrase + "\"", rule_id));
    }
  }
}

bool digit_at(std::string_view text, std::size_t i) {
  return i < text.size() && text[i] >= '0' && text[i] <= '9';
}

}  // namespace

std::vector<Finding> check_declarative(std::string_view text) {
  std::vector<Finding> findings;
  if (text.empty()) {
    findings.push_back(Finding{Dimension::DECLARATIVE, Severity::ERROR, 0, 0, "",
                               "sentence is empty", "declarative/empty"});
    return findings;
  }

  const char last = text.back();
  if (last == '?' || last == '!') {
    findings.push_back(make_finding(Dimension::DECLARATIVE, Severity::ERROR, text,
                                    text.size() - 1, text.size(),
                                    "sentence must end with a full stop, not a question or "
                                    "exclamation mark",
                                    "declarative/terminal-punctuation"));
  } else if (last != '.') {
    findings.push_back(make_finding(Dimension::DECLARATIVE, Severity::ERROR, text,
                                    text.size() - 1, text.size(),
                                    "sentence must end with a full stop",
                                    "declarative/full-stop"));
  } else if (text.size() >= 2 && text[text.size() - 2] == '.') {
    std::size_t run_start = text.size() - 1;
    while (run_start > 0 && text[run_start - 1] == '.') --run_start;
    findings.push_back(make_finding(Dimension::DECLARATIVE, Severity::ERROR, text, run_start,
                                    text.size(), "sentence must end with exactly one full stop",
                                    "declarative/full-stop"));
  }

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      if (c >= 'a' && c <= 'z')
        findings.push_back(make_finding(Dimension::DECLARATIVE, Severity::ERROR, text, i, i + 1,
                                        "sentence must start with an uppercase letter",
                                        "declarative/capitalization"));
      break;
    }
  }

  const std::size_t tokens =
      1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), ' '));
  if (tokens < 3) {
    findings.push_back(make_finding(Dimension::DECLARATIVE, Severity::ERROR, text, 0, text.size(),
                                    "sentence has fewer than 3 words", "declarative/too-short"));
  }
  return findings;
}

std::vector<Finding> check_independent(std::string_view text, const Lexicon& lexicon) {
  std::vector<Finding> findings;
  match_terms(text, lexicon.independence_terms, Dimension::INDEPENDENT, "external reference",
              "independent/forbidden-term", /*positional=*/true, findings);
  return findings;
}

std::vector<Finding> check_absolute(std::string_view text, const Lexicon& lexicon) {
  std::vector<Finding> findings;
  match_terms(text, lexicon.hedge_terms, Dimension::ABSOLUTE, "hedge", "absolute/hedge",
              /*positional=*/false, findings);
  match_terms(text, lexicon.discovery_phrases, Dimension::ABSOLUTE, "discovery phrase",
              "absolute/discovery-phrase", /*positional=*/false, findings);
  return findings;
}

std::vector<Finding> check_atomic(std::string_view text, const Lexicon& lexicon) {
  std::vector<Finding> findings;

  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != ';') continue;
    const bool word_before = i > 0 && is_word_char(static_cast<unsigned char>(text[i - 1]));
    bool word_after = false;
    for (std::size_t j = i + 1; j < text.size(); ++j) {
      if (text[j] == ' ') continue;
      word_after = is_word_char(static_cast<unsigned char>(text[j]));
      break;
    }
    if (word_before && word_after)
      findings.push_back(make_finding(Dimension::ATOMIC, Severity::ERROR, text, i, i + 1,
                                      "semicolon joins multiple clauses", "atomic/semicolon"));
  }

  if (!text.empty()) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
      const char c = text[i];
      if (c != '.' && c != '?' && c != '!') continue;
      if (c == '.' && i > 0 && digit_at(text, i - 1) && digit_at(text, i + 1))
        continue;  // decimal number
      findings.push_back(make_finding(Dimension::ATOMIC, Severity::ERROR, text, i, i + 1,
                                      "sentence contains more than one sentence terminator",
                                      "atomic/multiple-terminators"));
    }
  }

  match_terms(text, lexicon.atomicity_markers, Dimension::ATOMIC, "clause-joining marker",
              "atomic/marker", /*positional=*/false, findings);
  return findings;
}

ValidationReport validate(std::string_view raw, const Lexicon& lexicon) {
  ValidationReport report;
  report.text = normalize_text(raw);

  auto add = [&report](std::vector<Finding> batch) {
    for (auto& f : batch) report.findings.push_back(std::move(f));
  };
  add(check_atomic(report.text, lexicon));
  add(check_independent(report.text, lexicon));
  add(check_declarative(report.text));
  add(check_absolute(report.text, lexicon));

  std::stable_sort(report.findings.begin(), report.findings.end(),
                   [](const Finding& a, const Finding& b) {
                     if (a.start != b.start) return a.start < b.start;
                     if (a.dimension != b.dimension) return a.dimension < b.dimension;
                     if (a.end != b.end) return a.end < b.end;
                     return a.rule_id < b.rule_id;
                   });

  const bool any_error = std::any_of(report.findings.begin(), report.findings.end(),
                                     [](const Finding& f) { return f.severity == Severity::ERROR; });
  report.verdict = any_error            ? Verdict::FAIL
                   : report.findings.empty() ? Verdict::PASS
                                             : Verdict::PASS_WITH_WARNINGS;
  return report;
}

Lexicon default_lexicon() {
  Lexicon lex;
  auto add = [](std::vector<LexiconEntry>& list, std::initializer_list<const char*> phrases,
                Severity sev) {
    for (const char* p : phrases) list.push_back({p, sev});
  };
  add(lex.independence_terms,
      {"we", "our", "us", "i", "my", "the aforementioned", "the former", "the latter", "here",
       "above-mentioned"},
      Severity::ERROR);
  add(lex.independence_terms, {"this", "these", "that", "those", "it"}, Severity::WARNING);
  add(lex.hedge_terms, {"probably", "possibly", "perhaps"}, Severity::ERROR);
  add(lex.discovery_phrases,
      {"evaluation showed that", "we found that", "results show that", "it was shown that"},
      Severity::ERROR);
  add(lex.hedge_terms, {"might", "may", "seems", "appears", "likely"}, Severity::WARNING);
  add(lex.discovery_phrases, {"suggests that"}, Severity::WARNING);
  add(lex.atomicity_markers, {", and", ", but", "respectively", ", while"}, Severity::WARNING);
  return lex;
}

namespace {

Severity parse_severity(std::string_view s, std::size_t line) {
  if (s == "error") return Severity::ERROR;
  if (s == "warning") return Severity::WARNING;
  throw FormatError(line, "unknown severity '" + std::string(s) + "'");
}

}  // namespace

Lexicon parse_lexicon(std::istream& in) {
  Lexicon lex;
  std::set<std::pair<std::string, std::string>> seen;  // (list, phrase)

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw FormatError(line_no, "expected <list>\\t<severity>\\t<phrase>");
    const std::string list = line.substr(0, tab1);
    const Severity sev = parse_severity(line.substr(tab1 + 1, tab2 - tab1 - 1), line_no);
    const std::string phrase = ascii_lowercase(normalize_text(line.substr(tab2 + 1)));
    if (phrase.empty()) throw FormatError(line_no, "empty phrase");
    if (!seen.insert({list, phrase}).second)
      throw FormatError(line_no, "duplicate phrase '" + phrase + "' in list '" + list + "'");

    if (list == "independent") {
      lex.independence_terms.push_back({phrase, sev});
    } else if (list == "absolute") {
      if (phrase.find(' ') == std::string::npos)
        lex.hedge_terms.push_back({phrase, sev});
      else
        lex.discovery_phrases.push_back({phrase, sev});
    } else if (list == "atomic") {
      lex.atomicity_markers.push_back({phrase, sev});
    } else {
      throw FormatError(line_no, "unknown list '" + list + "'");
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open lexicon file '" + path.string() + "'");
  return parse_lexicon(in);
}

}  // namespace aida
