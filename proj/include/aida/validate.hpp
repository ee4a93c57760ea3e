#pragma once

// Rule-based linter for the four AIDA constraints: atomic, independent,
// declarative, absolute. All checks are pure functions over normalized text
// and an immutable lexicon; every diagnostic carries a character span.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "aida/errors.hpp"

namespace aida {

enum class Dimension { ATOMIC, INDEPENDENT, DECLARATIVE, ABSOLUTE };

enum class Severity { ERROR, WARNING };

enum class Verdict { PASS, PASS_WITH_WARNINGS, FAIL };

const char* to_string(Dimension d);
const char* to_string(Severity s);
const char* to_string(Verdict v);

struct Finding {
  Dimension dimension;
  Severity severity;
  std::size_t start = 0;  // byte offsets into the normalized text
  std::size_t end = 0;
  std::string matched;  // equals text[start..end)
  std::string message;
  std::string rule_id;

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  std::string text;  // normalized
  std::vector<Finding> findings;
  Verdict verdict = Verdict::PASS;
};

struct LexiconEntry {
  std::string phrase;  // non-empty, lowercase, whitespace-normalized
  Severity severity;
};

struct Lexicon {
  std::vector<LexiconEntry> independence_terms;
  std::vector<LexiconEntry> hedge_terms;        // single-word absoluteness terms
  std::vector<LexiconEntry> discovery_phrases;  // multi-word absoluteness phrases
  std::vector<LexiconEntry> atomicity_markers;
};

// Built-in lexicon: hard forbidden phrases as errors, softer suspect
// entries as warnings.
Lexicon default_lexicon();

// Lexicon file: one `<list>\t<severity>\t<phrase>` entry per line with
// list in {independent, absolute, atomic} and severity in {error, warning};
// '#' starts a comment line. Phrases are lowercased and whitespace-normalized
// on load; a duplicate phrase within one list is an error.
Lexicon parse_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);

// Structural: non-empty, ends with exactly one '.', no terminal '?'/'!',
// uppercase first alphabetic character, at least 3 tokens.
std::vector<Finding> check_declarative(std::string_view text);

// Lexical: one finding per independence-term match. Entries whose phrase is
// one of the demonstratives {this, these, that, those, it} match only at
// sentence start.
std::vector<Finding> check_independent(std::string_view text, const Lexicon& lexicon);

// Lexical: one finding per hedge or discovery-phrase match.
std::vector<Finding> check_absolute(std::string_view text, const Lexicon& lexicon);

// Structural (clause-joining semicolon, extra sentence terminator) plus one
// warning per atomicity-marker match. A '.' between two digits does not
// count as a terminator.
std::vector<Finding> check_atomic(std::string_view text, const Lexicon& lexicon);

// Normalizes, runs all four checks, sorts findings by span start then
// dimension. Verdict is FAIL iff any ERROR finding, PASS iff no findings.
ValidationReport validate(std::string_view raw, const Lexicon& lexicon);

}  // namespace aida
