#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace refadopt {

// Refactoring keywords, stored as (stemmed lemma -> canonical lowercase form).
// Matching is exact lemma equality: a message token matches a keyword iff
// their stems are identical.
class KeywordList {
 public:
  static KeywordList defaults();  // the shipped 25-entry list

  // One keyword per line, UTF-8, '#' comments, blank lines ignored.
  static KeywordList load(const std::string& path);

  static KeywordList from_words(const std::vector<std::string>& words);

  bool empty() const { return by_stem_.empty(); }
  std::size_t size() const { return canonical_.size(); }
  const std::set<std::string>& canonical() const { return canonical_; }

  // Adds the canonical keywords whose stem equals `stem` to `out`.
  void collect_matches(const std::string& stem, std::set<std::string>& out) const;

 private:
  std::set<std::string> canonical_;
  std::map<std::string, std::set<std::string>> by_stem_;
};

struct FilterDecision {
  bool is_refactoring = false;
  std::set<std::string> matched_keywords;  // canonical forms
};

struct StemRule {
  std::string_view suffix;
  std::string_view replacement;
  std::size_t min_stem;  // minimum length of what precedes `suffix`
};

// The deterministic suffix-stripping table, longest suffix first; the first
// matching rule is applied once. Exposed for documentation and tests.
const std::vector<StemRule>& stemming_rules();

// Applies the rule table to one lowercase token.
std::string stem_token(std::string_view token);

const std::vector<std::string>& stop_words();

// Lowercases, splits into word tokens (punctuation separates), removes stop
// words, stems what remains. Multiplicity and order are preserved.
std::vector<std::string> normalize_message(std::string_view message);

FilterDecision classify_message(std::string_view message, const KeywordList& keywords);

}  // namespace refadopt
