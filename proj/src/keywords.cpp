#include "refadopt/keywords.hpp"

#include <algorithm>
#include <fstream>

#include "refadopt/errors.hpp"
#include "refadopt/text.hpp"

namespace refadopt {
namespace {

// Commit messages overwhelmingly inflect by suffix, so a fixed table is
// enough. Each rule rewrites one suffix back to the orthographic base
// ("refactored" -> "refactor", "renamed" -> "rename"), which keeps keyword
// stems equal to the keywords themselves. Longest suffix wins; a rule applies
// only when at least `min_stem` characters precede the suffix; exactly one
// rule is applied per token. Irregular forms ("rewrote") are not folded.
const std::vector<StemRule>& rule_table() {
  static const std::vector<StemRule> rules = {
      {"ifications", "ify", 2},  // simplifications -> simplify
      {"ification", "ify", 2},   // unification -> unify
      {"izations", "ize", 2},    // optimizations -> optimize
      {"isations", "ise", 2},
      {"ization", "ize", 2},  // reorganization -> reorganize
      {"isation", "ise", 2},
      {"ations", "ate", 2},  // duplications -> duplicate
      {"orings", "or", 3},   // refactorings -> refactor
      {"urings", "ure", 2},  // restructurings -> restructure
      {"ation", "ate", 2},   // regeneration -> regenerate
      {"ments", "", 3},      // improvements -> improve
      {"ncies", "nt", 3},    // redundancies -> redundant
      {"oring", "or", 3},    // refactoring -> refactor
      {"uring", "ure", 2},   // restructuring -> restructure
      {"izing", "ize", 2},   // organizing -> organize
      {"ising", "ise", 2},
      {"aning", "an", 2},   // cleaning -> clean
      {"ining", "ine", 2},  // refining -> refine
      {"ening", "en", 2},   // opening -> open
      {"tting", "t", 1},    // splitting -> split
      {"nning", "n", 1},    // planning -> plan
      {"mming", "m", 1},    // trimming -> trim
      {"gging", "g", 1},
      {"pping", "p", 1},  // mapping -> map
      {"rring", "r", 1},
      {"bbing", "b", 1},
      {"ssing", "ss", 1},  // processing -> process
      {"ching", "ch", 1},  // matching -> match
      {"shing", "sh", 1},  // polishing -> polish
      {"sses", "ss", 1},   // classes -> class
      {"shes", "sh", 1},   // polishes -> polish
      {"ches", "ch", 1},
      {"ssed", "ss", 1},  // processed -> process
      {"tted", "t", 1},   // reformatted -> reformat
      {"nned", "n", 1},
      {"mmed", "m", 1},
      {"gged", "g", 1},
      {"pped", "p", 1},
      {"rred", "r", 1},
      {"bbed", "b", 1},
      {"aned", "an", 2},   // cleaned -> clean
      {"ined", "ine", 2},  // refined -> refine
      {"ened", "en", 2},
      {"ched", "ch", 1},
      {"shed", "sh", 1},   // polished -> polish
      {"ured", "ure", 2},  // restructured -> restructure
      {"ored", "or", 3},   // refactored -> refactor
      {"ized", "ize", 2},  // organized -> organize
      {"ised", "ise", 2},
      {"izes", "ize", 2},
      {"ises", "ise", 2},
      {"izer", "ize", 2},  // optimizer -> optimize
      {"iser", "ise", 2},
      {"ment", "", 3},   // enhancement -> enhance
      {"ying", "y", 2},  // simplifying -> simplify
      {"ting", "te", 2},  // rewriting -> rewrite
      {"ming", "me", 2},  // renaming -> rename
      {"cing", "ce", 2},  // enhancing -> enhance
      {"ging", "ge", 2},
      {"sing", "se", 2},
      {"zing", "ze", 2},
      {"ving", "ve", 2},  // improving -> improve
      {"ings", "", 2},
      {"ied", "y", 2},  // simplified -> simplify
      {"ies", "y", 2},  // complexities -> complexity
      {"ncy", "nt", 3},  // redundancy -> redundant
      {"ted", "te", 2},  // duplicated -> duplicate
      {"ced", "ce", 2},  // enhanced -> enhance
      {"ged", "ge", 2},
      {"sed", "se", 2},  // unused -> unuse
      {"zed", "ze", 2},
      {"ved", "ve", 2},  // improved -> improve
      {"med", "me", 2},  // renamed -> rename
      {"ing", "", 2},
      {"ed", "", 2},
      {"ly", "", 3},   // redundantly -> redundant
      {"ss", "ss", 1},  // guard: keeps "useless" from losing its final s
      {"s", "", 2},
  };
  return rules;
}

bool is_word_scalar(char32_t c) {
  if (c < 0x80) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
           (c >= U'0' && c <= U'9');
  }
  return true;  // non-ASCII text is kept, punctuation is ASCII-only
}

}  // namespace

const std::vector<StemRule>& stemming_rules() { return rule_table(); }

std::string stem_token(std::string_view token) {
  for (const StemRule& rule : rule_table()) {
    if (token.size() < rule.suffix.size() + rule.min_stem) continue;
    if (!token.ends_with(rule.suffix)) continue;
    std::string out(token.substr(0, token.size() - rule.suffix.size()));
    out += rule.replacement;
    return out;
  }
  return std::string(token);
}

const std::vector<std::string>& stop_words() {
  static const std::vector<std::string> words = {
      "a",       "about",   "above",  "after",   "again",   "against",
      "all",     "am",      "an",     "and",     "any",     "are",
      "as",      "at",      "be",     "because", "been",    "before",
      "being",   "below",   "between", "both",   "but",     "by",
      "can",     "cannot",  "could",  "did",     "do",      "does",
      "doing",   "down",    "during", "each",    "few",     "for",
      "from",    "further", "had",    "has",     "have",    "having",
      "he",      "her",     "here",   "hers",    "him",     "his",
      "how",     "i",       "if",     "in",      "into",    "is",
      "it",      "its",     "itself", "just",    "me",      "more",
      "most",    "my",      "no",     "nor",     "not",     "now",
      "of",      "off",     "on",     "once",    "only",    "or",
      "other",   "our",     "ours",   "out",     "over",    "own",
      "same",    "she",     "should", "so",      "some",    "such",
      "than",    "that",    "the",    "their",   "theirs",  "them",
      "then",    "there",   "these",  "they",    "this",    "those",
      "through", "to",      "too",    "under",   "until",   "up",
      "very",    "was",     "we",     "were",    "what",    "when",
      "where",   "which",   "while",  "who",     "whom",    "why",
      "will",    "with",    "would",  "you",     "your",    "yours",
  };
  return words;
}

std::vector<std::string> normalize_message(std::string_view message) {
  static const std::set<std::string> stops(stop_words().begin(), stop_words().end());

  std::vector<std::string> lemmas;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    if (!stops.count(token)) lemmas.push_back(stem_token(token));
    token.clear();
  };

  std::size_t i = 0;
  while (i < message.size()) {
    auto [scalar, len] = decode_scalar(message, i);
    if (is_word_scalar(scalar)) {
      if (scalar < 0x80) {
        char c = static_cast<char>(scalar);
        token += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
      } else {
        token.append(message.substr(i, len));
      }
    } else {
      flush();
    }
    i += len;
  }
  flush();
  return lemmas;
}

FilterDecision classify_message(std::string_view message, const KeywordList& keywords) {
  FilterDecision decision;
  for (const std::string& lemma : normalize_message(message)) {
    keywords.collect_matches(lemma, decision.matched_keywords);
  }
  decision.is_refactoring = !decision.matched_keywords.empty();
  return decision;
}

KeywordList KeywordList::defaults() {
  return from_words({
      "refactor",  "rewrite",    "simplify",  "organize", "reorganize",
      "rename",    "regenerate", "restructure", "reformat", "clean",
      "duplicate", "improve",    "optimize",  "redundant", "split",
      "unify",     "unused",     "useless",   "enhance",  "complexity",
      "refine",    "polish",     "organise",  "reorganise", "optimise",
  });
}

KeywordList KeywordList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open keyword list: " + path);

  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(first, last - first + 1));
  }
  if (words.empty()) throw schema_error("keyword list is empty: " + path);
  return from_words(words);
}

KeywordList KeywordList::from_words(const std::vector<std::string>& words) {
  KeywordList list;
  for (const std::string& raw : words) {
    std::string word = to_lower_ascii(raw);
    if (word.empty()) throw schema_error("empty keyword");
    if (word.find_first_of(" \t\r\n") != std::string::npos) {
      throw schema_error("keyword contains whitespace: \"" + raw + "\"");
    }
    list.canonical_.insert(word);
    list.by_stem_[stem_token(word)].insert(word);
  }
  return list;
}

void KeywordList::collect_matches(const std::string& stem,
                                  std::set<std::string>& out) const {
  auto it = by_stem_.find(stem);
  if (it == by_stem_.end()) return;
  out.insert(it->second.begin(), it->second.end());
}

}  // namespace refadopt
