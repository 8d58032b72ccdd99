#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace refadopt {

// The four per-datapoint similarity scores, each in [0,1].
struct MetricScores {
  double levenshtein_similarity = 0.0;
  double jaccard_3gram = 0.0;
  double token_match_rate = 0.0;
  double crystal_bleu = 0.0;
};

struct TokenMatchResult {
  std::size_t matched_tokens = 0;
  std::size_t total_tokens = 0;  // tokens in the committed text
  double rate = 0.0;
};

// A token n-gram, n in 1..4.
using TokenNgram = std::vector<std::string>;

// The k most frequent token n-grams (orders 1..4 pooled) over a corpus.
// CrystalBLEU discounts these before computing precisions.
class TrivialNgramSet {
 public:
  TrivialNgramSet() = default;

  // Counts n-grams over every text, keeps the k most frequent; ties broken by
  // lexicographically smaller n-gram first. Throws on an empty corpus.
  static TrivialNgramSet build(const std::vector<std::string>& corpus_texts,
                               std::size_t k);

  bool contains(const TokenNgram& ngram) const {
    return ngrams_.count(ngram) != 0;
  }
  std::size_t size() const { return ngrams_.size(); }
  bool empty() const { return ngrams_.empty(); }
  const std::set<TokenNgram>& ngrams() const { return ngrams_; }

 private:
  std::set<TokenNgram> ngrams_;
};

// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - d(a,b) / max(|a|,|b|), lengths in scalars. Both empty -> 1.0.
double normalized_levenshtein_similarity(std::string_view a, std::string_view b);

// Intersection-over-union of the character n-gram sets of a and b.
// Both sets empty -> 1.0; exactly one empty -> 0.0.
double jaccard_ngram_similarity(std::string_view a, std::string_view b,
                                std::size_t n = 3);

// Language-agnostic code tokenizer: maximal [A-Za-z0-9_] runs are one token,
// any other non-whitespace scalar is a single-scalar token.
std::vector<std::string> tokenize_code(std::string_view text);

// Fraction of committed tokens (with multiplicity) whose text occurs anywhere
// in the suggestion's token set. Committed empty -> rate 1.0.
TokenMatchResult token_match_rate(std::string_view committed,
                                  std::string_view suggestion);

// BLEU over token n-grams of order 1..4 with clipped precisions, uniform
// geometric mean and brevity penalty, computed after deleting every n-gram in
// `trivial` from both candidate and reference counts. An order where the
// candidate has no n-grams left is skipped; if every order is skipped the
// score falls back to exact text equality (1.0 / 0.0).
double crystal_bleu(std::string_view candidate, std::string_view reference,
                    const TrivialNgramSet& trivial);

// All four metrics on (after_changes, suggestion code); the committed side is
// always after_changes.
MetricScores score_pair(std::string_view after_changes,
                        std::string_view suggestion_code,
                        const TrivialNgramSet& trivial,
                        std::size_t jaccard_n = 3);

}  // namespace refadopt
