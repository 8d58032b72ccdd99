#include "refadopt/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "refadopt/errors.hpp"
#include "refadopt/text.hpp"

namespace refadopt {

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  std::u32string ua = decode_utf8(a);
  std::u32string ub = decode_utf8(b);
  if (ua.size() < ub.size()) std::swap(ua, ub);  // ub is the shorter row
  const std::size_t n = ub.size();
  if (n == 0) return ua.size();

  std::vector<std::size_t> row(n + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= ua.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t sub = diag + (ua[i - 1] == ub[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[n];
}

double normalized_levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::size_t la = decode_utf8(a).size();
  const std::size_t lb = decode_utf8(b).size();
  const std::size_t longest = std::max(la, lb);
  if (longest == 0) return 1.0;
  const std::size_t d = levenshtein_distance(a, b);
  return 1.0 - static_cast<double>(d) / static_cast<double>(longest);
}

namespace {

// Character n-grams as byte slices delimited by scalar boundaries.
std::unordered_set<std::string> char_ngram_set(std::string_view s, std::size_t n) {
  std::unordered_set<std::string> grams;
  const std::vector<std::size_t> offs = scalar_offsets(s);
  const std::size_t scalars = offs.size() - 1;
  if (scalars < n) return grams;
  for (std::size_t i = 0; i + n <= scalars; ++i)
    grams.emplace(s.substr(offs[i], offs[i + n] - offs[i]));
  return grams;
}

}  // namespace

double jaccard_ngram_similarity(std::string_view a, std::string_view b,
                                std::size_t n) {
  if (n < 1) throw usage_error("jaccard n-gram size must be >= 1");
  const auto ga = char_ngram_set(a, n);
  const auto gb = char_ngram_set(b, n);
  if (ga.empty() && gb.empty()) return 1.0;
  if (ga.empty() || gb.empty()) return 0.0;
  const auto& small = ga.size() <= gb.size() ? ga : gb;
  const auto& large = ga.size() <= gb.size() ? gb : ga;
  std::size_t inter = 0;
  for (const auto& g : small)
    if (large.count(g)) ++inter;
  const std::size_t uni = ga.size() + gb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::string> tokenize_code(std::string_view text) {
  std::vector<std::string> tokens;
  auto is_ident = [](char32_t c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  };
  auto is_space = [](char32_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  const std::u32string scalars = decode_utf8(text);
  std::string run;
  for (char32_t c : scalars) {
    if (is_ident(c)) {
      run.push_back(static_cast<char>(c));
      continue;
    }
    if (!run.empty()) {
      tokens.push_back(std::move(run));
      run.clear();
    }
    if (!is_space(c)) tokens.push_back(encode_utf8(c));
  }
  if (!run.empty()) tokens.push_back(std::move(run));
  return tokens;
}

TokenMatchResult token_match_rate(std::string_view committed,
                                  std::string_view suggestion) {
  TokenMatchResult result;
  const std::vector<std::string> committed_tokens = tokenize_code(committed);
  result.total_tokens = committed_tokens.size();
  if (result.total_tokens == 0) {
    result.rate = 1.0;  // vacuous: nothing in the committed file to account for
    return result;
  }
  const std::vector<std::string> suggestion_tokens = tokenize_code(suggestion);
  std::unordered_set<std::string> pool(suggestion_tokens.begin(),
                                       suggestion_tokens.end());
  for (const auto& tok : committed_tokens)
    if (pool.count(tok)) ++result.matched_tokens;
  result.rate = static_cast<double>(result.matched_tokens) /
                static_cast<double>(result.total_tokens);
  return result;
}

namespace {

constexpr std::size_t kMaxOrder = 4;

using NgramCounts = std::map<TokenNgram, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    TokenNgram gram(tokens.begin() + i, tokens.begin() + i + n);
    ++counts[gram];
  }
  return counts;
}

void erase_trivial(NgramCounts& counts, const TrivialNgramSet& trivial) {
  if (trivial.empty()) return;
  for (auto it = counts.begin(); it != counts.end();) {
    if (trivial.contains(it->first))
      it = counts.erase(it);
    else
      ++it;
  }
}

}  // namespace

TrivialNgramSet TrivialNgramSet::build(
    const std::vector<std::string>& corpus_texts, std::size_t k) {
  if (corpus_texts.empty()) throw data_error("trivially-shared n-grams: empty corpus");
  if (k < 1) throw usage_error("trivially-shared n-grams: k must be >= 1");

  std::map<TokenNgram, std::size_t> counts;
  for (const auto& text : corpus_texts) {
    const std::vector<std::string> tokens = tokenize_code(text);
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
      if (tokens.size() < n) break;
      for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        TokenNgram gram(tokens.begin() + i, tokens.begin() + i + n);
        ++counts[gram];
      }
    }
  }

  // Most frequent first; equal counts resolved by the smaller n-gram. The
  // count map is already in lexicographic order, so a stable sort on the
  // count alone preserves that order within ties.
  std::vector<const std::pair<const TokenNgram, std::size_t>*> ranked;
  ranked.reserve(counts.size());
  for (const auto& entry : counts) ranked.push_back(&entry);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto* x, const auto* y) { return x->second > y->second; });

  TrivialNgramSet set;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i)
    set.ngrams_.insert(ranked[i]->first);
  return set;
}

double crystal_bleu(std::string_view candidate, std::string_view reference,
                    const TrivialNgramSet& trivial) {
  const std::vector<std::string> cand_tokens = tokenize_code(candidate);
  const std::vector<std::string> ref_tokens = tokenize_code(reference);

  double log_sum = 0.0;
  std::size_t orders_used = 0;
  bool zero_precision = false;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    NgramCounts cand_counts = count_ngrams(cand_tokens, n);
    NgramCounts ref_counts = count_ngrams(ref_tokens, n);
    erase_trivial(cand_counts, trivial);
    erase_trivial(ref_counts, trivial);

    std::size_t total = 0;
    std::size_t clipped = 0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) clipped += std::min(count, it->second);
    }
    if (total == 0) continue;  // order skipped: nothing left on the candidate side
    ++orders_used;
    if (clipped == 0) {
      zero_precision = true;
      break;
    }
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
  }

  if (orders_used == 0) return candidate == reference ? 1.0 : 0.0;
  if (zero_precision) return 0.0;

  double score = std::exp(log_sum / static_cast<double>(orders_used));
  // Brevity penalty on raw token lengths.
  const double cand_len = static_cast<double>(cand_tokens.size());
  const double ref_len = static_cast<double>(ref_tokens.size());
  if (cand_len < ref_len) score *= std::exp(1.0 - ref_len / cand_len);
  return std::min(score, 1.0);
}

MetricScores score_pair(std::string_view after_changes,
                        std::string_view suggestion_code,
                        const TrivialNgramSet& trivial, std::size_t jaccard_n) {
  MetricScores scores;
  scores.levenshtein_similarity =
      normalized_levenshtein_similarity(after_changes, suggestion_code);
  scores.jaccard_3gram =
      jaccard_ngram_similarity(after_changes, suggestion_code, jaccard_n);
  scores.token_match_rate = token_match_rate(after_changes, suggestion_code).rate;
  scores.crystal_bleu = crystal_bleu(after_changes, suggestion_code, trivial);
  return scores;
}

}  // namespace refadopt
