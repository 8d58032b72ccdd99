#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "refadopt/similarity.hpp"

using namespace refadopt;

namespace {

std::string random_ascii(std::mt19937& rng, std::size_t max_len) {
  static const std::string alphabet = "abcdef_(); ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string out;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) out.push_back(alphabet[pick(rng)]);
  return out;
}

}  // namespace

TEST_CASE("levenshtein_distance pinned values") {
  CHECK(levenshtein_distance("kitten", "sitting") == 3);
  CHECK(levenshtein_distance("", "abc") == 3);
  CHECK(levenshtein_distance("abc", "") == 3);
  CHECK(levenshtein_distance("same text", "same text") == 0);
  // é is a single scalar, so the edit is one substitution, not two.
  CHECK(levenshtein_distance("h\xC3\xA9llo", "hello") == 1);
}

TEST_CASE("levenshtein_distance matches the memoized oracle") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string a = random_ascii(rng, 12);
    std::string b = random_ascii(rng, 12);
    CAPTURE(a);
    CAPTURE(b);
    CHECK(levenshtein_distance(a, b) == oracle::levenshtein_utf8(a, b));
  }
}

TEST_CASE("levenshtein_distance is symmetric and triangular") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    std::string a = random_ascii(rng, 10);
    std::string b = random_ascii(rng, 10);
    std::string c = random_ascii(rng, 10);
    std::size_t ab = levenshtein_distance(a, b);
    std::size_t ba = levenshtein_distance(b, a);
    CHECK(ab == ba);
    CHECK(ab <= levenshtein_distance(a, c) + levenshtein_distance(c, b));
  }
}

TEST_CASE("normalized_levenshtein_similarity pinned values") {
  CHECK(normalized_levenshtein_similarity("kitten", "sitting") ==
        doctest::Approx(1.0 - 3.0 / 7.0).epsilon(1e-12));
  CHECK(normalized_levenshtein_similarity("x", "x") == 1.0);
  CHECK(normalized_levenshtein_similarity("", "abc") == 0.0);
  CHECK(normalized_levenshtein_similarity("", "") == 1.0);
}

TEST_CASE("jaccard_ngram_similarity pinned values") {
  CHECK(jaccard_ngram_similarity("abcd", "bcde", 3) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(jaccard_ngram_similarity("same", "same", 3) == 1.0);
  CHECK(jaccard_ngram_similarity("aaaa", "bbbb", 3) == 0.0);
  // Both too short for any 3-gram: vacuously identical.
  CHECK(jaccard_ngram_similarity("ab", "c", 3) == 1.0);
  CHECK(jaccard_ngram_similarity("ab", "cdef", 3) == 0.0);
}

TEST_CASE("jaccard_ngram_similarity matches brute-force enumeration") {
  std::mt19937 rng(13);
  for (int i = 0; i < 500; ++i) {
    std::string a = random_ascii(rng, 20);
    std::string b = random_ascii(rng, 20);
    for (std::size_t n : {1, 2, 3, 4}) {
      CAPTURE(a);
      CAPTURE(b);
      CAPTURE(n);
      CHECK(jaccard_ngram_similarity(a, b, n) == oracle::jaccard(a, b, n));
    }
  }
}

TEST_CASE("jaccard_ngram_similarity is symmetric") {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    std::string a = random_ascii(rng, 16);
    std::string b = random_ascii(rng, 16);
    CHECK(jaccard_ngram_similarity(a, b) == jaccard_ngram_similarity(b, a));
  }
}

TEST_CASE("tokenize_code pinned values") {
  CHECK(tokenize_code("foo(bar_1)") ==
        std::vector<std::string>{"foo", "(", "bar_1", ")"});
  CHECK(tokenize_code("").empty());
  CHECK(tokenize_code("x+=1") == std::vector<std::string>{"x", "+", "=", "1"});
  CHECK(tokenize_code("  a\n\tb  ") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize_code keeps multi-byte scalars whole") {
  std::vector<std::string> tokens = tokenize_code("x\xC3\xA9y");
  // é is not an identifier character, so it separates the runs.
  CHECK(tokens == std::vector<std::string>{"x", "\xC3\xA9", "y"});
}

TEST_CASE("token_match_rate pinned values") {
  TokenMatchResult r = token_match_rate("a b d", "a b c");
  CHECK(r.matched_tokens == 2);
  CHECK(r.total_tokens == 3);
  CHECK(r.rate == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK(token_match_rate("x = y;", "x = y;").rate == 1.0);
  CHECK(token_match_rate("", "anything").rate == 1.0);
  CHECK(token_match_rate("", "").rate == 1.0);
  CHECK(token_match_rate("a", "").rate == 0.0);
}

TEST_CASE("token_match_rate is invariant under deletion and reordering") {
  std::string suggestion = "def load(path):\n    data = parse(path)\n    return data\n";
  // Keep only some lines, reorder, duplicate: every token still comes from
  // the suggestion, so the rate stays exactly 1.0.
  CHECK(token_match_rate("return data", suggestion).rate == 1.0);
  CHECK(token_match_rate("data = parse(path)\ndef load(path):", suggestion).rate == 1.0);
  CHECK(token_match_rate("path path path ( ) :", suggestion).rate == 1.0);
}

TEST_CASE("appending a foreign token strictly lowers token_match_rate") {
  std::mt19937 rng(19);
  for (int i = 0; i < 100; ++i) {
    std::string committed = random_ascii(rng, 18);
    if (tokenize_code(committed).empty()) committed = "x";
    std::string suggestion = committed + " extra";
    double before = token_match_rate(committed, suggestion).rate;
    double after = token_match_rate(committed + " zzqqy", suggestion).rate;
    CHECK(before == 1.0);
    CHECK(after < before);
  }
}

TEST_CASE("trivially_shared_ngrams keeps the k most frequent") {
  TrivialNgramSet single = TrivialNgramSet::build({"if if if"}, 1);
  REQUIRE(single.size() == 1);
  CHECK(single.contains({"if"}));

  // k at least the number of distinct n-grams keeps everything.
  std::vector<std::string> corpus = {"a b", "b c"};
  TrivialNgramSet all = TrivialNgramSet::build(corpus, 1000);
  // Unigrams a, b, c; bigrams (a,b), (b,c). Orders 3 and 4 have none.
  CHECK(all.size() == 5);
  CHECK(all.contains({"a"}));
  CHECK(all.contains({"a", "b"}));
  CHECK_FALSE(all.contains({"a", "c"}));
}

TEST_CASE("trivially_shared_ngrams breaks count ties lexicographically") {
  // "b a" gives each of b, a, (b,a) count one; k=1 must pick the smallest.
  TrivialNgramSet one = TrivialNgramSet::build({"b a"}, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.contains({"a"}));
}

TEST_CASE("trivially_shared_ngrams rejects an empty corpus") {
  CHECK_THROWS(TrivialNgramSet::build({}, 5));
}

TEST_CASE("crystal_bleu equals textbook BLEU when nothing is trivial") {
  TrivialNgramSet empty;
  std::mt19937 rng(23);
  for (int i = 0; i < 300; ++i) {
    std::string cand = random_ascii(rng, 30);
    std::string ref = random_ascii(rng, 30);
    if (tokenize_code(cand).empty() || tokenize_code(ref).empty()) continue;
    CAPTURE(cand);
    CAPTURE(ref);
    double got = crystal_bleu(cand, ref, empty);
    double want = oracle::bleu(tokenize_code(cand), tokenize_code(ref));
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("crystal_bleu identity is exact for any trivial set") {
  TrivialNgramSet empty;
  std::string text = "for (int i = 0; i < n; ++i) sum += v[i];";
  CHECK(crystal_bleu(text, text, empty) == 1.0);

  TrivialNgramSet trivial = TrivialNgramSet::build({text}, 4);
  CHECK(crystal_bleu(text, text, trivial) == 1.0);
}

TEST_CASE("crystal_bleu scores zero when only trivial grams are shared") {
  // The shared token "if" is trivial; nothing else overlaps.
  TrivialNgramSet trivial = TrivialNgramSet::build({"if if if"}, 1);
  double score = crystal_bleu("if alpha beta gamma", "if delta epsilon", trivial);
  CHECK(score == 0.0);
}

TEST_CASE("crystal_bleu falls back to text equality when everything is filtered") {
  TrivialNgramSet trivial = TrivialNgramSet::build({"x y"}, 1000);
  // Every n-gram of both sides is trivial, so raw equality decides.
  CHECK(crystal_bleu("x y", "x y", trivial) == 1.0);
  CHECK(crystal_bleu("x", "y", TrivialNgramSet::build({"x y"}, 1000)) == 0.0);
  // Empty candidate and reference with an empty trivial set: equal texts.
  TrivialNgramSet empty;
  CHECK(crystal_bleu("", "", empty) == 1.0);
  CHECK(crystal_bleu("", "x", empty) == 0.0);
}

TEST_CASE("all four metrics stay inside the unit interval") {
  TrivialNgramSet trivial = TrivialNgramSet::build({"a b c d e f"}, 3);
  std::mt19937 rng(29);
  for (int i = 0; i < 400; ++i) {
    std::string a = random_ascii(rng, 24);
    std::string b = random_ascii(rng, 24);
    MetricScores s = score_pair(a, b, trivial);
    CHECK(s.levenshtein_similarity >= 0.0);
    CHECK(s.levenshtein_similarity <= 1.0);
    CHECK(s.jaccard_3gram >= 0.0);
    CHECK(s.jaccard_3gram <= 1.0);
    CHECK(s.token_match_rate >= 0.0);
    CHECK(s.token_match_rate <= 1.0);
    CHECK(s.crystal_bleu >= 0.0);
    CHECK(s.crystal_bleu <= 1.0);
  }
}

TEST_CASE("score_pair identity gives four exact ones") {
  TrivialNgramSet empty;
  std::string code = "fn main() {\n    println!(\"hi\");\n}\n";
  MetricScores s = score_pair(code, code, empty);
  CHECK(s.levenshtein_similarity == 1.0);
  CHECK(s.jaccard_3gram == 1.0);
  CHECK(s.token_match_rate == 1.0);
  CHECK(s.crystal_bleu == 1.0);
}

TEST_CASE("score_pair shows the selective-adoption signature") {
  TrivialNgramSet empty;
  std::string suggestion =
      "def scale(values, factor):\n"
      "    result = []\n"
      "    for v in values:\n"
      "        result.append(v * factor)\n"
      "    return result\n";
  // The developer kept only the loop body: a contiguous slice of the
  // suggestion. Every token matches while the string metrics drop.
  std::string committed =
      "    for v in values:\n"
      "        result.append(v * factor)\n";
  MetricScores s = score_pair(committed, suggestion, empty);
  CHECK(s.token_match_rate == 1.0);
  CHECK(s.levenshtein_similarity < 1.0);
  CHECK(s.jaccard_3gram < 1.0);
}
