#include "refadopt.h"

#include <exception>
#include <string>
#include <vector>

#include "refadopt/adoption.hpp"
#include "refadopt/errors.hpp"
#include "refadopt/pipeline.hpp"
#include "refadopt/similarity.hpp"

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_warnings;

refadopt_status status_from_kind(refadopt::ErrorKind kind) {
  switch (kind) {
    case refadopt::ErrorKind::Usage: return REFADOPT_ERR_USAGE;
    case refadopt::ErrorKind::Io: return REFADOPT_ERR_IO;
    case refadopt::ErrorKind::Schema:
    case refadopt::ErrorKind::Parse:
    case refadopt::ErrorKind::Data: return REFADOPT_ERR_DATA;
    case refadopt::ErrorKind::Network:
    case refadopt::ErrorKind::RateLimit: return REFADOPT_ERR_NETWORK;
  }
  return REFADOPT_ERR_DATA;
}

refadopt_status record_error(const std::exception& e) {
  g_last_error = e.what();
  if (const auto* typed = dynamic_cast<const refadopt::Error*>(&e)) {
    return status_from_kind(typed->kind());
  }
  return REFADOPT_ERR_DATA;
}

// Null string arguments are usage errors for double-returning metrics, which
// signal failure with a negative value.
bool require(const char* pointer, const char* what) {
  if (pointer) return true;
  g_last_error = std::string(what) + " must not be null";
  return false;
}

}  // namespace

struct refadopt_trivial_set {
  refadopt::TrivialNgramSet set;
};

struct refadopt_config {
  refadopt::RunConfig config;
};

extern "C" {

const char* refadopt_version(void) { return "0.1.0"; }

const char* refadopt_last_error(void) { return g_last_error.c_str(); }

int64_t refadopt_levenshtein_distance(const char* a, const char* b) {
  if (!require(a, "a") || !require(b, "b")) return -1;
  try {
    return static_cast<int64_t>(refadopt::levenshtein_distance(a, b));
  } catch (const std::exception& e) {
    record_error(e);
    return -1;
  }
}

double refadopt_levenshtein_similarity(const char* a, const char* b) {
  if (!require(a, "a") || !require(b, "b")) return -1.0;
  try {
    return refadopt::normalized_levenshtein_similarity(a, b);
  } catch (const std::exception& e) {
    record_error(e);
    return -1.0;
  }
}

double refadopt_jaccard_similarity(const char* a, const char* b, int n) {
  if (!require(a, "a") || !require(b, "b")) return -1.0;
  if (n < 1) {
    g_last_error = "n must be at least 1";
    return -1.0;
  }
  try {
    return refadopt::jaccard_ngram_similarity(a, b, static_cast<std::size_t>(n));
  } catch (const std::exception& e) {
    record_error(e);
    return -1.0;
  }
}

double refadopt_token_match_rate(const char* committed, const char* suggestion) {
  if (!require(committed, "committed") || !require(suggestion, "suggestion")) {
    return -1.0;
  }
  try {
    return refadopt::token_match_rate(committed, suggestion).rate;
  } catch (const std::exception& e) {
    record_error(e);
    return -1.0;
  }
}

refadopt_trivial_set* refadopt_trivial_set_build(const char* const* texts,
                                                 size_t text_count, size_t k) {
  if (text_count > 0 && !texts) {
    g_last_error = "texts must not be null";
    return nullptr;
  }
  try {
    std::vector<std::string> corpus;
    corpus.reserve(text_count);
    for (size_t i = 0; i < text_count; ++i) {
      if (!texts[i]) {
        g_last_error = "texts[" + std::to_string(i) + "] is null";
        return nullptr;
      }
      corpus.emplace_back(texts[i]);
    }
    auto* handle = new refadopt_trivial_set{
        refadopt::TrivialNgramSet::build(corpus, k)};
    return handle;
  } catch (const std::exception& e) {
    record_error(e);
    return nullptr;
  }
}

size_t refadopt_trivial_set_size(const refadopt_trivial_set* set) {
  return set ? set->set.size() : 0;
}

void refadopt_trivial_set_free(refadopt_trivial_set* set) { delete set; }

double refadopt_crystal_bleu(const char* candidate, const char* reference,
                             const refadopt_trivial_set* trivial) {
  if (!require(candidate, "candidate") || !require(reference, "reference")) {
    return -1.0;
  }
  try {
    static const refadopt::TrivialNgramSet empty;
    const refadopt::TrivialNgramSet& set = trivial ? trivial->set : empty;
    return refadopt::crystal_bleu(candidate, reference, set);
  } catch (const std::exception& e) {
    record_error(e);
    return -1.0;
  }
}

refadopt_status refadopt_classify(double levenshtein_similarity,
                                  double jaccard_3gram, double token_match_rate,
                                  double crystal_bleu, double threshold_high,
                                  double threshold_low, double tmr_high,
                                  const char** name) {
  if (!name) {
    g_last_error = "name must not be null";
    return REFADOPT_ERR_USAGE;
  }
  try {
    refadopt::MetricScores scores;
    scores.levenshtein_similarity = levenshtein_similarity;
    scores.jaccard_3gram = jaccard_3gram;
    scores.token_match_rate = token_match_rate;
    scores.crystal_bleu = crystal_bleu;
    refadopt::ClassifierThresholds thresholds;
    thresholds.high = threshold_high;
    thresholds.low = threshold_low;
    thresholds.tmr_high = tmr_high;
    *name = refadopt::adoption_level_name(refadopt::classify(scores, thresholds))
                .data();
    return REFADOPT_OK;
  } catch (const std::exception& e) {
    return record_error(e);
  }
}

refadopt_config* refadopt_config_new(void) {
  try {
    return new refadopt_config{};
  } catch (const std::exception& e) {
    record_error(e);
    return nullptr;
  }
}

void refadopt_config_free(refadopt_config* config) { delete config; }

refadopt_status refadopt_config_set(refadopt_config* config, const char* key,
                                    const char* value) {
  if (!config || !key || !value) {
    g_last_error = "config, key, and value must not be null";
    return REFADOPT_ERR_USAGE;
  }
  try {
    refadopt::RunConfig& c = config->config;
    const std::string k = key;
    const std::string v = value;
    auto parse_int = [&](const char* what) {
      std::size_t used = 0;
      int parsed = std::stoi(v, &used);
      if (used != v.size()) {
        throw refadopt::usage_error(std::string(what) + ": not an integer: \"" +
                                    v + "\"");
      }
      return parsed;
    };
    auto parse_double = [&](const char* what) {
      std::size_t used = 0;
      double parsed = std::stod(v, &used);
      if (used != v.size()) {
        throw refadopt::usage_error(std::string(what) + ": not a number: \"" +
                                    v + "\"");
      }
      return parsed;
    };

    if (k == "corpus") c.corpus_path = v;
    else if (k == "cache-dir") c.cache_dir = v;
    else if (k == "keywords") c.keywords_path = v;
    else if (k == "exclusions") c.exclusions_path = v;
    else if (k == "threshold-high") c.thresholds.high = parse_double(key);
    else if (k == "threshold-low") c.thresholds.low = parse_double(key);
    else if (k == "tmr-high") c.thresholds.tmr_high = parse_double(key);
    else if (k == "crystal-k") c.crystal_k = parse_int(key);
    else if (k == "jaccard-n") c.jaccard_n = parse_int(key);
    else if (k == "out") c.out_dir = v;
    else if (k == "offline") {
      if (v == "true") c.offline = true;
      else if (v == "false") c.offline = false;
      else throw refadopt::usage_error("offline: expected true or false");
    } else if (k == "min-similarity") {
      c.min_similarity = parse_double(key);
    } else if (k == "jobs") {
      c.jobs = parse_int(key);
    } else if (k == "seed") {
      c.seed = static_cast<std::uint32_t>(parse_int(key));
    } else {
      throw refadopt::usage_error("unknown config key: \"" + k + "\"");
    }
    return REFADOPT_OK;
  } catch (const refadopt::Error& e) {
    return record_error(e);
  } catch (const std::exception&) {
    g_last_error = std::string(key) + ": invalid value \"" + value + "\"";
    return REFADOPT_ERR_USAGE;
  }
}

refadopt_status refadopt_run_stage(const refadopt_config* config,
                                   const char* stage, const char** warnings) {
  if (!config || !stage) {
    g_last_error = "config and stage must not be null";
    return REFADOPT_ERR_USAGE;
  }
  try {
    std::vector<std::string> collected =
        refadopt::run_stage(config->config, stage);
    if (warnings) {
      g_last_warnings.clear();
      for (std::size_t i = 0; i < collected.size(); ++i) {
        if (i > 0) g_last_warnings += '\n';
        g_last_warnings += collected[i];
      }
      *warnings = g_last_warnings.c_str();
    }
    return REFADOPT_OK;
  } catch (const std::exception& e) {
    return record_error(e);
  }
}

}  // extern "C"
