#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "refadopt/adoption.hpp"

namespace refadopt {

struct RunConfig {
  std::string corpus_path;
  std::string cache_dir = ".refadopt-cache";
  std::string keywords_path;    // empty: the shipped 25-keyword list
  std::string exclusions_path;  // empty: the shipped exclusion rules
  ClassifierThresholds thresholds;
  int crystal_k = 500;
  int jaccard_n = 3;
  std::string out_dir = "out";
  bool offline = false;
  std::optional<double> min_similarity;
  int jobs = 1;
  std::uint32_t seed = 0;

  void validate() const;
};

// Stage outputs land in out_dir as JSON (filtered.json, fetched.json,
// extracted.json, mapped.json, scored.json, classified.json) and the report
// artifacts; each stage reads only its predecessor's file, so the composed
// run equals the staged runs. Returned strings are warnings for stderr.
std::vector<std::string> stage_filter(const RunConfig& config);
std::vector<std::string> stage_fetch(const RunConfig& config);
std::vector<std::string> stage_extract(const RunConfig& config);
std::vector<std::string> stage_map(const RunConfig& config);
std::vector<std::string> stage_score(const RunConfig& config);
std::vector<std::string> stage_classify(const RunConfig& config);
std::vector<std::string> stage_report(const RunConfig& config);

// filter -> fetch -> extract -> map -> score -> classify -> report.
std::vector<std::string> run_pipeline(const RunConfig& config);

// Dispatches "filter" ... "report" or "run".
std::vector<std::string> run_stage(const RunConfig& config,
                                   const std::string& stage_name);

}  // namespace refadopt
