#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "refadopt/corpus.hpp"
#include "refadopt/mapping.hpp"

namespace refadopt {

// Exports carry 12 significant digits, so scores are pinned to that
// precision the moment they are computed; exported and re-imported values
// are then bit-identical to the in-memory ones.
std::string format_score(double value);
double canonical_score(double value);

struct CommitSummary {
  std::string owner;
  std::string repo;
  std::string sha;
  int total_prompts = 0;
};

struct RepoAggregate {
  std::string repo;  // "owner/repo"; the appended total row uses "total"
  std::size_t commits = 0;
  std::size_t files = 0;
  std::size_t prompts = 0;
  double avg_files_per_commit = 0.0;
  double avg_prompts_per_commit = 0.0;
  bool has_std = false;  // sample std needs n >= 2; single-commit repos report NA
  double std_files_per_commit = 0.0;
  double std_prompts_per_commit = 0.0;
};

// Per-repo counts and per-commit averages plus a total row pooled over all
// commits. Files are datapoints; a commit's prompt count is its
// conversation's total_prompts.
std::vector<RepoAggregate> aggregate_repos(
    const std::vector<Datapoint>& datapoints,
    const std::vector<CommitSummary>& commits);

struct Histogram {
  std::string metric;
  int bins = 20;
  std::vector<std::size_t> counts;  // uniform bins over [0,1], last bin closed
};

// Bin index is min(floor(score * bins), bins - 1); scores outside [0,1] are
// rejected.
Histogram histogram(const std::string& metric, const std::vector<double>& scores,
                    int bins = 20);

// Self-contained SVG 1.1 bar chart; byte-deterministic for equal input.
std::string render_histogram_svg(const Histogram& h);

std::string datapoints_to_csv(const std::vector<Datapoint>& datapoints);
nlohmann::ordered_json datapoints_to_json(const std::vector<Datapoint>& datapoints);

// Reads the export schema back; only exported fields are populated (code and
// file texts do not travel through exports). Duplicate refactoring_ids are a
// schema violation.
std::vector<Datapoint> datapoints_from_json(const nlohmann::json& doc);

std::string aggregates_to_csv(const std::vector<RepoAggregate>& rows);
std::string prompt_positions_to_csv(const std::vector<PromptPositionRow>& rows);

// Counts per adoption level; all five levels appear, in enum order.
std::vector<std::pair<AdoptionLevel, std::size_t>> classification_counts(
    const std::vector<Datapoint>& datapoints);
std::string classification_counts_to_csv(
    const std::vector<std::pair<AdoptionLevel, std::size_t>>& counts);

// The review-subset rule: every datapoint whose token match rate is below
// 1.0, in input order, plus `extra_full` seeded-random picks from the rest.
std::vector<std::string> modification_review_subset(
    const std::vector<Datapoint>& datapoints, std::size_t extra_full,
    std::uint32_t seed);

}  // namespace refadopt
