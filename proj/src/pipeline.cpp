#include "refadopt/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "refadopt/conversation.hpp"
#include "refadopt/corpus.hpp"
#include "refadopt/diff.hpp"
#include "refadopt/errors.hpp"
#include "refadopt/github.hpp"
#include "refadopt/keywords.hpp"
#include "refadopt/mapping.hpp"
#include "refadopt/report.hpp"
#include "refadopt/similarity.hpp"

namespace refadopt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kFilteredFile = "filtered.json";
constexpr const char* kFetchedFile = "fetched.json";
constexpr const char* kExtractedFile = "extracted.json";
constexpr const char* kMappedFile = "mapped.json";
constexpr const char* kScoredFile = "scored.json";
constexpr const char* kClassifiedFile = "classified.json";

std::string out_path(const RunConfig& config, const char* name) {
  return (std::filesystem::path(config.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
}

std::string commit_label(const std::string& owner, const std::string& repo,
                         const std::string& sha) {
  return owner + "/" + repo + "@" + sha;
}

// Every stage reports errors as "<stage>: <what>".
template <typename Fn>
std::vector<std::string> with_stage_context(const char* stage, Fn&& body) {
  try {
    std::vector<std::string> warnings;
    body(warnings);
    return warnings;
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Data, std::string(stage) + ": " + e.what());
  }
}

void run_parallel(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& work) {
  auto workers = static_cast<std::size_t>(jobs < 1 ? 1 : jobs);
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      work(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (std::thread& t : pool) t.join();
}

KeywordList load_keywords(const RunConfig& config) {
  return config.keywords_path.empty() ? KeywordList::defaults()
                                      : KeywordList::load(config.keywords_path);
}

ExclusionRules load_exclusions(const RunConfig& config) {
  return config.exclusions_path.empty() ? ExclusionRules::defaults()
                                        : ExclusionRules::load(config.exclusions_path);
}

// ---- stage file schemas ----------------------------------------------------

struct ExtractedCommit {
  std::string owner;
  std::string repo;
  std::string sha;
  std::string message;
  std::string url;
  int total_prompts = 0;
  std::vector<ReconstructedFile> files;
  std::vector<CodeBlock> blocks;
};

ordered_json file_to_json(const ReconstructedFile& file) {
  return {{"path", file.path},
          {"before", file.before_changes},
          {"after", file.after_changes},
          {"added", file.added_lines}};
}

ReconstructedFile file_from_json(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw schema_error(ctx + ": expected an object");
  ReconstructedFile file;
  file.path = j.at("path").get<std::string>();
  file.before_changes = j.at("before").get<std::string>();
  file.after_changes = j.at("after").get<std::string>();
  for (const json& line : j.at("added")) {
    file.added_lines.push_back(line.get<std::string>());
  }
  return file;
}

ordered_json block_to_json(const CodeBlock& block) {
  return {{"id", block.id},
          {"prompt_index", block.prompt_index},
          {"block_index", block.block_index},
          {"info", block.info},
          {"code", block.code}};
}

CodeBlock block_from_json(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw schema_error(ctx + ": expected an object");
  CodeBlock block;
  block.id = j.at("id").get<std::string>();
  block.prompt_index = j.at("prompt_index").get<int>();
  block.block_index = j.at("block_index").get<int>();
  block.info = j.at("info").get<std::string>();
  block.code = j.at("code").get<std::string>();
  return block;
}

void save_extracted(const std::vector<ExtractedCommit>& commits,
                    const std::string& path) {
  ordered_json doc;
  doc["schema_version"] = 1;
  ordered_json rows = ordered_json::array();
  for (const ExtractedCommit& commit : commits) {
    ordered_json files = ordered_json::array();
    for (const ReconstructedFile& file : commit.files) {
      files.push_back(file_to_json(file));
    }
    ordered_json blocks = ordered_json::array();
    for (const CodeBlock& block : commit.blocks) {
      blocks.push_back(block_to_json(block));
    }
    rows.push_back({{"owner", commit.owner},
                    {"repo", commit.repo},
                    {"sha", commit.sha},
                    {"message", commit.message},
                    {"url", commit.url},
                    {"total_prompts", commit.total_prompts},
                    {"files", std::move(files)},
                    {"blocks", std::move(blocks)}});
  }
  doc["commits"] = std::move(rows);
  write_text_file(path, doc.dump(2) + "\n");
}

std::vector<ExtractedCommit> load_extracted(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
  std::vector<ExtractedCommit> commits;
  const json& rows = doc.at("commits");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ctx = "commits[" + std::to_string(i) + "]";
    const json& row = rows[i];
    ExtractedCommit commit;
    commit.owner = row.at("owner").get<std::string>();
    commit.repo = row.at("repo").get<std::string>();
    commit.sha = row.at("sha").get<std::string>();
    commit.message = row.at("message").get<std::string>();
    commit.url = row.at("url").get<std::string>();
    commit.total_prompts = row.at("total_prompts").get<int>();
    const json& files = row.at("files");
    for (std::size_t f = 0; f < files.size(); ++f) {
      commit.files.push_back(
          file_from_json(files[f], ctx + ".files[" + std::to_string(f) + "]"));
    }
    const json& blocks = row.at("blocks");
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      commit.blocks.push_back(
          block_from_json(blocks[b], ctx + ".blocks[" + std::to_string(b) + "]"));
    }
    commits.push_back(std::move(commit));
  }
  return commits;
}

struct StageData {
  std::vector<CommitSummary> commits;
  std::vector<Datapoint> datapoints;
  bool has_scores = false;
  bool has_classes = false;
};

ordered_json datapoint_to_stage_json(const Datapoint& dp, bool with_scores,
                                     bool with_class) {
  ordered_json row = {{"refactoring_id", dp.refactoring_id},
                      {"owner", dp.owner},
                      {"repo", dp.repo},
                      {"sha", dp.sha},
                      {"file", file_to_json(dp.file)},
                      {"suggestion", block_to_json(dp.suggestion)},
                      {"mapping_similarity", dp.mapping_similarity},
                      {"low_confidence", dp.low_confidence},
                      {"prompt_index", dp.prompt_index},
                      {"total_prompts", dp.total_prompts}};
  if (with_scores) {
    row["scores"] = {
        {"levenshtein_similarity", dp.scores.levenshtein_similarity},
        {"jaccard_3gram", dp.scores.jaccard_3gram},
        {"token_match_rate", dp.scores.token_match_rate},
        {"crystal_bleu", dp.scores.crystal_bleu}};
  }
  if (with_class) {
    row["adoption_class"] = std::string(adoption_level_name(dp.adoption_class));
  }
  return row;
}

void save_stage_data(const StageData& data, const RunConfig& config,
                     const char* name) {
  ordered_json doc;
  doc["schema_version"] = 1;
  if (data.has_scores) {
    doc["scoring"] = {{"crystal_k", config.crystal_k},
                      {"jaccard_n", config.jaccard_n}};
  }
  ordered_json commits = ordered_json::array();
  for (const CommitSummary& commit : data.commits) {
    commits.push_back({{"owner", commit.owner},
                       {"repo", commit.repo},
                       {"sha", commit.sha},
                       {"total_prompts", commit.total_prompts}});
  }
  doc["commits"] = std::move(commits);
  ordered_json rows = ordered_json::array();
  for (const Datapoint& dp : data.datapoints) {
    rows.push_back(datapoint_to_stage_json(dp, data.has_scores, data.has_classes));
  }
  doc["datapoints"] = std::move(rows);
  write_text_file(out_path(config, name), doc.dump(2) + "\n");
}

StageData load_stage_data(const RunConfig& config, const char* name) {
  const std::string path = out_path(config, name);
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }

  StageData data;
  const json& commits = doc.at("commits");
  for (const json& row : commits) {
    CommitSummary summary;
    summary.owner = row.at("owner").get<std::string>();
    summary.repo = row.at("repo").get<std::string>();
    summary.sha = row.at("sha").get<std::string>();
    summary.total_prompts = row.at("total_prompts").get<int>();
    data.commits.push_back(std::move(summary));
  }

  const json& rows = doc.at("datapoints");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ctx = "datapoints[" + std::to_string(i) + "]";
    const json& row = rows[i];
    Datapoint dp;
    dp.refactoring_id = row.at("refactoring_id").get<std::string>();
    dp.owner = row.at("owner").get<std::string>();
    dp.repo = row.at("repo").get<std::string>();
    dp.sha = row.at("sha").get<std::string>();
    dp.file = file_from_json(row.at("file"), ctx + ".file");
    dp.suggestion = block_from_json(row.at("suggestion"), ctx + ".suggestion");
    dp.mapping_similarity = row.at("mapping_similarity").get<double>();
    dp.low_confidence = row.at("low_confidence").get<bool>();
    dp.prompt_index = row.at("prompt_index").get<int>();
    dp.total_prompts = row.at("total_prompts").get<int>();
    if (row.contains("scores")) {
      const json& scores = row.at("scores");
      dp.scores.levenshtein_similarity =
          scores.at("levenshtein_similarity").get<double>();
      dp.scores.jaccard_3gram = scores.at("jaccard_3gram").get<double>();
      dp.scores.token_match_rate = scores.at("token_match_rate").get<double>();
      dp.scores.crystal_bleu = scores.at("crystal_bleu").get<double>();
      data.has_scores = true;
    }
    if (row.contains("adoption_class")) {
      dp.adoption_class =
          adoption_level_from_name(row.at("adoption_class").get<std::string>());
      data.has_classes = true;
    }
    data.datapoints.push_back(std::move(dp));
  }
  return data;
}

}  // namespace

void RunConfig::validate() const {
  if (jaccard_n < 1) throw usage_error("--jaccard-n must be at least 1");
  if (crystal_k < 1) throw usage_error("--crystal-k must be at least 1");
  if (jobs < 1) throw usage_error("--jobs must be at least 1");
  if (out_dir.empty()) throw usage_error("--out must not be empty");
  thresholds.validate();
  if (min_similarity && !(*min_similarity >= 0.0 && *min_similarity <= 1.0)) {
    throw usage_error("--min-similarity must lie in [0,1]");
  }
}

std::vector<std::string> stage_filter(const RunConfig& config) {
  return with_stage_context("filter", [&](std::vector<std::string>& warnings) {
    config.validate();
    if (config.corpus_path.empty()) throw usage_error("--corpus is required");

    Corpus corpus = dedupe_commits(load_corpus(config.corpus_path));
    KeywordList keywords = load_keywords(config);

    Corpus kept;
    for (const CommitRecord& commit : corpus.commits) {
      if (classify_message(commit.message, keywords).is_refactoring) {
        kept.commits.push_back(commit);
      }
    }
    if (kept.commits.empty()) {
      warnings.push_back("filter: no refactoring commits in corpus");
    }

    ensure_out_dir(config);
    save_corpus(kept, out_path(config, kFilteredFile));
  });
}

std::vector<std::string> stage_fetch(const RunConfig& config) {
  return with_stage_context("fetch", [&](std::vector<std::string>& warnings) {
    config.validate();
    Corpus corpus = load_corpus(out_path(config, kFilteredFile));

    // Commits that already ship patches are considered pre-fetched.
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < corpus.commits.size(); ++i) {
      if (corpus.commits[i].patches.empty()) pending.push_back(i);
    }

    if (!pending.empty()) {
      GithubOptions options;
      options.cache_dir = config.cache_dir;
      options.offline = config.offline;
      GithubClient client(options,
                          config.offline ? nullptr : make_https_transport());

      std::vector<GithubClient::Key> keys;
      keys.reserve(pending.size());
      for (std::size_t i : pending) {
        const CommitRecord& commit = corpus.commits[i];
        keys.push_back({commit.owner, commit.repo, commit.sha});
      }
      std::vector<FetchOutcome> outcomes = client.fetch_many(keys);

      for (std::size_t k = 0; k < pending.size(); ++k) {
        CommitRecord& commit = corpus.commits[pending[k]];
        const FetchOutcome& outcome = outcomes[k];
        const std::string label =
            commit_label(commit.owner, commit.repo, commit.sha);
        if (!outcome.valid) {
          commit.valid_url = false;
          warnings.push_back("fetch: " + label + ": not found (404), dropped");
          continue;
        }
        if (outcome.commit.truncated) {
          commit.valid_url = false;
          warnings.push_back("fetch: " + label +
                             ": file list truncated by the API, dropped");
          continue;
        }
        for (const FetchedFile& file : outcome.commit.files) {
          if (!file.has_patch) {
            warnings.push_back("fetch: " + label + ": no patch for " +
                               file.path + " (binary or oversize), skipped");
            continue;
          }
          commit.patches.push_back({file.path, file.patch});
        }
      }
      corpus = dedupe_commits(corpus);
    }

    ensure_out_dir(config);
    save_corpus(corpus, out_path(config, kFetchedFile));
  });
}

std::vector<std::string> stage_extract(const RunConfig& config) {
  return with_stage_context("extract", [&](std::vector<std::string>& warnings) {
    config.validate();
    Corpus corpus = load_corpus(out_path(config, kFetchedFile));
    ExclusionRules exclusions = load_exclusions(config);

    std::vector<ExtractedCommit> extracted;
    for (const CommitRecord& commit : corpus.commits) {
      const std::string label = commit_label(commit.owner, commit.repo, commit.sha);

      std::vector<CodeBlock> blocks = extract_code_blocks(commit.conversation);
      if (blocks.empty()) {
        warnings.push_back("extract: " + label +
                           ": conversation has no code blocks, commit dropped");
        continue;
      }

      ExtractedCommit out;
      out.owner = commit.owner;
      out.repo = commit.repo;
      out.sha = commit.sha;
      out.message = commit.message;
      out.url = commit.conversation.url;
      out.total_prompts = total_prompts(commit.conversation);
      out.blocks = std::move(blocks);

      for (const PatchEntry& patch : commit.patches) {
        if (is_excluded(patch.path, exclusions)) continue;
        if (patch.diff_text.empty()) {
          warnings.push_back("extract: " + label + ": empty patch for " +
                             patch.path + ", skipped");
          continue;
        }
        FilePatch parsed;
        try {
          parsed = parse_file_patch(patch.path, patch.diff_text);
        } catch (const Error& e) {
          throw Error(e.kind(), label + ": " + patch.path + ": " + e.what());
        }
        out.files.push_back(reconstruct(parsed));
      }

      if (out.files.empty()) {
        warnings.push_back("extract: " + label +
                           ": no analyzable files after exclusions, commit dropped");
        continue;
      }
      extracted.push_back(std::move(out));
    }

    ensure_out_dir(config);
    save_extracted(extracted, out_path(config, kExtractedFile));
  });
}

std::vector<std::string> stage_map(const RunConfig& config) {
  return with_stage_context("map", [&](std::vector<std::string>& warnings) {
    config.validate();
    std::vector<ExtractedCommit> commits =
        load_extracted(out_path(config, kExtractedFile));

    StageData data;
    for (const ExtractedCommit& commit : commits) {
      const std::string label = commit_label(commit.owner, commit.repo, commit.sha);

      std::vector<MappingResult> results;
      try {
        results = map_files(commit.files, commit.blocks, commit.total_prompts,
                            config.min_similarity, config.jobs);
      } catch (const Error& e) {
        throw Error(e.kind(), label + ": " + e.what());
      }

      std::map<std::string, const CodeBlock*> by_id;
      for (const CodeBlock& block : commit.blocks) by_id[block.id] = &block;

      for (std::size_t i = 0; i < results.size(); ++i) {
        const MappingResult& result = results[i];
        Datapoint dp;
        dp.refactoring_id =
            make_refactoring_id(commit.owner, commit.repo, commit.sha,
                                static_cast<int>(i) + 1);
        dp.owner = commit.owner;
        dp.repo = commit.repo;
        dp.sha = commit.sha;
        dp.file = commit.files[i];
        dp.suggestion = *by_id.at(result.chosen_block_id);
        dp.mapping_similarity = result.similarity;
        dp.low_confidence = result.low_confidence;
        dp.prompt_index = result.prompt_index;
        dp.total_prompts = result.total_prompts;
        if (dp.low_confidence) {
          warnings.push_back("map: " + dp.refactoring_id +
                             ": best similarity below --min-similarity");
        }
        data.datapoints.push_back(std::move(dp));
      }
      data.commits.push_back(
          {commit.owner, commit.repo, commit.sha, commit.total_prompts});
    }

    ensure_out_dir(config);
    save_stage_data(data, config, kMappedFile);
  });
}

std::vector<std::string> stage_score(const RunConfig& config) {
  return with_stage_context("score", [&](std::vector<std::string>& warnings) {
    config.validate();
    StageData data = load_stage_data(config, kMappedFile);

    if (data.datapoints.empty()) {
      warnings.push_back("score: no datapoints to score");
    } else {
      std::vector<std::string> corpus_texts;
      corpus_texts.reserve(data.datapoints.size() * 2);
      for (const Datapoint& dp : data.datapoints) {
        corpus_texts.push_back(dp.suggestion.code);
        corpus_texts.push_back(dp.file.after_changes);
      }
      TrivialNgramSet trivial = TrivialNgramSet::build(
          corpus_texts, static_cast<std::size_t>(config.crystal_k));

      run_parallel(data.datapoints.size(), config.jobs, [&](std::size_t i) {
        Datapoint& dp = data.datapoints[i];
        MetricScores scores = score_pair(dp.file.after_changes,
                                         dp.suggestion.code, trivial,
                                         config.jaccard_n);
        dp.scores.levenshtein_similarity =
            canonical_score(scores.levenshtein_similarity);
        dp.scores.jaccard_3gram = canonical_score(scores.jaccard_3gram);
        dp.scores.token_match_rate = canonical_score(scores.token_match_rate);
        dp.scores.crystal_bleu = canonical_score(scores.crystal_bleu);
      });
    }

    data.has_scores = true;
    save_stage_data(data, config, kScoredFile);
  });
}

std::vector<std::string> stage_classify(const RunConfig& config) {
  return with_stage_context("classify", [&]([[maybe_unused]] std::vector<std::string>& warnings) {
    config.validate();
    StageData data = load_stage_data(config, kScoredFile);
    if (!data.has_scores && !data.datapoints.empty()) {
      throw schema_error("input has no scores; run the score stage first");
    }
    for (Datapoint& dp : data.datapoints) {
      dp.adoption_class = classify(dp.scores, config.thresholds);
    }
    data.has_scores = true;
    data.has_classes = true;
    save_stage_data(data, config, kClassifiedFile);
  });
}

std::vector<std::string> stage_report(const RunConfig& config) {
  return with_stage_context("report", [&](std::vector<std::string>& warnings) {
    config.validate();
    StageData data = load_stage_data(config, kClassifiedFile);
    if (!data.has_classes && !data.datapoints.empty()) {
      throw schema_error("input has no adoption classes; run classify first");
    }
    if (data.datapoints.empty()) {
      warnings.push_back("report: no datapoints; artifacts will be empty");
    }

    ensure_out_dir(config);
    const std::vector<Datapoint>& dps = data.datapoints;

    write_text_file(out_path(config, "datapoints.csv"), datapoints_to_csv(dps));
    write_text_file(out_path(config, "datapoints.json"),
                    datapoints_to_json(dps).dump(2) + "\n");

    std::vector<RepoAggregate> aggregates = aggregate_repos(dps, data.commits);
    write_text_file(out_path(config, "aggregates.csv"),
                    aggregates_to_csv(aggregates));

    std::vector<MappingResult> positions;
    positions.reserve(dps.size());
    for (const Datapoint& dp : dps) {
      MappingResult r;
      r.prompt_index = dp.prompt_index;
      r.total_prompts = dp.total_prompts;
      positions.push_back(r);
    }
    write_text_file(out_path(config, "prompt_positions.csv"),
                    prompt_positions_to_csv(prompt_position_table(positions)));

    auto counts = classification_counts(dps);
    write_text_file(out_path(config, "classification_counts.csv"),
                    classification_counts_to_csv(counts));

    struct MetricSeries {
      const char* file;
      const char* name;
      std::vector<double> values;
    };
    std::vector<MetricSeries> series = {
        {"hist_levenshtein.svg", "levenshtein_similarity", {}},
        {"hist_jaccard.svg", "jaccard_3gram", {}},
        {"hist_token_match.svg", "token_match_rate", {}},
        {"hist_crystal_bleu.svg", "crystal_bleu", {}},
    };
    for (const Datapoint& dp : dps) {
      series[0].values.push_back(dp.scores.levenshtein_similarity);
      series[1].values.push_back(dp.scores.jaccard_3gram);
      series[2].values.push_back(dp.scores.token_match_rate);
      series[3].values.push_back(dp.scores.crystal_bleu);
    }

    ordered_json histogram_counts;
    for (const MetricSeries& metric : series) {
      Histogram h = histogram(metric.name, metric.values);
      write_text_file(out_path(config, metric.file), render_histogram_svg(h));
      histogram_counts[metric.name] = h.counts;
    }

    std::vector<std::string> subset =
        modification_review_subset(dps, 0, config.seed);
    std::string subset_csv = "refactoring_id\n";
    for (const std::string& id : subset) subset_csv += id + '\n';
    write_text_file(out_path(config, "review_subset.csv"), subset_csv);

    ordered_json class_json;
    for (const auto& [level, count] : counts) {
      class_json[std::string(adoption_level_name(level))] = count;
    }
    ordered_json summary;
    summary["schema_version"] = 1;
    summary["commits"] = data.commits.size();
    summary["datapoints"] = dps.size();
    summary["repos"] = aggregates.empty() ? 0 : aggregates.size() - 1;
    summary["classification"] = std::move(class_json);
    summary["histograms"] = std::move(histogram_counts);
    summary["thresholds"] = {{"high", config.thresholds.high},
                             {"low", config.thresholds.low},
                             {"tmr_high", config.thresholds.tmr_high}};
    summary["crystal_k"] = config.crystal_k;
    summary["jaccard_n"] = config.jaccard_n;
    summary["seed"] = config.seed;
    write_text_file(out_path(config, "summary.json"), summary.dump(2) + "\n");
  });
}

std::vector<std::string> run_pipeline(const RunConfig& config) {
  std::vector<std::string> warnings;
  for (auto stage : {stage_filter, stage_fetch, stage_extract, stage_map,
                     stage_score, stage_classify, stage_report}) {
    std::vector<std::string> stage_warnings = stage(config);
    warnings.insert(warnings.end(), stage_warnings.begin(), stage_warnings.end());
  }
  return warnings;
}

std::vector<std::string> run_stage(const RunConfig& config,
                                   const std::string& stage_name) {
  if (stage_name == "filter") return stage_filter(config);
  if (stage_name == "fetch") return stage_fetch(config);
  if (stage_name == "extract") return stage_extract(config);
  if (stage_name == "map") return stage_map(config);
  if (stage_name == "score") return stage_score(config);
  if (stage_name == "classify") return stage_classify(config);
  if (stage_name == "report") return stage_report(config);
  if (stage_name == "run") return run_pipeline(config);
  throw usage_error("unknown stage: \"" + stage_name + "\"");
}

}  // namespace refadopt
