#include "refadopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>

#include "refadopt/errors.hpp"

namespace refadopt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_g12(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string format_f2(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

double sample_std(const std::vector<double>& values, double mean) {
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / (static_cast<double>(values.size()) - 1.0));
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

RepoAggregate make_aggregate(const std::string& repo,
                             const std::vector<double>& files_per_commit,
                             const std::vector<double>& prompts_per_commit) {
  RepoAggregate row;
  row.repo = repo;
  row.commits = files_per_commit.size();
  for (double f : files_per_commit) row.files += static_cast<std::size_t>(f);
  for (double p : prompts_per_commit) row.prompts += static_cast<std::size_t>(p);
  row.avg_files_per_commit = mean_of(files_per_commit);
  row.avg_prompts_per_commit = mean_of(prompts_per_commit);
  if (row.commits >= 2) {
    row.has_std = true;
    row.std_files_per_commit = sample_std(files_per_commit, row.avg_files_per_commit);
    row.std_prompts_per_commit =
        sample_std(prompts_per_commit, row.avg_prompts_per_commit);
  }
  return row;
}

}  // namespace

std::string format_score(double value) { return format_g12(value); }

double canonical_score(double value) {
  return std::strtod(format_g12(value).c_str(), nullptr);
}

std::vector<RepoAggregate> aggregate_repos(
    const std::vector<Datapoint>& datapoints,
    const std::vector<CommitSummary>& commits) {
  // (owner/repo, sha) -> datapoint count
  std::map<std::pair<std::string, std::string>, std::size_t> files_by_commit;
  for (const CommitSummary& commit : commits) {
    files_by_commit[{commit.owner + "/" + commit.repo, commit.sha}] = 0;
  }
  for (const Datapoint& dp : datapoints) {
    auto key = std::make_pair(dp.owner + "/" + dp.repo, dp.sha);
    auto it = files_by_commit.find(key);
    if (it == files_by_commit.end()) {
      throw data_error("datapoint " + dp.refactoring_id +
                       " references a commit missing from the summary list");
    }
    ++it->second;
  }

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_repo;
  std::vector<double> all_files;
  std::vector<double> all_prompts;
  for (const CommitSummary& commit : commits) {
    std::string repo = commit.owner + "/" + commit.repo;
    auto files =
        static_cast<double>(files_by_commit.at({repo, commit.sha}));
    auto prompts = static_cast<double>(commit.total_prompts);
    per_repo[repo].first.push_back(files);
    per_repo[repo].second.push_back(prompts);
    all_files.push_back(files);
    all_prompts.push_back(prompts);
  }

  std::vector<RepoAggregate> rows;
  rows.reserve(per_repo.size() + 1);
  for (const auto& [repo, series] : per_repo) {
    rows.push_back(make_aggregate(repo, series.first, series.second));
  }
  rows.push_back(make_aggregate("total", all_files, all_prompts));
  return rows;
}

Histogram histogram(const std::string& metric, const std::vector<double>& scores,
                    int bins) {
  if (bins < 1) throw usage_error("histogram needs at least one bin");
  Histogram h;
  h.metric = metric;
  h.bins = bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double score : scores) {
    if (!(score >= 0.0 && score <= 1.0)) {
      throw data_error("histogram score out of [0,1]: " + format_g12(score));
    }
    auto idx = static_cast<std::size_t>(score * bins);
    idx = std::min(idx, static_cast<std::size_t>(bins) - 1);
    ++h.counts[idx];
  }
  return h;
}

std::string render_histogram_svg(const Histogram& h) {
  constexpr double width = 720, height = 440;
  constexpr double ml = 70, mt = 40, mr = 20, mb = 60;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;

  std::size_t max_count = 0;
  for (std::size_t c : h.counts) max_count = std::max(max_count, c);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" "
         "viewBox=\"0 0 720 440\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"440\" fill=\"#ffffff\"/>\n";

  const auto bins = static_cast<double>(h.bins);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] == 0 || max_count == 0) continue;
    double x = ml + (static_cast<double>(i) / bins) * pw + 1.0;
    double bar_width = pw / bins - 2.0;
    if (bar_width < 1.0) bar_width = 1.0;
    double bar_height = (static_cast<double>(h.counts[i]) /
                         static_cast<double>(max_count)) * ph;
    double y = mt + ph - bar_height;
    svg += "<rect x=\"" + format_f2(x) + "\" y=\"" + format_f2(y) +
           "\" width=\"" + format_f2(bar_width) + "\" height=\"" +
           format_f2(bar_height) + "\" fill=\"#4878a8\"/>\n";
  }

  svg += "<line x1=\"" + format_f2(ml) + "\" y1=\"" + format_f2(mt + ph) +
         "\" x2=\"" + format_f2(ml + pw) + "\" y2=\"" + format_f2(mt + ph) +
         "\" stroke=\"#000000\"/>\n";
  svg += "<line x1=\"" + format_f2(ml) + "\" y1=\"" + format_f2(mt) +
         "\" x2=\"" + format_f2(ml) + "\" y2=\"" + format_f2(mt + ph) +
         "\" stroke=\"#000000\"/>\n";

  auto text = [&](double x, double y, const std::string& anchor,
                  const std::string& content) {
    svg += "<text x=\"" + format_f2(x) + "\" y=\"" + format_f2(y) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"" +
           anchor + "\">" + content + "</text>\n";
  };

  text(ml, mt + ph + 20, "middle", "0");
  text(ml + pw / 2, mt + ph + 20, "middle", "0.5");
  text(ml + pw, mt + ph + 20, "middle", "1");
  text(ml + pw / 2, mt + ph + 44, "middle", h.metric);
  text(ml - 8, mt + ph + 4, "end", "0");
  if (max_count > 0) text(ml - 8, mt + 10, "end", std::to_string(max_count));
  text(ml - 8, mt - 14, "end", "count");
  svg += "</svg>\n";
  return svg;
}

std::string datapoints_to_csv(const std::vector<Datapoint>& datapoints) {
  std::string csv =
      "refactoring_id,repo,sha,file_path,block_id,prompt_index,total_prompts,"
      "levenshtein_similarity,jaccard_3gram,token_match_rate,crystal_bleu,"
      "adoption_class\n";
  for (const Datapoint& dp : datapoints) {
    csv += csv_field(dp.refactoring_id) + ',';
    csv += csv_field(dp.owner + "/" + dp.repo) + ',';
    csv += csv_field(dp.sha) + ',';
    csv += csv_field(dp.file.path) + ',';
    csv += csv_field(dp.suggestion.id) + ',';
    csv += std::to_string(dp.prompt_index) + ',';
    csv += std::to_string(dp.total_prompts) + ',';
    csv += format_score(canonical_score(dp.scores.levenshtein_similarity)) + ',';
    csv += format_score(canonical_score(dp.scores.jaccard_3gram)) + ',';
    csv += format_score(canonical_score(dp.scores.token_match_rate)) + ',';
    csv += format_score(canonical_score(dp.scores.crystal_bleu)) + ',';
    csv += std::string(adoption_level_name(dp.adoption_class)) + '\n';
  }
  return csv;
}

ordered_json datapoints_to_json(const std::vector<Datapoint>& datapoints) {
  ordered_json doc;
  doc["schema_version"] = 1;
  ordered_json rows = ordered_json::array();
  for (const Datapoint& dp : datapoints) {
    rows.push_back(
        {{"refactoring_id", dp.refactoring_id},
         {"repo", dp.owner + "/" + dp.repo},
         {"sha", dp.sha},
         {"file_path", dp.file.path},
         {"block_id", dp.suggestion.id},
         {"prompt_index", dp.prompt_index},
         {"total_prompts", dp.total_prompts},
         {"scores",
          {{"levenshtein_similarity",
            canonical_score(dp.scores.levenshtein_similarity)},
           {"jaccard_3gram", canonical_score(dp.scores.jaccard_3gram)},
           {"token_match_rate", canonical_score(dp.scores.token_match_rate)},
           {"crystal_bleu", canonical_score(dp.scores.crystal_bleu)}}},
         {"adoption_class", std::string(adoption_level_name(dp.adoption_class))}});
  }
  doc["datapoints"] = std::move(rows);
  return doc;
}

std::vector<Datapoint> datapoints_from_json(const json& doc) {
  const json* rows = nullptr;
  if (doc.is_array()) {
    rows = &doc;
  } else if (doc.is_object() && doc.contains("datapoints")) {
    rows = &doc.at("datapoints");
    if (!rows->is_array()) throw schema_error("datapoints: expected an array");
  } else {
    throw schema_error("datapoint export: expected an array or wrapper object");
  }

  auto get_double = [](const json& obj, const std::string& ctx, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
      throw schema_error(ctx + "." + key + ": expected a number");
    }
    double v = it->get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw schema_error(ctx + "." + key + ": score outside [0,1]");
    }
    return v;
  };
  auto get_string = [](const json& obj, const std::string& ctx, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      throw schema_error(ctx + "." + key + ": expected a string");
    }
    return it->get<std::string>();
  };
  auto get_int = [](const json& obj, const std::string& ctx, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer() || it->get<long long>() < 1) {
      throw schema_error(ctx + "." + key + ": expected a positive integer");
    }
    return it->get<int>();
  };

  std::vector<Datapoint> datapoints;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const std::string ctx = "datapoints[" + std::to_string(i) + "]";
    const json& row = (*rows)[i];
    if (!row.is_object()) throw schema_error(ctx + ": expected an object");

    Datapoint dp;
    dp.refactoring_id = get_string(row, ctx, "refactoring_id");
    if (!ids.insert(dp.refactoring_id).second) {
      throw schema_error(ctx + ".refactoring_id: duplicate \"" +
                         dp.refactoring_id + "\"");
    }
    std::string repo = get_string(row, ctx, "repo");
    auto slash = repo.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == repo.size()) {
      throw schema_error(ctx + ".repo: expected \"owner/name\"");
    }
    dp.owner = repo.substr(0, slash);
    dp.repo = repo.substr(slash + 1);
    dp.sha = get_string(row, ctx, "sha");
    dp.file.path = get_string(row, ctx, "file_path");
    dp.suggestion.id = get_string(row, ctx, "block_id");
    dp.prompt_index = get_int(row, ctx, "prompt_index");
    dp.total_prompts = get_int(row, ctx, "total_prompts");
    if (dp.prompt_index > dp.total_prompts) {
      throw schema_error(ctx + ".prompt_index: exceeds total_prompts");
    }
    auto scores_it = row.find("scores");
    if (scores_it == row.end() || !scores_it->is_object()) {
      throw schema_error(ctx + ".scores: expected an object");
    }
    const std::string sctx = ctx + ".scores";
    dp.scores.levenshtein_similarity =
        get_double(*scores_it, sctx, "levenshtein_similarity");
    dp.scores.jaccard_3gram = get_double(*scores_it, sctx, "jaccard_3gram");
    dp.scores.token_match_rate = get_double(*scores_it, sctx, "token_match_rate");
    dp.scores.crystal_bleu = get_double(*scores_it, sctx, "crystal_bleu");
    dp.adoption_class =
        adoption_level_from_name(get_string(row, ctx, "adoption_class"));
    datapoints.push_back(std::move(dp));
  }
  return datapoints;
}

std::string aggregates_to_csv(const std::vector<RepoAggregate>& rows) {
  std::string csv =
      "repo,commits,files,prompts,avg_files_per_commit,std_files_per_commit,"
      "avg_prompts_per_commit,std_prompts_per_commit\n";
  for (const RepoAggregate& row : rows) {
    csv += csv_field(row.repo) + ',';
    csv += std::to_string(row.commits) + ',';
    csv += std::to_string(row.files) + ',';
    csv += std::to_string(row.prompts) + ',';
    csv += format_score(row.avg_files_per_commit) + ',';
    csv += (row.has_std ? format_score(row.std_files_per_commit)
                        : std::string("NA")) +
           ',';
    csv += format_score(row.avg_prompts_per_commit) + ',';
    csv += (row.has_std ? format_score(row.std_prompts_per_commit)
                        : std::string("NA")) +
           '\n';
  }
  return csv;
}

std::string prompt_positions_to_csv(const std::vector<PromptPositionRow>& rows) {
  std::string csv = "total_prompts,prompt_index,count\n";
  for (const PromptPositionRow& row : rows) {
    csv += std::to_string(row.total_prompts) + ',' +
           std::to_string(row.prompt_index) + ',' + std::to_string(row.count) +
           '\n';
  }
  return csv;
}

std::vector<std::pair<AdoptionLevel, std::size_t>> classification_counts(
    const std::vector<Datapoint>& datapoints) {
  std::vector<std::pair<AdoptionLevel, std::size_t>> counts = {
      {AdoptionLevel::Full, 0},
      {AdoptionLevel::Selective, 0},
      {AdoptionLevel::MinorModification, 0},
      {AdoptionLevel::Restructured, 0},
      {AdoptionLevel::MajorModification, 0},
  };
  for (const Datapoint& dp : datapoints) {
    counts[static_cast<std::size_t>(dp.adoption_class)].second += 1;
  }
  return counts;
}

std::string classification_counts_to_csv(
    const std::vector<std::pair<AdoptionLevel, std::size_t>>& counts) {
  std::string csv = "adoption_class,count\n";
  for (const auto& [level, count] : counts) {
    csv += std::string(adoption_level_name(level)) + ',' + std::to_string(count) +
           '\n';
  }
  return csv;
}

std::vector<std::string> modification_review_subset(
    const std::vector<Datapoint>& datapoints, std::size_t extra_full,
    std::uint32_t seed) {
  std::vector<std::string> selected;
  std::vector<std::size_t> full_indices;
  for (std::size_t i = 0; i < datapoints.size(); ++i) {
    if (datapoints[i].scores.token_match_rate < 1.0) {
      selected.push_back(datapoints[i].refactoring_id);
    } else {
      full_indices.push_back(i);
    }
  }

  if (extra_full > 0 && !full_indices.empty()) {
    // Hand-rolled Fisher-Yates: mt19937's output stream is pinned by the
    // standard, while std::shuffle's use of it is not.
    std::mt19937 gen(seed);
    for (std::size_t i = full_indices.size() - 1; i > 0; --i) {
      std::size_t j = gen() % (i + 1);
      std::swap(full_indices[i], full_indices[j]);
    }
    std::size_t take = std::min(extra_full, full_indices.size());
    for (std::size_t i = 0; i < take; ++i) {
      selected.push_back(datapoints[full_indices[i]].refactoring_id);
    }
  }
  return selected;
}

}  // namespace refadopt
