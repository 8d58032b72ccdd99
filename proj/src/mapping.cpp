#include "refadopt/mapping.hpp"

#include <atomic>
#include <map>
#include <thread>

#include "refadopt/errors.hpp"
#include "refadopt/similarity.hpp"

namespace refadopt {
namespace {

MappingResult map_one(const ReconstructedFile& file,
                      const std::vector<CodeBlock>& blocks, int total_prompts,
                      const std::optional<double>& min_similarity) {
  const CodeBlock* chosen = nullptr;
  double best = -1.0;
  for (const CodeBlock& block : blocks) {
    double sim = normalized_levenshtein_similarity(file.after_changes, block.code);
    bool better = sim > best;
    bool tied = sim == best && chosen != nullptr &&
                std::pair(block.prompt_index, block.block_index) <
                    std::pair(chosen->prompt_index, chosen->block_index);
    if (better || tied) {
      best = sim;
      chosen = &block;
    }
  }

  MappingResult result;
  result.file_path = file.path;
  result.chosen_block_id = chosen->id;
  result.similarity = best;
  result.prompt_index = chosen->prompt_index;
  result.total_prompts = total_prompts;
  result.relative_position =
      static_cast<double>(chosen->prompt_index) / total_prompts;
  result.low_confidence = min_similarity.has_value() && best < *min_similarity;
  return result;
}

}  // namespace

std::vector<MappingResult> map_files(const std::vector<ReconstructedFile>& files,
                                     const std::vector<CodeBlock>& blocks,
                                     int total_prompts,
                                     std::optional<double> min_similarity,
                                     int jobs) {
  if (blocks.empty()) throw data_error("mapping requires at least one code block");
  if (total_prompts < 1) throw data_error("mapping requires at least one prompt");
  for (const CodeBlock& block : blocks) {
    if (block.prompt_index < 1 || block.prompt_index > total_prompts) {
      throw data_error("block " + block.id + " has prompt index " +
                       std::to_string(block.prompt_index) + " outside 1.." +
                       std::to_string(total_prompts));
    }
  }

  std::vector<MappingResult> results(files.size());
  auto worker_count = static_cast<std::size_t>(jobs < 1 ? 1 : jobs);
  worker_count = std::min(worker_count, files.size());

  if (worker_count <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) {
      results[i] = map_one(files[i], blocks, total_prompts, min_similarity);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) break;
      results[i] = map_one(files[i], blocks, total_prompts, min_similarity);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  return results;
}

std::vector<PromptPositionRow> prompt_position_table(
    const std::vector<MappingResult>& results) {
  std::map<std::pair<int, int>, std::size_t> counts;
  for (const MappingResult& r : results) {
    ++counts[{r.total_prompts, r.prompt_index}];
  }
  std::vector<PromptPositionRow> rows;
  rows.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    rows.push_back({key.first, key.second, count});
  }
  return rows;
}

}  // namespace refadopt
