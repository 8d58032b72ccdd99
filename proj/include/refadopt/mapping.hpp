#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refadopt/conversation.hpp"
#include "refadopt/diff.hpp"

namespace refadopt {

struct MappingResult {
  std::string file_path;
  std::string chosen_block_id;
  double similarity = 0.0;
  int prompt_index = 0;
  int total_prompts = 0;
  double relative_position = 0.0;  // prompt_index / total_prompts
  bool low_confidence = false;     // only set when a min-similarity is given
};

// Assigns every file to the block whose code is most similar to the file's
// after_changes text (normalized Levenshtein). Ties go to the lowest
// (prompt_index, block_index), so permuting `blocks` cannot change the
// assignment. Files are independent; `jobs` > 1 maps them concurrently and
// merges by file order. A `min_similarity` does not drop anything, it only
// flags mappings below it.
std::vector<MappingResult> map_files(const std::vector<ReconstructedFile>& files,
                                     const std::vector<CodeBlock>& blocks,
                                     int total_prompts,
                                     std::optional<double> min_similarity = {},
                                     int jobs = 1);

struct PromptPositionRow {
  int total_prompts = 0;
  int prompt_index = 0;
  std::size_t count = 0;
};

// Counts results grouped by (total_prompts, prompt_index), sorted on that key.
std::vector<PromptPositionRow> prompt_position_table(
    const std::vector<MappingResult>& results);

}  // namespace refadopt
