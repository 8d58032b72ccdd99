#include "refadopt/conversation.hpp"

#include <array>

#include "refadopt/text.hpp"

namespace refadopt {
namespace {

std::size_t backtick_run(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '`') ++n;
  return n;
}

// True for a closing fence: only backticks, at least `open_len` of them,
// optionally followed by trailing blanks.
bool closes_fence(std::string_view line, std::size_t open_len) {
  std::size_t n = backtick_run(line);
  if (n < open_len) return false;
  return line.find_first_not_of(" \t", n) == std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string block_id(std::string_view url, int prompt_index, int block_index) {
  std::string key(url);
  key += '\x1f';
  key += std::to_string(prompt_index);
  key += '\x1f';
  key += std::to_string(block_index);

  std::uint64_t hash = fnv1a64(key);
  static constexpr std::array<char, 16> digits = {'0', '1', '2', '3', '4', '5',
                                                  '6', '7', '8', '9', 'a', 'b',
                                                  'c', 'd', 'e', 'f'};
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return hex;
}

std::vector<CodeBlock> extract_blocks_from_response(std::string_view url,
                                                    int prompt_index,
                                                    std::string_view response) {
  std::vector<CodeBlock> blocks;
  const std::string normalized = normalize_newlines(response);
  const std::vector<std::string> lines = split_lines(normalized);

  std::size_t i = 0;
  while (i < lines.size()) {
    std::size_t open_len = backtick_run(lines[i]);
    if (open_len < 3) {
      ++i;
      continue;
    }

    CodeBlock block;
    block.prompt_index = prompt_index;
    block.block_index = static_cast<int>(blocks.size());
    block.id = block_id(url, prompt_index, block.block_index);
    block.info = std::string(trim(std::string_view(lines[i]).substr(open_len)));

    std::string code;
    bool first_line = true;
    ++i;
    while (i < lines.size() && !closes_fence(lines[i], open_len)) {
      if (!first_line) code += '\n';
      code += lines[i];
      first_line = false;
      ++i;
    }
    if (i < lines.size()) ++i;  // consume the closing fence

    block.code = std::move(code);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<CodeBlock> extract_code_blocks(const Conversation& conversation) {
  std::vector<CodeBlock> blocks;
  for (const Turn& turn : conversation.turns) {
    auto turn_blocks =
        extract_blocks_from_response(conversation.url, turn.index, turn.response);
    blocks.insert(blocks.end(), std::make_move_iterator(turn_blocks.begin()),
                  std::make_move_iterator(turn_blocks.end()));
  }
  return blocks;
}

int total_prompts(const Conversation& conversation) {
  return conversation.turns.empty() ? 0 : conversation.turns.back().index;
}

}  // namespace refadopt
