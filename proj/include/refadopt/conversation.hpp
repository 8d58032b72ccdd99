#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace refadopt {

struct Turn {
  int index = 0;  // 1-based prompt number within the conversation
  std::string prompt;
  std::string response;
};

struct Conversation {
  std::string url;
  std::string model;
  std::vector<Turn> turns;
};

struct CodeBlock {
  std::string id;       // fnv1a64 hex of url \x1f prompt_index \x1f block_index
  int prompt_index = 0;
  int block_index = 0;  // 0-based order within one response
  std::string info;     // text after the opening fence, trimmed
  std::string code;     // lines between the fences, joined with '\n'
};

std::uint64_t fnv1a64(std::string_view data);

std::string block_id(std::string_view url, int prompt_index, int block_index);

// Scans one response for backtick-fenced blocks. A fence opens on a line
// whose first column starts a run of three or more backticks and closes on a
// line of only backticks at least that long; an unterminated block runs to
// the end of the response. Tilde fences and indented blocks are not code
// blocks here. CRLF is normalized before scanning.
std::vector<CodeBlock> extract_blocks_from_response(std::string_view url,
                                                    int prompt_index,
                                                    std::string_view response);

// All blocks of a conversation, in (prompt_index, block_index) order.
std::vector<CodeBlock> extract_code_blocks(const Conversation& conversation);

// Highest prompt number, 0 for an empty conversation.
int total_prompts(const Conversation& conversation);

}  // namespace refadopt
