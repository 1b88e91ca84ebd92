#pragma once

#include <optional>
#include <string>

namespace bh {

// Binary words are std::string over '0'/'1'.
using Word = std::string;

bool is_binary_word(const Word& w);

// Run-length text format, e.g. "0^12 1^4 0^7"; empty word serializes to "".
std::string word_to_runlength(const Word& w);
std::optional<Word> word_from_runlength(const std::string& text);

} // namespace bh
