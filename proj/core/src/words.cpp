#include "bh/words.hpp"

#include <sstream>

namespace bh {

bool is_binary_word(const Word& w) {
    for (char c : w)
        if (c != '0' && c != '1')
            return false;
    return true;
}

std::string word_to_runlength(const Word& w) {
    std::ostringstream os;
    size_t i = 0;
    bool first = true;
    while (i < w.size()) {
        size_t j = i;
        while (j < w.size() && w[j] == w[i])
            ++j;
        if (!first)
            os << ' ';
        os << w[i] << '^' << (j - i);
        first = false;
        i = j;
    }
    return os.str();
}

std::optional<Word> word_from_runlength(const std::string& text) {
    Word out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        auto caret = tok.find('^');
        if (caret != 1 || (tok[0] != '0' && tok[0] != '1'))
            return std::nullopt;
        long n = 0;
        try {
            n = std::stol(tok.substr(2));
        } catch (...) {
            return std::nullopt;
        }
        if (n < 0)
            return std::nullopt;
        out.append(static_cast<size_t>(n), tok[0]);
    }
    return out;
}

} // namespace bh
