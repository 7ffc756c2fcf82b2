#pragma once

#include <string>
#include <vector>

namespace ruelle {

enum class WordKind { Past, Future, Cyclic };

// Finite admissible symbol sequence identifying a cylinder.
//
// Symbols are 0-based branch targets listed in application order: the word
// (s0, s1, ..., s_{n-1}) stands for the composition phi_{.,s_{n-1}} o ... o phi_{.,s0}
// (branch s0 applied first).  The source interval of the first map is the
// predecessor symbol, which for cyclic words is s_{n-1} (wrap-around) and
// otherwise is supplied by the caller.
struct Word {
    std::vector<int> symbols;
    WordKind kind = WordKind::Past;

    Word() = default;
    Word(std::vector<int> syms, WordKind k) : symbols(std::move(syms)), kind(k) {}

    int length() const { return static_cast<int>(symbols.size()); }

    // 1-based dash-separated rendering, e.g. "1-2-1".
    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < symbols.size(); ++k) {
            if (k) s += '-';
            s += std::to_string(symbols[k] + 1);
        }
        return s;
    }
};

} // namespace ruelle
