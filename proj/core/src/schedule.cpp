#include "bh/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace bh {

const Word& WordGen::at(int k) const {
    auto it = memo_.find(k);
    if (it != memo_.end())
        return it->second;
    return memo_.emplace(k, fn_(k)).first->second;
}

WordGenPtr gen_dirac_code() {
    return std::make_shared<WordGen>([](int k) {
        return Word(static_cast<size_t>(k) * static_cast<size_t>(k), '0');
    });
}

WordGenPtr gen_all_ones_code() {
    return std::make_shared<WordGen>([](int k) {
        return Word(static_cast<size_t>(k) * static_cast<size_t>(k), '1');
    });
}

int EraSeq::era_of(long k) const {
    int s = 2;
    for (size_t i = 1; i < boundaries.size(); ++i) {
        if (boundaries[i] <= k)
            s = static_cast<int>(i) + 2;
        else
            break;
    }
    return s;
}

EraSeq default_era_seq(long k_max) {
    EraSeq seq;
    seq.boundaries.push_back(2); // k_2 = 2
    long s = 2;
    while (seq.boundaries.back() < k_max + 60 && s <= 40) {
        long ks = seq.boundaries.back();
        long prev = 0;
        for (long k = 2; k < ks; ++k)
            prev += k * k;
        long tot = 0;
        long kk = ks;
        bool met = false;
        while (true) {
            tot += kk * kk;
            ++kk;
            if (tot > s * prev) {
                met = true;
                break;
            }
            if (kk > k_max + 120)
                break;
        }
        // the final era keeps absorbing blocks past the horizon; its upper
        // boundary is undetermined, so the list ends at its start
        if (!met)
            break;
        seq.boundaries.push_back(kk);
        ++s;
    }
    return seq;
}

std::optional<int> era_condition_violation(const EraSeq& seq) {
    const auto& b = seq.boundaries;
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        long s = static_cast<long>(i) + 2;
        long ks = b[i], ks1 = b[i + 1];
        if (ks1 <= ks)
            return static_cast<int>(s);
        long era_sum = 0;
        for (long k = ks; k < ks1; ++k)
            era_sum += k * k;
        long prev = 0;
        for (long k = b[0]; k < ks; ++k)
            prev += k * k;
        if (!(era_sum > s * prev))
            return static_cast<int>(s);
    }
    return std::nullopt;
}

WordGenPtr gen_historic_code(const EraSeq& eras) {
    return std::make_shared<WordGen>([eras](int k) {
        long b = static_cast<long>(k) * k;
        long nz = (eras.era_of(k) % 2 == 0) ? (3 * b) / 4 : (7 * b) / 8;
        Word w(static_cast<size_t>(nz), '0');
        w.append(static_cast<size_t>(b - nz), '1');
        return w;
    });
}

std::pair<WordGenPtr, WordGenPtr> gen_thm18_pair() {
    auto zgen = std::make_shared<WordGen>([](int k) {
        long b = static_cast<long>(k) * k;
        long g = b / 2;
        Word w(static_cast<size_t>(g), '0');
        w.append(static_cast<size_t>(b - g), '1');
        return w;
    });
    auto xgen = std::make_shared<WordGen>([](int k) {
        long b = static_cast<long>(k) * k;
        long g = b / 2;
        Word w(static_cast<size_t>(g), '1');
        w.append(static_cast<size_t>(b - g), '0');
        return w;
    });
    return {zgen, xgen};
}

WordGenPtr gen_custom_code(std::vector<Word> words) {
    return std::make_shared<WordGen>([words = std::move(words)](int k) -> Word {
        if (k >= 1 && static_cast<size_t>(k) <= words.size())
            return words[static_cast<size_t>(k) - 1];
        return Word(static_cast<size_t>(k) * static_cast<size_t>(k), '0');
    });
}

std::optional<CodeSchedule> gen_quadratic_schedule(const ModelParams& p,
                                                   const BridgeChain& chain, int K,
                                                   const WordGenPtr& source,
                                                   BuildError* err) {
    auto words = build_hatwords(
        p, chain, K, [&](int k) { return source->at(k); }, err);
    if (!words)
        return std::nullopt;
    CodeSchedule s;
    s.blocks = std::move(*words);
    long T = 0;
    for (int k = 1; k <= K; ++k) {
        s.alpha.push_back(T + p.n0 + static_cast<long>(p.L) * k);
        s.beta.push_back(static_cast<long>(k) * k);
        T += s.blocks[static_cast<size_t>(k) - 1].nhat + 2;
    }
    s.total_steps = T;
    return s;
}

GlobalCode global_code(const CodeSchedule& s) {
    GlobalCode g;
    g.symbols.reserve(static_cast<size_t>(s.total_steps));
    for (const auto& h : s.blocks) {
        Word w = h.whole();
        g.blocks.push_back({static_cast<long>(g.symbols.size()), static_cast<long>(w.size()), h.k});
        g.symbols.insert(g.symbols.end(), w.begin(), w.end());
        g.symbols.push_back('H');
        g.symbols.push_back('H');
    }
    return g;
}

double coverage_fraction(const CodeSchedule& s, long N) {
    long cov = 0;
    for (int k = 1; k <= s.K(); ++k) {
        long a = s.alpha_k(k);
        long b = a + s.beta_k(k);
        if (a >= N)
            break;
        cov += std::max<long>(0, std::min(b, N - 1) - a + 1);
    }
    return static_cast<double>(cov) / static_cast<double>(N);
}

std::vector<long> checkpoint_grid(long N) {
    std::vector<long> cps;
    double c = 100.0;
    while (c < static_cast<double>(N)) {
        long v = static_cast<long>(c);
        if (cps.empty() || v != cps.back())
            cps.push_back(v);
        c *= 1.3;
    }
    if (cps.empty() || cps.back() != N)
        cps.push_back(N);
    return cps;
}

} // namespace bh
