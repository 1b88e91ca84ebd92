#pragma once

#include "bh/bridges.hpp"
#include "bh/params.hpp"
#include "bh/words.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace bh {

// Free-word generators. All are deterministic; emitted words are memoized so
// every consumer sees the identical stream.
class WordGen {
public:
    explicit WordGen(std::function<Word(int)> fn) : fn_(std::move(fn)) {}
    const Word& at(int k) const;

private:
    std::function<Word(int)> fn_;
    mutable std::map<int, Word> memo_;
};

using WordGenPtr = std::shared_ptr<WordGen>;

WordGenPtr gen_dirac_code();
WordGenPtr gen_all_ones_code(); // deliberate majority violation (control runs)

// Era sequence: k_s boundaries; era s covers k in [k_s, k_{s+1}).
struct EraSeq {
    std::vector<long> boundaries; // boundaries[0] = k_2; era index starts at 2
    int era_of(long k) const;
};

// Greedy default: smallest next boundary making the new era dominant.
EraSeq default_era_seq(long k_max);
// Checks sum_{k=k_s}^{k_{s+1}-1} k^2 > s * sum_{k=k_2}^{k_s-1} k^2; returns the
// failing s, or nullopt when valid.
std::optional<int> era_condition_violation(const EraSeq& seq);

WordGenPtr gen_historic_code(const EraSeq& eras);

// Anti-phased pair: the first word runs zeros then ones, the second is the
// bitwise complement, split at floor(k^2/2).
std::pair<WordGenPtr, WordGenPtr> gen_thm18_pair();

WordGenPtr gen_custom_code(std::vector<Word> words); // words[k-1] = u_k

// Quadratic schedule: alpha_1 = n0+L, alpha_{k+1} = sum_{i<=k}(nhat_i+2) + n0 + L(k+1),
// beta_k = k^2; the free word u_k occupies code positions alpha_k+1 .. alpha_k+k^2
// (1-based).
struct CodeSchedule {
    std::vector<HatWord> blocks; // index k-1
    std::vector<long> alpha;     // index k-1
    std::vector<long> beta;      // index k-1, k^2
    long total_steps = 0;        // sum of nhat_k + 2

    int K() const { return static_cast<int>(blocks.size()); }
    long alpha_k(int k) const { return alpha.at(static_cast<size_t>(k) - 1); }
    long beta_k(int k) const { return beta.at(static_cast<size_t>(k) - 1); }
};

std::optional<CodeSchedule> gen_quadratic_schedule(const ModelParams& p,
                                                   const BridgeChain& chain, int K,
                                                   const WordGenPtr& source,
                                                   BuildError* err = nullptr);

// Concatenated symbol stream: per block the word then two fold marks 'H'
// (no itinerary symbol; landing carries the next block's first symbol).
// Index i (0-based) holds symbol v_{i+1} in the 1-based convention.
struct GlobalCode {
    std::vector<char> symbols;
    struct Block {
        long start; // 0-based offset of the block word
        long len;   // word length (nhat)
        int k;
    };
    std::vector<Block> blocks;
};

GlobalCode global_code(const CodeSchedule& s);

// Fraction of [0,N) covered by the closed windows [alpha_k, alpha_k+beta_k].
double coverage_fraction(const CodeSchedule& s, long N);

// Geometric checkpoint grid: 100, 130, ... (factor 1.3), then N itself.
std::vector<long> checkpoint_grid(long N);

} // namespace bh
