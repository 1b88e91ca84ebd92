#pragma once

#include "bh/params.hpp"
#include "bh/precise.hpp"
#include "bh/words.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace bh {

// Expanding-direction bridge: the x-interval of points whose forward itinerary
// starts with the given word. Child width is exactly parent width / lambda_u.
struct UBridge {
    Word word;
    double lo = 0.0, hi = 0.0;
    double width() const { return hi - lo; }
};

// Interval fold, last character innermost: prepending a symbol to the word
// maps the interval through the matching inverse branch.
template <typename T>
std::pair<T, T> bridge_interval(const ModelParams& p, const Word& word) {
    T lo = T(-1) * T(p.eps0);
    T hi = T(1) + T(p.eps0);
    T lam = T(p.lambda_u);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it == '0') {
            lo = lo / lam;
            hi = hi / lam;
        } else {
            T nlo = T(1) - hi / lam;
            T nhi = T(1) - lo / lam;
            lo = nlo;
            hi = nhi;
        }
    }
    return {lo, hi};
}

UBridge u_bridge(const ModelParams& p, const Word& word);

struct SeedSelection {
    int n0 = 0;
    Word word;                   // the chosen seed
    std::vector<Word> candidates; // all same-generation candidates, lex order
};

// Smallest generation whose bridge fits inside the fold image x-window;
// candidates only, no viability probe.
std::optional<SeedSelection> select_b0_candidates(const ModelParams& p, int gen_cap = 12);

// Candidate choice including the schedule viability probe (first candidate, in
// lex order, whose bridge chain admits block construction to the probe depth).
std::optional<SeedSelection> select_b0(const ModelParams& p, int gen_cap = 12);

// Nested bridge chain: side[k] descends toward the -eps0 end, main[k] is the
// sibling used as the generation-k landing target.
struct BridgeChain {
    Word seed;               // generation n0
    std::vector<Word> side;  // index k-1 holds the word of generation n0+k
    std::vector<Word> main;  // index k-1 holds the word of generation n0+k

    const Word& main_word(int k) const { return main.at(static_cast<size_t>(k) - 1); }
    // main word padded with zeros to length n0 + L*k
    Word prefix(const ModelParams& p, int k) const;
};

BridgeChain bridge_chain(const ModelParams& p, const Word& seed, int K);

// Landing window on the cs coordinate for generation k: the z-values whose
// fold image x lands in the generation-k bridge.
struct CsTarget {
    int k = 0;
    bigfloat center, halfwidth;
    double x_window_lo = 0.0, x_window_hi = 0.0; // fold-entry x extent at the window center
};

CsTarget cs_target(const ModelParams& p, const BridgeChain& chain, int k);

// Shortest word (ties: lexicographic, 0 before 1) steering z into I(7 eps).
std::optional<Word> connector(const ModelParams& p, double z, int cap = 12);

bool connector_admissible(const ModelParams& p, double z);

struct BackendResult {
    Word gamma;
    bigfloat final_center, final_halfwidth;
};

// Pulls the window back through the forced inverse cs branch while the window
// stays inside a branch slab; stops at the first failure. The final window
// must cover I(3 eps).
std::optional<BackendResult> backend_section(const ModelParams& p, bigfloat center,
                                             bigfloat halfwidth, long cap = 200000);

struct HatWord {
    int k = 0;
    Word prefix, free_word, iota, gamma;
    long nhat = 0;
    long ones_gamma = 0;
    double z_before_connector = 0.0; // double is enough pre-backend
    bigfloat landing;                // zeta image of 1/2 under the whole word
    bigfloat target_center, target_halfwidth;
    bigfloat landing_offset;         // |landing - target_center|
    bool in_target = false;

    Word whole() const { return prefix + free_word + iota + gamma; }
    long zeros() const;
    long ones() const;
};

struct BuildError {
    int k = 0;
    std::string stage; // "inadmissible-z", "connector", "backend-precondition",
                       // "backend-final", "free-word-length"
    double value = 0.0;
};

using FreeWordSource = std::function<Word(int)>;

// Builds the per-k block words for k = 1..K against the chain targets.
std::optional<std::vector<HatWord>> build_hatwords(const ModelParams& p,
                                                   const BridgeChain& chain, int K,
                                                   const FreeWordSource& source,
                                                   BuildError* err = nullptr);

// Least-squares fits used by the growth checks.
double linear_fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);
// returns {c2, c1, c0} for y ~ c2 x^2 + c1 x + c0
std::vector<double> quadratic_fit(const std::vector<double>& xs, const std::vector<double>& ys);
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace bh
