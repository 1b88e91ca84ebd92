#pragma once

#include "bh/geometry.hpp"
#include "bh/params.hpp"
#include "bh/words.hpp"

#include <optional>
#include <vector>

namespace bh {

// Two-sided code described finitely: backward entries v_{-1}, v_{-2}, ... and
// an explicit forward word v_0 v_1 v_2 ...
struct BiCode {
    Word backward;
    Word forward;
};

struct ItineraryResult {
    Word word;
    bool escaped = false;
};

// Forward symbols v_0 v_1 ...: region of the orbit point at each landing
// index (fold interior indices contribute no symbol).
ItineraryResult itinerary(const ModelParams& p, const Point& pt, int n_symbols);

// Backward symbols v_{-1} v_{-2} ...: recovered from the strong-stable
// coordinate, whose two branch images are disjoint.
ItineraryResult itinerary_backward(const ModelParams& p, const Point& pt, int n_symbols);

struct DecodeResult {
    Point point;
    double error_radius = 0.0;
};

// x from the forward word (nested inverse-branch intervals), y and z from the
// backward word under their contractions.
std::optional<DecodeResult> decode(const ModelParams& p, const BiCode& code, int depth);

struct RoundTrip {
    bool attempted = false;
    bool forward_ok = false;
    bool backward_ok = false;
    bool ok() const { return attempted && forward_ok && backward_ok; }
};

// Decodes at the given depth in extended precision and re-reads symbols
// |j| <= match_depth from the point. A double-precision point cannot hold
// 20 strong-stable digits (20 * log2(20) bits), hence the wide mantissa.
RoundTrip coding_round_trip(const ModelParams& p, const BiCode& code, int depth,
                            int match_depth);

struct MajorityStats {
    long n = 0;
    long window = 0; // ceil((3n)^(2/3))
    long zeros_in_window = 0;
    double p_n = 0.0;
};

// Counts j with n-(3n)^(2/3) < j <= n and v_j = 0 (1-based symbols, the first
// element of the stream is v_1); denominator is the real (3n)^(2/3).
MajorityStats majority_p(const std::vector<char>& symbols, long n);
MajorityStats majority_p(const Word& symbols, long n);

struct IndexInterval {
    long alpha = 0;
    long beta = 0;           // window [alpha, alpha+beta]
    bool half_infinite = false;
};

// Merges gap-1 neighbors and dyadically splits a trailing half-infinite
// window so inter-window gaps are >= 2 and long windows dominate.
std::vector<IndexInterval> normalize_intervals(std::vector<IndexInterval> intervals,
                                               long l_min, long horizon);

// Fraction of [0, horizon) inside windows of length >= l_min (diagnostic).
double long_window_fraction(const std::vector<IndexInterval>& intervals, long l_min,
                            long horizon);

} // namespace bh
