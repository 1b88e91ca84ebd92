#include "bh/coding.hpp"

#include "bh/bridges.hpp"
#include "bh/precise.hpp"

#include <algorithm>
#include <cmath>

namespace bh {

namespace {

// Region tests on a generic scalar, same semantics as classify().
template <typename T>
Region classify_t(const ModelParams& p, const T& x) {
    if (x >= T(p.h_lo()) && x <= T(p.h_hi()))
        return Region::H;
    if (x >= T(p.v0_lo()) && x <= T(p.v0_hi()))
        return Region::V0;
    if (x >= T(p.v1_lo()) && x <= T(p.v1_hi()))
        return Region::V1;
    return Region::Outside;
}

template <typename T>
struct Triple {
    T x, y, z;
};

template <typename T>
ItineraryResult itinerary_t(const ModelParams& p, Triple<T> pt, int n_symbols) {
    ItineraryResult out;
    T lu(p.lambda_u), lss(p.lambda_ss);
    while (static_cast<int>(out.word.size()) < n_symbols) {
        Region r = classify_t<T>(p, pt.x);
        if (r == Region::Outside) {
            out.escaped = true;
            return out;
        }
        if (r == Region::H) {
            // fold interior indices carry no symbol
            T s = pt.x - T(0.5);
            pt = {T(-p.a1) * s * s + T(p.a2) * pt.z + T(p.mu),
                  T(p.a3) * (pt.y - T(0.5)) + T(0.5), T(p.a4) * s + T(0.5)};
            continue;
        }
        out.word.push_back(r == Region::V0 ? '0' : '1');
        if (r == Region::V0)
            pt = {lu * pt.x, lss * pt.y, zeta0(p, pt.z)};
        else
            pt = {lu * (T(1) - pt.x), T(1) - lss * pt.y, zeta1(p, pt.z)};
    }
    return out;
}

template <typename T>
ItineraryResult itinerary_backward_t(const ModelParams& p, T y, int n_symbols) {
    ItineraryResult out;
    T lss(p.lambda_ss);
    for (int j = 0; j < n_symbols; ++j) {
        char c = (y > T(0.5)) ? '1' : '0';
        out.word.push_back(c);
        y = (c == '0') ? y / lss : (T(1) - y) / lss;
        if (y < T(p.block_lo()) || y > T(p.block_hi())) {
            out.escaped = true;
            return out;
        }
    }
    return out;
}

template <typename T>
Triple<T> decode_t(const ModelParams& p, const BiCode& code, int depth) {
    Word fw = code.forward.substr(0, static_cast<size_t>(depth));
    auto [lo, hi] = bridge_interval<T>(p, fw);
    T x = (lo + hi) / 2;
    // history, oldest first
    Word hist = code.backward.substr(0, static_cast<size_t>(depth));
    std::reverse(hist.begin(), hist.end());
    T y(0.5), z(0.5);
    T lss(p.lambda_ss);
    for (char c : hist) {
        if (c == '0') {
            y = lss * y;
            z = zeta0(p, z);
        } else {
            y = T(1) - lss * y;
            z = zeta1(p, z);
        }
    }
    return {x, y, z};
}

} // namespace

ItineraryResult itinerary(const ModelParams& p, const Point& pt, int n_symbols) {
    return itinerary_t<long double>(p, {pt.x, pt.y, pt.z}, n_symbols);
}

ItineraryResult itinerary_backward(const ModelParams& p, const Point& pt, int n_symbols) {
    return itinerary_backward_t<long double>(p, static_cast<long double>(pt.y), n_symbols);
}

std::optional<DecodeResult> decode(const ModelParams& p, const BiCode& code, int depth) {
    if (code.forward.size() < static_cast<size_t>(depth) ||
        code.backward.size() < static_cast<size_t>(depth))
        return std::nullopt;
    auto t = decode_t<double>(p, code, depth);
    DecodeResult r;
    r.point = {t.x, t.y, t.z};
    double rate = std::max({1.0 / p.lambda_u, p.lambda_cs1, p.lambda_ss});
    r.error_radius = std::pow(rate, depth) * (1.0 + 2.0 * p.eps0);
    return r;
}

RoundTrip coding_round_trip(const ModelParams& p, const BiCode& code, int depth,
                            int match_depth) {
    RoundTrip rt;
    if (code.forward.size() < static_cast<size_t>(depth) ||
        code.backward.size() < static_cast<size_t>(depth))
        return rt;
    auto pt = decode_t<bigfloat>(p, code, depth);
    auto fwd = itinerary_t<bigfloat>(p, pt, match_depth + 1);
    auto bwd = itinerary_backward_t<bigfloat>(p, pt.y, match_depth);
    rt.attempted = true;
    rt.forward_ok = !fwd.escaped &&
                    fwd.word == code.forward.substr(0, static_cast<size_t>(match_depth) + 1);
    rt.backward_ok = !bwd.escaped &&
                     bwd.word == code.backward.substr(0, static_cast<size_t>(match_depth));
    return rt;
}

MajorityStats majority_p(const std::vector<char>& symbols, long n) {
    MajorityStats st;
    st.n = n;
    double w = std::pow(3.0 * static_cast<double>(n), 2.0 / 3.0);
    st.window = static_cast<long>(std::ceil(w));
    long j0 = std::max<long>(0, static_cast<long>(std::floor(static_cast<double>(n) - w)));
    long zeros = 0;
    long hi = std::min<long>(n, static_cast<long>(symbols.size()));
    for (long j = j0; j < hi; ++j)
        if (symbols[static_cast<size_t>(j)] == '0')
            ++zeros;
    st.zeros_in_window = zeros;
    st.p_n = static_cast<double>(zeros) / w;
    return st;
}

MajorityStats majority_p(const Word& symbols, long n) {
    std::vector<char> v(symbols.begin(), symbols.end());
    return majority_p(v, n);
}

std::vector<IndexInterval> normalize_intervals(std::vector<IndexInterval> intervals,
                                               long l_min, long horizon) {
    (void)l_min;
    // merge gap-1 neighbors until gaps are >= 2
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i + 1 < intervals.size(); ++i) {
            const auto& a = intervals[i];
            const auto& b = intervals[i + 1];
            if (a.half_infinite)
                break;
            if (a.alpha + a.beta + 1 == b.alpha) {
                IndexInterval m;
                m.alpha = a.alpha;
                m.half_infinite = b.half_infinite;
                m.beta = m.half_infinite ? 0 : (b.alpha + b.beta - a.alpha);
                intervals.erase(intervals.begin() + static_cast<long>(i),
                                intervals.begin() + static_cast<long>(i) + 2);
                intervals.insert(intervals.begin() + static_cast<long>(i), m);
                merged = true;
                break;
            }
        }
    }
    // dyadic split of a trailing half-infinite window
    if (!intervals.empty() && intervals.back().half_infinite) {
        long a = intervals.back().alpha;
        intervals.pop_back();
        intervals.push_back({a, 2, false});
        for (long i = 1;; ++i) {
            long start = a + (1L << (i + 1));
            if (start > horizon)
                break;
            intervals.push_back({start, (1L << (i + 1)) - 2, false});
        }
    }
    return intervals;
}

double long_window_fraction(const std::vector<IndexInterval>& intervals, long l_min,
                            long horizon) {
    long covered = 0;
    for (const auto& iv : intervals) {
        if (!iv.half_infinite && iv.beta < l_min)
            continue;
        long lo = std::max<long>(0, iv.alpha);
        long hi = iv.half_infinite ? horizon - 1 : std::min(horizon - 1, iv.alpha + iv.beta);
        if (hi >= lo)
            covered += hi - lo + 1;
    }
    return static_cast<double>(covered) / static_cast<double>(horizon);
}

} // namespace bh
