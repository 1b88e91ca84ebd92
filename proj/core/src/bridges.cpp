#include "bh/bridges.hpp"

#include <algorithm>
#include <cmath>

namespace bh {

UBridge u_bridge(const ModelParams& p, const Word& word) {
    auto [lo, hi] = bridge_interval<double>(p, word);
    return {word, lo, hi};
}

std::optional<SeedSelection> select_b0_candidates(const ModelParams& p, int gen_cap) {
    double flo = p.fold_image_lo();
    double fhi = p.fold_image_hi();
    for (int gen = 1; gen <= gen_cap; ++gen) {
        std::vector<Word> cands;
        for (unsigned long i = 0; i < (1ul << gen); ++i) {
            Word w(static_cast<size_t>(gen), '0');
            for (int b = 0; b < gen; ++b)
                if (i & (1ul << (gen - 1 - b)))
                    w[static_cast<size_t>(b)] = '1';
            auto [lo, hi] = bridge_interval<double>(p, w);
            if (lo >= flo && hi <= fhi)
                cands.push_back(w);
        }
        if (!cands.empty())
            return SeedSelection{gen, cands.front(), cands};
    }
    return std::nullopt;
}

Word BridgeChain::prefix(const ModelParams& p, int k) const {
    Word w = main_word(k);
    w.append(static_cast<size_t>(p.L * k - k), '0');
    return w;
}

BridgeChain bridge_chain(const ModelParams& p, const Word& seed, int K) {
    BridgeChain out;
    out.seed = seed;
    Word wt = seed;
    for (int k = 1; k <= K; ++k) {
        Word c0 = wt + '0';
        Word c1 = wt + '1';
        auto b0 = bridge_interval<double>(p, c0);
        auto b1 = bridge_interval<double>(p, c1);
        // the side child is the one nearer the -eps0 end of the block
        Word left = (b0.first < b1.first) ? c0 : c1;
        Word right = (b0.first < b1.first) ? c1 : c0;
        out.side.push_back(left);
        out.main.push_back(right);
        wt = left;
    }
    return out;
}

CsTarget cs_target(const ModelParams& p, const BridgeChain& chain, int k) {
    Word pw = chain.prefix(p, k);
    bigfloat lo = -decimal_bigfloat(p.eps0);
    bigfloat hi = bigfloat(1) + decimal_bigfloat(p.eps0);
    const bigfloat lam = decimal_bigfloat(p.lambda_u);
    for (auto it = pw.rbegin(); it != pw.rend(); ++it) {
        if (*it == '0') {
            lo = lo / lam;
            hi = hi / lam;
        } else {
            bigfloat nlo = bigfloat(1) - hi / lam;
            bigfloat nhi = bigfloat(1) - lo / lam;
            lo = nlo;
            hi = nhi;
        }
    }
    CsTarget t;
    t.k = k;
    bigfloat a2 = decimal_bigfloat(p.a2);
    t.center = ((lo + hi) / 2 - decimal_bigfloat(p.mu)) / a2;
    t.halfwidth = (hi - lo) / (2 * a2);
    // fold-entry x extent whose image x stays inside the bridge at the center z
    double xc = p.mu + p.a2 * static_cast<double>(t.center);
    double drop = xc - static_cast<double>(lo);
    double s = drop > 0 ? std::sqrt(drop / p.a1) : 0.0;
    t.x_window_lo = 0.5 - s;
    t.x_window_hi = 0.5 + s;
    return t;
}

bool connector_admissible(const ModelParams& p, double z) {
    double i7lo = p.i_lo(7 * p.eps), i7hi = p.i_hi(7 * p.eps);
    if (z >= i7lo && z <= i7hi)
        return true;
    return (z >= -p.eps0 && z <= i7lo) || (z >= i7hi && z <= 1.0 + p.eps0);
}

std::optional<Word> connector(const ModelParams& p, double z, int cap) {
    double i7lo = p.i_lo(7 * p.eps), i7hi = p.i_hi(7 * p.eps);
    if (z >= i7lo && z <= i7hi)
        return Word{};
    struct Node {
        Word w;
        double v;
    };
    std::vector<Node> frontier{{Word{}, z}};
    for (int depth = 0; depth < cap; ++depth) {
        std::vector<Node> next;
        next.reserve(frontier.size() * 2);
        for (const auto& n : frontier) {
            for (char c : {'0', '1'}) {
                double v = (c == '0') ? p.lambda_cs0 * n.v
                                      : p.lambda_cs1 * n.v + 1.0 - p.lambda_cs1;
                Word w = n.w + c;
                if (v >= i7lo && v <= i7hi)
                    return w;
                next.push_back({std::move(w), v});
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

namespace {

// Exact branch constants and slab windows for the cs pullback.
struct CsExact {
    bigfloat lcs0, lcs1, one_m_lcs1;
    bigfloat w0lo, w0hi, w1lo, w1hi;

    explicit CsExact(const ModelParams& p)
        : lcs0(decimal_bigfloat(p.lambda_cs0)),
          lcs1(decimal_bigfloat(p.lambda_cs1)),
          one_m_lcs1(bigfloat(1) - lcs1) {
        const bigfloat e = decimal_bigfloat(p.eps);
        w0lo = e;
        w0hi = lcs0 - e;
        w1lo = one_m_lcs1 + e;
        w1hi = bigfloat(1) - e;
    }

    bool in0(const bigfloat& lo, const bigfloat& hi) const {
        return lo >= w0lo && hi <= w0hi;
    }
    bool in1(const bigfloat& lo, const bigfloat& hi) const {
        return lo >= w1lo && hi <= w1hi;
    }
};

} // namespace

std::optional<BackendResult> backend_section(const ModelParams& p, bigfloat center,
                                             bigfloat halfwidth, long cap) {
    const CsExact cs(p);

    Word gamma;
    for (long steps = 0;; ++steps) {
        if (steps > cap)
            return std::nullopt;
        bigfloat lo = center - halfwidth;
        bigfloat hi = center + halfwidth;
        bool in0 = cs.in0(lo, hi);
        bool in1 = cs.in1(lo, hi);
        if (!in0 && !in1)
            break;
        if (in0) { // overlap resolves to branch 0
            center = center / cs.lcs0;
            halfwidth = halfwidth / cs.lcs0;
            gamma.push_back('0');
        } else {
            center = (center - cs.one_m_lcs1) / cs.lcs1;
            halfwidth = halfwidth / cs.lcs1;
            gamma.push_back('1');
        }
    }
    std::reverse(gamma.begin(), gamma.end());
    return BackendResult{std::move(gamma), center, halfwidth};
}

long HatWord::zeros() const {
    long c = 0;
    for (const Word* w : {&prefix, &free_word, &iota, &gamma})
        for (char ch : *w)
            if (ch == '0')
                ++c;
    return c;
}

long HatWord::ones() const {
    long c = 0;
    for (const Word* w : {&prefix, &free_word, &iota, &gamma})
        for (char ch : *w)
            if (ch == '1')
                ++c;
    return c;
}

namespace {

template <typename T>
T zeta_word(const ModelParams& p, const Word& w, T z) {
    T lcs0(p.lambda_cs0), lcs1(p.lambda_cs1);
    T one_m_lcs1 = T(1) - lcs1;
    for (char c : w)
        z = (c == '0') ? lcs0 * z : lcs1 * z + one_m_lcs1;
    return z;
}

bigfloat zeta_word_exact(const CsExact& cs, const Word& w, bigfloat z) {
    for (char c : w)
        z = (c == '0') ? cs.lcs0 * z : cs.lcs1 * z + cs.one_m_lcs1;
    return z;
}

} // namespace

std::optional<std::vector<HatWord>> build_hatwords(const ModelParams& p,
                                                   const BridgeChain& chain, int K,
                                                   const FreeWordSource& source,
                                                   BuildError* err) {
    std::vector<HatWord> out;
    out.reserve(static_cast<size_t>(K));
    const CsExact cs(p);
    auto fail = [&](int k, const char* stage, double v) -> std::optional<std::vector<HatWord>> {
        if (err)
            *err = BuildError{k, stage, v};
        return std::nullopt;
    };
    for (int k = 1; k <= K; ++k) {
        HatWord h;
        h.k = k;
        h.prefix = chain.prefix(p, k);
        h.free_word = source(k);
        if (h.free_word.size() != static_cast<size_t>(k) * static_cast<size_t>(k))
            return fail(k, "free-word-length", static_cast<double>(h.free_word.size()));
        double zb = zeta_word<double>(p, h.prefix, 0.5);
        zb = zeta_word<double>(p, h.free_word, zb);
        h.z_before_connector = zb;
        if (!connector_admissible(p, zb))
            return fail(k, "inadmissible-z", zb);
        auto io = connector(p, zb);
        if (!io)
            return fail(k, "connector", zb);
        h.iota = *io;

        bigfloat zc = zeta_word_exact(cs, h.prefix, bigfloat(1) / 2);
        zc = zeta_word_exact(cs, h.free_word, zc);
        zc = zeta_word_exact(cs, h.iota, zc);

        CsTarget tgt = cs_target(p, chain, k + 1);
        h.target_center = tgt.center;
        h.target_halfwidth = tgt.halfwidth;
        {
            bigfloat lo = tgt.center - tgt.halfwidth;
            bigfloat hi = tgt.center + tgt.halfwidth;
            if (!cs.in0(lo, hi) && !cs.in1(lo, hi))
                return fail(k, "backend-precondition", static_cast<double>(tgt.center));
        }
        auto be = backend_section(p, tgt.center, tgt.halfwidth);
        if (!be)
            return fail(k, "backend", 0.0);
        double flo = static_cast<double>(be->final_center - be->final_halfwidth);
        double fhi = static_cast<double>(be->final_center + be->final_halfwidth);
        if (!(flo <= p.i_lo(3 * p.eps) && p.i_hi(3 * p.eps) <= fhi))
            return fail(k, "backend-final", flo);
        h.gamma = be->gamma;
        for (char c : h.gamma)
            if (c == '1')
                ++h.ones_gamma;

        h.landing = zeta_word_exact(cs, h.gamma, zc);
        h.landing_offset = abs(h.landing - h.target_center);
        h.in_target = h.landing_offset <= h.target_halfwidth;
        h.nhat = static_cast<long>(h.prefix.size() + h.free_word.size() + h.iota.size() +
                                   h.gamma.size());
        out.push_back(std::move(h));
    }
    return out;
}

std::optional<SeedSelection> select_b0(const ModelParams& p, int gen_cap) {
    auto sel = select_b0_candidates(p, gen_cap);
    if (!sel)
        return std::nullopt;
    const int probe_depth = 12;
    for (const Word& cand : sel->candidates) {
        BridgeChain chain = bridge_chain(p, cand, probe_depth + 2);
        auto words = build_hatwords(p, chain, probe_depth, [](int k) {
            return Word(static_cast<size_t>(k) * static_cast<size_t>(k), '0');
        });
        if (words) {
            sel->word = cand;
            return sel;
        }
    }
    return std::nullopt;
}

double linear_fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> quadratic_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size());
    auto S = [&](int pw) {
        double s = 0;
        for (double x : xs)
            s += std::pow(x, pw);
        return s;
    };
    auto Sy = [&](int pw) {
        double s = 0;
        for (size_t i = 0; i < xs.size(); ++i)
            s += std::pow(xs[i], pw) * ys[i];
        return s;
    };
    double A[3][4] = {{S(4), S(3), S(2), Sy(2)},
                      {S(3), S(2), S(1), Sy(1)},
                      {S(2), S(1), n, Sy(0)}};
    for (int i = 0; i < 3; ++i) {
        double piv = A[i][i];
        for (int j = i + 1; j < 3; ++j) {
            double f = A[j][i] / piv;
            for (int c = 0; c < 4; ++c)
                A[j][c] -= f * A[i][c];
        }
    }
    std::vector<double> x(3, 0.0);
    for (int i = 2; i >= 0; --i) {
        double acc = A[i][3];
        for (int j = i + 1; j < 3; ++j)
            acc -= A[i][j] * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = acc / A[i][i];
    }
    return x;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (double v : xs)
        lx.push_back(std::log(v));
    for (double v : ys)
        ly.push_back(std::log(v));
    return linear_fit_slope(lx, ly);
}

} // namespace bh
