#include "bh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bh {

namespace {

double logsumexp2(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Log envelope of per-coordinate sample offsets over the stratified grid.
// Interior symbols scale each axis; the fold mixes x^2 and z into the new
// x extent, which the grid attains at (axial end, axis-aligned direction).
struct Envelope {
    double lx, ly, lz;

    void interior(const ModelParams& p, char c) {
        lx += std::log(p.lambda_u);
        ly += std::log(p.lambda_ss);
        lz += std::log(c == '0' ? p.lambda_cs0 : p.lambda_cs1);
    }
    void fold(const ModelParams& p) {
        double nlx = logsumexp2(std::log(p.a1) + 2.0 * lx, std::log(p.a2) + lz);
        double nly = ly + std::log(std::abs(p.a3));
        double nlz = lx + std::log(std::abs(p.a4));
        lx = nlx;
        ly = nly;
        lz = nlz;
    }
    double diameter() const {
        double ex = std::exp(lx), ey = std::exp(ly), ez = std::exp(lz);
        return std::sqrt(ex * ex + ey * ey + ez * ez);
    }
};

} // namespace

Phi phi_x() {
    return [](const Point& pt) { return pt.x; };
}
Phi phi_y() {
    return [](const Point& pt) { return pt.y; };
}
Phi phi_z() {
    return [](const Point& pt) { return pt.z; };
}
Phi phi_clipped_dist(Point q) {
    return [q](const Point& pt) { return 0.5 * ground_cost(pt, q); };
}

Point fixed_point_p() { return {0.0, 0.0, 0.0}; }

Point fixed_point_q(const ModelParams& p) {
    return {p.lambda_u / (1.0 + p.lambda_u), 1.0 / (1.0 + p.lambda_ss), 1.0};
}

std::vector<double> birkhoff_series(const std::vector<double>& vals,
                                    const std::vector<long>& cps) {
    std::vector<double> out;
    double s = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < vals.size() && j < cps.size(); ++i) {
        s += vals[i];
        if (static_cast<long>(i) + 1 == cps[j]) {
            out.push_back(s / static_cast<double>(i + 1));
            ++j;
        }
    }
    return out;
}

namespace {

void fill_inf_sup(BirkhoffSeries& s) {
    if (s.averages.empty()) return;
    std::size_t lo = s.averages.size() / 2;
    if (lo == s.averages.size()) lo = s.averages.size() - 1;
    double mn = s.averages[lo], mx = s.averages[lo];
    for (std::size_t i = lo; i < s.averages.size(); ++i) {
        mn = std::min(mn, s.averages[i]);
        mx = std::max(mx, s.averages[i]);
    }
    s.liminf_est = mn;
    s.limsup_est = mx;
}

} // namespace

BirkhoffSeries make_birkhoff(const std::vector<double>& vals,
                             const std::vector<long>& cps) {
    BirkhoffSeries out;
    out.averages = birkhoff_series(vals, cps);
    out.checkpoints.assign(cps.begin(), cps.begin() + out.averages.size());
    fill_inf_sup(out);
    return out;
}

BirkhoffSeries birkhoff(const ModelParams& p, Point x0, const Phi& phi, long n,
                        const std::vector<long>& cps) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(n));
    Point cur = x0;
    bool escaped = false;
    while (static_cast<long>(vals.size()) < n) {
        auto st = step(p, cur);
        if (!st) {
            escaped = true;
            break;
        }
        vals.push_back(phi(cur));
        if (st->steps_consumed == 2 && static_cast<long>(vals.size()) < n)
            vals.push_back(phi(cur)); // slab entry holds both fold indices
        cur = st->point;
    }
    BirkhoffSeries out = make_birkhoff(vals, cps);
    out.escaped = escaped;
    if (escaped) out.escape_index = static_cast<long>(vals.size());
    return out;
}

OrbitSeries orbit_series(const ModelParams& p, const GlobalCode& gc, long n) {
    if (static_cast<long>(gc.symbols.size()) < n)
        throw std::invalid_argument("code shorter than the requested horizon");
    OrbitSeries o;
    o.x.assign(static_cast<std::size_t>(n), 0.0);
    o.y.assign(static_cast<std::size_t>(n), 0.0);
    o.z.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& b : gc.blocks) {
        if (b.start >= n) break;
        long idx = b.start + b.len;
        if (idx < n) o.x[static_cast<std::size_t>(idx)] = 0.5;
        if (idx + 1 < n) o.x[static_cast<std::size_t>(idx + 1)] = 0.5;
        double cur = 0.5;
        for (long j = b.len - 1; j >= 0; --j) {
            char c = gc.symbols[static_cast<std::size_t>(b.start + j)];
            cur = (c == '0') ? cur / p.lambda_u : 1.0 - cur / p.lambda_u;
            if (b.start + j < n) o.x[static_cast<std::size_t>(b.start + j)] = cur;
        }
    }
    double cy = 0.5, cz = 0.5;
    long t = 0;
    std::size_t i = 0;
    while (t < n && i < gc.symbols.size()) {
        char c = gc.symbols[i];
        if (c == 'H') {
            o.y[static_cast<std::size_t>(t)] = cy;
            o.z[static_cast<std::size_t>(t)] = cz;
            ++t;
            if (t < n) {
                o.y[static_cast<std::size_t>(t)] = cy;
                o.z[static_cast<std::size_t>(t)] = cz;
                ++t;
            }
            cy = p.a3 * (cy - 0.5) + 0.5;
            cz = 0.5;
            i += 2;
            continue;
        }
        o.y[static_cast<std::size_t>(t)] = cy;
        o.z[static_cast<std::size_t>(t)] = cz;
        if (c == '0') {
            cy = p.lambda_ss * cy;
            cz = zeta0(p, cz);
        } else {
            cy = 1.0 - p.lambda_ss * cy;
            cz = zeta1(p, cz);
        }
        ++t;
        ++i;
    }
    return o;
}

std::optional<std::pair<int, long>> choose_horizon(const CodeSchedule& s,
                                                   long lo, long hi) {
    int best_k = 0;
    long best_n = 0;
    for (int k = 1; k <= s.K(); ++k) {
        long end = s.alpha_k(k) + s.beta_k(k);
        if (end <= hi && end > best_n) {
            best_k = k;
            best_n = end;
        }
    }
    if (best_k == 0 || best_n < lo) return std::nullopt;
    return std::make_pair(best_k, best_n);
}

std::vector<double> majority_series(const std::vector<char>& code,
                                    const std::vector<long>& cps) {
    std::vector<long> zp(code.size() + 1, 0);
    for (std::size_t i = 0; i < code.size(); ++i)
        zp[i + 1] = zp[i] + (code[i] == '0' ? 1 : 0);
    std::vector<double> out;
    for (long nn : cps) {
        if (nn > static_cast<long>(code.size())) break;
        double w = std::pow(3.0 * static_cast<double>(nn), 2.0 / 3.0);
        long j0 = std::max(0L, static_cast<long>(std::floor(static_cast<double>(nn) - w)));
        out.push_back(static_cast<double>(zp[static_cast<std::size_t>(nn)] -
                                          zp[static_cast<std::size_t>(j0)]) /
                      w);
    }
    return out;
}

double dei_fraction(const CodeSchedule& s, long n) {
    return coverage_fraction(s, n);
}

std::vector<double> distance_series(const OrbitSeries& a, const OrbitSeries& b) {
    std::size_t n = std::min(a.x.size(), b.x.size());
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dx = a.x[i] - b.x[i], dy = a.y[i] - b.y[i], dz = a.z[i] - b.z[i];
        d[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    return d;
}

std::vector<double> clipped_distance_series(const OrbitSeries& a, const Point& q) {
    std::vector<double> d(a.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i)
        d[i] = ground_cost({a.x[i], a.y[i], a.z[i]}, q);
    return d;
}

EmpiricalMeasure prefix_subsample(const OrbitSeries& o, long n, long stride) {
    if (stride < 1) stride = 1;
    EmpiricalMeasure m;
    for (long i = 0; i < n && i < static_cast<long>(o.x.size()); i += stride)
        m.support.push_back({o.x[static_cast<std::size_t>(i)],
                             o.y[static_cast<std::size_t>(i)],
                             o.z[static_cast<std::size_t>(i)]});
    return m;
}

HistoricVerdict detect_historic(const BirkhoffSeries& s) {
    HistoricVerdict v;
    v.liminf_est = s.liminf_est;
    v.limsup_est = s.limsup_est;
    v.gap = s.limsup_est - s.liminf_est;
    return v;
}

PluripotencyReport pluripotency_series(const ModelParams& p, const GlobalCode& gc,
                                       int k_first, double ln_xi, double ln_rho,
                                       long n, const std::vector<long>& cps) {
    std::size_t b0 = gc.blocks.size();
    for (std::size_t i = 0; i < gc.blocks.size(); ++i)
        if (gc.blocks[i].k == k_first) {
            b0 = i;
            break;
        }
    if (b0 == gc.blocks.size())
        throw std::invalid_argument("start block not present in the code");
    long base = gc.blocks[b0].start;
    // a late start block leaves fewer than n symbols; the series just ends early
    n = std::min<long>(n, static_cast<long>(gc.symbols.size()) - base);

    Envelope env{ln_xi - std::log(2.0), ln_rho, ln_rho};
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(n));
    PluripotencyReport rep;
    long t = 0;
    std::size_t i = static_cast<std::size_t>(base);
    while (t < n) {
        char c = gc.symbols[i];
        if (c == 'H') {
            vals.push_back(env.diameter());
            ++t;
            if (t < n) {
                vals.push_back(env.diameter());
                ++t;
            }
            rep.env_max = std::max(rep.env_max, std::exp(env.lx));
            env.fold(p);
            i += 2;
            continue;
        }
        vals.push_back(env.diameter());
        rep.env_max = std::max(rep.env_max, std::exp(env.lx));
        env.interior(p, c);
        ++t;
        ++i;
    }
    rep.averages = birkhoff_series(vals, cps);
    rep.checkpoints.assign(cps.begin(), cps.begin() + rep.averages.size());
    rep.final_value = rep.averages.empty() ? 0.0 : rep.averages.back();
    rep.monotone_last5 = true;
    std::size_t m = rep.averages.size();
    for (std::size_t j = 0; j + 1 < 5 && j + 1 < m; ++j)
        if (rep.averages[m - 1 - j] > rep.averages[m - 2 - j]) rep.monotone_last5 = false;
    return rep;
}

OcdReport ocd_check(const ModelParams& p, const CodeSchedule& sched,
                    const GlobalCode& gc, int k_first, double ln_xi,
                    double ln_rho, long n, long shift) {
    OcdReport rep;
    rep.shift = shift;
    std::size_t b0 = gc.blocks.size();
    for (std::size_t i = 0; i < gc.blocks.size(); ++i)
        if (gc.blocks[i].k == k_first) {
            b0 = i;
            break;
        }
    if (b0 == gc.blocks.size())
        throw std::invalid_argument("start block not present in the code");
    long base = gc.blocks[b0].start;
    long horizon = std::min<long>(base + n, static_cast<long>(gc.symbols.size()));
    OrbitSeries o = orbit_series(p, gc, horizon);

    // x offset envelope in orbit time
    std::vector<double> env_x(static_cast<std::size_t>(horizon - base), 0.0);
    {
        Envelope env{ln_xi - std::log(2.0), ln_rho, ln_rho};
        long t = 0;
        std::size_t i = static_cast<std::size_t>(base);
        while (t < horizon - base) {
            char c = gc.symbols[i];
            if (c == 'H') {
                env_x[static_cast<std::size_t>(t++)] = std::exp(env.lx);
                if (t < horizon - base) env_x[static_cast<std::size_t>(t++)] = std::exp(env.lx);
                env.fold(p);
                i += 2;
                continue;
            }
            env_x[static_cast<std::size_t>(t++)] = std::exp(env.lx);
            env.interior(p, c);
            ++i;
        }
    }

    for (int k = k_first; k <= sched.K(); ++k) {
        OcdInterval iv;
        iv.k = k;
        long a = sched.alpha_k(k);
        iv.alpha = a - base;
        iv.beta = sched.beta_k(k);
        if (iv.alpha < 0 || iv.alpha >= n) {
            rep.intervals.push_back(iv);
            if (iv.alpha >= n) break;
            continue;
        }
        if (a + iv.beta >= horizon) {
            rep.intervals.push_back(iv);
            break;
        }
        iv.checked = true;
        iv.min_margin = std::numeric_limits<double>::infinity();
        for (long nn = a; nn <= a + iv.beta; ++nn) {
            long claim_pos = nn - shift;
            if (claim_pos < 0 || claim_pos >= static_cast<long>(gc.symbols.size())) continue;
            char c = gc.symbols[static_cast<std::size_t>(claim_pos)];
            double lo, hi;
            if (c == '0') {
                lo = p.v0_lo();
                hi = p.v0_hi();
            } else if (c == '1') {
                lo = p.v1_lo();
                hi = p.v1_hi();
            } else {
                lo = p.h_lo();
                hi = p.h_hi();
            }
            double x = o.x[static_cast<std::size_t>(nn)];
            double margin = std::min(x - lo, hi - x);
            iv.min_margin = std::min(iv.min_margin, margin);
            if (!(margin > env_x[static_cast<std::size_t>(nn - base)])) {
                ++iv.failures;
                if (iv.first_fail < 0) iv.first_fail = nn - base;
            }
        }
        if (iv.failures > 0) rep.all_pass = false;
        rep.intervals.push_back(iv);
    }
    return rep;
}

Thm18Report thm18_check(const ModelParams& p, const OrbitSeries& sz,
                        const OrbitSeries& sx, const std::vector<long>& cps,
                        long subsample_target) {
    Thm18Report rep;
    std::vector<double> d = distance_series(sz, sx);
    rep.floor_series = birkhoff_series(d, cps);
    rep.checkpoints.assign(cps.begin(), cps.begin() + rep.floor_series.size());
    rep.floor_final = rep.floor_series.empty() ? 0.0 : rep.floor_series.back();

    Point q = fixed_point_q(p);
    rep.dist_pq = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    rep.floor_threshold = 0.3 * rep.dist_pq;

    for (long cp : rep.checkpoints) {
        long stride = (cp + subsample_target - 1) / subsample_target;
        EmpiricalMeasure ma = prefix_subsample(sz, cp, stride);
        EmpiricalMeasure mb = prefix_subsample(sx, cp, stride);
        rep.dw_series.push_back(w1(ma, mb).value);
    }
    rep.dw_final = rep.dw_series.empty() ? 0.0 : rep.dw_series.back();

    if (!rep.checkpoints.empty()) {
        long nfin = rep.checkpoints.back();
        long stride = std::max(1L, nfin / subsample_target);
        std::vector<double> za, zb;
        for (long i = 0; i < nfin; i += stride) {
            za.push_back(sz.z[static_cast<std::size_t>(i)]);
            zb.push_back(sx.z[static_cast<std::size_t>(i)]);
        }
        std::sort(za.begin(), za.end());
        std::sort(zb.begin(), zb.end());
        double s = 0.0;
        for (std::size_t i = 0; i < za.size(); ++i)
            s += std::min(std::abs(za[i] - zb[i]), 2.0);
        rep.dw_z_proxy_final = s / static_cast<double>(za.size());
    }

    rep.pass_floor = rep.floor_final > rep.floor_threshold;
    rep.pass_dw = rep.dw_final < 0.1;
    return rep;
}

} // namespace bh
