#include "bh/domains.hpp"

#include "bh/coding.hpp"
#include "bh/precise.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

namespace bh {

namespace {

long nhat_of(const std::vector<HatWord>& words, int idx) {
    if (idx <= static_cast<int>(words.size()))
        return words[static_cast<size_t>(idx) - 1].nhat;
    return static_cast<long>(idx) * idx + 16L * idx; // fitted quadratic growth
}

double logsumexp2(double a, double b) {
    double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity())
        return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

} // namespace

std::optional<XiRho> xi_rho(const ModelParams& p, const std::vector<HatWord>& words,
                            int k, double sigma, double tail_tol) {
    if (k < 1 || k > static_cast<int>(words.size()) + 1)
        return std::nullopt;
    double ln_lbar = std::log(p.lambda_u + p.eps);
    double s = 0.0;
    double t = 0.0;
    int i = 0;
    for (;; ++i) {
        t = static_cast<double>(nhat_of(words, k + i)) / std::pow(2.0, i);
        s += t;
        if (t < tail_tol)
            break;
    }
    XiRho out;
    out.k = k;
    out.ln_xi = std::log(sigma) - s * ln_lbar;
    out.ln_rho = 0.5 * out.ln_xi - std::log(sigma);
    out.xi = std::exp(out.ln_xi);
    out.rho = std::exp(out.ln_rho);
    out.tail_ln_bound = 4.0 * t * ln_lbar;
    return out;
}

Lem73Report verify_lem73(const ModelParams& p, const std::vector<HatWord>& words,
                         int k_lo, int k_hi, double sigma) {
    Lem73Report rep;
    double l0 = std::log(p.lambda_cs0 + p.eps);
    double l1 = std::log(p.lambda_cs1 + p.eps);
    std::vector<double> xs;
    for (int k = k_lo; k <= k_hi; ++k) {
        const HatWord& hw = words[static_cast<size_t>(k) - 1];
        auto rk = xi_rho(p, words, k, sigma);
        auto rn = xi_rho(p, words, k + 1, sigma);
        double lnr = static_cast<double>(hw.zeros()) * l0 +
                     static_cast<double>(hw.ones()) * l1 + rk->ln_rho - rn->ln_xi;
        rep.ks.push_back(k);
        rep.ln_r.push_back(lnr);
        xs.push_back(k);
    }
    rep.decreasing = true;
    for (size_t i = 0; i + 1 < rep.ln_r.size(); ++i)
        if (rep.ln_r[i + 1] >= rep.ln_r[i])
            rep.decreasing = false;
    rep.tenfold_drop =
        !rep.ln_r.empty() && rep.ln_r.front() - rep.ln_r.back() > std::log(10.0);
    if (rep.ln_r.size() >= 2)
        rep.slope = linear_fit_slope(xs, rep.ln_r);
    return rep;
}

double width_ratio(const ModelParams& p, const std::vector<HatWord>& words, int k,
                   double sigma) {
    double q = std::exp(2.0 * static_cast<double>(nhat_of(words, k)) *
                        (std::log(p.lambda_u - p.eps) - std::log(p.lambda_u + p.eps)));
    return sigma * q * p.a1 / 2.0;
}

std::optional<int> find_k_start(const ModelParams& p, const std::vector<HatWord>& words,
                                double sigma, int k_max) {
    for (int k = 1; k + 5 <= std::min(k_max, static_cast<int>(words.size())); ++k) {
        auto rep = verify_lem73(p, words, k, k + 5, sigma);
        // the window must start at most an order of magnitude supercritical,
        // or no scale fits the leading block
        if (rep.decreasing && rep.tenfold_drop && rep.ln_r.front() < std::log(10.0))
            return k;
    }
    return std::nullopt;
}

std::optional<std::vector<CylinderDomain>> build_domains(
    const ModelParams& p, const PseudoOrbit& orbit, const std::vector<HatWord>& words,
    double sigma, int k_lo, int k_hi, std::string* err) {
    std::vector<CylinderDomain> out;
    for (int k = k_lo; k <= k_hi; ++k) {
        auto sc = xi_rho(p, words, k, sigma);
        if (!sc) {
            if (err)
                *err = "scale unavailable: schedule too short";
            return std::nullopt;
        }
        // the axis must fit inside the leaf segment of the depth-k block
        double ln_leaf_half = std::log((1.0 + 2.0 * p.eps0) / 2.0) -
                              static_cast<double>(nhat_of(words, k)) * std::log(p.lambda_u);
        if (sc->ln_xi >= ln_leaf_half) {
            if (err) {
                std::ostringstream os;
                os << "xi too large at k=" << k << " (decrease sigma)";
                *err = os.str();
            }
            return std::nullopt;
        }
        const ChainAnchor& a = orbit.anchors.at(static_cast<size_t>(k - orbit.k_lo));
        CylinderDomain d;
        d.k = k;
        d.cx = static_cast<double>(a.x);
        d.cy = static_cast<double>(a.y);
        d.cz = 0.5;
        d.scale = *sc;
        out.push_back(d);
    }
    return out;
}

bool domains_disjoint(const std::vector<CylinderDomain>& domains) {
    for (size_t i = 0; i < domains.size(); ++i)
        for (size_t j = i + 1; j < domains.size(); ++j) {
            const auto& a = domains[i];
            const auto& b = domains[j];
            bool xsep = std::abs(a.cx - b.cx) > (a.scale.xi + b.scale.xi) / 2.0;
            bool rsep = std::hypot(a.cy - b.cy, a.cz - b.cz) > a.scale.rho + b.scale.rho;
            if (!xsep && !rsep)
                return false;
        }
    return true;
}

SeparationReport lambda_separation(const ModelParams& p,
                                   const std::vector<CylinderDomain>& domains,
                                   int n_codes, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < n_codes; ++i) {
        BiCode code;
        for (int j = 0; j < 30; ++j) {
            code.forward.push_back((rng() & 1ull) ? '1' : '0');
            code.backward.push_back((rng() & 1ull) ? '1' : '0');
        }
        auto d = decode(p, code, 30);
        pts.push_back(d->point);
    }
    SeparationReport rep;
    rep.all_pass = true;
    for (const auto& dom : domains) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : pts) {
            double dx = std::max(0.0, std::abs(q.x - dom.cx) - dom.scale.xi / 2.0);
            double dr = std::max(0.0, std::hypot(q.y - dom.cy, q.z - dom.cz) -
                                          dom.scale.rho);
            best = std::min(best, std::hypot(dx, dr));
        }
        rep.ks.push_back(dom.k);
        rep.min_dist.push_back(best);
        bool ok = best > dom.scale.rho / 2.0;
        rep.pass.push_back(ok);
        rep.all_pass = rep.all_pass && ok;
    }
    return rep;
}

NestingReport verify_nesting(const ModelParams& p, const PseudoOrbit& orbit,
                             const std::vector<HatWord>& words,
                             const std::vector<CylinderDomain>& domains, int lat_axis,
                             int lat_ang, int disk_samples) {
    (void)orbit;
    NestingReport rep;
    if (!domains.empty())
        rep.sigma = std::exp(0.5 * domains.front().scale.ln_xi -
                             domains.front().scale.ln_rho);
    rep.all_pass = true;
    for (size_t di = 0; di + 1 < domains.size(); ++di) {
        const CylinderDomain& cur = domains[di];
        const CylinderDomain& nxt = domains[di + 1];
        if (nxt.k != cur.k + 1)
            continue;
        const HatWord& hw = words.at(static_cast<size_t>(cur.k) - 1);
        double Ex = static_cast<double>(hw.nhat) * std::log(p.lambda_u);
        double Ey = static_cast<double>(hw.nhat) * std::log(p.lambda_ss);
        double Ez = static_cast<double>(hw.zeros()) * std::log(p.lambda_cs0) +
                    static_cast<double>(hw.ones()) * std::log(p.lambda_cs1);
        double ln2 = std::log(2.0);
        // image-offset coefficients, in units of the target half-dimensions
        double cq = std::exp(std::log(p.a1) + 2.0 * (cur.scale.ln_xi - ln2 + Ex) -
                             (nxt.scale.ln_xi - ln2));
        double cz = std::exp(std::log(p.a2) + cur.scale.ln_rho + Ez -
                             (nxt.scale.ln_xi - ln2));
        double cy = std::exp(std::log(std::abs(p.a3)) + cur.scale.ln_rho + Ey -
                             nxt.scale.ln_rho);
        double cx = std::exp(std::log(std::abs(p.a4)) + cur.scale.ln_xi - ln2 + Ex -
                             nxt.scale.ln_rho);
        double ln_plateau = -(p.n0 + 3.0 * cur.k) * std::log(p.lambda_u - p.eps) - ln2;
        bool plateau_ok = (cur.scale.ln_xi - ln2 + Ex) < ln_plateau &&
                          (cur.scale.ln_rho + Ez) < ln_plateau &&
                          (cur.scale.ln_rho + Ey) < ln_plateau;
        NestingK nk;
        nk.k = cur.k;
        nk.plateau_ok = plateau_ok;
        int A = lat_axis, B = lat_ang, D = disk_samples;
        for (int pass = 0; pass < 4; ++pass) {
            double max_ax = 0.0, max_rad = 0.0;
            auto sample = [&](double a, double ry, double rz) {
                double X = -cq * a * a + cz * rz;
                double Y = cy * ry;
                double Z = cx * a;
                max_ax = std::max(max_ax, std::abs(X));
                max_rad = std::max(max_rad, std::hypot(Y, Z));
            };
            for (int i = 0; i < A; ++i) {
                double a = -1.0 + 2.0 * i / (A - 1);
                for (int j = 0; j < B; ++j) {
                    double th = 2.0 * M_PI * j / B;
                    sample(a, std::cos(th), std::sin(th));
                }
            }
            int nr = 8, na = std::max(1, D / 8);
            for (int side = -1; side <= 1; side += 2)
                for (int i = 1; i <= nr; ++i)
                    for (int j = 0; j < na; ++j) {
                        double r = static_cast<double>(i) / nr;
                        double th = 2.0 * M_PI * j / na;
                        sample(side, r * std::cos(th), r * std::sin(th));
                    }
            nk.margin_axial = 1.0 - max_ax;
            nk.margin_radial = 1.0 - max_rad;
            nk.lateral_samples = static_cast<long>(A) * B;
            nk.disk_samples = 2L * nr * na;
            double res = 2.0 * (cq + cx) * (2.0 / (A - 1)) +
                         (cz + cy) * (2.0 * M_PI / B);
            if (std::min(nk.margin_axial, nk.margin_radial) >= 2.0 * res)
                break;
            A *= 2;
            B *= 2;
            D *= 2;
        }
        nk.pu_width_frac = cq / 2.0;
        nk.pu_ok = nk.pu_width_frac < 1.0 / 3.0;
        nk.pass = nk.margin_axial > 0.0 && nk.margin_radial > 0.0 && nk.pu_ok &&
                  nk.plateau_ok;
        rep.per_k.push_back(nk);
        rep.all_pass = rep.all_pass && nk.pass;
    }
    return rep;
}

std::optional<double> sigma_auto(const ModelParams& p, const PseudoOrbit& orbit,
                                 const std::vector<HatWord>& words, int k_start,
                                 int count) {
    for (int m = 4; m >= -40; --m) {
        double sigma = std::pow(2.0, m);
        bool widths_ok = true;
        for (int k = 1; k <= k_start + count - 1 && widths_ok; ++k)
            widths_ok = width_ratio(p, words, k, sigma) < 1.0 / 3.0;
        if (!widths_ok)
            continue;
        auto doms = build_domains(p, orbit, words, sigma, k_start, k_start + count);
        if (!doms)
            continue;
        auto rep = verify_nesting(p, orbit, words, *doms);
        bool ok = rep.all_pass;
        for (const auto& nk : rep.per_k)
            ok = ok && std::min(nk.margin_axial, nk.margin_radial) >= 0.1;
        if (ok)
            return sigma;
    }
    return std::nullopt;
}

WanderingReport verify_wandering(const ModelParams& p, const PseudoOrbit& orbit,
                                 const std::vector<HatWord>& words,
                                 const std::vector<CylinderDomain>& domains,
                                 int generations) {
    WanderingReport rep;
    if (domains.empty())
        return rep;
    const CylinderDomain& d0 = domains.front();
    int k0 = d0.k;
    struct Box {
        double cx, cy, cz;
        double lx, ly, lz; // log half-widths
        int gen;           // block index k, or -k for the fold entry
        long idx;          // position inside the block word
    };
    std::vector<Box> boxes;
    double lx = d0.scale.ln_xi - std::log(2.0), ly = d0.scale.ln_rho,
           lz = d0.scale.ln_rho;
    double cy = d0.cy, cz = 0.5;
    double lls = std::log(p.lambda_ss);
    double ll0 = std::log(p.lambda_cs0), ll1 = std::log(p.lambda_cs1);
    double llu = std::log(p.lambda_u);
    std::vector<double> diam;
    std::vector<Word> gen_words(static_cast<size_t>(generations));
    // wide-mantissa y/z centers with exact decimal branch constants; doubles
    // merge nearby centers once the contraction passes 16 digits, and gaps
    // between merged centers are genuine path differences these caches keep
    std::vector<bigfloat> by, bz;
    const bigfloat eLss = decimal_bigfloat(p.lambda_ss);
    const bigfloat eL0 = decimal_bigfloat(p.lambda_cs0);
    const bigfloat eL1 = decimal_bigfloat(p.lambda_cs1);
    const bigfloat eA3 = decimal_bigfloat(p.a3);
    const bigfloat half = bigfloat(1) / 2;
    bigfloat bcy(cy), bcz = half;
    for (int g = 0; g < generations; ++g) {
        int k = k0 + g;
        const HatWord& hw = words.at(static_cast<size_t>(k) - 1);
        gen_words[static_cast<size_t>(g)] = hw.whole();
        const Word& w = gen_words[static_cast<size_t>(g)];
        diam.push_back(std::log(2.0) + std::max({lx, ly, lz}));
        // backward x centers for this block
        std::vector<double> xs(w.size());
        double curx = 0.5;
        for (size_t j = w.size(); j-- > 0;) {
            curx = (w[j] == '0') ? curx / p.lambda_u : 1.0 - curx / p.lambda_u;
            xs[j] = curx;
        }
        for (size_t j = 0; j < w.size(); ++j) {
            boxes.push_back({xs[j], cy, cz, lx, ly, lz, k, static_cast<long>(j)});
            by.push_back(bcy);
            bz.push_back(bcz);
            lx += llu;
            if (w[j] == '0') {
                cy = p.lambda_ss * cy;
                cz = p.lambda_cs0 * cz;
                bcy = eLss * bcy;
                bcz = eL0 * bcz;
                lz += ll0;
            } else {
                cy = 1.0 - p.lambda_ss * cy;
                cz = p.lambda_cs1 * cz + 1.0 - p.lambda_cs1;
                bcy = 1 - eLss * bcy;
                bcz = eL1 * bcz + 1 - eL1;
                lz += ll1;
            }
            ly += lls;
        }
        boxes.push_back({0.5, cy, cz, lx, ly, lz, -k, 0}); // fold entry
        by.push_back(bcy);
        bz.push_back(bcz);
        double nlx = logsumexp2(std::log(p.a1) + 2.0 * lx, std::log(p.a2) + lz);
        double nly = ly + std::log(std::abs(p.a3));
        double nlz = lx + std::log(std::abs(p.a4));
        lx = nlx;
        ly = nly;
        lz = nlz;
        cy = p.a3 * (cy - 0.5) + 0.5;
        cz = 0.5;
        bcy = eA3 * (bcy - half) + half;
        bcz = half;
    }
    diam.push_back(std::log(2.0) + std::max({lx, ly, lz}));
    rep.steps = static_cast<long>(boxes.size());
    rep.ln_diameter = diam;
    rep.diameters_decreasing = true;
    for (size_t i = 0; i + 1 < diam.size(); ++i)
        if (diam[i + 1] >= diam[i])
            rep.diameters_decreasing = false;
    auto sep1 = [](double c1, double l1, double c2, double l2) {
        return std::abs(c1 - c2) > std::exp(l1) + std::exp(l2);
    };
    // doubles can lose deep-contracted center gaps (everything underflows to
    // 0.0), so failed axis tests fall through to exact arguments
    auto wide_gap = [](const bigfloat& u, const bigfloat& v, double la, double lb) {
        bigfloat gap = boost::multiprecision::abs(u - v);
        if (gap == 0)
            return false;
        double ln_gap = static_cast<double>(boost::multiprecision::log(gap));
        return ln_gap > logsumexp2(la, lb) + std::log(2.0);
    };
    auto refine = [&](size_t i, size_t j) -> bool {
        const Box& a = boxes[i];
        const Box& b = boxes[j];
        if (a.gen > 0 && b.gen > 0) {
            // interior centers pull back 1/2 through the inverse branches of the
            // suffix word; the composed inverse is affine with slope lambda_u^-t,
            // so the longest common suffix prefix t gives an exact gap bound:
            // first disagreement pins the inner points in different branch cells
            // (>= 1 - 2/lambda_u apart), an exhausted suffix pins one at the
            // seed 1/2 (>= 1/2 - 1/lambda_u from any branch cell)
            const Word& wa = gen_words[static_cast<size_t>(a.gen - k0)];
            const Word& wb = gen_words[static_cast<size_t>(b.gen - k0)];
            size_t ia = static_cast<size_t>(a.idx), ib = static_cast<size_t>(b.idx);
            size_t n = std::min(wa.size() - ia, wb.size() - ib);
            size_t t = 0;
            while (t + 32 <= n && std::memcmp(wa.data() + ia + t, wb.data() + ib + t, 32) == 0)
                t += 32;
            while (t < n && wa[ia + t] == wb[ib + t])
                ++t;
            bool ea = ia + t == wa.size(), eb = ib + t == wb.size();
            if (!(ea && eb)) {
                double inner = (ea || eb) ? 0.5 - 1.0 / p.lambda_u : 1.0 - 2.0 / p.lambda_u;
                double ln_gap = std::log(inner) - static_cast<double>(t) * llu;
                return ln_gap > logsumexp2(a.lx, b.lx) + std::log(2.0);
            }
            // identical suffixes: x centers coincide exactly, but distinct
            // prefixes leave a genuine y/z trace the wide caches resolve
            return wide_gap(bz[i], bz[j], a.lz, b.lz) ||
                   wide_gap(by[i], by[j], a.ly, b.ly);
        }
        if (a.gen < 0 && b.gen < 0) {
            // fold entries share x = 1/2; landings separate them in z, or the
            // block-end y centers in y
            if (wide_gap(words.at(static_cast<size_t>(-a.gen) - 1).landing,
                         words.at(static_cast<size_t>(-b.gen) - 1).landing, a.lz, b.lz))
                return true;
            return wide_gap(by[i], by[j], a.ly, b.ly);
        }
        // fold entry sits at x = 1/2; interior centers live inside a branch cell
        return std::log(0.5 - 1.0 / p.lambda_u) >
               logsumexp2(a.lx, b.lx) + std::log(2.0);
    };
    rep.all_disjoint = true;
    for (size_t i = 0; i < boxes.size() && rep.all_disjoint; ++i)
        for (size_t j = i + 1; j < boxes.size(); ++j) {
            const Box& a = boxes[i];
            const Box& b = boxes[j];
            if (sep1(a.cx, a.lx, b.cx, b.lx) || sep1(a.cy, a.ly, b.cy, b.ly) ||
                sep1(a.cz, a.lz, b.cz, b.lz))
                continue;
            ++rep.refined_pairs;
            if (refine(i, j))
                continue;
            rep.all_disjoint = false;
            rep.first_i = static_cast<long>(i);
            rep.first_j = static_cast<long>(j);
            break;
        }
    return rep;
}

CurvatureReport curvature_check(const ModelParams& p, const PerturbationField& field,
                                const PseudoOrbit& orbit, int k, double h) {
    size_t i = static_cast<size_t>(k - orbit.k_lo);
    const ChainAnchor& a = orbit.anchors.at(i);
    double ye = static_cast<double>(a.y_end);
    double ze = static_cast<double>(a.z_end);
    auto curve = [&](double t) {
        auto r = apply_g(p, field, {0.5 + t, ye, ze});
        return r->point;
    };
    Point pm = curve(-h), p0 = curve(0.0), pp = curve(h);
    double ux = pp.x - p0.x, uy = pp.y - p0.y, uz = pp.z - p0.z;
    double vx = pm.x - p0.x, vy = pm.y - p0.y, vz = pm.z - p0.z;
    double cxv = uy * vz - uz * vy;
    double cyv = uz * vx - ux * vz;
    double czv = ux * vy - uy * vx;
    double cross = std::sqrt(cxv * cxv + cyv * cyv + czv * czv);
    double lu = std::sqrt(ux * ux + uy * uy + uz * uz);
    double lv = std::sqrt(vx * vx + vy * vy + vz * vz);
    double wx = ux - vx, wy = uy - vy, wz = uz - vz;
    double lw = std::sqrt(wx * wx + wy * wy + wz * wz);
    CurvatureReport rep;
    rep.kappa_fd = 2.0 * cross / (lu * lv * lw);
    rep.kappa_formula = curvature_formula(p, 0.0);
    double sx = pp.x - 2.0 * p0.x + pm.x;
    double sy = pp.y - 2.0 * p0.y + pm.y;
    double sz = pp.z - 2.0 * p0.z + pm.z;
    double tn = std::sqrt(sx * sx + sy * sy + sz * sz);
    rep.normal[0] = sx / tn;
    rep.normal[1] = sy / tn;
    rep.normal[2] = sz / tn;
    rep.normal_err = std::sqrt((rep.normal[0] + 1.0) * (rep.normal[0] + 1.0) +
                               rep.normal[1] * rep.normal[1] +
                               rep.normal[2] * rep.normal[2]);
    return rep;
}

double curvature_formula(const ModelParams& p, double t) {
    double den = 4.0 * p.a1 * p.a1 * t * t + p.a4 * p.a4;
    return 2.0 * p.a1 * std::abs(p.a4) / std::pow(den, 1.5);
}

} // namespace bh
