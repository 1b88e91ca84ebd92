#include "bh/perturb.hpp"

#include <boost/multiprecision/number.hpp>

#include <cmath>
#include <sstream>

namespace bh {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

template <typename T>
void word_step(const ModelParams& p, char c, T& x, T& y, T& z) {
    T lu(p.lambda_u), lss(p.lambda_ss);
    if (c == '0') {
        x = lu * x;
        y = lss * y;
        z = T(p.lambda_cs0) * z;
    } else {
        x = lu * (T(1) - x);
        y = T(1) - lss * y;
        z = T(p.lambda_cs1) * z + T(1) - T(p.lambda_cs1);
    }
}

template <typename T>
T backward_x(const ModelParams& p, const Word& w) {
    T cur(0.5);
    T lu(p.lambda_u);
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        cur = (*it == '0') ? cur / lu : T(1) - cur / lu;
    return cur;
}

template <typename T>
void fold_step(const ModelParams& p, T& x, T& y, T& z) {
    T s = x - T(0.5);
    T nx = T(-p.a1) * s * s + T(p.a2) * z + T(p.mu);
    T ny = T(p.a3) * (y - T(0.5)) + T(0.5);
    T nz = T(p.a4) * s + T(0.5);
    x = nx;
    y = ny;
    z = nz;
}

// Exact decimal constants: anchor gaps shrink below the double ulp of the
// raw parameters, so the chain arithmetic cannot go through binary doubles.
struct ExactConsts {
    bigfloat lu, lss, lcs0, lcs1, one_m_lcs1, a1, a2, a3, a4, mu;

    explicit ExactConsts(const ModelParams& p)
        : lu(decimal_bigfloat(p.lambda_u)), lss(decimal_bigfloat(p.lambda_ss)),
          lcs0(decimal_bigfloat(p.lambda_cs0)), lcs1(decimal_bigfloat(p.lambda_cs1)),
          one_m_lcs1(bigfloat(1) - lcs1), a1(decimal_bigfloat(p.a1)),
          a2(decimal_bigfloat(p.a2)), a3(decimal_bigfloat(p.a3)),
          a4(decimal_bigfloat(p.a4)), mu(decimal_bigfloat(p.mu)) {}
};

void word_step_exact(const ExactConsts& e, char c, bigfloat& x, bigfloat& y, bigfloat& z) {
    if (c == '0') {
        x = e.lu * x;
        y = e.lss * y;
        z = e.lcs0 * z;
    } else {
        x = e.lu * (bigfloat(1) - x);
        y = bigfloat(1) - e.lss * y;
        z = e.lcs1 * z + e.one_m_lcs1;
    }
}

void fold_step_exact(const ExactConsts& e, bigfloat& x, bigfloat& y, bigfloat& z) {
    bigfloat s = x - bigfloat(1) / 2;
    bigfloat nx = -e.a1 * s * s + e.a2 * z + e.mu;
    bigfloat ny = e.a3 * (y - bigfloat(1) / 2) + bigfloat(1) / 2;
    bigfloat nz = e.a4 * s + bigfloat(1) / 2;
    x = nx;
    y = ny;
    z = nz;
}

} // namespace

double Mollifier::operator()(double x) const {
    if (x <= -1.0)
        return 0.0;
    if (x >= 0.0)
        return 1.0;
    double t = x + 1.0;
    double acc = 0.0;
    double tp = std::pow(t, r + 1);
    for (int i = 0; i <= r; ++i) {
        double c = binom(r + i, i) * binom(2 * r + 1, r - i);
        acc += (i % 2 == 0 ? c : -c) * tp;
        tp *= t;
    }
    return acc;
}

double bump_1d(const Mollifier& m, double c, double a, double b, double x) {
    double w = c * (b - a);
    return m((x - a) / w) + m(-(x - b) / w) - 1.0;
}

double bump_3d(const Mollifier& m, const BumpCube& cube, const Point& pt) {
    double d2 = cube.half_width / 2.0;
    double bx = bump_1d(m, 0.5, cube.center.x - d2, cube.center.x + d2, pt.x);
    if (bx <= 0.0)
        return 0.0;
    double by = bump_1d(m, 0.5, cube.center.y - d2, cube.center.y + d2, pt.y);
    if (by <= 0.0)
        return 0.0;
    double bz = bump_1d(m, 0.5, cube.center.z - d2, cube.center.z + d2, pt.z);
    if (bz <= 0.0)
        return 0.0;
    return bx * by * bz;
}

std::optional<PseudoOrbit> build_pseudo_orbit(const ModelParams& p,
                                              const std::vector<HatWord>& words,
                                              int k_lo, int k_hi, std::string* err) {
    auto fail = [&](const std::string& m) -> std::optional<PseudoOrbit> {
        if (err)
            *err = m;
        return std::nullopt;
    };
    if (k_lo < 1 || k_hi > static_cast<int>(words.size()) || k_lo > k_hi)
        return fail("k range outside built words");
    PseudoOrbit po;
    po.k_lo = k_lo;
    const ExactConsts ec(p);
    bigfloat y(0.5);
    for (int k = k_lo; k <= k_hi; ++k) {
        const HatWord& hw = words[static_cast<size_t>(k) - 1];
        if (!hw.in_target) {
            std::ostringstream os;
            os << "k=" << k << ": fold image misses the bridge target";
            return fail(os.str());
        }
        ChainAnchor a;
        a.k = k;
        a.x = backward_x<bigfloat>(p, hw.whole());
        a.y = y;
        bigfloat ye = y;
        for (char c : hw.whole())
            ye = (c == '0') ? ec.lss * ye : bigfloat(1) - ec.lss * ye;
        a.y_end = ye;
        a.z_end = hw.landing;
        po.anchors.push_back(a);
        y = ec.a3 * (ye - bigfloat(0.5)) + bigfloat(0.5);
    }
    double ln_lun = std::log(p.lambda_u - p.eps);
    for (size_t i = 0; i + 1 < po.anchors.size(); ++i) {
        const auto& cur = po.anchors[i];
        const auto& nxt = po.anchors[i + 1];
        bigfloat dzb = (nxt.x - ec.mu) / ec.a2 - cur.z_end;
        po.dz.push_back(static_cast<double>(dzb));
        if (dzb != 0) {
            double lnc = static_cast<double>(boost::multiprecision::log(
                             boost::multiprecision::abs(dzb))) +
                         (p.n0 + p.L * (cur.k + 1)) * ln_lun;
            po.c_max = std::max(po.c_max, std::exp(lnc));
        }
    }
    return po;
}

std::optional<PerturbationField> build_field(const ModelParams& p, const PseudoOrbit& orbit,
                                             int n_start, std::string* err, int k_cap) {
    auto fail = [&](const std::string& m) -> std::optional<PerturbationField> {
        if (err)
            *err = m;
        return std::nullopt;
    };
    PerturbationField f;
    f.k_lo = orbit.k_lo;
    f.n_start = n_start;
    double ln_lun = std::log(p.lambda_u - p.eps);
    for (size_t i = 0; i < orbit.dz.size(); ++i) {
        const ChainAnchor& a = orbit.anchors[i];
        if (k_cap > 0 && a.k > k_cap)
            break;
        BumpCube c;
        c.k = a.k;
        c.center = {0.5, static_cast<double>(a.y_end), static_cast<double>(a.z_end)};
        c.half_width = std::exp(-(p.n0 + 3 * a.k) * ln_lun);
        f.cubes.push_back(c);
        f.u.push_back({0.0, 0.0, orbit.dz[i]});
    }
    auto disjoint = [](const BumpCube& a, const BumpCube& b) {
        return std::abs(a.center.x - b.center.x) >= a.half_width + b.half_width ||
               std::abs(a.center.y - b.center.y) >= a.half_width + b.half_width ||
               std::abs(a.center.z - b.center.z) >= a.half_width + b.half_width;
    };
    // least k from which every later pair is disjoint and d_k >= 3|u_k|;
    // bumps below that start are dropped from the sum (fold-entry anchors can
    // coincide to double precision when consecutive block tails agree)
    int k0 = orbit.k_lo;
    int bad_i = -1, bad_j = -1;
    for (size_t i = 0; i < f.cubes.size(); ++i) {
        bool ok = f.cubes[i].half_width >= 3.0 * std::abs(f.u[i][2]);
        for (size_t j = i + 1; ok && j < f.cubes.size(); ++j) {
            ok = disjoint(f.cubes[i], f.cubes[j]);
            if (!ok)
                bad_j = f.cubes[j].k;
        }
        if (!ok) {
            k0 = f.cubes[i].k + 1;
            bad_i = f.cubes[i].k;
        }
    }
    f.k0 = k0;
    f.n_start = std::max(n_start, k0);
    if (f.cubes.empty() || f.cubes.back().k < f.n_start) {
        std::ostringstream os;
        os << "no disjoint bump range";
        if (bad_i >= 0)
            os << " (cubes overlap: k=" << bad_i << " and k=" << bad_j << ")";
        return fail(os.str());
    }
    return f;
}

Point psi(const PerturbationField& f, const Point& pt) {
    Point out = pt;
    for (size_t i = 0; i < f.cubes.size(); ++i) {
        if (f.cubes[i].k < f.n_start)
            continue;
        double b = bump_3d(f.m, f.cubes[i], pt);
        if (b > 0.0) {
            out.x += b * f.u[i][0];
            out.y += b * f.u[i][1];
            out.z += b * f.u[i][2];
        }
    }
    return out;
}

std::optional<StepResult> apply_g(const ModelParams& p, const PerturbationField& f,
                                  const Point& pt) {
    return step(p, psi(f, pt));
}

double chain_link_residual(const ModelParams& p, const PseudoOrbit& orbit,
                           const std::vector<HatWord>& words, int k) {
    size_t i = static_cast<size_t>(k - orbit.k_lo);
    const ChainAnchor& a = orbit.anchors.at(i);
    const ChainAnchor& b = orbit.anchors.at(i + 1);
    const HatWord& hw = words.at(static_cast<size_t>(k) - 1);
    const ExactConsts ec(p);
    bigfloat x = a.x, y = a.y, z(0.5);
    for (char c : hw.whole())
        word_step_exact(ec, c, x, y, z);
    z += bigfloat(orbit.dz[i]); // fold entry sits on the bump plateau
    fold_step_exact(ec, x, y, z);
    bigfloat rx = boost::multiprecision::abs(x - b.x);
    bigfloat ry = boost::multiprecision::abs(y - b.y);
    bigfloat rz = boost::multiprecision::abs(z - bigfloat(0.5));
    bigfloat r = rx;
    if (ry > r) r = ry;
    if (rz > r) r = rz;
    return static_cast<double>(r);
}

bool chain_link_exact(const ModelParams& p, const std::vector<HatWord>& words, int k) {
    rational lu(p.lambda_u), lss(p.lambda_ss), half(rational(1) / 2);
    // y recursion from the first block
    rational y = half;
    for (int j = 1; j < k; ++j) {
        rational ye = y;
        for (char c : words[static_cast<size_t>(j) - 1].whole())
            ye = (c == '0') ? lss * ye : rational(1) - lss * ye;
        y = rational(p.a3) * (ye - half) + half;
    }
    const HatWord& hw = words[static_cast<size_t>(k) - 1];
    rational x = backward_x<rational>(p, hw.whole());
    rational z = half;
    for (char c : hw.whole())
        word_step(p, c, x, y, z);
    if (x != half)
        return false;
    rational xn = backward_x<rational>(p, words[static_cast<size_t>(k)].whole());
    rational ztarget = (xn - rational(p.mu)) / rational(p.a2);
    rational zt = ztarget;
    fold_step(p, x, y, zt);
    return x == xn && zt == half;
}

double truncation_tail_bound(const ModelParams& p, double c_max, int K) {
    double ln_lun = std::log(p.lambda_u - p.eps);
    double head = std::exp(-(p.n0 + p.L * (K + 2)) * ln_lun);
    return c_max * head / (1.0 - std::exp(-p.L * ln_lun));
}

} // namespace bh
