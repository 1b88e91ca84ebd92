#include "bh/geometry.hpp"

#include <cmath>

namespace bh {

const char* region_name(Region r) {
    switch (r) {
    case Region::V0: return "V0";
    case Region::V1: return "V1";
    case Region::H: return "H";
    default: return "Outside";
    }
}

Region classify(const ModelParams& p, const Point& pt) {
    double x = pt.x;
    if (x >= p.h_lo() && x <= p.h_hi())
        return Region::H;
    if (x >= p.v0_lo() && x <= p.v0_hi())
        return Region::V0;
    if (x >= p.v1_lo() && x <= p.v1_hi())
        return Region::V1;
    return Region::Outside;
}

std::optional<StepResult> step(const ModelParams& p, const Point& pt) {
    Region r = classify(p, pt);
    StepResult out;
    out.branch = r;
    switch (r) {
    case Region::V0:
        out.point = {p.lambda_u * pt.x, p.lambda_ss * pt.y, zeta0(p, pt.z)};
        out.steps_consumed = 1;
        return out;
    case Region::V1:
        out.point = {p.lambda_u * (1.0 - pt.x), -p.lambda_ss * pt.y + 1.0, zeta1(p, pt.z)};
        out.steps_consumed = 1;
        return out;
    case Region::H: {
        double s = pt.x - 0.5;
        out.point = {-p.a1 * s * s + p.a2 * pt.z + p.mu,
                     p.a3 * (pt.y - 0.5) + 0.5,
                     p.a4 * s + 0.5};
        out.steps_consumed = 2;
        return out;
    }
    default:
        return std::nullopt;
    }
}

std::optional<Point> step_inverse(const ModelParams& p, const Point& pt, Region branch) {
    switch (branch) {
    case Region::V0: {
        Point pre{pt.x / p.lambda_u, pt.y / p.lambda_ss, zeta0_inv(p, pt.z)};
        if (classify(p, pre) != Region::V0)
            return std::nullopt;
        return pre;
    }
    case Region::V1: {
        Point pre{1.0 - pt.x / p.lambda_u, (1.0 - pt.y) / p.lambda_ss, zeta1_inv(p, pt.z)};
        if (classify(p, pre) != Region::V1)
            return std::nullopt;
        return pre;
    }
    case Region::H: {
        // the z image records the fold parameter, so the inverse is unique
        double s = (pt.z - 0.5) / p.a4;
        Point pre{0.5 + s,
                  (pt.y - 0.5) / p.a3 + 0.5,
                  (pt.x + p.a1 * s * s - p.mu) / p.a2};
        if (classify(p, pre) != Region::H)
            return std::nullopt;
        if (pre.z < p.block_lo() || pre.z > p.block_hi())
            return std::nullopt;
        return pre;
    }
    default:
        return std::nullopt;
    }
}

Orbit orbit(const ModelParams& p, const Point& start, int n_steps) {
    Orbit out;
    Point cur = start;
    int idx = 0;
    out.entries.push_back({idx, cur, false});
    while (idx < n_steps) {
        auto st = step(p, cur);
        if (!st) {
            out.escaped = true;
            out.escape_index = idx;
            return out;
        }
        if (st->steps_consumed == 2) {
            if (idx + 2 > n_steps)
                break; // not enough budget to land the fold
            out.entries.push_back({idx + 1, cur, true});
            out.entries.push_back({idx + 2, st->point, false});
            idx += 2;
        } else {
            out.entries.push_back({idx + 1, st->point, false});
            idx += 1;
        }
        cur = st->point;
    }
    return out;
}

} // namespace bh
