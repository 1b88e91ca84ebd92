#pragma once

#include "bh/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bh {

struct Point {
    double x = 0.0, y = 0.0, z = 0.0;
};

enum class Region { V0, V1, H, Outside };

const char* region_name(Region r);

struct StepResult {
    Point point;
    int steps_consumed = 1; // 2 iff branch == H
    Region branch = Region::V0;
};

// zeta maps on the cs coordinate; the word is applied first character first
// (gamma^(n) = g_n...g_1 composes zeta_{g1} o ... o zeta_{gn}).
template <typename T>
T zeta0(const ModelParams& p, T z) {
    return T(p.lambda_cs0) * z;
}

template <typename T>
T zeta1(const ModelParams& p, T z) {
    return T(p.lambda_cs1) * z + (T(1) - T(p.lambda_cs1));
}

template <typename T>
T zeta_apply(const ModelParams& p, const std::string& word, T z) {
    for (char c : word)
        z = (c == '0') ? zeta0(p, z) : zeta1(p, z);
    return z;
}

template <typename T>
T zeta0_inv(const ModelParams& p, T z) {
    return z / T(p.lambda_cs0);
}

template <typename T>
T zeta1_inv(const ModelParams& p, T z) {
    return (z - (T(1) - T(p.lambda_cs1))) / T(p.lambda_cs1);
}

Region classify(const ModelParams& p, const Point& pt);

// One application of the partial map; the central slab consumes two steps.
std::optional<StepResult> step(const ModelParams& p, const Point& pt);

// Exact algebraic inverse of the selected branch.
std::optional<Point> step_inverse(const ModelParams& p, const Point& pt, Region branch);

struct OrbitEntry {
    int index = 0;
    Point point;
    bool synthetic = false; // interior fold index: holds the pre-fold point
};

struct Orbit {
    std::vector<OrbitEntry> entries;
    bool escaped = false;
    int escape_index = -1;
};

Orbit orbit(const ModelParams& p, const Point& pt, int n_steps);

} // namespace bh
