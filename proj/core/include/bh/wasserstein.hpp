#pragma once

#include "bh/geometry.hpp"

#include <vector>

namespace bh {

// Uniformly weighted atoms.
struct EmpiricalMeasure {
    std::vector<Point> support;
};

// Transport ground cost: euclidean distance capped at 2 (the bounded-Lipschitz
// test class caps what any single move can be worth).
double ground_cost(const Point& a, const Point& b);

struct W1Result {
    double value = 0.0;
    bool exact = true;
    double duality_gap = 0.0; // nonzero only on the auction path
};

// Optimal transport between equal-size uniform measures: exact shortest
// augmenting path assignment up to 512 atoms, eps-scaling auction beyond.
W1Result w1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

// Transport to a point mass moves everything: the mean capped distance.
double w1_to_dirac(const EmpiricalMeasure& mu, const Point& q);

// Permutation enumeration, practical for n <= 8.
double w1_bruteforce(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

// Integral of an observable against a uniform empirical measure.
double integrate(const EmpiricalMeasure& mu, double (*phi)(const Point&));

} // namespace bh
