#include "bh/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bh {

double ground_cost(const Point& a, const Point& b) {
    double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::min(std::sqrt(dx * dx + dy * dy + dz * dz), 2.0);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Jonker-Volgenant style assignment via successive shortest augmenting
// paths with dual potentials. Exact for any cost matrix, O(n^3).
double assignment_cost(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = match[j0], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double cost = 0.0;
    for (int j = 1; j <= n; ++j) cost += a[match[j] - 1][j - 1];
    return cost;
}

// Forward auction with eps-scaling for large instances. Returns the
// assignment cost; the solution is within n*eps_final of optimal.
double auction_cost(const std::vector<std::vector<double>>& c, double eps_final,
                    double* gap_out) {
    const int n = static_cast<int>(c.size());
    double cmax = 0.0;
    for (const auto& row : c)
        for (double x : row) cmax = std::max(cmax, std::abs(x));
    // Work with benefits so bids raise prices.
    std::vector<std::vector<double>> b(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = cmax - c[i][j];

    std::vector<double> price(n, 0.0);
    std::vector<int> owner(n, -1), item_of(n, -1);
    double eps = std::max(cmax / 2.0, eps_final);
    while (true) {
        std::fill(owner.begin(), owner.end(), -1);
        std::fill(item_of.begin(), item_of.end(), -1);
        std::vector<int> free_list(n);
        std::iota(free_list.begin(), free_list.end(), 0);
        while (!free_list.empty()) {
            int i = free_list.back();
            free_list.pop_back();
            double best = -kInf, second = -kInf;
            int jbest = -1;
            for (int j = 0; j < n; ++j) {
                double val = b[i][j] - price[j];
                if (val > best) {
                    second = best;
                    best = val;
                    jbest = j;
                } else if (val > second) {
                    second = val;
                }
            }
            if (second == -kInf) second = best;
            price[jbest] += best - second + eps;
            int prev = owner[jbest];
            owner[jbest] = i;
            item_of[i] = jbest;
            if (prev >= 0) {
                item_of[prev] = -1;
                free_list.push_back(prev);
            }
        }
        if (eps <= eps_final) break;
        eps = std::max(eps / 4.0, eps_final);
    }
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += c[i][item_of[i]];
    if (gap_out) *gap_out = static_cast<double>(n) * eps_final;
    return cost;
}

} // namespace

W1Result w1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    const std::size_t n = mu.support.size();
    if (n == 0 || nu.support.size() != n)
        throw std::invalid_argument(
            "w1 requires two nonempty uniform measures with equal atom counts");
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            c[i][j] = ground_cost(mu.support[i], nu.support[j]);
    W1Result r;
    if (n <= 512) {
        r.value = assignment_cost(c) / static_cast<double>(n);
        r.exact = true;
        r.duality_gap = 0.0;
    } else {
        double gap = 0.0;
        double eps_final = 1e-9 / static_cast<double>(n);
        r.value = auction_cost(c, eps_final, &gap) / static_cast<double>(n);
        r.exact = false;
        r.duality_gap = gap / static_cast<double>(n);
    }
    return r;
}

double w1_to_dirac(const EmpiricalMeasure& mu, const Point& q) {
    if (mu.support.empty()) throw std::invalid_argument("empty measure");
    double s = 0.0;
    for (const auto& p : mu.support) s += ground_cost(p, q);
    return s / static_cast<double>(mu.support.size());
}

double w1_bruteforce(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    const std::size_t n = mu.support.size();
    if (n == 0 || nu.support.size() != n || n > 8)
        throw std::invalid_argument("w1_bruteforce needs equal sizes with n <= 8");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = kInf;
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += ground_cost(mu.support[i], nu.support[perm[i]]);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(n);
}

double integrate(const EmpiricalMeasure& mu, double (*phi)(const Point&)) {
    if (mu.support.empty()) throw std::invalid_argument("empty measure");
    double s = 0.0;
    for (const auto& p : mu.support) s += phi(p);
    return s / static_cast<double>(mu.support.size());
}

} // namespace bh
