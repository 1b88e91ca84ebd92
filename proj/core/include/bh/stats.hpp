#pragma once

#include "bh/geometry.hpp"
#include "bh/schedule.hpp"
#include "bh/wasserstein.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace bh {

// Observables for time averages. All are 1-Lipschitz on the model domain;
// the clipped distance is scaled by 1/2 so its range stays within [0,1].
using Phi = std::function<double(const Point&)>;
Phi phi_x();
Phi phi_y();
Phi phi_z();
Phi phi_clipped_dist(Point q);

Point fixed_point_p();                      // origin saddle
Point fixed_point_q(const ModelParams& p);  // the V1-branch fixed point

struct BirkhoffSeries {
    std::vector<long> checkpoints;
    std::vector<double> averages;
    bool escaped = false;
    long escape_index = -1;
    double liminf_est = 0.0; // min over the trailing half of checkpoints
    double limsup_est = 0.0; // max over the trailing half
};

// Running means of vals sampled at the checkpoint indices (1-based counts).
std::vector<double> birkhoff_series(const std::vector<double>& vals,
                                    const std::vector<long>& cps);

BirkhoffSeries make_birkhoff(const std::vector<double>& vals,
                             const std::vector<long>& cps);

// Direct iteration from x0; the central slab contributes its entry point at
// both of its two time indices. Escape truncates the series with a flag.
BirkhoffSeries birkhoff(const ModelParams& p, Point x0, const Phi& phi, long n,
                        const std::vector<long>& cps);

// Code-driven orbit centers. x is reconstructed backward per block (each block
// ends on the slab, x = 1/2 at both fold indices); y and z run forward.
struct OrbitSeries {
    std::vector<double> x, y, z;
};

OrbitSeries orbit_series(const ModelParams& p, const GlobalCode& code, long n);

// Largest k with alpha_k + beta_k <= hi; returns (k, alpha_k + beta_k) when
// that horizon also reaches lo.
std::optional<std::pair<int, long>> choose_horizon(const CodeSchedule& s,
                                                   long lo, long hi);

// Trailing-window zero density p_n at each checkpoint; the window length is
// (3n)^(2/3) kept real-valued, and fold marks count as ones.
std::vector<double> majority_series(const std::vector<char>& code,
                                    const std::vector<long>& cps);

double dei_fraction(const CodeSchedule& s, long n);

std::vector<double> distance_series(const OrbitSeries& a, const OrbitSeries& b);
std::vector<double> clipped_distance_series(const OrbitSeries& a, const Point& q);

// Every stride-th orbit point among the first n.
EmpiricalMeasure prefix_subsample(const OrbitSeries& o, long n, long stride);

struct HistoricVerdict {
    double liminf_est = 0.0, limsup_est = 0.0, gap = 0.0;
};

HistoricVerdict detect_historic(const BirkhoffSeries& s);

// Averaged sup-distance between the cylinder sample set and its center orbit.
// Offsets are propagated as per-coordinate log envelopes of the stratified
// sample grid, so the reported max is exact for the grid (axial end points and
// axis-aligned disk directions are grid members).
struct PluripotencyReport {
    std::vector<long> checkpoints;
    std::vector<double> averages;
    double final_value = 0.0;
    double env_max = 0.0;         // largest x-envelope seen along the walk
    bool monotone_last5 = false;  // non-strict, over the last 5 checkpoints
};

PluripotencyReport pluripotency_series(const ModelParams& p, const GlobalCode& code,
                                       int k_first, double ln_xi, double ln_rho,
                                       long n, const std::vector<long>& cps);

// Containment audit: over each scheduled free-word window, the pushed cylinder
// must sit inside the coding interval of the claimed symbol with margin
// exceeding the sample envelope. shift displaces the claimed positions and is
// the deliberate-break control.
struct OcdInterval {
    int k = 0;
    long alpha = 0; // window start in orbit time (code position minus base)
    long beta = 0;
    bool checked = false;
    long failures = 0;
    long first_fail = -1; // orbit time of the first failure
    double min_margin = 0.0;
};

struct OcdReport {
    std::vector<OcdInterval> intervals;
    bool all_pass = true;
    long shift = 0;
};

OcdReport ocd_check(const ModelParams& p, const CodeSchedule& sched,
                    const GlobalCode& code, int k_first, double ln_xi,
                    double ln_rho, long n, long shift = 0);

// Anti-phased pair diagnostic: Birkhoff floor of the pointwise distance
// between the two orbits, plus the transport distance between their empirical
// measures on deterministic prefix subsamples (kept within the exact regime).
struct Thm18Report {
    std::vector<long> checkpoints;
    std::vector<double> floor_series;
    std::vector<double> dw_series;
    double floor_final = 0.0;
    double dw_final = 0.0;
    double dw_z_proxy_final = 0.0; // 1-D comonotone bound on the z marginal
    double dist_pq = 0.0;
    double floor_threshold = 0.0; // 0.3 * dist_pq
    bool pass_floor = false;
    bool pass_dw = false;
};

Thm18Report thm18_check(const ModelParams& p, const OrbitSeries& sz,
                        const OrbitSeries& sx, const std::vector<long>& cps,
                        long subsample_target = 400);

} // namespace bh
