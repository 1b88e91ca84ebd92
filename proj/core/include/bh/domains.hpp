#pragma once

#include "bh/bridges.hpp"
#include "bh/params.hpp"
#include "bh/perturb.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bh {

// Cylinder scales. xi shrinks like lambda-bar_u^{-sum nhat_{k+i}/2^i}; held in
// log form because the values underflow doubles long before the checks stop
// being meaningful.
struct XiRho {
    int k = 0;
    double ln_xi = 0.0, ln_rho = 0.0;
    double xi = 0.0, rho = 0.0; // exp of the above, 0 on underflow
    double tail_ln_bound = 0.0; // bound on the truncated dyadic-tail exponent
};

// The dyadic exponent uses scheduled depths while available and the fitted
// quadratic growth beyond the built range.
std::optional<XiRho> xi_rho(const ModelParams& p, const std::vector<HatWord>& words,
                            int k, double sigma, double tail_tol = 1e-12);

struct Lem73Report {
    std::vector<int> ks;
    std::vector<double> ln_r;
    bool decreasing = false;
    bool tenfold_drop = false;
    double slope = 0.0;
};

// Ratio of the contracted disk radius to the next axis length; the majority
// condition is what makes it collapse.
Lem73Report verify_lem73(const ModelParams& p, const std::vector<HatWord>& words,
                         int k_lo, int k_hi, double sigma);

// Conservative image-width ratio of the folded axis segment, slack taken on
// both lambda sides.
double width_ratio(const ModelParams& p, const std::vector<HatWord>& words, int k,
                   double sigma);

// Least k whose 6-wide lemma-ratio window is strictly decreasing with a
// tenfold total drop.
std::optional<int> find_k_start(const ModelParams& p, const std::vector<HatWord>& words,
                                double sigma, int k_max);

struct CylinderDomain {
    int k = 0;
    double cx = 0.0, cy = 0.0, cz = 0.0; // axis center; axis along x
    XiRho scale;
};

std::optional<std::vector<CylinderDomain>> build_domains(const ModelParams& p,
                                                         const PseudoOrbit& orbit,
                                                         const std::vector<HatWord>& words,
                                                         double sigma, int k_lo, int k_hi,
                                                         std::string* err = nullptr);

bool domains_disjoint(const std::vector<CylinderDomain>& domains);

struct SeparationReport {
    std::vector<int> ks;
    std::vector<double> min_dist; // over the decoded sample points
    std::vector<bool> pass;       // min_dist > rho_k / 2
    bool all_pass = false;
};

// Distance from decoded random-code points to each cylinder.
SeparationReport lambda_separation(const ModelParams& p,
                                   const std::vector<CylinderDomain>& domains,
                                   int n_codes, unsigned long long seed);

// Margins are fractions of the respective half-dimension (axis: xi_{k+1}/2,
// radial: rho_{k+1}); the absolute axis slack underflows doubles.
struct NestingK {
    int k = 0;
    double margin_axial = 0.0;
    double margin_radial = 0.0;
    double pu_width_frac = 0.0; // image x-extent over xi_{k+1}
    bool pu_ok = false;
    bool plateau_ok = false; // entry offsets stay inside the bump plateau
    long lateral_samples = 0, disk_samples = 0;
    bool pass = false;
};

struct NestingReport {
    double sigma = 0.0;
    std::vector<NestingK> per_k;
    bool all_pass = false;
};

NestingReport verify_nesting(const ModelParams& p, const PseudoOrbit& orbit,
                             const std::vector<HatWord>& words,
                             const std::vector<CylinderDomain>& domains,
                             int lat_axis = 16, int lat_ang = 64, int disk_samples = 256);

// Largest power of two passing the width check and the nesting margins
// (fractional margin >= 0.1) across [k_start, k_start + count - 1].
std::optional<double> sigma_auto(const ModelParams& p, const PseudoOrbit& orbit,
                                 const std::vector<HatWord>& words, int k_start,
                                 int count = 7);

struct WanderingReport {
    long steps = 0;
    bool all_disjoint = false;
    long first_i = -1, first_j = -1; // offending pair if any
    long refined_pairs = 0;
    std::vector<double> ln_diameter; // at block starts, one per generation
    bool diameters_decreasing = false;
};

// Interval boxes of the first cylinder pushed through the chain; pairwise
// disjointness over the horizon and shrinking per-generation diameters.
WanderingReport verify_wandering(const ModelParams& p, const PseudoOrbit& orbit,
                                 const std::vector<HatWord>& words,
                                 const std::vector<CylinderDomain>& domains,
                                 int generations = 5);

struct CurvatureReport {
    double kappa_fd = 0.0;
    double kappa_formula = 0.0;
    double normal[3] = {0.0, 0.0, 0.0};
    double normal_err = 0.0; // distance to (-1, 0, 0)
};

// Three-point curvature of the folded leaf at its vertex against the closed
// form, plus the discrete Frenet normal.
CurvatureReport curvature_check(const ModelParams& p, const PerturbationField& field,
                                const PseudoOrbit& orbit, int k, double h = 1e-5);

double curvature_formula(const ModelParams& p, double t);

} // namespace bh
