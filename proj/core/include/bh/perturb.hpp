#pragma once

#include "bh/bridges.hpp"
#include "bh/geometry.hpp"
#include "bh/params.hpp"
#include "bh/precise.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bh {

// C^r ramp: the degree-(2r+1) polynomial smoothstep, 0 at -1 and 1 at 0 with
// r matching derivatives at both ends.
struct Mollifier {
    int r = 3;
    double operator()(double x) const;
};

// Plateau bump: 1 on [a, b], 0 outside the c*(b-a)-neighborhood of [a, b].
double bump_1d(const Mollifier& m, double c, double a, double b, double x);

struct BumpCube {
    Point center;
    double half_width = 0.0;
    int k = 0;
};

// Product of three axis bumps with c = 1/2 and plateau half-width
// half_width/2; support is exactly the cube.
double bump_3d(const Mollifier& m, const BumpCube& cube, const Point& pt);

// Section point of the depth-k block: x solves the block word ending at the
// fold entry, z = 1/2 exactly, y carried through the block recursion.
struct ChainAnchor {
    int k = 0;
    bigfloat x;      // block-start expanding coordinate
    bigfloat y;      // block-start strong-stable coordinate
    bigfloat y_end;  // strong-stable coordinate at the fold entry
    bigfloat z_end;  // cs coordinate at the fold entry
};

struct PseudoOrbit {
    std::vector<ChainAnchor> anchors; // k = k_lo .. k_hi
    std::vector<double> dz;           // translation cs component per link k -> k+1
    int k_lo = 1;
    double c_max = 0.0; // measured constant in |u_k| <= C lam_under^-(n0+L(k+1))
};

// Anchors from the built block words; the link translation steers the fold
// image onto the next anchor.
std::optional<PseudoOrbit> build_pseudo_orbit(const ModelParams& p,
                                              const std::vector<HatWord>& words,
                                              int k_lo, int k_hi,
                                              std::string* err = nullptr);

struct PerturbationField {
    Mollifier m;
    std::vector<BumpCube> cubes;           // cube i belongs to link k_lo + i
    std::vector<std::array<double, 3>> u;  // translation vectors
    int k_lo = 1;
    int n_start = 1; // links below n_start are dropped from the sum
    int k0 = 0;      // least k from which the separation inequality holds
};

// k_cap limits the bump sum to links k <= k_cap (0 = every link of the orbit);
// the sum must stay finite and its cubes pairwise disjoint, while anchors past
// the cap may still be used as plain chain data.
std::optional<PerturbationField> build_field(const ModelParams& p, const PseudoOrbit& orbit,
                                             int n_start, std::string* err = nullptr,
                                             int k_cap = 0);

Point psi(const PerturbationField& f, const Point& pt);

// One step of g: the translation field applied first, then the map (the fold,
// when it fires, acts on the translated point).
std::optional<StepResult> apply_g(const ModelParams& p, const PerturbationField& f,
                                  const Point& pt);

// Residual of the link property g^{nhat_k+2}(anchor_k) = anchor_{k+1},
// max-norm, evaluated with wide mantissas (the expanding coordinate amplifies
// rounding by lambda_u^nhat, so doubles cannot certify deep links).
double chain_link_residual(const ModelParams& p, const PseudoOrbit& orbit,
                           const std::vector<HatWord>& words, int k);

// Same link property in exact rational arithmetic; practical for shallow k.
bool chain_link_exact(const ModelParams& p, const std::vector<HatWord>& words, int k);

// Geometric bound on sum_{j>K} |u_j| from the measured constant.
double truncation_tail_bound(const ModelParams& p, double c_max, int K);

} // namespace bh
