#pragma once

#include <string>
#include <vector>

namespace bh {

// Scalar constants of the affine horseshoe-with-fold model.
// The default set is the reference configuration every test pins.
struct ModelParams {
    double lambda_ss = 0.05;
    double lambda_cs0 = 0.10;
    double lambda_cs1 = 0.92;
    double lambda_u = 2.5;
    double eps0 = 0.01;   // block margin
    double eps = 1e-3;    // cone/tolerance parameter
    double a1 = 1.0;      // fold coefficients
    double a2 = 0.1;
    double a3 = -0.5;
    double a4 = 1.0;
    double mu = 0.15;     // fold offset
    int n0 = 5;           // generation of the seed bridge
    int L = 4;            // bridge-depth multiplier

    // Derived horizontal slabs (x-intervals); each is crossed with I_eps0^2.
    double v0_lo() const { return -eps0; }
    double v0_hi() const { return 1.0 / lambda_u + eps0; }
    double v1_lo() const { return 1.0 - 1.0 / lambda_u - eps0; }
    double v1_hi() const { return 1.0 + eps0; }
    double h_lo() const { return 0.5 - eps0; }
    double h_hi() const { return 0.5 + eps0; }

    double block_lo() const { return -eps0; }
    double block_hi() const { return 1.0 + eps0; }

    // I(eta) = [1-lambda_cs1+eta, lambda_cs0-eta], nonempty for small eta.
    double i_lo(double eta) const { return 1.0 - lambda_cs1 + eta; }
    double i_hi(double eta) const { return lambda_cs0 - eta; }

    // x-extent of the fold image of the central slab, a2 > 0 case.
    double fold_image_lo() const { return mu - a2 * eps0 - a1 * eps0 * eps0; }
    double fold_image_hi() const { return mu + a2 * (1.0 + eps0); }
};

// Every violated inequality, with both sides evaluated. Empty means valid.
std::vector<std::string> validate_params(const ModelParams& p);

} // namespace bh
