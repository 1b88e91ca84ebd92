#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace bh {

// The cs pullback conditioning grows like lambda_u^(L k); branch decisions and
// the landing check need about 5.3k+30 bits through k ~ 140, so 400 digits.
using bigfloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<400>>;

using rational = boost::multiprecision::cpp_rational;

// Shortest-decimal reading of a double as an exact rational (0.92 -> 23/25).
// The cs pullback iterates expanding inverse branches, so the branch constants
// must be the intended decimals, not their nearest binary doubles; the walk
// amplifies a 1 ulp parameter offset past the window width within ~60 steps.
rational decimal_rational(double v);
bigfloat decimal_bigfloat(double v);

} // namespace bh
