#include "bh/precise.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace bh {

rational decimal_rational(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    boost::multiprecision::cpp_int digits = 0;
    long frac = 0, exp10 = 0;
    bool in_frac = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            in_frac = true;
            continue;
        }
        if (c == 'e' || c == 'E') {
            exp10 = std::strtol(s.c_str() + i + 1, nullptr, 10);
            break;
        }
        digits = digits * 10 + (c - '0');
        if (in_frac)
            ++frac;
    }
    rational r(digits);
    long net = exp10 - frac;
    boost::multiprecision::cpp_int p10 = 1;
    for (long j = 0, n = net < 0 ? -net : net; j < n; ++j)
        p10 *= 10;
    if (net >= 0)
        r *= rational(p10);
    else
        r /= rational(p10);
    return neg ? -r : r;
}

bigfloat decimal_bigfloat(double v) {
    return static_cast<bigfloat>(decimal_rational(v));
}

} // namespace bh
