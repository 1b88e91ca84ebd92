#include "bh/params.hpp"

#include <cmath>
#include <sstream>

namespace bh {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

std::vector<std::string> validate_params(const ModelParams& p) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& ineq, double value) {
        out.push_back(ineq + " fails (" + num(value) + ")");
    };

    if (!(p.lambda_ss < p.lambda_cs0))
        fail("lambda_ss<lambda_cs0", p.lambda_ss);
    if (!(p.lambda_cs0 < 0.5))
        fail("lambda_cs0<1/2", p.lambda_cs0);
    if (!(0.5 < p.lambda_cs1 && p.lambda_cs1 < 1.0))
        fail("1/2<lambda_cs1<1", p.lambda_cs1);
    if (!(p.lambda_cs0 + p.lambda_cs1 > 1.0))
        fail("lambda_cs0+lambda_cs1>1", p.lambda_cs0 + p.lambda_cs1);
    if (!(p.lambda_u > 2.0))
        fail("lambda_u>2", p.lambda_u);
    {
        double prod = p.lambda_cs0 * p.lambda_cs1 * p.lambda_u * p.lambda_u;
        if (!(prod < 1.0))
            fail("lambda_cs0*lambda_cs1*lambda_u^2<1", prod);
    }
    {
        double v = p.lambda_cs1 * (1.0 + p.eps0);
        if (!(v < 1.0))
            fail("lambda_cs1*(1+eps0)<1", v);
    }
    if (!(p.a1 > 0.0))
        fail("a1>0", p.a1);
    if (!(std::fabs(p.a3) < 1.0 - 2.0 * p.lambda_ss))
        fail("|a3|<1-2*lambda_ss", std::fabs(p.a3));
    if (!(p.a2 * p.a3 * p.a4 < 0.0))
        fail("a2*a3*a4<0", p.a2 * p.a3 * p.a4);
    if (p.a2 == 0.0) {
        fail("a2!=0", p.a2);
    } else {
        // mu window keeping the fold image strictly between the V-slabs
        double a2abs = std::fabs(p.a2);
        double lo = p.a1 * p.eps0 * p.eps0 + a2abs * p.eps0;
        double hi = 1.0 / p.lambda_u - a2abs * (1.0 + p.eps0);
        if (!(lo < p.mu))
            fail("a1*eps0^2+|a2|*eps0<mu", p.mu);
        if (!(p.mu < hi))
            fail("mu<1/lambda_u-|a2|*(1+eps0)", p.mu);
    }
    if (!(p.eps > 0.0))
        fail("eps>0", p.eps);
    if (!(p.eps0 > 0.0))
        fail("eps0>0", p.eps0);
    if (!(p.n0 >= 1))
        fail("n0>=1", p.n0);
    if (!(p.L >= 4))
        fail("L>=4", p.L);
    return out;
}

} // namespace bh
