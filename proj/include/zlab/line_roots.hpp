#pragma once

#include <functional>
#include <vector>

namespace zlab {

/// Value and first two derivatives of a real function of one variable.
struct RealJet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

using RealFunction = std::function<RealJet(double)>;

/// Root of f in [a, b] with f(a) f(b) <= 0, by Newton safeguarded with
/// bisection.
double bracketed_root(const RealFunction& f, double a, double b, double fa, double fb);

/// Real roots of f in (a, b), with multiplicity, sampled on `intervals`
/// equal steps.  Sign changes give one root each; a local extremum of |f|
/// between samples whose refined critical value has the opposite sign gives
/// two.  A critical value that vanishes to rounding counts as a double root.
std::vector<double> real_roots(const RealFunction& f, double a, double b, int intervals);

/// Minimum of a unimodal function on [a, b] by golden-section search.
double golden_min(const std::function<double(double)>& f, double a, double b, double tol);

} // namespace zlab
