#pragma once

#include "zlab/core.hpp"

namespace zlab {

/// Principal branch of log Gamma, continuous on the plane cut along
/// (-inf, 0].  Throws ErrorCode::Pole at the nonpositive integers.
Complex log_gamma(Complex s);

/// Gamma'/Gamma.
Complex digamma(Complex s);

/// d/ds digamma.
Complex trigamma(Complex s);

/// Euler-Maclaurin controls.  `length == 0` selects the default
/// N = max(20, ceil(2 |Im s|)); the length is doubled up to `max_doublings`
/// times while the error estimate exceeds `tol * max(1, |value|)`.
struct SeriesOptions {
    double tol = 1e-10;
    int max_doublings = 4;
    int length = 0;
    int bernoulli_terms = 12;
};

int default_series_length(Complex s);

/// Hurwitz zeta ζ(s, a), a in (0, 1], or one of its first two s-derivatives.
EvalResult hurwitz_zeta(Complex s, double a, int deriv_order, const SeriesOptions& opts = {});
JetResult hurwitz_zeta_jet(Complex s, double a, int order, const SeriesOptions& opts = {});

EvalResult riemann_zeta(Complex s, int deriv_order, const SeriesOptions& opts = {});
JetResult riemann_zeta_jet(Complex s, int order, const SeriesOptions& opts = {});

/// The real even character mod 5 with psi(2) = -1.
int psi5(long long n);

/// L(s, psi5) = 5^{-s} sum_{a=1}^{4} psi5(a) ζ(s, a/5).  Entire; s = 1 is a
/// regular point.
EvalResult dirichlet_l_psi5(Complex s, int deriv_order, const SeriesOptions& opts = {});
JetResult dirichlet_l_psi5_jet(Complex s, int order, const SeriesOptions& opts = {});

} // namespace zlab
