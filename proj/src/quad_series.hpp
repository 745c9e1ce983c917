#pragma once

#include <vector>

#include "zlab/core.hpp"

namespace zlab::detail {

__extension__ typedef __float128 quad;

quad quad_sqrt(quad x);

// Σ_{n≥1} c(n) n^{-s} and its s-derivatives for c of period q = coef.size(),
// coef[a-1] = c(a), continued to all s ≠ 1 by Euler-Maclaurin.  Everything
// is summed in binary128, so the absolute error of the result is set by the
// final rounding to double rather than by cancellation in the sum.
JetResult periodic_series_jet_quad(Complex s, const std::vector<quad>& coef, int order);

} // namespace zlab::detail
