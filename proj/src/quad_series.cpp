#include "quad_series.hpp"

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace zlab::detail {

namespace {

struct CQ {
    quad re = 0, im = 0;
};

inline CQ operator+(CQ a, CQ b) { return {a.re + b.re, a.im + b.im}; }
inline CQ operator-(CQ a, CQ b) { return {a.re - b.re, a.im - b.im}; }
inline CQ operator*(CQ a, CQ b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline CQ operator*(quad k, CQ a) { return {k * a.re, k * a.im}; }
inline CQ inv(CQ a)
{
    const quad d = a.re * a.re + a.im * a.im;
    return {a.re / d, -a.im / d};
}
inline quad cabs2(CQ a) { return a.re * a.re + a.im * a.im; }

// exp(-s L) for real L.
inline CQ exp_neg(CQ s, quad L)
{
    const quad m = expq(-s.re * L);
    quad sn, cs;
    sincosq(-s.im * L, &sn, &cs);
    return {m * cs, m * sn};
}

struct JQ {
    CQ v, d1, d2;
};

inline JQ operator+(const JQ& a, const JQ& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline JQ operator*(quad k, const JQ& a) { return {k * a.v, k * a.d1, k * a.d2}; }
inline JQ operator*(const JQ& a, const JQ& b)
{
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + quad(2) * (a.d1 * b.d1) + a.v * b.d2};
}

// e^{-sL} as a jet in s.
inline JQ power_jet(CQ s, quad L)
{
    const CQ e = exp_neg(s, L);
    return {e, -L * e, (L * L) * e};
}

constexpr int kTerms = 32;

// B_{2k}/(2k)! for k = 0..kTerms+1 from Σ_{j≤m} a_j/(m+1-j)! = 0, a_m = B_m/m!.
const std::array<quad, kTerms + 2>& bernoulli_quad()
{
    static const std::array<quad, kTerms + 2> b = [] {
        constexpr int M = 2 * (kTerms + 1);
        std::array<quad, M + 2> inv_fact{};
        inv_fact[0] = 1;
        for (int i = 1; i <= M + 1; ++i) inv_fact[static_cast<std::size_t>(i)] = inv_fact[static_cast<std::size_t>(i - 1)] / i;
        std::array<quad, M + 1> a{};
        a[0] = 1;
        for (int m = 1; m <= M; ++m) {
            quad acc = 0;
            for (int j = 0; j < m; ++j) acc += a[static_cast<std::size_t>(j)] * inv_fact[static_cast<std::size_t>(m + 1 - j)];
            a[static_cast<std::size_t>(m)] = -acc;
        }
        std::array<quad, kTerms + 2> out{};
        for (int k = 0; k <= kTerms + 1; ++k) out[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(2 * k)];
        return out;
    }();
    return b;
}

// x^{1-s}/(s-1), or x^{1-s}/(s-1) - 1/(s-1) when `drop_pole`, as a jet.
JQ integral_quad(CQ s, quad L, bool drop_pole)
{
    const CQ u = s - CQ{1, 0};
    if (drop_pole && sqrtq(cabs2(u)) * L < quad(0.5)) {
        // (e^{-uL} - 1)/u = Σ_{j≥1} (-L)^j u^{j-1}/j!, differentiated termwise.
        JQ acc{};
        quad coef = 1;
        CQ up{1, 0}, up1{0, 0}, up2{0, 0};  // u^{j-1}, u^{j-2}, u^{j-3}
        for (int j = 1; j < 80; ++j) {
            coef *= -L / j;
            acc.v = acc.v + coef * up;
            acc.d1 = acc.d1 + (coef * (j - 1)) * up1;
            acc.d2 = acc.d2 + (coef * ((j - 1) * (j - 2))) * up2;
            up2 = up1;
            up1 = up;
            up = up * u;
        }
        return acc;
    }
    const CQ iu = inv(u);
    const CQ e = exp_neg(u, L);
    JQ r{e * iu, e * ((-L) * iu - iu * iu), e * ((L * L) * iu + (quad(2) * L) * (iu * iu) + quad(2) * (iu * iu * iu))};
    if (drop_pole) r = r + JQ{quad(-1) * iu, iu * iu, quad(-2) * (iu * iu * iu)};
    return r;
}

// ζ(s, α) as a jet, with the first omitted Euler-Maclaurin term as error.
JQ hurwitz_quad(CQ s, quad alpha, int N, bool drop_pole, quad& trunc)
{
    JQ sum{};
    for (int n = N - 1; n >= 0; --n) sum = sum + power_jet(s, logq(n + alpha));

    const quad x = N + alpha;
    const quad L = logq(x);
    const JQ xs = power_jet(s, L);

    sum = sum + integral_quad(s, L, drop_pole);
    sum = sum + quad(0.5) * xs;

    const auto& b = bernoulli_quad();
    JQ poly{s, {1, 0}, {0, 0}};  // s (s+1) ... (s+2k-2)
    quad xpow = 1 / x;           // x^{1-2k}
    for (int k = 1; k <= kTerms + 1; ++k) {
        if (k > 1) {
            for (int c : {2 * k - 3, 2 * k - 2}) {
                const CQ l = s + CQ{quad(c), 0};
                poly = {poly.v * l, poly.d1 * l + poly.v, poly.d2 * l + quad(2) * poly.d1};
            }
            xpow /= x * x;
        }
        const JQ term = b[static_cast<std::size_t>(k)] * (poly * (xpow * xs));
        if (k <= kTerms) {
            sum = sum + term;
        } else {
            trunc = sqrtq(std::max({cabs2(term.v), cabs2(term.d1), cabs2(term.d2)}));
        }
    }
    return sum;
}

inline Complex to_double(CQ a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }

} // namespace

quad quad_sqrt(quad x) { return sqrtq(x); }

JetResult periodic_series_jet_quad(Complex s_in, const std::vector<quad>& coef, int order)
{
    if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "deriv_order must be 0, 1 or 2");
    if (coef.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient period");
    quad total = 0;
    for (quad c : coef) total += c;
    if (s_in == Complex(1.0, 0.0) && total != 0) throw Error(ErrorCode::Pole, "F has a pole at s = 1");

    const CQ s{s_in.real(), s_in.imag()};
    const int q = static_cast<int>(coef.size());
    // |s + 2k| / (2π x) stays below 1/3 for k ≤ kTerms + 1, so the last
    // Bernoulli term is below 3^{-2 kTerms} of the leading one.
    const int N = static_cast<int>(std::ceil(30.0 + 0.5 * std::abs(s_in)));

    JQ acc{};
    quad trunc = 0;
    for (int a = 1; a <= q; ++a) {
        const quad c = coef[static_cast<std::size_t>(a - 1)];
        if (c == 0) continue;
        quad tr = 0;
        acc = acc + c * hurwitz_quad(s, quad(a) / q, N, total == 0, tr);
        trunc += fabsq(c) * tr;
    }
    if (q > 1) {
        acc = acc * power_jet(s, logq(quad(q)));
        trunc *= powq(quad(q), -s.re);
    }

    JetResult r;
    r.jet = {to_double(acc.v), to_double(acc.d1), to_double(acc.d2)};
    for (int k = 0; k <= order; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        r.err[kk] = static_cast<double>(trunc) + 1.2e-16 * std::abs(r.jet[k]);
        if (!is_finite(r.jet[k])) throw Error(ErrorCode::PrecisionUnreachable, "non-finite series value");
    }
    return r;
}

} // namespace zlab::detail
