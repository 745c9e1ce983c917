#include "zlab/special_functions.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace zlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);

// B_{2k}, k = 1..24.
constexpr double kBernoulli[24] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
    1520097643918070802691.0 / 1806.0,
    -27833269579301024235023.0 / 690.0,
    596451111593912163277961.0 / 282.0,
    -5609403368997817686249127547.0 / 46410.0,
};

constexpr int kMaxBernoulli = 24;

// B_{2k} / (2k)!
const std::array<double, kMaxBernoulli>& bernoulli_over_factorial()
{
    static const std::array<double, kMaxBernoulli> table = [] {
        std::array<double, kMaxBernoulli> t{};
        long double fact = 1.0L;
        for (int k = 1; k <= kMaxBernoulli; ++k) {
            fact *= static_cast<long double>(2 * k - 1) * static_cast<long double>(2 * k);
            t[static_cast<std::size_t>(k - 1)] = static_cast<double>(kBernoulli[k - 1] / fact);
        }
        return t;
    }();
    return table;
}

constexpr std::size_t kLogTableSize = 1u << 17;

const std::vector<double>& log_table()
{
    static const std::vector<double> table = [] {
        std::vector<double> t(kLogTableSize);
        t[0] = 0.0;
        for (std::size_t n = 1; n < kLogTableSize; ++n) t[n] = std::log(static_cast<double>(n));
        return t;
    }();
    return table;
}

inline double log_int(long long n)
{
    const auto& t = log_table();
    return static_cast<std::size_t>(n) < t.size() ? t[static_cast<std::size_t>(n)]
                                                  : std::log(static_cast<double>(n));
}

bool is_nonpositive_integer(Complex s)
{
    return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// Number of unit shifts that move Re s into the Stirling region Re s >= 10.
int stirling_shift(Complex s)
{
    return s.real() >= 10.0 ? 0 : static_cast<int>(std::ceil(10.0 - s.real()));
}

// Jet of x^{-s} given L = log x.
inline Jet power_jet(Complex s, double L)
{
    const Complex e = std::exp(-s * L);
    return {e, -L * e, L * L * e};
}

// d^k/ds^k of x^{1-s}/(s-1), k = 0..2, for s away from 1.
Jet integral_jet(Complex s, double L)
{
    const Complex u = s - 1.0;
    const Complex y = std::exp(-u * L);
    const Complex iu = 1.0 / u;
    return {y * iu, y * (-L * iu - iu * iu), y * (L * L * iu + 2.0 * L * iu * iu + 2.0 * iu * iu * iu)};
}

// sum_a w_a x_a^{1-s}/(s-1) for weights summing to zero, uniformly valid
// near s = 1 where each term has a pole but the combination does not.
Jet combined_integral_jet(Complex s, const double* logs, const double* weights, int count)
{
    const Complex u = s - 1.0;
    double lmax = 0.0;
    for (int i = 0; i < count; ++i) lmax = std::max(lmax, std::abs(logs[i]));
    if (std::abs(u) * lmax > 0.5) {
        Jet acc;
        for (int i = 0; i < count; ++i) acc = acc + Complex(weights[i]) * integral_jet(s, logs[i]);
        return acc;
    }
    // (e^{-uL} - 1)/u = sum_{j>=1} (-L)^j u^{j-1} / j!, differentiated termwise.
    Jet acc;
    for (int i = 0; i < count; ++i) {
        const double mL = -logs[i];
        Complex c0 = 0.0, c1 = 0.0, c2 = 0.0;
        double coef = 1.0; // (-L)^j / j!
        Complex upow[64];
        upow[0] = 1.0;
        for (int j = 1; j < 64; ++j) upow[j] = upow[j - 1] * u;
        for (int j = 1; j < 60; ++j) {
            coef *= mL / j;
            c0 += coef * upow[j - 1];
            if (j >= 2) c1 += coef * static_cast<double>(j - 1) * upow[j - 2];
            if (j >= 3) c2 += coef * static_cast<double>((j - 1) * (j - 2)) * upow[j - 3];
        }
        acc = acc + Complex(weights[i]) * Jet{c0, c1, c2};
    }
    return acc;
}

struct Boundary {
    Jet jet;                       // x^{-s}/2 + Bernoulli corrections
    std::array<double, 3> next{};  // magnitude of the first omitted correction
    std::array<double, 3> abs_sum{};
};

Boundary em_boundary(Complex s, double x, int terms)
{
    const auto& coef = bernoulli_over_factorial();
    const double L = std::log(x);
    const Jet xs = power_jet(s, L);
    Boundary b;
    b.jet = 0.5 * xs;
    for (int k = 0; k < 3; ++k) b.abs_sum[static_cast<std::size_t>(k)] = std::abs(b.jet[k]);

    Jet poly{s, 1.0, 0.0}; // s (s+1) ... (s+2k-2)
    double xpow = 1.0 / x; // x^{1-2k}
    const int last = std::min(terms + 1, kMaxBernoulli);
    for (int k = 1; k <= last; ++k) {
        if (k > 1) {
            for (double c : {2.0 * k - 3.0, 2.0 * k - 2.0}) {
                const Complex l = s + c;
                poly = {poly.value * l, poly.d1 * l + poly.value, poly.d2 * l + 2.0 * poly.d1};
            }
            xpow /= x * x;
        }
        const Jet term = coef[static_cast<std::size_t>(k - 1)] * (poly * (Complex(xpow) * xs));
        if (k <= terms) {
            b.jet = b.jet + term;
            for (int c = 0; c < 3; ++c) b.abs_sum[static_cast<std::size_t>(c)] += std::abs(term[c]);
        } else {
            for (int c = 0; c < 3; ++c) b.next[static_cast<std::size_t>(c)] = std::abs(term[c]);
        }
    }
    return b;
}

void check_order(int order)
{
    if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "deriv_order must be 0, 1 or 2");
}

void check_finite(const JetResult& r, int order)
{
    for (int k = 0; k <= order; ++k)
        if (!is_finite(r.jet[k])) throw Error(ErrorCode::PrecisionUnreachable, "non-finite series value");
}

// Runs `attempt(length)` with the default length and doubles it while the
// truncation estimate exceeds the tolerance.  `attempt` returns the jet and
// fills the truncation and rounding estimates separately.
template <class Attempt>
JetResult with_length_control(Complex s, int order, const SeriesOptions& opts, Attempt attempt)
{
    check_order(order);
    if (opts.bernoulli_terms < 1 || opts.bernoulli_terms >= kMaxBernoulli)
        throw Error(ErrorCode::InvalidArgument, "bernoulli_terms must lie in [1, 23]");
    int length = opts.length > 0 ? opts.length : default_series_length(s);
    for (int attemptNo = 0;; ++attemptNo) {
        std::array<double, 3> trunc{}, rounding{};
        JetResult r;
        r.jet = attempt(length, trunc, rounding);
        bool ok = true;
        for (int k = 0; k <= order; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            r.err[kk] = trunc[kk] + rounding[kk];
            if (trunc[kk] > opts.tol * std::max(1.0, std::abs(r.jet[k]))) ok = false;
        }
        if (ok) {
            check_finite(r, order);
            return r;
        }
        if (attemptNo >= opts.max_doublings || opts.length > 0)
            throw Error(ErrorCode::PrecisionUnreachable,
                        "Euler-Maclaurin truncation error above tolerance at length " + std::to_string(length));
        length *= 2;
    }
}

} // namespace

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::PrecisionUnreachable: return "precision unreachable";
    case ErrorCode::OnContourZero: return "zero on contour";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::BudgetExceeded: return "budget exceeded";
    case ErrorCode::IsolationViolation: return "isolation violation";
    case ErrorCode::NoEmptyShell: return "no empty shell";
    case ErrorCode::WrongZeroCount: return "wrong zero count";
    case ErrorCode::NoCollision: return "no collision";
    case ErrorCode::HigherOrderZero: return "higher-order zero";
    case ErrorCode::SingularStall: return "singular stall";
    case ErrorCode::StepUnderflow: return "step underflow";
    case ErrorCode::TooCloseToZero: return "too close to zero";
    case ErrorCode::BoundaryZero: return "zero on boundary";
    case ErrorCode::IndentationOverlap: return "indentation overlap";
    case ErrorCode::PhaseTracking: return "phase tracking";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

int Error::exit_code() const noexcept
{
    switch (code_) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::NoEmptyShell:
        return 4;
    case ErrorCode::PrecisionUnreachable:
    case ErrorCode::NonConvergence:
    case ErrorCode::Divergence:
    case ErrorCode::HigherOrderZero:
    case ErrorCode::SingularStall:
    case ErrorCode::StepUnderflow:
    case ErrorCode::PhaseTracking:
        return 3;
    default:
        return 2;
    }
}

Complex log_gamma(Complex s)
{
    if (is_nonpositive_integer(s)) throw Error(ErrorCode::Pole, "log_gamma at a nonpositive integer");
    const int n = stirling_shift(s);
    Complex shift = 0.0;
    for (int k = 0; k < n; ++k) shift += std::log(s + static_cast<double>(k));
    const Complex z = s + static_cast<double>(n);
    const Complex iz = 1.0 / z;
    const Complex iz2 = iz * iz;
    // sum_{k=1}^{8} B_{2k} / (2k (2k-1) z^{2k-1})
    Complex series = 0.0;
    Complex p = iz;
    for (int k = 1; k <= 8; ++k) {
        series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
        p *= iz2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift;
}

Complex digamma(Complex s)
{
    if (is_nonpositive_integer(s)) throw Error(ErrorCode::Pole, "digamma at a nonpositive integer");
    const int n = stirling_shift(s);
    Complex shift = 0.0;
    for (int k = 0; k < n; ++k) shift += 1.0 / (s + static_cast<double>(k));
    const Complex z = s + static_cast<double>(n);
    const Complex iz2 = 1.0 / (z * z);
    Complex series = 0.0;
    Complex p = iz2;
    for (int k = 1; k <= 8; ++k) {
        series += kBernoulli[k - 1] / (2.0 * k) * p;
        p *= iz2;
    }
    return std::log(z) - 0.5 / z - series - shift;
}

Complex trigamma(Complex s)
{
    if (is_nonpositive_integer(s)) throw Error(ErrorCode::Pole, "trigamma at a nonpositive integer");
    const int n = stirling_shift(s);
    Complex shift = 0.0;
    for (int k = 0; k < n; ++k) {
        const Complex w = 1.0 / (s + static_cast<double>(k));
        shift += w * w;
    }
    const Complex z = s + static_cast<double>(n);
    const Complex iz = 1.0 / z;
    const Complex iz2 = iz * iz;
    Complex series = 0.0;
    Complex p = iz2 * iz;
    for (int k = 1; k <= 8; ++k) {
        series += kBernoulli[k - 1] * p;
        p *= iz2;
    }
    return iz + 0.5 * iz2 + series + shift;
}

int default_series_length(Complex s)
{
    return std::max(20, static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
}

JetResult hurwitz_zeta_jet(Complex s, double a, int order, const SeriesOptions& opts)
{
    if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorCode::InvalidArgument, "hurwitz_zeta needs a in (0, 1]");
    if (s == Complex(1.0, 0.0)) throw Error(ErrorCode::Pole, "hurwitz_zeta at s = 1");
    const bool integer_shift = (a == 1.0);
    return with_length_control(s, order, opts, [&](int N, auto& trunc, auto& rounding) {
        Jet sum;
        std::array<double, 3> abs_sum{};
        for (int n = 0; n < N; ++n) {
            const double l = integer_shift ? log_int(n + 1) : std::log(n + a);
            const Jet t = power_jet(s, l);
            sum = sum + t;
            const double m = std::abs(t.value);
            abs_sum[0] += m;
            abs_sum[1] += m * l;
            abs_sum[2] += m * l * l;
        }
        const double x = N + a;
        const Boundary b = em_boundary(s, x, opts.bernoulli_terms);
        const Jet integral = integral_jet(s, std::log(x));
        const double scale = kEps * (4.0 + std::abs(s) * std::log(x));
        for (std::size_t k = 0; k < 3; ++k) {
            trunc[k] = b.next[k];
            rounding[k] = scale * (abs_sum[k] + b.abs_sum[k] + std::abs(integral[static_cast<int>(k)]));
        }
        return sum + integral + b.jet;
    });
}

EvalResult hurwitz_zeta(Complex s, double a, int deriv_order, const SeriesOptions& opts)
{
    return hurwitz_zeta_jet(s, a, deriv_order, opts).component(deriv_order);
}

JetResult riemann_zeta_jet(Complex s, int order, const SeriesOptions& opts)
{
    return hurwitz_zeta_jet(s, 1.0, order, opts);
}

EvalResult riemann_zeta(Complex s, int deriv_order, const SeriesOptions& opts)
{
    return riemann_zeta_jet(s, deriv_order, opts).component(deriv_order);
}

int psi5(long long n)
{
    switch (((n % 5) + 5) % 5) {
    case 1:
    case 4:
        return 1;
    case 2:
    case 3:
        return -1;
    default:
        return 0;
    }
}

JetResult dirichlet_l_psi5_jet(Complex s, int order, const SeriesOptions& opts)
{
    return with_length_control(s, order, opts, [&](int N, auto& trunc, auto& rounding) {
        // Plain Dirichlet sum over m < 5N, i.e. N shifts of every residue.
        Jet sum;
        std::array<double, 3> abs_sum{};
        const long long M = 5LL * N;
        for (long long m = 1; m < M; ++m) {
            const int chi = psi5(m);
            if (chi == 0) continue;
            const double l = log_int(m);
            const Jet t = power_jet(s, l);
            sum = chi > 0 ? sum + t : sum - t;
            const double mag = std::abs(t.value);
            abs_sum[0] += mag;
            abs_sum[1] += mag * l;
            abs_sum[2] += mag * l * l;
        }
        double logs[4], weights[4];
        Jet tails;
        std::array<double, 3> next{}, tail_abs{};
        for (int a = 1; a <= 4; ++a) {
            const double x = N + a / 5.0;
            logs[a - 1] = std::log(x);
            weights[a - 1] = psi5(a);
            const Boundary b = em_boundary(s, x, opts.bernoulli_terms);
            tails = tails + Complex(weights[a - 1]) * b.jet;
            for (std::size_t k = 0; k < 3; ++k) {
                next[k] += b.next[k];
                tail_abs[k] += b.abs_sum[k];
            }
        }
        tails = tails + combined_integral_jet(s, logs, weights, 4);
        const double log5 = std::log(5.0);
        const Jet scaled = power_jet(s, log5) * tails;
        const double mod5 = std::exp(-s.real() * log5);
        const double scale = kEps * (4.0 + std::abs(s) * std::log(static_cast<double>(M)));
        for (std::size_t k = 0; k < 3; ++k) {
            // the derivative of 5^{-s} contributes at most a factor (1 + log 5)^k
            const double grow = std::pow(1.0 + log5, static_cast<double>(k));
            trunc[k] = mod5 * next[k] * grow;
            rounding[k] = scale * (abs_sum[k] + mod5 * tail_abs[k] * grow + std::abs(scaled[static_cast<int>(k)]));
        }
        return sum + scaled;
    });
}

EvalResult dirichlet_l_psi5(Complex s, int deriv_order, const SeriesOptions& opts)
{
    return dirichlet_l_psi5_jet(s, deriv_order, opts).component(deriv_order);
}

} // namespace zlab
