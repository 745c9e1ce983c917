#include "zlab/lfunc_model.hpp"

#include "quad_series.hpp"

#include <algorithm>

namespace zlab {

namespace {

const double kLogPi = std::log(kPi);
const double kLog2Pi = std::log(2.0 * kPi);
const double kSqrt5 = std::sqrt(5.0);
const double kLog5 = std::log(5.0);

void check_order(int order)
{
    if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "deriv_order must be 0, 1 or 2");
}

// Error of a product a*b from the errors of b, with a treated as exact.
std::array<double, 3> product_error(const Jet& a, const std::array<double, 3>& eb)
{
    return {std::abs(a.value) * eb[0], std::abs(a.d1) * eb[0] + std::abs(a.value) * eb[1],
            std::abs(a.d2) * eb[0] + 2.0 * std::abs(a.d1) * eb[1] + std::abs(a.value) * eb[2]};
}

std::array<double, 3> add_errors(double wa, const std::array<double, 3>& ea, double wb, const std::array<double, 3>& eb)
{
    return {wa * ea[0] + wb * eb[0], wa * ea[1] + wb * eb[1], wa * ea[2] + wb * eb[2]};
}

// 1 + √5 5^{-s}
Jet factor_jet(Complex s)
{
    const Complex e = kSqrt5 * std::exp(-s * kLog5);
    return {1.0 + e, -kLog5 * e, kLog5 * kLog5 * e};
}

JetResult factor_zeta_jet(Complex s, int order, const SeriesOptions& opts)
{
    const JetResult z = riemann_zeta_jet(s, order, opts);
    const Jet g = factor_jet(s);
    return {g * z.jet, product_error(g, z.err)};
}

// sin(z(s)) with z' = k, split into a logarithmic part (used when |Im z| is
// large and sin z would overflow) and a direct part.
void sine_factor(Complex z, double k, Jet& log_part, Jet& direct)
{
    if (std::abs(z.imag()) > 1.0) {
        Complex logsin, cot;
        const Complex I(0.0, 1.0);
        if (z.imag() > 0.0) {
            const Complex q = std::exp(2.0 * I * z);
            logsin = -I * z + std::log(1.0 - q) + std::log(Complex(0.0, 0.5));
            cot = I * (q + 1.0) / (q - 1.0);
        } else {
            const Complex q = std::exp(-2.0 * I * z);
            logsin = I * z + std::log(1.0 - q) + std::log(Complex(0.0, -0.5));
            cot = I * (1.0 + q) / (1.0 - q);
        }
        log_part = log_part + Jet{logsin, k * cot, -k * k * (1.0 + cot * cot)};
    } else {
        const Complex sz = std::sin(z), cz = std::cos(z);
        direct = direct * Jet{sz, k * cz, -k * k * sz};
    }
}

// G(1-s) as a jet in s, from the jet of G at w = 1 - s.
Jet reflect_argument(const Jet& g) { return {g.value, -g.d1, g.d2}; }


JetResult series_jet(const FunctionSpec& spec, Complex s, int order, const SeriesOptions& opts)
{
    if (spec.pole_order > 0 && s == Complex(1.0, 0.0)) throw Error(ErrorCode::Pole, "F has a pole at s = 1");
    switch (spec.kind) {
    case FunctionKind::RiemannZeta:
        return riemann_zeta_jet(s, order, opts);
    case FunctionKind::LPsi5:
        return dirichlet_l_psi5_jet(s, order, opts);
    case FunctionKind::FactorZeta:
        return factor_zeta_jet(s, order, opts);
    case FunctionKind::FamilyF: {
        const double tau = spec.tau;
        if (tau == 0.0) return factor_zeta_jet(s, order, opts);
        if (tau == 1.0) return dirichlet_l_psi5_jet(s, order, opts);
        const JetResult a = factor_zeta_jet(s, order, opts);
        const JetResult b = dirichlet_l_psi5_jet(s, order, opts);
        return {Complex(1.0 - tau) * a.jet + Complex(tau) * b.jet, add_errors(1.0 - tau, a.err, tau, b.err)};
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown function kind");
}

// Coefficients of F over one period, in binary128.
std::vector<detail::quad> period_coefficients(const FunctionSpec& spec)
{
    using detail::quad;
    const std::vector<quad> psi{1, -1, -1, 1, 0};
    std::vector<quad> factor{1, 1, 1, 1, 1 + detail::quad_sqrt(5)};
    switch (spec.kind) {
    case FunctionKind::RiemannZeta: return {1};
    case FunctionKind::LPsi5: return psi;
    case FunctionKind::FactorZeta: return factor;
    case FunctionKind::FamilyF: {
        const quad tau = spec.tau;
        for (std::size_t a = 0; a < factor.size(); ++a) factor[a] = (1 - tau) * factor[a] + tau * psi[a];
        return factor;
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown function kind");
}

} // namespace

double FunctionalEquationData::degree_from_factors() const
{
    double sum = 0.0;
    for (const auto& g : gamma_factors) sum += g.lambda;
    return 2.0 * sum;
}

const char* to_string(FunctionKind kind)
{
    switch (kind) {
    case FunctionKind::RiemannZeta: return "zeta";
    case FunctionKind::LPsi5: return "lpsi5";
    case FunctionKind::FactorZeta: return "factor_zeta";
    case FunctionKind::FamilyF: return "family";
    }
    return "unknown";
}

FunctionKind function_kind_from_string(const std::string& name)
{
    if (name == "zeta" || name == "RiemannZeta") return FunctionKind::RiemannZeta;
    if (name == "lpsi5" || name == "LPsi5") return FunctionKind::LPsi5;
    if (name == "factor_zeta" || name == "factor" || name == "FactorZeta") return FunctionKind::FactorZeta;
    if (name == "family" || name == "FamilyF") return FunctionKind::FamilyF;
    throw Error(ErrorCode::InvalidArgument, "unknown function kind '" + name + "'");
}

FunctionalEquationData selberg_data_from_asymmetric(double conductor)
{
    // q^{1/2-s} 2(2π)^{s-1} Γ(1-s) sin(πs/2) = (q/π)^{1/2-s} Γ((1-s)/2) / Γ(s/2)
    FunctionalEquationData fe;
    fe.Q = std::sqrt(conductor / kPi);
    fe.gamma_factors = {GammaFactor{0.5, 0.0}};
    fe.omega = 1.0;
    fe.degree = fe.degree_from_factors();
    return fe;
}

FunctionSpec FunctionSpec::riemann_zeta()
{
    FunctionSpec f;
    f.kind = FunctionKind::RiemannZeta;
    f.fe = selberg_data_from_asymmetric(1.0);
    f.pole_order = 1;
    f.growth = {2.0, 0.65, 10.0};
    f.density = {0.17, 0.1, 10.0};
    f.zero_free_sigma = 1.0;
    return f;
}

FunctionSpec FunctionSpec::l_psi5()
{
    FunctionSpec f;
    f.kind = FunctionKind::LPsi5;
    f.fe = selberg_data_from_asymmetric(5.0);
    f.pole_order = 0;
    f.growth = {2.0, 0.65, 10.0};
    f.density = {0.5, 0.1, 10.0};
    f.zero_free_sigma = 1.0;
    return f;
}

FunctionSpec FunctionSpec::factor_zeta()
{
    FunctionSpec f;
    f.kind = FunctionKind::FactorZeta;
    f.fe = selberg_data_from_asymmetric(5.0);
    f.pole_order = 1;
    f.growth = {2.0, 0.6, 10.0};
    f.density = {0.5, 0.1, 10.0};
    f.zero_free_sigma = 1.0;
    return f;
}

FunctionSpec FunctionSpec::family(double tau)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in [0, 1]");
    FunctionSpec f;
    f.kind = FunctionKind::FamilyF;
    f.tau = tau;
    f.fe = selberg_data_from_asymmetric(5.0);
    f.pole_order = tau < 1.0 ? 1 : 0;
    f.growth = {3.0, 0.7, 12.0};
    f.density = {1.0, 0.1, 10.0};
    f.zero_free_sigma = 3.0;
    return f;
}

void validate(const FunctionSpec& spec)
{
    const auto& fe = spec.fe;
    if (!(fe.Q > 0.0)) throw Error(ErrorCode::InvalidArgument, "Q must be positive");
    if (std::abs(std::abs(fe.omega) - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "|omega| must be 1");
    for (const auto& g : fe.gamma_factors) {
        if (!(g.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda_j must be positive");
        if (g.mu.real() < 0.0) throw Error(ErrorCode::InvalidArgument, "Re mu_j must be nonnegative");
    }
    if (std::abs(fe.degree - fe.degree_from_factors()) > 1e-12)
        throw Error(ErrorCode::InvalidArgument, "degree differs from 2 sum lambda_j");
    if (spec.kind == FunctionKind::FamilyF && !(spec.tau >= 0.0 && spec.tau <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "tau must lie in [0, 1]");
    if (spec.pole_order < 0) throw Error(ErrorCode::InvalidArgument, "pole order must be nonnegative");
}

Jet selberg_factor_jet(const FunctionalEquationData& fe, Complex s, int order)
{
    check_order(order);
    // 1/Γ(λs+μ) = Γ(1-λs-μ) sin(π(λs+μ)) / π keeps the trivial zeros finite.
    const double logQ = std::log(fe.Q);
    Jet logs{std::log(fe.omega) + (1.0 - 2.0 * s) * logQ, -2.0 * logQ, 0.0};
    Jet direct{1.0, 0.0, 0.0};
    for (const auto& g : fe.gamma_factors) {
        const double l = g.lambda;
        const Complex a = l * (1.0 - s) + std::conj(g.mu);
        const Complex b = 1.0 - l * s - g.mu;
        logs.value += log_gamma(a) + log_gamma(b) - kLogPi;
        if (order >= 1) logs.d1 += -l * digamma(a) - l * digamma(b);
        if (order >= 2) logs.d2 += l * l * (trigamma(a) + trigamma(b));
        sine_factor(kPi * (l * s + g.mu), kPi * l, logs, direct);
    }
    return exp_jet(logs) * direct;
}

Jet asymmetric_factor_jet(double conductor, Complex s, int order)
{
    check_order(order);
    const double logq = std::log(conductor);
    const Complex w = 1.0 - s;
    Jet logs{(0.5 - s) * logq + std::log(2.0) + (s - 1.0) * kLog2Pi + log_gamma(w), -logq + kLog2Pi, 0.0};
    if (order >= 1) logs.d1 -= digamma(w);
    if (order >= 2) logs.d2 = trigamma(w);
    Jet direct{1.0, 0.0, 0.0};
    sine_factor(0.5 * kPi * s, 0.5 * kPi, logs, direct);
    return exp_jet(logs) * direct;
}

JetResult fe_reflect_jet(const FunctionSpec& spec, Complex s, int order, const SeriesOptions& opts)
{
    check_order(order);
    if (!(s.real() < 0.5)) throw Error(ErrorCode::InvalidArgument, "fe_reflect needs Re s < 1/2");
    // All four kinds have real Dirichlet coefficients, so conj F(1 - conj s) = F(1 - s).
    const Jet x = spec.kind == FunctionKind::FamilyF ? asymmetric_factor_jet(spec.conductor(), s, order)
                                                     : selberg_factor_jet(spec.fe, s, order);
    const JetResult g = series_jet(spec, 1.0 - s, order, opts);
    JetResult r;
    r.jet = x * reflect_argument(g.jet);
    r.err = product_error(x, g.err);
    for (int k = 0; k <= order; ++k)
        if (!is_finite(r.jet[k])) throw Error(ErrorCode::PrecisionUnreachable, "overflow in reflected value");
    return r;
}

EvalResult fe_reflect(const FunctionSpec& spec, Complex s, const SeriesOptions& opts)
{
    return fe_reflect_jet(spec, s, 0, opts).component(0);
}

JetResult eval_jet(const FunctionSpec& spec, Complex s, int order, const EvalOptions& opts)
{
    check_order(order);
    if (opts.path == EvalPath::Extended) {
        if (spec.pole_order > 0 && s == Complex(1.0, 0.0)) throw Error(ErrorCode::Pole, "F has a pole at s = 1");
        return detail::periodic_series_jet_quad(s, period_coefficients(spec), order);
    }
    const bool reflect = opts.path == EvalPath::Reflect || (opts.path == EvalPath::Auto && s.real() < -1.0);
    if (reflect) return fe_reflect_jet(spec, s, order, opts.series);
    return series_jet(spec, s, order, opts.series);
}

EvalResult eval(const FunctionSpec& spec, Complex s, int deriv_order, const EvalOptions& opts)
{
    return eval_jet(spec, s, deriv_order, opts).component(deriv_order);
}

JetResult eval_dtau_jet(Complex s, int order, const EvalOptions& opts)
{
    const FunctionSpec a = FunctionSpec::family(0.0);
    const FunctionSpec b = FunctionSpec::family(1.0);
    const JetResult fa = eval_jet(a, s, order, opts);
    const JetResult fb = eval_jet(b, s, order, opts);
    return {fb.jet - fa.jet, add_errors(1.0, fa.err, 1.0, fb.err)};
}

Complex eval_dtau(Complex s, double tau, const EvalOptions& opts)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in [0, 1]");
    return eval_dtau_jet(s, 0, opts).jet.value;
}

namespace {

Complex gamma_log_sum(const FunctionalEquationData& fe, Complex s)
{
    Complex g = s * std::log(fe.Q);
    for (const auto& f : fe.gamma_factors) g += log_gamma(f.lambda * s + f.mu);
    return g;
}

} // namespace

Complex completed_phi(const FunctionSpec& spec, Complex s, const EvalOptions& opts)
{
    const Complex f = eval(spec, s, 0, opts).value;
    return f * std::exp(gamma_log_sum(spec.fe, s));
}

double fe_residual(const FunctionSpec& spec, Complex s)
{
    const EvalOptions series{{}, EvalPath::Series};
    const Complex s2 = 1.0 - std::conj(s);
    const Complex g1 = gamma_log_sum(spec.fe, s);
    const Complex g2 = gamma_log_sum(spec.fe, s2);
    const double m = std::max(g1.real(), g2.real());
    const Complex a = eval(spec, s, 0, series).value * std::exp(g1 - m);
    const Complex b = eval(spec, s2, 0, series).value * std::exp(g2 - m);
    const double denom = std::abs(a) + std::abs(b);
    if (denom == 0.0) return 0.0;
    return std::abs(a - spec.fe.omega * std::conj(b)) / denom;
}

LinePhase line_phase(const FunctionalEquationData& fe, double t)
{
    const Complex s(0.5, t);
    const double logQ = std::log(fe.Q);
    Complex h = s * logQ, h1 = logQ, h2 = 0.0;
    for (const auto& g : fe.gamma_factors) {
        const Complex z = g.lambda * s + g.mu;
        h += log_gamma(z);
        h1 += g.lambda * digamma(z);
        h2 += g.lambda * g.lambda * trigamma(z);
    }
    return {h.imag() - 0.5 * std::arg(fe.omega), h1.real(), -h2.imag()};
}

LineSample z_rotated(const FunctionSpec& spec, double t, const EvalOptions& opts)
{
    const LinePhase ph = line_phase(spec.fe, t);
    const Complex f = eval(spec, Complex(0.5, t), 0, opts).value;
    const Complex rot = std::polar(1.0, ph.theta);
    LineSample out;
    out.t = t;
    out.f_value = f;
    out.z_value = (rot * f).real();
    out.phase = std::conj(rot);
    return out;
}

RealJet z_rotated_jet(const FunctionSpec& spec, double t, const EvalOptions& opts)
{
    const LinePhase ph = line_phase(spec.fe, t);
    const Jet f = eval_jet(spec, Complex(0.5, t), 2, opts).jet;
    const Complex e = std::polar(1.0, ph.theta);
    const Complex I(0.0, 1.0);
    return {(e * f.value).real(), (e * I * (ph.d1 * f.value + f.d1)).real(),
            (e * (-ph.d1 * ph.d1 * f.value - 2.0 * ph.d1 * f.d1 - f.d2 + I * ph.d2 * f.value)).real()};
}

LogDerivative critical_line_logderiv(const FunctionSpec& spec, double t, const EvalOptions& opts)
{
    const Complex s(0.5, t);
    // Re F'/F is O(1) while F' conj F is O(|F'| |F|): the cancellation needs
    // more than double precision near zeros of F.
    EvalOptions ext = opts;
    if (ext.path == EvalPath::Auto) ext.path = EvalPath::Extended;
    const Jet f = eval_jet(spec, s, 1, ext).jet;
    if (std::abs(f.value) < 1e-8)
        throw Error(ErrorCode::TooCloseToZero, "|F(1/2+it)| below 1e-8 at t = " + std::to_string(t));
    LogDerivative out;
    out.lhs = (f.d1 / f.value).real();
    const double logQ = std::log(spec.fe.Q);
    double psi_sum = 0.0;
    for (const auto& g : spec.fe.gamma_factors) psi_sum += g.lambda * digamma(g.lambda * s + g.mu).real();
    out.rhs_exact = -psi_sum - logQ;
    out.rhs_asymptotic = -0.5 * spec.fe.degree * std::log(t) - logQ;
    return out;
}

} // namespace zlab
