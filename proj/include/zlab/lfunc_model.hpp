#pragma once

#include <string>
#include <vector>

#include "zlab/core.hpp"
#include "zlab/line_roots.hpp"
#include "zlab/special_functions.hpp"

namespace zlab {

struct GammaFactor {
    double lambda = 0.5;
    Complex mu{};

    bool operator==(const GammaFactor&) const = default;
};

/// Data of the functional equation
///   Φ(s) = ω conj(Φ(1 - conj s)),  Φ(s) = F(s) Q^s ∏ Γ(λ_j s + μ_j).
struct FunctionalEquationData {
    double Q = 1.0;
    std::vector<GammaFactor> gamma_factors;
    Complex omega{1.0, 0.0};
    double degree = 0.0;

    double degree_from_factors() const;
    bool operator==(const FunctionalEquationData&) const = default;
};

enum class FunctionKind { RiemannZeta, LPsi5, FactorZeta, FamilyF };

const char* to_string(FunctionKind kind);
FunctionKind function_kind_from_string(const std::string& name);

/// Lower bound |F(σ₁ + it)| ≥ c and growth |F(σ + iT)| < T^B for σ ≥ -4σ₁.
struct GrowthConstants {
    double sigma1 = 2.0;
    double c = 0.5;
    double B = 10.0;
    bool operator==(const GrowthConstants&) const = default;
};

/// Zero-density constants: at most ε/log(2+δ) log T - 2 zeros with
/// |t - T| ≤ 1/T once T > T̄.
struct DensityConstants {
    double epsilon = 0.17;
    double delta = 0.1;
    double T_bar = 10.0;
    bool operator==(const DensityConstants&) const = default;
};

/// One member of the extended Selberg class, described as data.
///
/// FamilyF is f(s, τ) = (1 - τ)(1 + √5 5^{-s}) ζ(s) + τ L(s, ψ5).  Its
/// functional equation is held in the asymmetric form
///   f(s) = 5^{1/2-s} 2 (2π)^{s-1} Γ(1-s) sin(πs/2) f(1-s),
/// independent of τ; `fe` carries the equivalent (Q, λ, μ, ω) block.
struct FunctionSpec {
    FunctionKind kind = FunctionKind::RiemannZeta;
    double tau = 0.0;
    FunctionalEquationData fe;
    int pole_order = 1;
    GrowthConstants growth;
    DensityConstants density;
    double zero_free_sigma = 1.0;

    static FunctionSpec riemann_zeta();
    static FunctionSpec l_psi5();
    static FunctionSpec factor_zeta();
    static FunctionSpec family(double tau);

    /// Conductor q of the asymmetric functional equation (1 or 5).
    double conductor() const { return kind == FunctionKind::RiemannZeta ? 1.0 : 5.0; }

    bool operator==(const FunctionSpec&) const = default;
};

/// Throws ErrorCode::InvalidArgument when the invariants of the data fail.
void validate(const FunctionSpec& spec);

/// (Q, λ, μ, ω) equivalent to the asymmetric functional equation with
/// conductor q, obtained by the reflection and duplication formulas.
FunctionalEquationData selberg_data_from_asymmetric(double conductor);

/// `Extended` sums the Dirichlet series in binary128 at any s; it is slower
/// and meant for quantities that cancel in double, such as Re F'/F near zeros.
enum class EvalPath { Auto, Series, Reflect, Extended };

struct EvalOptions {
    SeriesOptions series;
    EvalPath path = EvalPath::Auto;
};

/// F, F', F'' at s.  For Re s < -1 the functional equation is used.
JetResult eval_jet(const FunctionSpec& spec, Complex s, int order, const EvalOptions& opts = {});
EvalResult eval(const FunctionSpec& spec, Complex s, int deriv_order, const EvalOptions& opts = {});

/// ∂f/∂τ for the family (and its s-derivatives); independent of τ.
JetResult eval_dtau_jet(Complex s, int order, const EvalOptions& opts = {});
Complex eval_dtau(Complex s, double tau, const EvalOptions& opts = {});

/// Φ(s) = F(s) Q^s ∏ Γ(λ_j s + μ_j).
Complex completed_phi(const FunctionSpec& spec, Complex s, const EvalOptions& opts = {});

/// Relative mismatch |Φ(s) - ω conj Φ(1 - conj s)| / (|Φ(s)| + |Φ(1 - conj s)|).
/// Both sides are evaluated by the series so the check is not circular.
double fe_residual(const FunctionSpec& spec, Complex s);

/// F(s) from F(1-s) through the functional equation (Re s < 1/2).
JetResult fe_reflect_jet(const FunctionSpec& spec, Complex s, int order, const SeriesOptions& opts = {});
EvalResult fe_reflect(const FunctionSpec& spec, Complex s, const SeriesOptions& opts = {});

/// Multiplier X(s) with F(s) = X(s) F(1-s), built from the gamma factors in
/// `fe` or from the asymmetric form with conductor q.
Jet selberg_factor_jet(const FunctionalEquationData& fe, Complex s, int order);
Jet asymmetric_factor_jet(double conductor, Complex s, int order);

/// Rotation angle θ(t) = Im(s log Q + Σ log Γ(λ_j s + μ_j)) - arg(ω)/2 on
/// s = 1/2 + it, with its first two t-derivatives.  e^{iθ} F(1/2+it) is real.
struct LinePhase {
    double theta = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};
LinePhase line_phase(const FunctionalEquationData& fe, double t);

struct LineSample {
    double t = 0.0;
    double z_value = 0.0;
    Complex f_value{};
    Complex phase{1.0, 0.0};
};

/// Real rotation of F on the critical line: f_value = phase * z_value.
LineSample z_rotated(const FunctionSpec& spec, double t, const EvalOptions& opts = {});

/// Z(t) = Re(e^{iθ(t)} F(1/2+it)) with dZ/dt and d²Z/dt².
RealJet z_rotated_jet(const FunctionSpec& spec, double t, const EvalOptions& opts = {});

struct LogDerivative {
    double lhs = 0.0;
    double rhs_exact = 0.0;
    double rhs_asymptotic = 0.0;
};

/// Re F'/F(1/2+it) against -Re Σ λ_j ψ(λ_j(1/2+it) + μ_j) - log Q and the
/// large-t form -(d_F/2) log t - log Q.
LogDerivative critical_line_logderiv(const FunctionSpec& spec, double t, const EvalOptions& opts = {});

} // namespace zlab
