#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zlab/zero_finder.hpp"

namespace zlab {

/// s-jets of f(s, τ) and ∂f/∂τ(s, τ).
struct FamilyJet {
    Jet f;
    Jet f_tau;
};

/// A one-parameter family f(s, τ) with a known rotation making it real on
/// σ = 1/2.
class ParametricFamily {
public:
    virtual ~ParametricFamily() = default;
    virtual FamilyJet jet(Complex s, double tau, int order) const = 0;
    /// θ(t) with e^{iθ} f(1/2+it, τ) real for every τ.
    virtual LinePhase phase(double t) const = 0;
    virtual std::string name() const = 0;
    /// Pole of f(·, τ), if any.  A zero may be absorbed by it at a τ where
    /// the residue vanishes.
    virtual std::optional<Complex> pole(double /*tau*/) const { return std::nullopt; }
};

/// f(s, τ) = (1 - τ)(1 + √5 5^{-s}) ζ(s) + τ L(s, ψ5).
std::shared_ptr<const ParametricFamily> family_f(const EvalOptions& opts = {});

/// A family given by closures, real on the line without rotation unless a
/// phase is supplied.  Used for planted test instances.
std::shared_ptr<const ParametricFamily> synthetic_family(std::function<FamilyJet(Complex, double, int)> jet,
                                                         std::function<LinePhase(double)> phase = {},
                                                         std::string name = "synthetic");

/// f or f'_s at fixed τ as a counting target.
Target family_target(const ParametricFamily& fam, double tau, Which which);

/// Z(t, τ) = Re(e^{iθ(t)} f(1/2+it, τ)) and the partial derivatives used by
/// the collision machinery.
struct LinePoint {
    double z = 0.0;
    double z_t = 0.0;
    double z_tt = 0.0;
    double z_tau = 0.0;
    double z_ttau = 0.0;
};
LinePoint line_point(const ParametricFamily& fam, double t, double tau);

/// Zeros of Z(·, τ) in (a, b), with multiplicity.
std::vector<double> line_zeros(const ParametricFamily& fam, double tau, double a, double b, int intervals = 32);

struct DoubleZeroEvent {
    enum class Kind { Leave, Land };
    double tau0 = 0.0;
    Complex rho0{};
    Complex f_second_deriv{};
    Kind kind = Kind::Leave;   // in increasing τ: line pair departs, or pair arrives

    bool operator==(const DoubleZeroEvent&) const = default;
};

const char* to_string(DoubleZeroEvent::Kind k);

/// Bisection in τ on the number of line zeros in t_bracket (2 at one end,
/// 0 at the other), then Newton on (Z, ∂Z/∂t) in (t, τ).
DoubleZeroEvent detect_double_zero(const ParametricFamily& fam, std::pair<double, double> t_bracket,
                                   std::pair<double, double> tau_bracket);

struct LocalQuadraticModel {
    double tau = 0.0;
    Complex a1{};
    Complex a0{};
    Complex s1{};   // (-a1 + √disc)/2, principal root
    Complex s2{};
    Complex discriminant{};
};

/// Weierstrass factor s² + a1 s + a0 of f(·, τ) in the disk |s - center| < radius.
LocalQuadraticModel local_quadratic_fit(const ParametricFamily& fam, double tau, Complex center, double radius);
LocalQuadraticModel local_quadratic_fit(const Target& g, double tau, Complex center, double radius);

/// Swaps s1 and s2 of `next` when that keeps the labels continuous with `prev`.
void align_roots(const LocalQuadraticModel& prev, LocalQuadraticModel& next);

struct StepControl {
    double dtau_min = 1e-6;
    double dtau_max = 1e-2;
    double dtau_init = 1e-3;
    int max_corrector_iter = 4;
    double max_slope_change = 0.2;   // relative change of f_s (or Z_t) per step
    int grow_after = 5;
    double fs_floor = 1e-4;
    double tol = 1e-12;               // corrector step tolerance, relative
    double step_cap = 0.05;           // largest accepted |Δρ|
    long max_steps = 200000;
    std::vector<double> checkpoints;  // τ values every trace must land on

    bool operator==(const StepControl&) const = default;
};

struct TrajectorySample {
    double tau = 0.0;
    Complex rho{};
    bool operator==(const TrajectorySample&) const = default;
};

enum class TrajectoryStatus { StaysOnLine, LeavesAt, Incomplete };
const char* to_string(TrajectoryStatus s);

struct Trajectory {
    Which target = Which::F;
    std::vector<TrajectorySample> samples;
    TrajectoryStatus status = TrajectoryStatus::StaysOnLine;
    double tau_star = 0.0;     // first departure from the line
    Complex rho_star{};
    std::string reason;        // why tracing stopped, when incomplete
    std::vector<DoubleZeroEvent> events;
    bool absorbed_by_pole = false;   // ended on the pole as its residue vanished

    bool operator==(const Trajectory&) const = default;
};

/// Continues a zero of f (or f'_s) from τ_start to τ_end.  Zeros of f on
/// the line are followed as real roots of Z; collisions are resolved with
/// detect_double_zero.  Departing pairs assign the lower ordinate to the
/// member left of the line; landing pairs give the lower ordinate to the
/// member that arrives from the left.
Trajectory trace(const ParametricFamily& fam, Which target, Complex rho_start, double tau_start, double tau_end,
                 const StepControl& ctrl = {});

/// Position of the trajectory at a checkpoint τ it passed through.
std::optional<Complex> position_at(const Trajectory& tr, double tau);

struct Theorem3Result {
    double theta = 0.0;
    // Forward orientation: line before τ0, left of the line after.
    std::array<bool, 3> statement1{};
    std::array<bool, 3> statement2{};
    // Mirrored orientation: every τ < τ0 and τ > τ0 exchanged.
    std::array<bool, 3> statement1_mirror{};
    std::array<bool, 3> statement2_mirror{};
    double mirror_error = 0.0;     // max |s_right - (1 - conj s_left)| off the line
    double line_error = 0.0;       // max |Re ρ - 1/2| for on-line pairs
    LocalQuadraticModel before;
    LocalQuadraticModel after;

    bool holds1() const { return statement1[0] && statement1[1] && statement1[2]; }
    bool holds2() const { return statement2[0] && statement2[1] && statement2[2]; }
    bool holds1_mirror() const { return statement1_mirror[0] && statement1_mirror[1] && statement1_mirror[2]; }
    bool holds2_mirror() const { return statement2_mirror[0] && statement2_mirror[1] && statement2_mirror[2]; }
    bool equivalent() const { return holds1() == holds2() && holds1_mirror() == holds2_mirror(); }
};

/// Checks both statements of the double-zero equivalence near an event on
/// a τ grid in (τ0 - θ, τ0 + θ); θ is halved until the local model holds
/// exactly two zeros of f and one of f'_s.
Theorem3Result classify_theorem3(const ParametricFamily& fam, const DoubleZeroEvent& ev, double theta = 1e-3);

} // namespace zlab
