#pragma once

#include <optional>
#include <vector>

#include "zlab/zero_finder.hpp"

namespace zlab {

struct SpeiserOptions {
    double indent_rel = 1e-7;      // indentation radius as a fraction of r
    int line_intervals = 64;       // sampling of Z along the chord
    WindingOptions winding;
};

/// Zero counts of F and F' in {|s - s0| <= r, σ < 1/2}.
struct SpeiserReport {
    Complex s0{};
    double r = 0.0;
    int n_F = 0;
    int n_Fprime = 0;
    bool equal = false;
    std::optional<AnnulusResult> annulus;
    std::vector<double> line_zeros_bypassed;
    double indent_radius = 0.0;
    bool taylor_model = false;     // disk too small to sample; counted by Rouché

    bool operator==(const SpeiserReport&) const = default;
};

/// Ordinates of the zeros of F on σ = 1/2 in (t_lo, t_hi), with multiplicity.
std::vector<double> critical_line_zeros(const FunctionSpec& spec, double t_lo, double t_hi, int intervals,
                                        const EvalOptions& opts = {});

SpeiserReport speiser_compare(const FunctionSpec& spec, Complex s0, double r, const SpeiserOptions& opts = {});

/// Same comparison for arbitrary F and F' with the line zeros supplied.
SpeiserReport speiser_compare(const Target& F, const Target& Fprime, Complex s0, double r,
                              const std::vector<double>& line_zeros, const SpeiserOptions& opts = {});

/// Shell count used by the pipeline: starting from the strip count + 3,
/// grown until it exceeds the zeros in the outermost disk by at least 3 so
/// that an empty shell with j >= 2 must exist.
int pipeline_shell_count(const FunctionSpec& spec, double T, double C, double delta, const WindingOptions& opts = {});

/// zero_free_annulus at 1/2 + iT followed by speiser_compare with r_final.
SpeiserReport speiser_pipeline(const FunctionSpec& spec, double T, double C, int A_shells, double delta,
                               const SpeiserOptions& opts = {});

struct SpiraViolation {
    double t = 0.0;
    double abs_F = 0.0;
    double abs_Fprime = 0.0;
};

struct SpiraOptions {
    double theta1 = 1e-6;   // |F'| minimum counted as a zero of F'
    double theta2 = 1e-4;   // |F| required there
};

/// Local minima of |F'(1/2+it)| below θ₁ where |F| is not below θ₂.
std::vector<SpiraViolation> spira_line_check(const FunctionSpec& spec, double t_lo, double t_hi, double grid_step,
                                             const SpiraOptions& opts = {});
std::vector<SpiraViolation> spira_line_check(const Target& F, double t_lo, double t_hi, double grid_step,
                                             const SpiraOptions& opts = {});

struct NegativityResult {
    double worst_value = 0.0;           // max of Re F'/F(1/2+it) over the grid
    double worst_t = 0.0;
    std::vector<double> excluded;       // grid points with |F| <= 1e-4
    int points = 0;
};

NegativityResult logderiv_negativity(const FunctionSpec& spec, double t_lo, double t_hi, double grid_step = 0.05);

} // namespace zlab
