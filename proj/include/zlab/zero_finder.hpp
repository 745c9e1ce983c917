#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "zlab/contour.hpp"

namespace zlab {

struct Rect {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

    Contour contour() const { return Contour::rectangle(x0, x1, y0, y1); }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(Complex s, double slack = 0.0) const
    {
        return s.real() >= x0 - slack && s.real() <= x1 + slack && s.imag() >= y0 - slack && s.imag() <= y1 + slack;
    }
    bool operator==(const Rect&) const = default;
};

enum class ZeroMethod { Newton, NewtonMultiplicity, Cluster, Taylor };

const char* to_string(ZeroMethod m);
ZeroMethod zero_method_from_string(const std::string& name);

struct ZeroRecord {
    Complex rho{};
    int multiplicity = 1;
    double residual = 0.0;
    ZeroMethod method = ZeroMethod::Newton;

    bool operator==(const ZeroRecord&) const = default;
};

struct RefineOptions {
    double step_tol = 1e-13;     // relative to max(1, |s|)
    int max_iter = 60;
    double max_radius = 1.0;     // from the guess
    double residual_tol = 1e-8;
};

/// Newton's method, switching to s <- s - m g/g' once convergence is seen
/// to be linear.
ZeroRecord refine_zero(const Target& g, Complex guess, const RefineOptions& opts = {});
ZeroRecord refine_zero(const FunctionSpec& spec, Which which, Complex guess, const RefineOptions& opts = {});

struct ScanOptions {
    RefineOptions refine;
    WindingOptions winding;
    double min_cell = 1e-7;       // cells this small with count >= 2 become clusters
    long max_cells = 200000;
    int strips = 1;               // independent horizontal strips
    int threads = 1;
};

/// One horizontal strip of a scan, processed independently.
struct ScanStrip {
    int id = 0;
    Rect rect;
};

/// Splits `rect` into horizontal strips, shifting any interior boundary
/// that passes through a zero.
std::vector<ScanStrip> plan_strips(const Target& g, const Rect& rect, int strips, const WindingOptions& opts = {});

/// All zeros in a rectangle whose boundary is zero-free.
std::vector<ZeroRecord> scan_rect(const Target& g, const Rect& rect, const ScanOptions& opts = {});

/// All zeros in `rect` (nudged outward if a zero sits on its boundary),
/// ordered by (Im, Re).  Strips run concurrently; `done` holds strips
/// already computed (for resuming) and `on_strip` is told about new ones.
std::vector<ZeroRecord> scan_zeros(const Target& g, const Rect& rect, const ScanOptions& opts = {},
                                   const std::map<int, std::vector<ZeroRecord>>* done = nullptr,
                                   const std::function<void(int, const std::vector<ZeroRecord>&)>& on_strip = {});
std::vector<ZeroRecord> scan_zeros(const FunctionSpec& spec, Which which, const Rect& rect, double tol = 1e-12);

/// Half the distance to the nearest other zero, capped at 1e-2.
double isolation_radius(const ZeroRecord& z, const std::vector<ZeroRecord>& all);

/// Winding count on |s - rho| = r_iso/2, checked against r_iso/4.
int multiplicity(const Target& g, const ZeroRecord& z, double r_iso, const WindingOptions& opts = {});

struct AnnulusResult {
    int j = 0;
    double r_inner = 0.0;
    double r_outer = 0.0;
    double r_final = 0.0;
    std::vector<int> zero_counts_per_shell;   // shell k = 1..A in slot k-1
    std::vector<double> radii;                // r_0..r_A

    bool operator==(const AnnulusResult&) const = default;
};

/// Radii r_k = exp(-(2+δ)^{-k} C), k = 0..A.
std::vector<double> shell_radii(double C, int A_shells, double delta);

/// First empty shell r_{j-1} < |s - s0| <= r_j with j >= 2 and the radius
/// r_j^{1+δ/3} inside it.  Throws NoEmptyShell with the counts when every
/// shell holds a zero.
AnnulusResult zero_free_annulus(const Target& g, Complex s0, double C, int A_shells, double delta,
                                const WindingOptions& opts = {});

struct StripCount {
    int count = 0;
    double bound = 0.0;               // ε/log(2+δ) log T - 2
    std::optional<double> zeta_bound;  // 0.225 log T, Riemann zeta only
    Rect rect;
};

/// Zeros with |β| <= σ_F and |γ - T| <= 1/T.
StripCount strip_zero_count(const FunctionSpec& spec, double T, const WindingOptions& opts = {});

struct RvmEstimate {
    double T = 0.0;
    int counted = 0;       // zeros with t_min < γ <= T
    int two_sided = 0;     // counted doubled, for |γ| < T
    double main_term = 0.0;  // (d_F/π) T log T
};

/// One-sided zero count up to height T against the main term of the
/// Riemann-von Mangoldt formula.
RvmEstimate rvm_estimate(const FunctionSpec& spec, double T, double t_min = 1.0, const WindingOptions& opts = {});

struct RvmFit {
    double c_F = 0.0;
    std::vector<double> residuals;
};

/// Least-squares c_F in two_sided ≈ main_term + c_F T.
RvmFit fit_rvm_constant(const std::vector<RvmEstimate>& estimates);

} // namespace zlab
