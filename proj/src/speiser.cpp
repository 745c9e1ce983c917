#include "zlab/speiser.hpp"

#include <algorithm>
#include <cmath>

#include "zlab/line_roots.hpp"

namespace zlab {

std::vector<double> critical_line_zeros(const FunctionSpec& spec, double t_lo, double t_hi, int intervals,
                                        const EvalOptions& opts)
{
    auto roots = real_roots([&](double t) { return z_rotated_jet(spec, t, opts); }, t_lo, t_hi, intervals);
    std::vector<double> inside;
    for (double t : roots)
        if (t > t_lo && t < t_hi) inside.push_back(t);
    return inside;
}

namespace {

void check_half_disk(Complex s0, double r)
{
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    if (!(s0.real() <= 0.5 && s0.real() > 0.5 - r))
        throw Error(ErrorCode::InvalidArgument, "need 1/2 - r < Re s0 <= 1/2");
}

int boundary_winding(const Target& g, const Contour& c, const WindingOptions& opts)
{
    WindingOptions strict = opts;
    strict.max_nudges = 0;
    try {
        return winding_count(g, c, strict);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::OnContourZero)
            throw Error(ErrorCode::BoundaryZero, std::string("zero of ") + g.name + " on the half-disk boundary");
        throw;
    }
}

} // namespace

SpeiserReport speiser_compare(const Target& F, const Target& Fprime, Complex s0, double r,
                              const std::vector<double>& line_zeros, const SpeiserOptions& opts)
{
    check_half_disk(s0, r);
    SpeiserReport rep;
    rep.s0 = s0;
    rep.r = r;
    if (r < tiny_radius_threshold(s0)) {
        rep.taylor_model = true;
        const int nf = taylor_disk_count(F, s0, r);
        const int nfp = taylor_disk_count(Fprime, s0, r);
        if (nf != 0 || nfp != 0)
            throw Error(ErrorCode::PrecisionUnreachable, "a zero lies in a disk below sampling resolution");
        rep.equal = true;
        return rep;
    }
    rep.indent_radius = opts.indent_rel * r;
    std::vector<double> zeros = line_zeros;
    std::sort(zeros.begin(), zeros.end());
    zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
    for (std::size_t i = 1; i < zeros.size(); ++i)
        if (zeros[i] - zeros[i - 1] < 4.0 * rep.indent_radius)
            throw Error(ErrorCode::IndentationOverlap, "line zeros closer than four indentation radii");
    rep.line_zeros_bypassed = zeros;
    const Contour c = Contour::half_disk_left(s0, r, zeros, rep.indent_radius);
    rep.n_F = boundary_winding(F, c, opts.winding);
    rep.n_Fprime = boundary_winding(Fprime, c, opts.winding);
    rep.equal = rep.n_F == rep.n_Fprime;
    return rep;
}

SpeiserReport speiser_compare(const FunctionSpec& spec, Complex s0, double r, const SpeiserOptions& opts)
{
    check_half_disk(s0, r);
    std::vector<double> zeros;
    if (r >= tiny_radius_threshold(s0)) {
        const double d = 0.5 - s0.real();
        const double h = std::sqrt((r - d) * (r + d));
        const int n = std::max(opts.line_intervals, static_cast<int>(std::ceil(2.0 * h / 0.02)));
        zeros = critical_line_zeros(spec, s0.imag() - h, s0.imag() + h, n);
    }
    return speiser_compare(make_target(spec, Which::F), make_target(spec, Which::Fprime), s0, r, zeros, opts);
}

int pipeline_shell_count(const FunctionSpec& spec, double T, double C, double delta, const WindingOptions& opts)
{
    const Target F = make_target(spec, Which::F);
    const Complex s0(0.5, T);
    int A = strip_zero_count(spec, T, opts).count + 3;
    for (int guard = 0; guard < 64; ++guard) {
        const double rA = std::exp(-std::pow(2.0 + delta, -A) * C);
        const int n_disk = disk_count(F, s0, rA, opts);
        if (A >= n_disk + 3) return A;
        A = n_disk + 3;
    }
    throw Error(ErrorCode::BudgetExceeded, "shell count did not stabilise");
}

SpeiserReport speiser_pipeline(const FunctionSpec& spec, double T, double C, int A_shells, double delta,
                               const SpeiserOptions& opts)
{
    const Complex s0(0.5, T);
    const AnnulusResult ann = zero_free_annulus(make_target(spec, Which::F), s0, C, A_shells, delta, opts.winding);
    SpeiserReport rep = speiser_compare(spec, s0, ann.r_final, opts);
    rep.annulus = ann;
    return rep;
}

std::vector<SpiraViolation> spira_line_check(const FunctionSpec& spec, double t_lo, double t_hi, double grid_step,
                                             const SpiraOptions& opts)
{
    return spira_line_check(make_target(spec, Which::F), t_lo, t_hi, grid_step, opts);
}

std::vector<SpiraViolation> spira_line_check(const Target& F, double t_lo, double t_hi, double grid_step,
                                             const SpiraOptions& opts)
{
    if (!(t_hi > t_lo) || !(grid_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad Spira grid");
    if (t_hi > 500.0) throw Error(ErrorCode::InvalidArgument, "Spira check limited to t <= 500");
    const auto abs_fp = [&](double t) { return std::abs(F.jet(Complex(0.5, t), 1).d1); };
    const int n = static_cast<int>(std::ceil((t_hi - t_lo) / grid_step));
    std::vector<double> ts(static_cast<std::size_t>(n) + 1), v(ts.size());
    for (int i = 0; i <= n; ++i) {
        ts[static_cast<std::size_t>(i)] = std::min(t_hi, t_lo + i * grid_step);
        v[static_cast<std::size_t>(i)] = abs_fp(ts[static_cast<std::size_t>(i)]);
    }
    std::vector<SpiraViolation> out;
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
        const double tm = golden_min(abs_fp, ts[i - 1], ts[i + 1], 1e-12 * std::max(1.0, ts[i]));
        const double m = abs_fp(tm);
        if (m >= opts.theta1) continue;
        const double f = std::abs(F.value(Complex(0.5, tm)));
        if (f >= opts.theta2) out.push_back({tm, f, m});
    }
    return out;
}

NegativityResult logderiv_negativity(const FunctionSpec& spec, double t_lo, double t_hi, double grid_step)
{
    if (!(t_hi > t_lo) || !(grid_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad grid");
    NegativityResult res;
    res.worst_value = -1e300;
    const int n = static_cast<int>(std::ceil((t_hi - t_lo) / grid_step));
    for (int i = 0; i <= n; ++i) {
        const double t = std::min(t_hi, t_lo + i * grid_step);
        const Jet f = eval_jet(spec, Complex(0.5, t), 1).jet;
        if (std::abs(f.value) <= 1e-4) {
            res.excluded.push_back(t);
            continue;
        }
        ++res.points;
        const double v = (f.d1 / f.value).real();
        if (v > res.worst_value) {
            res.worst_value = v;
            res.worst_t = t;
        }
    }
    return res;
}

} // namespace zlab
