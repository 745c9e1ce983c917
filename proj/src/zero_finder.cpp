#include "zlab/zero_finder.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "zlab/parallel.hpp"

namespace zlab {

const char* to_string(ZeroMethod m)
{
    switch (m) {
    case ZeroMethod::Newton: return "newton";
    case ZeroMethod::NewtonMultiplicity: return "newton_multiplicity";
    case ZeroMethod::Cluster: return "cluster";
    case ZeroMethod::Taylor: return "taylor";
    }
    return "unknown";
}

ZeroMethod zero_method_from_string(const std::string& name)
{
    if (name == "newton") return ZeroMethod::Newton;
    if (name == "newton_multiplicity") return ZeroMethod::NewtonMultiplicity;
    if (name == "cluster") return ZeroMethod::Cluster;
    if (name == "taylor") return ZeroMethod::Taylor;
    throw Error(ErrorCode::InvalidArgument, "unknown zero method '" + name + "'");
}

ZeroRecord refine_zero(const Target& g, Complex guess, const RefineOptions& opts)
{
    Complex s = guess;
    Jet j = g.jet(s, 1);
    if (!is_finite(j.value) || !is_finite(j.d1)) throw Error(ErrorCode::Divergence, "non-finite value at the guess");
    if (j.value == Complex(0.0)) return {s, 1, 0.0, ZeroMethod::Newton};
    if (j.d1 == Complex(0.0)) throw Error(ErrorCode::Divergence, "vanishing derivative at the guess");
    const double tol = opts.step_tol * std::max(1.0, std::abs(guess));
    Complex step = j.value / j.d1;
    if (std::abs(step) <= tol) return {guess, 1, std::abs(j.value), ZeroMethod::Newton};

    int m = 1;
    int linear = 0;
    double prev = -1.0;
    ZeroMethod method = ZeroMethod::Newton;
    for (int it = 0; it < opts.max_iter; ++it) {
        s -= static_cast<double>(m) * step;
        if (std::abs(s - guess) > opts.max_radius)
            throw Error(ErrorCode::Divergence, "Newton iterate left the radius-" + std::to_string(opts.max_radius) +
                                                   " disk about the guess");
        j = g.jet(s, 1);
        if (!is_finite(j.value) || !is_finite(j.d1)) throw Error(ErrorCode::Divergence, "non-finite Newton iterate");
        if (j.value == Complex(0.0)) return {s, m, 0.0, method};
        if (j.d1 == Complex(0.0)) throw Error(ErrorCode::Divergence, "vanishing derivative during Newton");
        const Complex next = j.value / j.d1;
        const double a = std::abs(next);
        if (static_cast<double>(m) * a <= tol) {
            s -= static_cast<double>(m) * next;
            const double residual = std::abs(g.value(s));
            if (residual > opts.residual_tol)
                throw Error(ErrorCode::NonConvergence, "Newton converged with residual " + std::to_string(residual));
            return {s, m, residual, method};
        }
        if (m == 1 && prev > 0.0) {
            const double q = a / prev;
            linear = (q > 0.2 && q < 0.95) ? linear + 1 : 0;
            if (linear >= 3) {
                m = std::clamp(static_cast<int>(std::lround(1.0 / (1.0 - q))), 2, 8);
                method = ZeroMethod::NewtonMultiplicity;
            }
        }
        prev = a;
        step = next;
    }
    throw Error(ErrorCode::Divergence, "no convergence after " + std::to_string(opts.max_iter) + " iterations");
}

ZeroRecord refine_zero(const FunctionSpec& spec, Which which, Complex guess, const RefineOptions& opts)
{
    return refine_zero(make_target(spec, which), guess, opts);
}

namespace {

int rect_winding(const Target& g, const Rect& r, const WindingOptions& opts)
{
    WindingOptions strict = opts;
    strict.max_nudges = 0;
    return winding_count(g, r.contour(), strict);
}

class RectScanner {
public:
    RectScanner(const Target& g, const ScanOptions& opts) : g_(g), opts_(opts) {}

    void run(const Rect& cell, int n, std::vector<ZeroRecord>& out)
    {
        if (n == 0) return;
        if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative winding count: a pole lies inside the region");
        if (++cells_ > opts_.max_cells)
            throw Error(ErrorCode::BudgetExceeded, "scan exceeded " + std::to_string(opts_.max_cells) + " cells");
        const double diam = std::hypot(cell.width(), cell.height());
        const Complex mid(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1));
        if (n == 1) {
            try {
                RefineOptions ro = opts_.refine;
                ro.max_radius = std::min(ro.max_radius, 2.0 * diam);
                ZeroRecord z = refine_zero(g_, mid, ro);
                if (cell.contains(z.rho, 1e-12 * std::max(1.0, std::abs(z.rho)))) {
                    z.multiplicity = 1;
                    out.push_back(z);
                    return;
                }
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Divergence && e.code() != ErrorCode::NonConvergence) throw;
            }
            if (diam < opts_.min_cell) throw Error(ErrorCode::NonConvergence, "Newton failed in a tiny one-zero cell");
        } else if (diam < opts_.min_cell) {
            ZeroRecord z{mid, n, std::abs(g_.value(mid)), ZeroMethod::Cluster};
            out.push_back(z);
            return;
        }
        split(cell, n, out);
    }

private:
    void split(const Rect& cell, int n, std::vector<ZeroRecord>& out)
    {
        static constexpr double kFractions[] = {0.5, 0.4537, 0.5463, 0.4129, 0.5871, 0.3711, 0.6289};
        const bool vertical = cell.width() >= cell.height();
        for (double f : kFractions) {
            Rect a = cell, b = cell;
            if (vertical) {
                const double x = cell.x0 + f * cell.width();
                a.x1 = x;
                b.x0 = x;
            } else {
                const double y = cell.y0 + f * cell.height();
                a.y1 = y;
                b.y0 = y;
            }
            int na = 0;
            try {
                na = rect_winding(g_, a, opts_.winding);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::OnContourZero) throw;
                continue;
            }
            run(a, na, out);
            run(b, n - na, out);
            return;
        }
        throw Error(ErrorCode::OnContourZero, "no zero-free split line found");
    }

    const Target& g_;
    const ScanOptions& opts_;
    long cells_ = 0;
};

bool zero_order(const ZeroRecord& a, const ZeroRecord& b)
{
    if (a.rho.imag() != b.rho.imag()) return a.rho.imag() < b.rho.imag();
    return a.rho.real() < b.rho.real();
}

} // namespace

std::vector<ZeroRecord> scan_rect(const Target& g, const Rect& rect, const ScanOptions& opts)
{
    std::vector<ZeroRecord> out;
    RectScanner scanner(g, opts);
    scanner.run(rect, rect_winding(g, rect, opts.winding), out);
    std::sort(out.begin(), out.end(), zero_order);
    return out;
}

std::vector<ScanStrip> plan_strips(const Target& g, const Rect& rect, int strips, const WindingOptions& opts)
{
    strips = std::max(1, strips);
    std::vector<double> ys{rect.y0};
    const double h = rect.height() / strips;
    for (int k = 1; k < strips; ++k) {
        double y = rect.y0 + k * h;
        for (int attempt = 0;; ++attempt) {
            const Segment seg = Segment::line(Complex(rect.x0, y), Complex(rect.x1, y));
            double scale = 0.0;
            for (int i = 0; i <= 8; ++i) scale = std::max(scale, std::abs(g.value(seg.point(i / 8.0))));
            try {
                segment_arg_change(g, seg, scale, opts);
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::OnContourZero || attempt >= 5) throw;
                y += 0.0137 * h;
            }
        }
        ys.push_back(y);
    }
    ys.push_back(rect.y1);
    std::vector<ScanStrip> out;
    for (int k = 0; k < strips; ++k) out.push_back({k, Rect{rect.x0, rect.x1, ys[k], ys[k + 1]}});
    return out;
}

std::vector<ZeroRecord> scan_zeros(const Target& g, const Rect& rect, const ScanOptions& opts,
                                   const std::map<int, std::vector<ZeroRecord>>* done,
                                   const std::function<void(int, const std::vector<ZeroRecord>&)>& on_strip)
{
    Rect r = rect;
    for (int attempt = 0;; ++attempt) {
        try {
            rect_winding(g, r, opts.winding);
            break;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OnContourZero || attempt >= opts.winding.max_nudges) throw;
            const double eps = opts.winding.nudge_rel * std::hypot(r.width(), r.height());
            r = Rect{r.x0 - eps, r.x1 + eps, r.y0 - eps, r.y1 + eps};
        }
    }
    const auto strips = plan_strips(g, r, opts.strips, opts.winding);
    std::vector<std::vector<ZeroRecord>> parts(strips.size());
    std::mutex mu;
    parallel_for(strips.size(), opts.threads, [&](std::size_t i) {
        if (done) {
            auto it = done->find(strips[i].id);
            if (it != done->end()) {
                parts[i] = it->second;
                return;
            }
        }
        parts[i] = scan_rect(g, strips[i].rect, opts);
        if (on_strip) {
            std::lock_guard<std::mutex> lock(mu);
            on_strip(strips[i].id, parts[i]);
        }
    });
    std::vector<ZeroRecord> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end(), zero_order);
    return all;
}

std::vector<ZeroRecord> scan_zeros(const FunctionSpec& spec, Which which, const Rect& rect, double tol)
{
    if (spec.pole_order > 0 && rect.contains(Complex(1.0, 0.0)))
        throw Error(ErrorCode::InvalidArgument, "scan rectangle contains the pole at s = 1");
    ScanOptions opts;
    opts.refine.step_tol = std::max(tol, 1e-15);
    return scan_zeros(make_target(spec, which), rect, opts);
}

double isolation_radius(const ZeroRecord& z, const std::vector<ZeroRecord>& all)
{
    double d = 2e-2;
    for (const auto& o : all)
        if (o.rho != z.rho) d = std::min(d, std::abs(o.rho - z.rho));
    return 0.5 * d;
}

int multiplicity(const Target& g, const ZeroRecord& z, double r_iso, const WindingOptions& opts)
{
    if (!(r_iso > 0.0)) throw Error(ErrorCode::InvalidArgument, "isolation radius must be positive");
    const int outer = disk_count(g, z.rho, 0.5 * r_iso, opts);
    const int inner = disk_count(g, z.rho, 0.25 * r_iso, opts);
    if (outer != inner)
        throw Error(ErrorCode::IsolationViolation, "winding " + std::to_string(outer) + " at r_iso/2 but " +
                                                       std::to_string(inner) + " at r_iso/4");
    if (outer < 1) throw Error(ErrorCode::IsolationViolation, "no zero inside the isolation circle");
    return outer;
}

std::vector<double> shell_radii(double C, int A_shells, double delta)
{
    std::vector<double> r;
    for (int k = 0; k <= A_shells; ++k) r.push_back(std::exp(-std::pow(2.0 + delta, -k) * C));
    return r;
}

AnnulusResult zero_free_annulus(const Target& g, Complex s0, double C, int A_shells, double delta,
                                const WindingOptions& opts)
{
    if (!(C > 0.0) || std::exp(-C) < 1e-300) throw Error(ErrorCode::InvalidArgument, "need exp(-C) >= 1e-300");
    if (A_shells < 2) throw Error(ErrorCode::InvalidArgument, "need at least two shells");
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    AnnulusResult res;
    res.radii = shell_radii(C, A_shells, delta);
    std::vector<int> disk;
    for (double r : res.radii) disk.push_back(disk_count(g, s0, r, opts));
    for (int k = 1; k <= A_shells; ++k) res.zero_counts_per_shell.push_back(disk[k] - disk[k - 1]);
    for (int k = 2; k <= A_shells; ++k) {
        if (res.zero_counts_per_shell[static_cast<std::size_t>(k - 1)] == 0) {
            res.j = k;
            res.r_inner = res.radii[static_cast<std::size_t>(k - 1)];
            res.r_outer = res.radii[static_cast<std::size_t>(k)];
            res.r_final = std::pow(res.r_outer, 1.0 + delta / 3.0);
            return res;
        }
    }
    std::ostringstream msg;
    msg << "every shell holds a zero; counts";
    for (int c : res.zero_counts_per_shell) msg << ' ' << c;
    throw Error(ErrorCode::NoEmptyShell, msg.str());
}

StripCount strip_zero_count(const FunctionSpec& spec, double T, const WindingOptions& opts)
{
    if (!(T > spec.density.T_bar)) throw Error(ErrorCode::InvalidArgument, "strip count needs T > T_bar");
    StripCount out;
    const double s = spec.zero_free_sigma;
    out.rect = Rect{-s, s, T - 1.0 / T, T + 1.0 / T};
    out.count = winding_count(make_target(spec, Which::F), out.rect.contour(), opts);
    out.bound = spec.density.epsilon / std::log(2.0 + spec.density.delta) * std::log(T) - 2.0;
    if (spec.kind == FunctionKind::RiemannZeta) out.zeta_bound = 0.225 * std::log(T);
    return out;
}

RvmEstimate rvm_estimate(const FunctionSpec& spec, double T, double t_min, const WindingOptions& opts)
{
    if (!(T > t_min) || T > 500.0) throw Error(ErrorCode::InvalidArgument, "rvm estimate needs t_min < T <= 500");
    RvmEstimate out;
    out.T = T;
    const double s = spec.zero_free_sigma;
    out.counted = winding_count(make_target(spec, Which::F), Contour::rectangle(-s, 1.0 + s, t_min, T), opts);
    out.two_sided = 2 * out.counted;
    out.main_term = spec.fe.degree / kPi * T * std::log(T);
    return out;
}

RvmFit fit_rvm_constant(const std::vector<RvmEstimate>& estimates)
{
    double num = 0.0, den = 0.0;
    for (const auto& e : estimates) {
        num += e.T * (e.two_sided - e.main_term);
        den += e.T * e.T;
    }
    RvmFit fit;
    fit.c_F = den > 0.0 ? num / den : 0.0;
    for (const auto& e : estimates) fit.residuals.push_back(e.two_sided - e.main_term - fit.c_F * e.T);
    return fit;
}

} // namespace zlab
