#include "zlab/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "zlab/line_roots.hpp"

namespace zlab {

namespace {

const Complex kI(0.0, 1.0);

class FamilyF final : public ParametricFamily {
public:
    explicit FamilyF(const EvalOptions& opts)
        : a_(FunctionSpec::factor_zeta()), b_(FunctionSpec::l_psi5()), fe_(FunctionSpec::family(0.0).fe), opts_(opts)
    {
    }

    FamilyJet jet(Complex s, double tau, int order) const override
    {
        const Jet a = eval_jet(a_, s, order, opts_).jet;
        const Jet b = eval_jet(b_, s, order, opts_).jet;
        return {Complex(1.0 - tau) * a + Complex(tau) * b, b - a};
    }

    LinePhase phase(double t) const override { return line_phase(fe_, t); }
    std::string name() const override { return "family"; }
    std::optional<Complex> pole(double tau) const override
    {
        return tau < 1.0 ? std::optional<Complex>(Complex(1.0, 0.0)) : std::nullopt;
    }

private:
    FunctionSpec a_, b_;
    FunctionalEquationData fe_;
    EvalOptions opts_;
};

class Synthetic final : public ParametricFamily {
public:
    Synthetic(std::function<FamilyJet(Complex, double, int)> jet, std::function<LinePhase(double)> phase,
              std::string name)
        : jet_(std::move(jet)), phase_(std::move(phase)), name_(std::move(name))
    {
    }

    FamilyJet jet(Complex s, double tau, int order) const override { return jet_(s, tau, order); }
    LinePhase phase(double t) const override { return phase_ ? phase_(t) : LinePhase{}; }
    std::string name() const override { return name_; }

private:
    std::function<FamilyJet(Complex, double, int)> jet_;
    std::function<LinePhase(double)> phase_;
    std::string name_;
};

int sign(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace

std::shared_ptr<const ParametricFamily> family_f(const EvalOptions& opts) { return std::make_shared<FamilyF>(opts); }

std::shared_ptr<const ParametricFamily> synthetic_family(std::function<FamilyJet(Complex, double, int)> jet,
                                                         std::function<LinePhase(double)> phase, std::string name)
{
    return std::make_shared<Synthetic>(std::move(jet), std::move(phase), std::move(name));
}

Target family_target(const ParametricFamily& fam, double tau, Which which)
{
    Target t;
    const ParametricFamily* f = &fam;
    if (which == Which::F) {
        t.jet = [f, tau](Complex s, int k) { return f->jet(s, tau, k).f; };
        t.max_order = 2;
        t.name = "f";
    } else {
        t.jet = [f, tau](Complex s, int k) {
            const Jet j = f->jet(s, tau, k + 1).f;
            return Jet{j.d1, j.d2, 0.0};
        };
        t.max_order = 1;
        t.name = "f_s";
    }
    return t;
}

LinePoint line_point(const ParametricFamily& fam, double t, double tau)
{
    const LinePhase ph = fam.phase(t);
    const FamilyJet j = fam.jet(Complex(0.5, t), tau, 2);
    const Complex e = std::polar(1.0, ph.theta);
    const Jet& f = j.f;
    LinePoint p;
    p.z = (e * f.value).real();
    p.z_t = (e * kI * (ph.d1 * f.value + f.d1)).real();
    p.z_tt = (e * (-ph.d1 * ph.d1 * f.value - 2.0 * ph.d1 * f.d1 - f.d2 + kI * ph.d2 * f.value)).real();
    p.z_tau = (e * j.f_tau.value).real();
    p.z_ttau = (e * kI * (ph.d1 * j.f_tau.value + j.f_tau.d1)).real();
    return p;
}

std::vector<double> line_zeros(const ParametricFamily& fam, double tau, double a, double b, int intervals)
{
    auto roots = real_roots(
        [&](double t) {
            const LinePoint p = line_point(fam, t, tau);
            return RealJet{p.z, p.z_t, p.z_tt};
        },
        a, b, intervals);
    std::vector<double> inside;
    for (double r : roots)
        if (r > a && r < b) inside.push_back(r);
    return inside;
}

const char* to_string(DoubleZeroEvent::Kind k) { return k == DoubleZeroEvent::Kind::Leave ? "leave" : "land"; }

const char* to_string(TrajectoryStatus s)
{
    switch (s) {
    case TrajectoryStatus::StaysOnLine: return "stays_on_line";
    case TrajectoryStatus::LeavesAt: return "leaves_at";
    case TrajectoryStatus::Incomplete: return "incomplete";
    }
    return "unknown";
}

DoubleZeroEvent detect_double_zero(const ParametricFamily& fam, std::pair<double, double> tb,
                                   std::pair<double, double> taub)
{
    double a = tb.first, b = tb.second;
    double lo = std::min(taub.first, taub.second), hi = std::max(taub.first, taub.second);
    if (!(a < b) || !(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty bracket");
    const auto count = [&](double tau) { return static_cast<int>(line_zeros(fam, tau, a, b).size()); };
    const int c_lo = count(lo), c_hi = count(hi);
    if (c_lo == c_hi) throw Error(ErrorCode::NoCollision, "line-zero count " + std::to_string(c_lo) + " at both ends");
    if (!((c_lo == 2 && c_hi == 0) || (c_lo == 0 && c_hi == 2)))
        throw Error(ErrorCode::WrongZeroCount,
                    "expected 2 and 0 line zeros, found " + std::to_string(c_lo) + " and " + std::to_string(c_hi));
    const double lo0 = lo, hi0 = hi;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const int c = count(mid);
        if (c == c_lo)
            lo = mid;
        else if (c == c_hi)
            hi = mid;
        else
            throw Error(ErrorCode::HigherOrderZero, "line-zero count " + std::to_string(c) + " inside the bracket");
    }
    // Start Newton from the pair on the side that still has two line zeros.
    const double tau_two = c_lo == 2 ? lo : hi;
    const auto pair = line_zeros(fam, tau_two, a, b);
    double t = pair.size() == 2 ? 0.5 * (pair[0] + pair[1]) : 0.5 * (a + b);
    double tau = 0.5 * (lo + hi);
    const double t_fallback = t, tau_fallback = tau;
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
        const LinePoint p = line_point(fam, t, tau);
        const double det = p.z_t * p.z_ttau - p.z_tau * p.z_tt;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dt = (p.z * p.z_ttau - p.z_tau * p.z_t) / det;
        const double dtau = (p.z_t * p.z_t - p.z_tt * p.z) / det;
        t -= dt;
        tau -= dtau;
        if (!(t > a && t < b) || std::abs(tau - tau_fallback) > 1e-6 + 10.0 * (hi0 - lo0)) break;
        // Quadratic convergence: one more step would be below rounding.
        if (std::abs(dt) <= 1e-12 * std::max(1.0, std::abs(t)) && std::abs(dtau) <= 1e-12) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        t = t_fallback;
        tau = tau_fallback;
    }
    DoubleZeroEvent ev;
    ev.tau0 = tau;
    ev.rho0 = Complex(0.5, t);
    ev.kind = c_lo == 2 ? DoubleZeroEvent::Kind::Leave : DoubleZeroEvent::Kind::Land;
    const FamilyJet j = fam.jet(ev.rho0, tau, 2);
    ev.f_second_deriv = j.f.d2;
    if (std::abs(ev.f_second_deriv) < 1e-4)
        throw Error(ErrorCode::HigherOrderZero, "|f''| below 1e-4 at the collision");
    if (std::abs(j.f.value) >= 1e-8 || std::abs(j.f.d1) >= 1e-6)
        throw Error(ErrorCode::NonConvergence, "collision point does not satisfy f = f' = 0 to tolerance");
    return ev;
}

namespace {

Complex principal_sqrt(Complex z)
{
    if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
    return std::sqrt(z);
}

LocalQuadraticModel model_from_roots(double tau, Complex z1, Complex z2)
{
    LocalQuadraticModel m;
    m.tau = tau;
    m.a1 = -(z1 + z2);
    m.a0 = z1 * z2;
    m.discriminant = (z1 - z2) * (z1 - z2);
    const Complex r = principal_sqrt(m.discriminant);
    const Complex s1 = 0.5 * (-m.a1 + r);
    if (std::abs(z1 - s1) <= std::abs(z2 - s1)) {
        m.s1 = z1;
        m.s2 = z2;
    } else {
        m.s1 = z2;
        m.s2 = z1;
    }
    return m;
}

// Zero of g(s)/(s - z1) by Newton.
Complex deflated_newton(const Target& g, Complex z1, Complex guess, double radius, Complex center)
{
    Complex s = guess;
    for (int it = 0; it < 60; ++it) {
        const Jet j = g.jet(s, 1);
        const Complex h = j.value / (s - z1);
        const Complex hp = (j.d1 - h) / (s - z1);
        if (hp == Complex(0.0)) break;
        const Complex step = h / hp;
        s -= step;
        if (std::abs(s - center) > radius) break;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(s))) return s;
    }
    throw Error(ErrorCode::NonConvergence, "deflated Newton failed in the local model");
}

} // namespace

LocalQuadraticModel local_quadratic_fit(const Target& g, double tau, Complex center, double radius)
{
    const int n = winding_count(g, Contour::circle(center, radius));
    if (n != 2) throw Error(ErrorCode::WrongZeroCount, "local model disk holds " + std::to_string(n) + " zeros");
    const Jet j = g.jet(center, 2);
    const Complex c0 = j.value, c1 = j.d1, c2 = 0.5 * j.d2;
    std::array<Complex, 2> guess{center, center};
    if (c2 != Complex(0.0)) {
        const Complex r = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
        guess = {center + (-c1 + r) / (2.0 * c2), center + (-c1 - r) / (2.0 * c2)};
    }
    RefineOptions ro;
    ro.max_radius = 2.0 * radius;
    ro.residual_tol = 1e-6;
    const double tiny = 1e-9 * std::max(1.0, std::abs(center));
    Complex z1;
    try {
        z1 = refine_zero(g, guess[0], ro).rho;
    } catch (const Error&) {
        try {
            z1 = refine_zero(g, guess[1], ro).rho;
            std::swap(guess[0], guess[1]);
        } catch (const Error&) {
            // Newton stalls at a double root: take the vertex of the local quadratic.
            const Complex mid = 0.5 * (guess[0] + guess[1]);
            if (std::abs(mid - center) > radius || winding_count(g, Contour::circle(mid, std::max(tiny, 1e-4 * radius))) != 2)
                throw;
            return model_from_roots(tau, mid, mid);
        }
    }
    Complex z2;
    try {
        z2 = deflated_newton(g, z1, guess[1] == z1 ? z1 + radius * 0.1 : guess[1], 2.0 * radius, center);
    } catch (const Error&) {
        // A genuine double root: the deflated function has its zero at z1 itself.
        if (winding_count(g, Contour::circle(z1, std::max(tiny, 1e-3 * radius))) != 2) throw;
        z2 = z1;
    }
    if (std::abs(z1 - center) > radius || std::abs(z2 - center) > radius)
        throw Error(ErrorCode::WrongZeroCount, "local model roots left the disk");
    return model_from_roots(tau, z1, z2);
}

LocalQuadraticModel local_quadratic_fit(const ParametricFamily& fam, double tau, Complex center, double radius)
{
    return local_quadratic_fit(family_target(fam, tau, Which::F), tau, center, radius);
}

void align_roots(const LocalQuadraticModel& prev, LocalQuadraticModel& next)
{
    const double keep = std::abs(next.s1 - prev.s1) + std::abs(next.s2 - prev.s2);
    const double swap = std::abs(next.s1 - prev.s2) + std::abs(next.s2 - prev.s1);
    if (swap < keep) std::swap(next.s1, next.s2);
}

namespace {

class Tracer {
public:
    Tracer(const ParametricFamily& fam, Which target, const StepControl& c, double tau_end)
        : fam_(fam), target_(target), c_(c), tau_end_(tau_end)
    {
    }

    Trajectory run(Complex rho, double tau)
    {
        tr_.target = target_;
        dir_ = tau_end_ >= tau ? 1.0 : -1.0;
        tau_ = tau;
        rho_ = rho;
        on_line_ = target_ == Which::F && std::abs(rho.real() - 0.5) <= 1e-10;
        if (on_line_) rho_ = Complex(0.5, rho.imag());
        check_start();
        push(tau_, rho_);
        double h = std::clamp(c_.dtau_init, c_.dtau_min, c_.dtau_max);
        int easy = 0;
        long steps = 0;
        int forced = 0;
        while (dir_ * (tau_end_ - tau_) > 0.0) {
            if (++steps > c_.max_steps) return incomplete("step budget exhausted");
            const double tau_new = next_tau(h);
            const Step s = on_line_ ? line_step(tau_new, false) : complex_step(tau_new, false);
            if (s.ok) {
                accept(tau_new, s.rho);
                if (s.easy) {
                    if (++easy >= c_.grow_after) {
                        h = std::min(2.0 * h, c_.dtau_max);
                        easy = 0;
                    }
                } else {
                    easy = 0;
                }
                continue;
            }
            easy = 0;
            if (h > c_.dtau_min * (1.0 + 1e-12) && std::abs(tau_new - tau_) > c_.dtau_min * (1.0 + 1e-12)) {
                h = std::max(0.5 * h, c_.dtau_min);
                continue;
            }
            if (target_ == Which::Fprime) return incomplete("singular stall: f_s' vanishes along the path");
            if (c_.dtau_min > 1e-5) return incomplete("step underflow: the τ step cannot be refined");
            try {
                const Resolution r = on_line_ ? resolve_departure() : resolve_landing();
                if (r == Resolution::Forced) {
                    if (++forced > 1000) return incomplete("too many forced steps");
                    const Step f = on_line_ ? line_step(next_tau(c_.dtau_min), true)
                                            : complex_step(next_tau(c_.dtau_min), true);
                    if (!f.ok) return incomplete("forced step failed");
                    accept(next_tau(c_.dtau_min), f.rho);
                }
            } catch (const Error& e) {
                return incomplete(e.what());
            }
            h = c_.dtau_min;
        }
        return tr_;
    }

private:
    struct Step {
        bool ok = false;
        bool easy = false;
        Complex rho{};
    };
    enum class Resolution { Event, Forced };

    void check_start()
    {
        const FamilyJet j = fam_.jet(rho_, tau_, 2);
        const double res = std::abs(target_ == Which::F ? j.f.value : j.f.d1);
        if (res >= 1e-9 * std::max(1.0, std::abs(target_ == Which::F ? j.f.d1 : j.f.d2)))
            throw Error(ErrorCode::InvalidArgument, "trace start is not a zero (residual " + std::to_string(res) + ")");
    }

    double next_tau(double h) const
    {
        double tau_new = tau_ + dir_ * h;
        if (dir_ * (tau_new - tau_end_) >= 0.0) tau_new = tau_end_;
        for (double cp : c_.checkpoints)
            if (dir_ * (cp - tau_) > 0.0 && dir_ * (tau_new - cp) > 0.0) tau_new = cp;
        return tau_new;
    }

    void push(double tau, Complex rho) { tr_.samples.push_back({tau, rho}); }

    void accept(double tau, Complex rho)
    {
        tau_ = tau;
        rho_ = rho;
        push(tau, rho);
    }

    Trajectory incomplete(const std::string& why)
    {
        tr_.status = TrajectoryStatus::Incomplete;
        tr_.reason = why;
        return tr_;
    }

    Step line_step(double tau_new, bool relaxed) const
    {
        Step s;
        const double t0 = rho_.imag();
        const LinePoint p0 = line_point(fam_, t0, tau_);
        if (p0.z_t == 0.0) return s;
        double t = t0 - p0.z_tau / p0.z_t * (tau_new - tau_);
        const int max_iter = relaxed ? 12 : c_.max_corrector_iter;
        LinePoint p;
        bool conv = false;
        int it = 0;
        for (; it < max_iter; ++it) {
            p = line_point(fam_, t, tau_new);
            if (p.z_t == 0.0) return s;
            const double d = p.z / p.z_t;
            t -= d;
            if (std::abs(d) <= c_.tol * std::max(1.0, std::abs(t))) {
                conv = true;
                break;
            }
        }
        if (!conv) return s;
        p = line_point(fam_, t, tau_new);
        if (sign(p.z_t) != sign(p0.z_t)) return s;
        if (std::abs(t - t0) > c_.step_cap) return s;
        if (!relaxed) {
            if (std::abs(p.z_t - p0.z_t) > c_.max_slope_change * std::abs(p0.z_t)) return s;
            if (std::abs(p.z_t) < c_.fs_floor) return s;
        }
        s.ok = true;
        s.easy = it <= 1;
        s.rho = Complex(0.5, t);
        return s;
    }

    // g, g_s, g_τ for the current target.
    void target_jet(Complex s, double tau, Complex& g, Complex& gs, Complex& gt) const
    {
        const FamilyJet j = fam_.jet(s, tau, target_ == Which::F ? 1 : 2);
        if (target_ == Which::F) {
            g = j.f.value;
            gs = j.f.d1;
            gt = j.f_tau.value;
        } else {
            g = j.f.d1;
            gs = j.f.d2;
            gt = j.f_tau.d1;
        }
    }

    Step complex_step(double tau_new, bool relaxed) const
    {
        Step s;
        Complex g0, gs0, gt0;
        target_jet(rho_, tau_, g0, gs0, gt0);
        if (gs0 == Complex(0.0)) return s;
        Complex rho = rho_ - gt0 / gs0 * (tau_new - tau_);
        const int max_iter = relaxed ? 12 : c_.max_corrector_iter;
        Complex g, gs, gt;
        bool conv = false;
        int it = 0;
        for (; it < max_iter; ++it) {
            target_jet(rho, tau_new, g, gs, gt);
            if (gs == Complex(0.0) || !is_finite(g)) return s;
            const Complex d = g / gs;
            rho -= d;
            if (std::abs(d) <= c_.tol * std::max(1.0, std::abs(rho))) {
                conv = true;
                break;
            }
        }
        if (!conv) return s;
        target_jet(rho, tau_new, g, gs, gt);
        if (std::abs(rho - rho_) > c_.step_cap) return s;
        if (target_ == Which::F) {
            const double side0 = rho_.real() - 0.5, side = rho.real() - 0.5;
            if (side == 0.0 || (side > 0.0) != (side0 > 0.0)) return s;
        }
        if (!relaxed) {
            if (std::abs(gs - gs0) > c_.max_slope_change * std::abs(gs0)) return s;
            if (std::abs(gs) < c_.fs_floor) return s;
        }
        s.ok = true;
        s.easy = it <= 1;
        s.rho = rho;
        return s;
    }

    // Neighbouring line zeros below and above the pair [p_lo, p_hi] at τ.
    std::pair<double, double> isolating_bracket(double p_lo, double p_hi, double tau) const
    {
        const double span = 1.0;
        const auto roots = line_zeros(fam_, tau, p_lo - span, p_hi + span, 64);
        double below = p_lo - span, above = p_hi + span;
        const double eps = 1e-9 * std::max(1.0, std::abs(p_hi));
        for (double r : roots) {
            if (r < p_lo - eps) below = std::max(below, r);
            if (r > p_hi + eps) above = std::min(above, r);
        }
        return {0.5 * (below + p_lo), 0.5 * (p_hi + above)};
    }

    int bracket_count(std::pair<double, double> b, double tau) const
    {
        return static_cast<int>(line_zeros(fam_, tau, b.first, b.second).size());
    }

    // Smallest probe step after which the bracket count differs from `now`.
    std::optional<double> probe(std::pair<double, double> b, int now) const
    {
        for (int k = 0; k <= 4; ++k) {
            double d = c_.dtau_min * std::pow(2.0, k);
            double tau_p = tau_ + dir_ * d;
            if (dir_ * (tau_p - tau_end_) > 0.0) tau_p = tau_end_;
            if (tau_p == tau_) return std::nullopt;
            const int c = bracket_count(b, tau_p);
            if (c != now) return tau_p;
            if (tau_p == tau_end_) return std::nullopt;
        }
        return std::nullopt;
    }

    void record_event(const DoubleZeroEvent& ev, Complex after_rho, double after_tau, bool departing)
    {
        tr_.events.push_back(ev);
        // Checkpoints that fall inside the jump are sampled from the local model.
        for (double cp : c_.checkpoints) {
            if (!(dir_ * (cp - tau_) > 0.0 && dir_ * (after_tau - cp) >= 0.0) || cp == after_tau) continue;
            push(cp, dir_ * (cp - ev.tau0) <= 0.0 ? rho_ : after_rho);
        }
        push(ev.tau0, ev.rho0);
        if (departing && tr_.status == TrajectoryStatus::StaysOnLine && dir_ > 0.0) {
            tr_.status = TrajectoryStatus::LeavesAt;
            tr_.tau_star = ev.tau0;
            tr_.rho_star = ev.rho0;
        }
        if (departing && dir_ < 0.0 && tr_.status == TrajectoryStatus::StaysOnLine) {
            tr_.status = TrajectoryStatus::LeavesAt;
            tr_.tau_star = ev.tau0;
            tr_.rho_star = ev.rho0;
        }
        accept(after_tau, after_rho);
    }

    double eta_after(const DoubleZeroEvent& ev) const
    {
        double tau_after = ev.tau0 + dir_ * c_.dtau_min;
        if (dir_ * (tau_after - tau_end_) > 0.0) tau_after = tau_end_;
        return tau_after;
    }

    Resolution resolve_departure()
    {
        const double t = rho_.imag();
        // Critical point of Z between this zero and its partner.
        double cpt = t;
        for (int it = 0; it < 30; ++it) {
            const LinePoint p = line_point(fam_, cpt, tau_);
            if (p.z_tt == 0.0) break;
            const double d = p.z_t / p.z_tt;
            cpt -= d;
            if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(cpt))) break;
        }
        if (std::abs(cpt - t) > 0.5) throw Error(ErrorCode::NoCollision, "no critical point next to the zero");
        const double guess = 2.0 * cpt - t;
        const auto near = line_zeros(fam_, tau_, std::min(t, guess) - 0.25, std::max(t, guess) + 0.25, 64);
        double partner = guess;
        double best = 1e300;
        for (double r : near) {
            if (std::abs(r - t) <= 1e-12 * std::max(1.0, t)) continue;
            if ((r - cpt) * (t - cpt) >= 0.0) continue;
            if (std::abs(r - guess) < best) {
                best = std::abs(r - guess);
                partner = r;
            }
        }
        if (best == 1e300) throw Error(ErrorCode::NoCollision, "no partner zero across the critical point");
        const auto b = isolating_bracket(std::min(t, partner), std::max(t, partner), tau_);
        if (bracket_count(b, tau_) != 2) throw Error(ErrorCode::WrongZeroCount, "collision bracket does not isolate the pair");
        const auto tau_p = probe(b, 2);
        if (!tau_p) return Resolution::Forced;
        const DoubleZeroEvent ev = detect_double_zero(fam_, b, {tau_, *tau_p});
        const bool left = t < ev.rho0.imag();
        const double tau_after = eta_after(ev);
        const FamilyJet j = fam_.jet(ev.rho0, ev.tau0, 2);
        const Complex w = std::sqrt(-2.0 * j.f_tau.value * (tau_after - ev.tau0) / j.f.d2);
        Complex guess_rho = ev.rho0 + ((w.real() < 0.0) == left ? w : -w);
        RefineOptions ro;
        ro.max_radius = 0.5;
        const ZeroRecord z = refine_zero(family_target(fam_, tau_after, Which::F), guess_rho, ro);
        if ((z.rho.real() < 0.5) != left || std::abs(z.rho.real() - 0.5) < 1e-12)
            throw Error(ErrorCode::NonConvergence, "departing zero did not leave the line on the expected side");
        on_line_ = false;
        record_event(ev, z.rho, tau_after, true);
        return Resolution::Event;
    }

    // A zero next to the pole at the end of the range, where the pole
    // disappears, converges to it.
    bool absorb_into_pole()
    {
        const auto p = fam_.pole(tau_);
        if (!p || fam_.pole(tau_end_) || std::abs(rho_ - *p) > 1e-3) return false;
        if (std::abs(tau_end_ - tau_) > 1e-3) return false;
        for (double cp : c_.checkpoints)
            if (dir_ * (cp - tau_) > 0.0 && dir_ * (tau_end_ - cp) > 0.0) return false;
        accept(tau_end_, *p);
        tr_.absorbed_by_pole = true;
        return true;
    }

    Resolution resolve_landing()
    {
        const double d = std::abs(rho_.real() - 0.5);
        if (absorb_into_pole()) return Resolution::Event;
        if (d > 0.05) throw Error(ErrorCode::SingularStall, "stall away from the critical line");
        const double t = rho_.imag();
        const auto b = isolating_bracket(t, t, tau_);
        if (bracket_count(b, tau_) != 0) throw Error(ErrorCode::WrongZeroCount, "landing bracket holds line zeros");
        const auto tau_p = probe(b, 0);
        if (!tau_p) return Resolution::Forced;
        const DoubleZeroEvent ev = detect_double_zero(fam_, b, {tau_, *tau_p});
        const bool left = rho_.real() < 0.5;
        const double tau_after = eta_after(ev);
        const auto roots = line_zeros(fam_, tau_after, b.first, b.second);
        if (roots.size() != 2) throw Error(ErrorCode::WrongZeroCount, "landing did not produce two line zeros");
        on_line_ = true;
        record_event(ev, Complex(0.5, left ? roots[0] : roots[1]), tau_after, false);
        return Resolution::Event;
    }

    const ParametricFamily& fam_;
    Which target_;
    StepControl c_;
    double tau_end_;
    double dir_ = 1.0;
    double tau_ = 0.0;
    Complex rho_{};
    bool on_line_ = false;
    Trajectory tr_;
};

} // namespace

Trajectory trace(const ParametricFamily& fam, Which target, Complex rho_start, double tau_start, double tau_end,
                 const StepControl& ctrl)
{
    if (!(ctrl.dtau_min > 0.0 && ctrl.dtau_min <= ctrl.dtau_max))
        throw Error(ErrorCode::InvalidArgument, "need 0 < dtau_min <= dtau_max");
    Tracer tracer(fam, target, ctrl, tau_end);
    return tracer.run(rho_start, tau_start);
}

std::optional<Complex> position_at(const Trajectory& tr, double tau)
{
    for (const auto& s : tr.samples)
        if (s.tau == tau) return s.rho;
    return std::nullopt;
}

namespace {

struct LocalPair {
    bool on_line = false;
    Complex left{}, right{};
};

// The two zeros of f(·, τ) near the event, either as line zeros or as a
// mirror pair found from the quadratic expansion at the event.
LocalPair local_pair(const ParametricFamily& fam, const DoubleZeroEvent& ev, double tau, double radius)
{
    const double t0 = ev.rho0.imag();
    const auto roots = line_zeros(fam, tau, t0 - radius, t0 + radius);
    LocalPair p;
    if (roots.size() == 2) {
        p.on_line = true;
        p.left = Complex(0.5, roots[0]);
        p.right = Complex(0.5, roots[1]);
        return p;
    }
    if (!roots.empty()) throw Error(ErrorCode::WrongZeroCount, "odd line-zero count near the event");
    const FamilyJet j = fam.jet(ev.rho0, ev.tau0, 2);
    const Complex w = std::sqrt(-2.0 * j.f_tau.value * (tau - ev.tau0) / j.f.d2);
    const Target g = family_target(fam, tau, Which::F);
    RefineOptions ro;
    ro.max_radius = radius;
    const Complex a = refine_zero(g, ev.rho0 + w, ro).rho;
    const Complex b = refine_zero(g, ev.rho0 - w, ro).rho;
    p.left = a.real() < b.real() ? a : b;
    p.right = a.real() < b.real() ? b : a;
    return p;
}

} // namespace

Theorem3Result classify_theorem3(const ParametricFamily& fam, const DoubleZeroEvent& ev, double theta)
{
    const FamilyJet j0 = fam.jet(ev.rho0, ev.tau0, 2);
    if (std::abs(j0.f.value) >= 1e-8 || std::abs(j0.f.d1) >= 1e-6)
        throw Error(ErrorCode::InvalidArgument, "event is not a double zero");
    const double ratio = std::abs(2.0 * j0.f_tau.value / j0.f.d2);
    const double t0 = ev.rho0.imag();
    // Distance to the nearest other line zero bounds the local model radius.
    double other = 1.0;
    for (double r : line_zeros(fam, ev.tau0, t0 - 1.0, t0 + 1.0, 128))
        if (std::abs(r - t0) > 1e-6) other = std::min(other, std::abs(r - t0));

    Theorem3Result res;
    for (; theta >= 1e-9; theta *= 0.5) {
        const double sep = std::sqrt(ratio * theta);
        const double radius = std::min(0.5 * other, std::max(4.0 * sep, 1e-4));
        if (radius <= 2.0 * sep) continue;
        bool ok = true;
        for (double tau : {ev.tau0 - theta, ev.tau0 + theta}) {
            if (tau < 0.0 || tau > 1.0) continue;
            try {
                if (winding_count(family_target(fam, tau, Which::F), Contour::circle(ev.rho0, radius)) != 2 ||
                    winding_count(family_target(fam, tau, Which::Fprime), Contour::circle(ev.rho0, radius)) != 1)
                    ok = false;
            } catch (const Error&) {
                ok = false;
            }
        }
        if (!ok) continue;
        res.theta = theta;
        const std::array<double, 3> fractions{0.25, 0.5, 1.0};
        bool before_line = true, before_left_off = true, after_line = true, after_left_off = true;
        bool fp_before_right = true, fp_after_left = true, fp_before_left = true, fp_after_right = true;
        // f'_s zero through ρ0, traced to both sides.
        StepControl sc;
        sc.dtau_init = theta / 16;
        sc.dtau_max = theta / 4;
        sc.dtau_min = std::min(1e-6, theta / 1024);
        for (double f : fractions) sc.checkpoints.push_back(ev.tau0 + f * theta);
        for (double f : fractions) sc.checkpoints.push_back(ev.tau0 - f * theta);
        const double tau_hi = std::min(1.0, ev.tau0 + theta), tau_lo = std::max(0.0, ev.tau0 - theta);
        const Trajectory up = trace(fam, Which::Fprime, ev.rho0, ev.tau0, tau_hi, sc);
        const Trajectory down = trace(fam, Which::Fprime, ev.rho0, ev.tau0, tau_lo, sc);
        if (up.status == TrajectoryStatus::Incomplete || down.status == TrajectoryStatus::Incomplete)
            throw Error(ErrorCode::NonConvergence, "f'_s trajectory through the event: " + up.reason + down.reason);
        bool have_before = false, have_after = false;
        for (double f : fractions) {
            const double tb = ev.tau0 - f * theta, ta = ev.tau0 + f * theta;
            if (tb >= 0.0) {
                have_before = true;
                const LocalPair p = local_pair(fam, ev, tb, radius);
                if (p.on_line) {
                    res.line_error = std::max({res.line_error, std::abs(p.left.real() - 0.5), std::abs(p.right.real() - 0.5)});
                    before_left_off = false;
                } else {
                    before_line = false;
                    before_left_off = before_left_off && p.left.real() < 0.5;
                    res.mirror_error = std::max(res.mirror_error, std::abs(p.right - (1.0 - std::conj(p.left))));
                }
                const auto rt = position_at(down, tb);
                if (!rt) throw Error(ErrorCode::NonConvergence, "f'_s trajectory missed a grid point");
                fp_before_right = fp_before_right && rt->real() > 0.5;
                fp_before_left = fp_before_left && rt->real() < 0.5;
            }
            if (ta <= 1.0) {
                have_after = true;
                const LocalPair p = local_pair(fam, ev, ta, radius);
                if (p.on_line) {
                    res.line_error = std::max({res.line_error, std::abs(p.left.real() - 0.5), std::abs(p.right.real() - 0.5)});
                    after_left_off = false;
                } else {
                    after_line = false;
                    after_left_off = after_left_off && p.left.real() < 0.5;
                    res.mirror_error = std::max(res.mirror_error, std::abs(p.right - (1.0 - std::conj(p.left))));
                }
                const auto rt = position_at(up, ta);
                if (!rt) throw Error(ErrorCode::NonConvergence, "f'_s trajectory missed a grid point");
                fp_after_left = fp_after_left && rt->real() < 0.5;
                fp_after_right = fp_after_right && rt->real() > 0.5;
            }
        }
        if (!have_before || !have_after)
            throw Error(ErrorCode::InvalidArgument, "event too close to the end of the τ range");
        const bool a1 = std::abs(j0.f.value) < 1e-8;
        const bool a2 = std::abs(j0.f.d1) < 1e-6;
        res.statement1 = {a1, before_line, after_left_off};
        res.statement2 = {a2, fp_before_right, fp_after_left};
        res.statement1_mirror = {a1, after_line, before_left_off};
        res.statement2_mirror = {a2, fp_after_right, fp_before_left};
        const double lo_tau = ev.tau0 - theta, hi_tau = ev.tau0 + theta;
        if (lo_tau >= 0.0) res.before = local_quadratic_fit(fam, lo_tau, ev.rho0, radius);
        if (hi_tau <= 1.0) res.after = local_quadratic_fit(fam, hi_tau, ev.rho0, radius);
        return res;
    }
    throw Error(ErrorCode::WrongZeroCount, "no θ isolates the double zero");
}

} // namespace zlab
