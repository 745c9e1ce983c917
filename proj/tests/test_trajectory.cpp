#include <doctest.h>

#include "zlab/trajectory.hpp"
#include "zlab/zero_finder.hpp"

using namespace zlab;

namespace {

const ParametricFamily& fam()
{
    static const auto f = family_f();
    return *f;
}

const double kForced = kPi / std::log(5.0);

// A leaving collision near height 60.7.
const DoubleZeroEvent& leave_event()
{
    static const DoubleZeroEvent ev = detect_double_zero(fam(), {60.6, 60.8}, {0.02, 0.04});
    return ev;
}

// (s - 1/2 - 5i)² + (τ - τ0): real on the line, two line zeros for τ > τ0.
std::shared_ptr<const ParametricFamily> planted_family(double tau0)
{
    return synthetic_family([tau0](Complex s, double tau, int) {
        const Complex d = s - Complex(0.5, 5.0);
        return FamilyJet{Jet{d * d + (tau - tau0), 2.0 * d, 2.0}, Jet{1.0, 0.0, 0.0}};
    });
}

Target planted_quadratic(Complex z1, Complex z2)
{
    Target g;
    g.max_order = 2;
    g.jet = [=](Complex s, int) {
        const Complex u = std::exp(s);
        const Jet p{(s - z1) * (s - z2), 2.0 * s - z1 - z2, 2.0};
        return Jet{u, u, u} * p;
    };
    return g;
}

} // namespace

TEST_SUITE("trajectory")
{
    TEST_CASE("line function of the family")
    {
        const LinePoint p = line_point(fam(), 30.0, 0.4);
        const Complex f = fam().jet(Complex(0.5, 30.0), 0.4, 0).f.value;
        CHECK(std::abs(std::abs(p.z) - std::abs(f)) < 1e-12 * std::max(1.0, std::abs(f)));
        const double h = 1e-6;
        const LinePoint a = line_point(fam(), 30.0, 0.4 + h), b = line_point(fam(), 30.0, 0.4 - h);
        CHECK(std::abs((a.z - b.z) / (2 * h) - p.z_tau) < 1e-6 * std::max(1.0, std::abs(p.z_tau)));
        CHECK(std::abs((a.z_t - b.z_t) / (2 * h) - p.z_ttau) < 1e-6 * std::max(1.0, std::abs(p.z_ttau)));
        const LinePoint c = line_point(fam(), 30.0 + h, 0.4), d = line_point(fam(), 30.0 - h, 0.4);
        CHECK(std::abs((c.z - d.z) / (2 * h) - p.z_t) < 1e-6 * std::max(1.0, std::abs(p.z_t)));
        CHECK(std::abs((c.z_t - d.z_t) / (2 * h) - p.z_tt) < 1e-6 * std::max(1.0, std::abs(p.z_tt)));

        const auto zs = line_zeros(fam(), 0.0, 1.0, 3.0);
        REQUIRE(zs.size() == 1);
        CHECK(std::abs(zs[0] - kForced) < 1e-10);
    }

    TEST_CASE("trace from the forced zero")
    {
        StepControl sc;
        for (int k = 1; k <= 10; ++k) sc.checkpoints.push_back(k / 100.0);
        const Trajectory tr = trace(fam(), Which::F, Complex(0.5, kForced), 0.0, 0.1, sc);
        REQUIRE(tr.status != TrajectoryStatus::Incomplete);
        CHECK(tr.samples.front().tau == 0.0);
        CHECK(tr.samples.back().tau == 0.1);
        for (std::size_t i = 0; i < tr.samples.size(); ++i) {
            const auto& s = tr.samples[i];
            CHECK(std::abs(fam().jet(s.rho, s.tau, 0).f.value) < 1e-9);
            if (i > 0) CHECK(std::abs(s.rho - tr.samples[i - 1].rho) < sc.step_cap);
            if (tr.status == TrajectoryStatus::StaysOnLine) CHECK(std::abs(s.rho.real() - 0.5) < 1e-9);
        }
        // every checkpoint position is a zero found independently by a scan
        for (double tau : sc.checkpoints) {
            const auto at = position_at(tr, tau);
            REQUIRE(at);
            const auto zs = scan_zeros(family_target(fam(), tau, Which::F), Rect{0, 1, at->imag() - 0.5, at->imag() + 0.5});
            bool found = false;
            for (const auto& z : zs) found |= std::abs(z.rho - *at) < 1e-8;
            CHECK(found);
        }
    }

    TEST_CASE("degenerate interval")
    {
        const auto start = line_zeros(fam(), 0.3, 1.0, 3.0);
        REQUIRE(!start.empty());
        const Trajectory t2 = trace(fam(), Which::F, Complex(0.5, start[0]), 0.3, 0.3);
        REQUIRE(t2.samples.size() == 1);
        CHECK(t2.samples[0].rho == Complex(0.5, start[0]));
        CHECK(t2.samples[0].tau == 0.3);
        CHECK_THROWS_AS(trace(fam(), Which::F, Complex(0.5, 2.5), 0.3, 0.4), Error);
    }

    TEST_CASE("trace forward then backward")
    {
        const auto zs = line_zeros(fam(), 0.0, 14.0, 14.3);
        REQUIRE(zs.size() == 1);
        const Complex start(0.5, zs[0]);
        const Trajectory fwd = trace(fam(), Which::F, start, 0.0, 0.5);
        REQUIRE(fwd.status != TrajectoryStatus::Incomplete);
        const Trajectory back = trace(fam(), Which::F, fwd.samples.back().rho, 0.5, 0.0);
        REQUIRE(back.status != TrajectoryStatus::Incomplete);
        CHECK(std::abs(back.samples.back().rho - start) < 1e-7);
    }

    TEST_CASE("quadratic model of a planted pair")
    {
        const Complex z1(0.3, 2.0), z2(0.35, 2.1);
        const LocalQuadraticModel m = local_quadratic_fit(planted_quadratic(z1, z2), 0.0, Complex(0.3, 2.05), 0.2);
        const bool direct = std::abs(m.s1 - z1) < 1e-9 && std::abs(m.s2 - z2) < 1e-9;
        const bool swapped = std::abs(m.s1 - z2) < 1e-9 && std::abs(m.s2 - z1) < 1e-9;
        CHECK((direct || swapped));
        CHECK(std::abs(m.s1 + m.s2 + m.a1) < 1e-12);
        CHECK(std::abs(m.s1 * m.s2 - m.a0) < 1e-12);
        CHECK(std::abs(m.discriminant - (m.a1 * m.a1 - 4.0 * m.a0)) < 1e-12);
        CHECK(std::abs(m.s1 - 0.5 * (-m.a1 + std::sqrt(m.discriminant))) < 1e-12);
        CHECK_THROWS_AS(local_quadratic_fit(planted_quadratic(z1, z2), 0.0, z1, 0.01), Error);

        LocalQuadraticModel prev = m, next = m;
        std::swap(next.s1, next.s2);
        align_roots(prev, next);
        CHECK(next.s1 == prev.s1);
    }

    TEST_CASE("collision of a planted family")
    {
        const double tau0 = 0.371234;
        const auto g = planted_family(tau0);
        const DoubleZeroEvent ev = detect_double_zero(*g, {4.0, 6.0}, {0.3, 0.45});
        CHECK(std::abs(ev.tau0 - tau0) < 1e-8);
        CHECK(std::abs(ev.rho0 - Complex(0.5, 5.0)) < 1e-6);
        CHECK(ev.rho0.real() == 0.5);
        CHECK(ev.kind == DoubleZeroEvent::Kind::Land);
        CHECK_THROWS_AS(detect_double_zero(*g, {4.0, 6.0}, {0.4, 0.45}), Error);
        try {
            detect_double_zero(*g, {4.0, 6.0}, {0.4, 0.45});
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NoCollision);
        }
    }

    TEST_CASE("a collision of the family")
    {
        const DoubleZeroEvent& ev = leave_event();
        CHECK(ev.kind == DoubleZeroEvent::Kind::Leave);
        CHECK(ev.rho0.real() == 0.5);
        const FamilyJet j = fam().jet(ev.rho0, ev.tau0, 2);
        CHECK(std::abs(j.f.value) < 1e-8);
        CHECK(std::abs(j.f.d1) < 1e-6);
        CHECK(std::abs(j.f.d2) > 1e-4);
        CHECK(std::abs(ev.f_second_deriv - j.f.d2) < 1e-6 * std::abs(j.f.d2));

        // discriminant: line pair (negative) before, mirror pair (positive) after
        const LocalQuadraticModel before = local_quadratic_fit(fam(), ev.tau0 - 1e-5, ev.rho0, 0.1);
        const LocalQuadraticModel at = local_quadratic_fit(fam(), ev.tau0, ev.rho0, 0.1);
        const LocalQuadraticModel after = local_quadratic_fit(fam(), ev.tau0 + 1e-5, ev.rho0, 0.1);
        CHECK(before.discriminant.real() < 0);
        CHECK(std::abs(before.discriminant.imag()) < 1e-6 * std::abs(before.discriminant));
        CHECK(after.discriminant.real() > 0);
        CHECK(std::abs(after.discriminant.imag()) < 1e-6 * std::abs(after.discriminant));
        CHECK(std::abs(at.discriminant) < 1e-7);
        CHECK(std::abs(before.s1.real() - 0.5) < 1e-9);
        CHECK(std::abs(before.s2.real() - 0.5) < 1e-9);
        CHECK(std::abs(after.s2 - (1.0 - std::conj(after.s1))) < 1e-8);
        CHECK(std::min(after.s1.real(), after.s2.real()) < 0.5);

        ZeroRecord z;
        z.rho = ev.rho0;
        CHECK(multiplicity(family_target(fam(), ev.tau0, Which::F), z, 1e-2) == 2);
    }

    TEST_CASE("equivalence at the collision")
    {
        const DoubleZeroEvent& ev = leave_event();
        const Theorem3Result r = classify_theorem3(fam(), ev);
        CHECK(r.equivalent());
        CHECK(r.holds1());
        CHECK(r.holds2());
        CHECK(r.mirror_error < 1e-8);
        CHECK(r.line_error < 1e-9);
        CHECK(r.theta > 0);
    }

    TEST_CASE("trajectory through the collision")
    {
        const DoubleZeroEvent& ev = leave_event();
        const auto pair = line_zeros(fam(), ev.tau0 - 1e-3, ev.rho0.imag() - 0.2, ev.rho0.imag() + 0.2);
        REQUIRE(pair.size() == 2);
        StepControl sc;
        sc.checkpoints = {ev.tau0 + 0.01};
        const Trajectory lower = trace(fam(), Which::F, Complex(0.5, pair[0]), ev.tau0 - 1e-3, ev.tau0 + 0.01, sc);
        const Trajectory upper = trace(fam(), Which::F, Complex(0.5, pair[1]), ev.tau0 - 1e-3, ev.tau0 + 0.01, sc);
        REQUIRE(lower.status == TrajectoryStatus::LeavesAt);
        REQUIRE(upper.status == TrajectoryStatus::LeavesAt);
        CHECK(std::abs(lower.tau_star - ev.tau0) < 1e-9);
        const Complex l = lower.samples.back().rho, u = upper.samples.back().rho;
        CHECK(l.real() < 0.5);
        CHECK(u.real() > 0.5);
        CHECK(std::abs(u - (1.0 - std::conj(l))) < 1e-8);
        for (const auto& s : lower.samples) CHECK(std::abs(fam().jet(s.rho, s.tau, 0).f.value) < 1e-9);
    }

    TEST_CASE("zeros of the derivative on the line are zeros of f")
    {
        const DoubleZeroEvent& ev = leave_event();
        const Trajectory tr = trace(fam(), Which::Fprime, ev.rho0, ev.tau0, ev.tau0 - 1e-3);
        REQUIRE(tr.status != TrajectoryStatus::Incomplete);
        int on_line = 0;
        for (const auto& s : tr.samples) {
            if (std::abs(s.rho.real() - 0.5) >= 1e-9) continue;
            ++on_line;
            CHECK(std::abs(fam().jet(s.rho, s.tau, 0).f.value) < 1e-6);
        }
        CHECK(on_line >= 1);
    }
}
