#include <doctest.h>

#include "zlab/speiser.hpp"

using namespace zlab;

namespace {

// Zeros of F and F' in {|s - s0| < r, σ < 1/2}, from rectangle scans.
std::pair<int, int> scan_half_disk(const FunctionSpec& spec, Complex s0, double r)
{
    const Rect box{s0.real() - r - 1e-3, 0.5 - 1e-9, s0.imag() - r - 1e-3, s0.imag() + r + 1e-3};
    auto count = [&](Which w) {
        int n = 0;
        for (const auto& z : scan_zeros(spec, w, box))
            if (std::abs(z.rho - s0) < r && z.rho.real() < 0.5 - 1e-8) n += z.multiplicity;
        return n;
    };
    return {count(Which::F), count(Which::Fprime)};
}

// The left member of the off-line pair of the family near height 60.7 at τ = 0.04.
ZeroRecord offline_left()
{
    for (const auto& z : scan_zeros(FunctionSpec::family(0.04), Which::F, Rect{-0.5, 0.499, 59, 62}))
        if (z.rho.real() < 0.5 - 1e-6) return z;
    FAIL("no off-line zero found");
    return {};
}

} // namespace

TEST_SUITE("speiser")
{
    TEST_CASE("half-disk contour")
    {
        const Contour c = Contour::half_disk_left(Complex(0.5, 20.0), 0.3, {20.05, 19.9}, 1e-8);
        CHECK(c.is_closed());
        CHECK(std::abs(c.signed_area() - kPi * 0.09 / 2) < 1e-3);
        CHECK(c.indentations.size() == 2);
    }

    TEST_CASE("no zeros near a zeta zero")
    {
        const SpeiserReport r = speiser_compare(FunctionSpec::riemann_zeta(), Complex(0.5, 14.134725), 0.3);
        CHECK(r.n_F == 0);
        CHECK(r.n_Fprime == 0);
        CHECK(r.equal);
        CHECK(r.line_zeros_bypassed.size() == 1);
        const auto oracle = scan_half_disk(FunctionSpec::riemann_zeta(), Complex(0.5, 14.134725), 0.3);
        CHECK(oracle == std::pair<int, int>{0, 0});
    }

    TEST_CASE("tiny disk at a generic line point")
    {
        const SpeiserReport r = speiser_compare(FunctionSpec::riemann_zeta(), Complex(0.5, 17.3), 1e-6);
        CHECK(r.n_F == 0);
        CHECK(r.n_Fprime == 0);
        CHECK(r.equal);
        CHECK_THROWS_AS(speiser_compare(FunctionSpec::riemann_zeta(), Complex(0.5, 17.3), 0.0), Error);
    }

    TEST_CASE("off-line pair of the family")
    {
        const ZeroRecord left = offline_left();
        const Complex s0(0.5, left.rho.imag());
        const double r = 2 * std::abs(left.rho.real() - 0.5);
        const SpeiserReport rep = speiser_compare(FunctionSpec::family(0.04), s0, r);
        CHECK(rep.n_F >= 1);
        CHECK(rep.equal);
        const auto oracle = scan_half_disk(FunctionSpec::family(0.04), s0, r);
        CHECK(rep.n_F == oracle.first);
        CHECK(rep.n_Fprime == oracle.second);

        // the mirrored right half-disk holds as many zeros of F
        int right = 0;
        for (const auto& z : scan_zeros(FunctionSpec::family(0.04), Which::F,
                                        Rect{0.5 + 1e-9, 0.5 + r + 1e-3, s0.imag() - r - 1e-3, s0.imag() + r + 1e-3}))
            if (std::abs(z.rho - s0) < r) ++right;
        CHECK(right == rep.n_F);

        SpeiserOptions finer;
        finer.indent_rel /= 2;
        const SpeiserReport half = speiser_compare(FunctionSpec::family(0.04), s0, r, finer);
        CHECK(half.n_F == rep.n_F);
        CHECK(half.n_Fprime == rep.n_Fprime);
    }

    TEST_CASE("pipeline")
    {
        const SpeiserReport z = speiser_pipeline(FunctionSpec::riemann_zeta(), 100.0, 20.0, 8, 0.1);
        CHECK(z.equal);
        CHECK(z.n_F == 0);
        CHECK(z.n_Fprime == 0);
        REQUIRE(z.annulus);
        CHECK(z.annulus->j >= 2);

        // at the height where two line zeros of the family meet
        const SpeiserReport f = speiser_pipeline(FunctionSpec::family(0.0294389676), 60.7129808, 3.0, 6, 0.1);
        CHECK(f.equal);
        CHECK(f.n_F <= 2);
    }

    TEST_CASE("negative control without a functional equation")
    {
        // zeros left of the line and no zero of F' near them: the equality need not hold
        Target F, Fp;
        const Complex a(0.3, 10.0), b(0.45, 10.05);
        F.max_order = 2;
        F.jet = [=](Complex s, int) { return Jet{(s - a) * (s - b), 2.0 * s - a - b, 2.0}; };
        Fp.max_order = 1;
        Fp.jet = [=](Complex s, int) { return Jet{2.0 * s - a - b, 2.0, 0.0}; };
        const SpeiserReport r = speiser_compare(F, Fp, Complex(0.5, 10.0), 0.3, {});
        CHECK(r.n_F == 2);
        CHECK(r.n_Fprime == 1);
        CHECK(!r.equal);
    }

    TEST_CASE("Spira line check")
    {
        CHECK(spira_line_check(FunctionSpec::riemann_zeta(), 10, 200, 0.02).empty());
        CHECK(spira_line_check(FunctionSpec::family(0.7), 10, 100, 0.02).empty());
        Target F;
        F.max_order = 2;
        F.jet = [](Complex s, int) { return Jet{s - Complex(0.5, 20.0) - 0.1, 1.0, 0.0}; };
        CHECK(spira_line_check(F, 10, 30, 0.1).empty());
        // a planted zero of F' on the line where F does not vanish is reported
        Target G;
        G.max_order = 2;
        G.jet = [](Complex s, int) {
            const Complex d = s - Complex(0.5, 20.0);
            return Jet{1.0 + d * d, 2.0 * d, 2.0};
        };
        const auto v = spira_line_check(G, 10, 30, 0.1);
        REQUIRE(v.size() == 1);
        CHECK(std::abs(v[0].t - 20.0) < 1e-8);
    }

    TEST_CASE("log-derivative is negative on the line")
    {
        const NegativityResult z = logderiv_negativity(FunctionSpec::riemann_zeta(), 10, 200);
        CHECK(z.worst_value < 0);
        const FunctionSpec zeta = FunctionSpec::riemann_zeta();
        CHECK(z.worst_value <= -(zeta.fe.degree / 2) * std::log(10.0) - std::log(zeta.fe.Q) + 1.0);
        CHECK(logderiv_negativity(FunctionSpec::family(0.2), 20, 100).worst_value < 0);
    }
}
