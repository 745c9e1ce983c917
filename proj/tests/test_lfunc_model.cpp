#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zlab/lfunc_model.hpp"

using namespace zlab;

namespace {

Complex factor(Complex s) { return 1.0 + std::sqrt(5.0) * std::pow(5.0, -s); }

// f(s, τ) built from the Hurwitz oracle alone.
Complex family_oracle(Complex s, double tau)
{
    const int N = 4 * std::max(20, static_cast<int>(std::ceil(2 * std::abs(s.imag()))));
    const Complex zeta = oracle::hurwitz_em(s, 1.0, N, 24);
    Complex l = 0.0;
    for (int a = 1; a <= 4; ++a) l += static_cast<double>(oracle::psi5(a)) * oracle::hurwitz_em(s, a / 5.0, N, 24);
    l *= std::pow(5.0, -s);
    return (1.0 - tau) * factor(s) * zeta + tau * l;
}

std::vector<FunctionSpec> all_kinds()
{
    return {FunctionSpec::riemann_zeta(), FunctionSpec::l_psi5(), FunctionSpec::factor_zeta(), FunctionSpec::family(0.3)};
}

} // namespace

TEST_SUITE("lfunc_model")
{
    TEST_CASE("spec data")
    {
        for (const auto& spec : all_kinds()) {
            CHECK_NOTHROW(validate(spec));
            CHECK(std::abs(spec.fe.degree - spec.fe.degree_from_factors()) < 1e-15);
            CHECK(std::abs(std::abs(spec.fe.omega) - 1.0) < 1e-12);
        }
        CHECK(FunctionSpec::riemann_zeta().fe.degree == 1.0);
        CHECK(std::abs(FunctionSpec::riemann_zeta().fe.Q - 1.0 / std::sqrt(kPi)) < 1e-15);
        CHECK(FunctionSpec::l_psi5().pole_order == 0);
        CHECK(FunctionSpec::family(1.0).pole_order == 0);
        CHECK(FunctionSpec::family(0.5).pole_order == 1);
        CHECK(FunctionSpec::family(0.2).fe == FunctionSpec::family(0.9).fe);
        FunctionSpec bad = FunctionSpec::riemann_zeta();
        bad.fe.omega = Complex(2.0, 0.0);
        CHECK_THROWS_AS(validate(bad), Error);
        CHECK_THROWS_AS(FunctionSpec::family(1.5), Error);
    }

    TEST_CASE("family endpoints")
    {
        const Complex s(2.0, 5.0);
        const Complex zeta = eval(FunctionSpec::riemann_zeta(), s, 0).value;
        CHECK(std::abs(eval(FunctionSpec::family(0.0), s, 0).value - factor(s) * zeta) < 1e-12);
        CHECK(std::abs(eval(FunctionSpec::family(1.0), s, 0).value - eval(FunctionSpec::l_psi5(), s, 0).value) < 1e-12);
        const Complex forced(0.5, kPi / std::log(5.0));
        CHECK(std::abs(eval(FunctionSpec::family(0.0), forced, 0).value) < 1e-10);
        CHECK_THROWS_AS(eval(FunctionSpec::family(0.4), 1.0, 0), Error);
        CHECK_NOTHROW(eval(FunctionSpec::family(1.0), 1.0, 0));
    }

    TEST_CASE("family is affine in tau")
    {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> sig(-2.0, 3.0), t(1.0, 200.0), tau(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const Complex s(sig(rng), t(rng));
            const double x = tau(rng);
            const Complex f0 = eval(FunctionSpec::family(0.0), s, 0).value;
            const Complex f1 = eval(FunctionSpec::family(1.0), s, 0).value;
            const Complex fx = eval(FunctionSpec::family(x), s, 0).value;
            CHECK(std::abs(fx - ((1 - x) * f0 + x * f1)) < 1e-12 * std::max(1.0, std::abs(fx)));
        }
    }

    TEST_CASE("tau derivative")
    {
        const Complex s(0.7, 30.0);
        CHECK(eval_dtau(s, 0.2) == eval_dtau(s, 0.9));
        const double h = 1e-6;
        const Complex fd = (eval(FunctionSpec::family(0.5 + h), s, 0).value - eval(FunctionSpec::family(0.5 - h), s, 0).value) / (2 * h);
        CHECK(std::abs(fd - eval_dtau(s, 0.5)) < 1e-8);
        const Complex at2 = eval(FunctionSpec::l_psi5(), 2.0, 0).value - factor(2.0) * kPi * kPi / 6.0;
        CHECK(std::abs(eval_dtau(2.0, 0.0) - at2) < 1e-12);
    }

    TEST_CASE("functional equation residual")
    {
        const Complex s(0.3, 20.0);
        CHECK(fe_residual(FunctionSpec::riemann_zeta(), s) < 1e-9);
        for (double tau : {0.0, 0.25, 0.5, 1.0}) CHECK(fe_residual(FunctionSpec::family(tau), s) < 1e-9);
        CHECK(fe_residual(FunctionSpec::riemann_zeta(), Complex(0.5, 37.5)) < 1e-10);
        // a wrong root number is detected
        FunctionSpec wrong = FunctionSpec::riemann_zeta();
        wrong.fe.omega = Complex(0.0, 1.0);
        CHECK(fe_residual(wrong, s) > 0.1);
    }

    TEST_CASE("asymmetric and Gamma-factor forms agree")
    {
        for (double q : {1.0, 5.0}) {
            const FunctionalEquationData fe = selberg_data_from_asymmetric(q);
            for (Complex s : {Complex(0.3, 20.0), Complex(-1.5, 3.0), Complex(0.9, 120.0)}) {
                const Jet a = selberg_factor_jet(fe, s, 2);
                const Jet b = asymmetric_factor_jet(q, s, 2);
                for (int k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10 * std::max(1.0, std::abs(b[k])));
            }
        }
    }

    TEST_CASE("reflection path")
    {
        const FunctionSpec mid = FunctionSpec::family(0.5);
        const Complex s(-0.5, 10.0);
        EvalOptions series;
        series.path = EvalPath::Series;
        const Complex direct = eval(mid, s, 0, series).value;
        const Complex reflected = fe_reflect(mid, s).value;
        CHECK(std::abs(direct - reflected) < 1e-8 * std::abs(direct));

        CHECK(std::abs(fe_reflect(FunctionSpec::riemann_zeta(), -2.0).value) < 1e-10);

        const Complex s2(-1.0, 25.0);
        const Complex ref = family_oracle(s2, 0.3);
        CHECK(std::abs(fe_reflect(FunctionSpec::family(0.3), s2).value - ref) < 1e-8 * std::abs(ref));
        CHECK(std::abs(eval(FunctionSpec::family(0.3), Complex(-1.7, 25.0), 0).value - family_oracle(Complex(-1.7, 25.0), 0.3)) <
              1e-8 * std::abs(family_oracle(Complex(-1.7, 25.0), 0.3)));
    }

    TEST_CASE("rotated line function")
    {
        const FunctionSpec zeta = FunctionSpec::riemann_zeta();
        auto z = [&](double t) { return z_rotated(zeta, t).z_value; };
        CHECK(oracle::sign_changes(z, 14.0, 14.3, 300) == 1);

        std::mt19937_64 rng(22);
        std::uniform_real_distribution<double> t(1.0, 300.0);
        for (int i = 0; i < 100; ++i) {
            const double ti = t(rng);
            const LineSample ls = z_rotated(zeta, ti);
            const double f2 = std::norm(eval(zeta, Complex(0.5, ti), 0).value);
            CHECK(std::abs(ls.z_value * ls.z_value - f2) <= 1e-10 * f2 + 1e-300);
            CHECK(std::abs(std::abs(ls.phase) - 1.0) < 1e-14);
        }
        CHECK(std::abs(z_rotated(FunctionSpec::family(0.0), kPi / std::log(5.0)).z_value) < 1e-9);

        // Z jet against differences of Z
        const double h = 1e-5;
        const FunctionSpec fam = FunctionSpec::family(0.4);
        const RealJet j = z_rotated_jet(fam, 42.0);
        const double d1 = (z_rotated(fam, 42.0 + h).z_value - z_rotated(fam, 42.0 - h).z_value) / (2 * h);
        CHECK(std::abs(d1 - j.d1) < 1e-6 * std::max(1.0, std::abs(d1)));
        const double d2 = (z_rotated_jet(fam, 42.0 + h).d1 - z_rotated_jet(fam, 42.0 - h).d1) / (2 * h);
        CHECK(std::abs(d2 - j.d2) < 1e-6 * std::max(1.0, std::abs(d2)));
    }

    TEST_CASE("log-derivative identity on the line")
    {
        const LogDerivative a = critical_line_logderiv(FunctionSpec::riemann_zeta(), 50.0);
        CHECK(std::abs(a.lhs - a.rhs_exact) < 1e-9);
        const LogDerivative b = critical_line_logderiv(FunctionSpec::riemann_zeta(), 200.0);
        CHECK(std::abs(b.lhs - b.rhs_asymptotic) < 1.0);
        const LogDerivative c = critical_line_logderiv(FunctionSpec::family(0.5), 100.0);
        CHECK(std::abs(c.lhs - c.rhs_exact) < 1e-8);
        // the left side computed directly from F'/F
        const Complex s(0.5, 50.0);
        const Complex ld = eval(FunctionSpec::riemann_zeta(), s, 1).value / eval(FunctionSpec::riemann_zeta(), s, 0).value;
        CHECK(std::abs(ld.real() - a.lhs) < 1e-10);
    }

    TEST_CASE("extended path")
    {
        EvalOptions ext;
        ext.path = EvalPath::Extended;
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> sig(-2.0, 3.0), t(1.0, 300.0);
        for (const auto& spec : {FunctionSpec::riemann_zeta(), FunctionSpec::l_psi5(), FunctionSpec::factor_zeta(),
                                 FunctionSpec::family(0.37)}) {
            for (int i = 0; i < 10; ++i) {
                const Complex z(sig(rng), t(rng));
                const JetResult a = eval_jet(spec, z, 2, ext);
                const JetResult b = eval_jet(spec, z, 2);
                for (int k = 0; k <= 2; ++k)
                    CHECK(std::abs(a.jet[k] - b.jet[k]) <= 10 * b.err[static_cast<std::size_t>(k)] + 1e-12 * std::abs(b.jet[k]));
            }
        }
        // ζ(s) - 1 = ζ(s, 2), the right side from the long double oracle
        const Complex s(0.5, 123.4);
        const Complex z = eval(FunctionSpec::riemann_zeta(), s, 0, ext).value;
        CHECK(std::abs(z - 1.0 - oracle::hurwitz_em(s, 2.0, 4 * default_series_length(s), 24)) < 1e-13);
        CHECK_THROWS_AS(eval(FunctionSpec::riemann_zeta(), 1.0, 0, ext), Error);
        CHECK(std::abs(eval(FunctionSpec::l_psi5(), 1.0, 0, ext).value - 2.0 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0)) < 1e-15);
    }
}
