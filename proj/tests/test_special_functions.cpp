#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zlab/special_functions.hpp"

using namespace zlab;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double mod_2pi_i(Complex d)
{
    const double k = std::round(d.imag() / (2 * kPi));
    return std::abs(Complex(d.real(), d.imag() - 2 * kPi * k));
}

} // namespace

TEST_SUITE("special_functions")
{
    TEST_CASE("log gamma classical values")
    {
        CHECK(std::abs(log_gamma(1.0)) < 1e-14);
        CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(kPi)) < 1e-14);
        CHECK(std::abs(log_gamma(2.0)) < 1e-14);
        CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-13);
        CHECK_THROWS_AS(log_gamma(0.0), Error);
        CHECK_THROWS_AS(log_gamma(-3.0), Error);
    }

    TEST_CASE("log gamma recurrence")
    {
        const Complex s(2.5, 3.0);
        CHECK(mod_2pi_i(log_gamma(s + 1.0) - log_gamma(s) - std::log(s)) < 1e-12);

        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> re(0.01, 50.0), im(-200.0, 200.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Complex z(re(rng), im(rng));
            worst = std::max(worst, mod_2pi_i(log_gamma(z + 1.0) - log_gamma(z) - std::log(z)));
        }
        CHECK(worst < 1e-12);
    }

    TEST_CASE("gamma reflection")
    {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> re(-6.0, 6.0), im(-30.0, 30.0);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            const Complex z(re(rng), im(rng));
            if (std::abs(z.imag()) < 1e-3 && std::abs(z.real() - std::round(z.real())) < 1e-3) continue;
            const Complex prod = std::exp(log_gamma(z) + log_gamma(1.0 - z)) * std::sin(kPi * z) / kPi;
            worst = std::max(worst, std::abs(prod - 1.0));
        }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("log gamma is continuous across the real axis away from the cut")
    {
        const Complex above = log_gamma(Complex(3.7, 1e-12));
        const Complex below = log_gamma(Complex(3.7, -1e-12));
        CHECK(std::abs(above - below) < 1e-10);
    }

    TEST_CASE("digamma")
    {
        CHECK(std::abs(digamma(1.0) + kEulerGamma) < 1e-13);
        CHECK(std::abs(digamma(10.0) - std::log(10.0)) < 0.06);
        const Complex s(2.0, 4.0);
        CHECK(std::abs(digamma(s + 1.0) - digamma(s) - 1.0 / s) < 1e-12);
        CHECK(std::abs(trigamma(1.0) - kPi * kPi / 6) < 1e-12);
        // derivative of log gamma by central differences
        const Complex z(0.3, 7.0);
        const double h = 1e-5;
        const Complex fd = (log_gamma(z + h) - log_gamma(z - h)) / (2 * h);
        CHECK(std::abs(fd - digamma(z)) < 1e-8);
        const Complex fd2 = (digamma(z + h) - digamma(z - h)) / (2 * h);
        CHECK(std::abs(fd2 - trigamma(z)) < 1e-8);
    }

    TEST_CASE("hurwitz classical values and identities")
    {
        CHECK(std::abs(hurwitz_zeta(2.0, 1.0, 0).value - kPi * kPi / 6) < 1e-12);
        const Complex s(3.0, 7.0);
        const Complex half = hurwitz_zeta(s, 0.5, 0).value;
        const Complex one = hurwitz_zeta(s, 1.0, 0).value;
        CHECK(std::abs(half - (std::pow(2.0, s) - 1.0) * one) < 1e-10);

        // ζ(s, a) - a^{-s} = ζ(s, a + 1), with the right side summed from 2
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> a(0.05, 1.0), sig(-2.0, 3.0), t(1.0, 100.0);
        for (int i = 0; i < 20; ++i) {
            const double ai = a(rng);
            const Complex z(sig(rng), t(rng));
            const Complex lhs = hurwitz_zeta(z, ai, 0).value - std::pow(ai, -z);
            const Complex rhs = oracle::hurwitz_em(z, ai + 1.0, 4 * default_series_length(z), 24);
            CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }

    TEST_CASE("hurwitz against a longer Euler-Maclaurin oracle")
    {
        const Complex s(0.5, 50.0);
        const int N = 4 * default_series_length(s);
        const Complex ref = oracle::hurwitz_em(s, 0.2, N, 24);
        const EvalResult r = hurwitz_zeta(s, 0.2, 0);
        CHECK(std::abs(r.value - ref) < 1e-10);
        CHECK(std::abs(r.value - ref) <= 10 * r.est_abs_error + 1e-15);
    }

    TEST_CASE("error estimates cover the observed error")
    {
        std::mt19937_64 rng(14);
        std::uniform_real_distribution<double> a(0.05, 1.0), sig(-2.0, 3.0), t(1.0, 200.0);
        for (int i = 0; i < 30; ++i) {
            const double ai = a(rng);
            const Complex z(sig(rng), t(rng));
            SeriesOptions loose;
            loose.tol = 1e-6;
            loose.max_doublings = 0;
            loose.bernoulli_terms = 4;
            const EvalResult r = hurwitz_zeta(z, ai, 0, loose);
            const Complex ref = oracle::hurwitz_em(z, ai, 4 * default_series_length(z), 24);
            CHECK(std::abs(r.value - ref) <= 10 * r.est_abs_error + 1e-13 * std::abs(ref));
        }
    }

    TEST_CASE("riemann zeta")
    {
        CHECK(std::abs(riemann_zeta(0.0, 0).value + 0.5) < 1e-12);
        CHECK(std::abs(riemann_zeta(0.0, 1).value + 0.5 * std::log(2 * kPi)) < 1e-12);
        CHECK(std::abs(riemann_zeta(Complex(0.5, 14.134725), 0).value) < 1e-5);
        CHECK(std::abs(riemann_zeta(4.0, 0).value - std::pow(kPi, 4) / 90) < 1e-13);
        CHECK_THROWS_AS(riemann_zeta(1.0, 0), Error);
    }

    TEST_CASE("derivatives match central differences")
    {
        std::mt19937_64 rng(15);
        std::uniform_real_distribution<double> sig(-2.0, 3.0), t(1.0, 200.0);
        const double h = 1e-5;
        double worst1 = 0.0, worst2 = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Complex z(sig(rng), t(rng));
            const JetResult j = riemann_zeta_jet(z, 2);
            const Complex fd1 = (riemann_zeta(z + h, 0).value - riemann_zeta(z - h, 0).value) / (2 * h);
            const Complex fd2 = (riemann_zeta(z + h, 1).value - riemann_zeta(z - h, 1).value) / (2 * h);
            const double scale = std::max({std::abs(j.jet.value), std::abs(j.jet.d1), std::abs(j.jet.d2), 1.0});
            worst1 = std::max(worst1, std::abs(fd1 - j.jet.d1) / scale);
            worst2 = std::max(worst2, std::abs(fd2 - j.jet.d2) / scale);
        }
        CHECK(worst1 < 1e-6);
        CHECK(worst2 < 1e-6);
    }

    TEST_CASE("character table")
    {
        CHECK(psi5(1) == 1);
        CHECK(psi5(2) == -1);
        CHECK(psi5(3) == -1);
        CHECK(psi5(4) == 1);
        CHECK(psi5(5) == 0);
        for (long long m = 1; m < 30; ++m)
            for (long long n = 1; n < 30; ++n) CHECK(psi5(m * n) == psi5(m) * psi5(n));
    }

    TEST_CASE("L(s, psi5)")
    {
        const double at_one = oracle::l_psi5_at_one(1000000);
        CHECK(std::abs(at_one - 0.4304089410) < 1e-10);
        // closed form 2 log(golden ratio) / √5
        CHECK(std::abs(at_one - 2.0 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0)) < 1e-12);
        const EvalResult l1 = dirichlet_l_psi5(1.0, 0);
        CHECK(std::abs(l1.value - at_one) < 1e-12);

        const Complex s(2.0, 3.0);
        CHECK(std::abs(dirichlet_l_psi5(s, 0).value - oracle::l_psi5_partial(s, 1000000)) < 1e-8);

        const double h = 1e-5;
        const Complex z(0.4, 33.0);
        const Complex fd = (dirichlet_l_psi5(z + h, 0).value - dirichlet_l_psi5(z - h, 0).value) / (2 * h);
        CHECK(std::abs(fd - dirichlet_l_psi5(z, 1).value) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
}
