#include "doctest.h"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

#include "stokesdd/likelihood.hpp"

using namespace stokesdd;

namespace {

// ln I0(x) evaluated to 50 digits with mpmath.
struct LogI0Ref {
    double x;
    double value;
};
constexpr LogI0Ref kLogI0Table[] = {
    {0.0, 0.0},
    {1e-8, 2.4999999999999999844e-17},
    {0.001, 2.4999998437500173611e-7},
    {0.5, 0.061549719185481303941},
    {1.0, 0.23591435850717864869},
    {2.5, 1.1908386711960280203},
    {7.0, 5.1274929150828487811},
    {15.0, 12.735669109476906261},
    {19.999, 17.588635758378344017},
    {20.0, 17.589610428244274291},
    {20.001, 17.590585099394080222},
    {30.0, 27.38470143317193585},
    {50.0, 47.127575501871804584},
    {100.0, 96.779732689942583717},
    {700.0, 695.80569999844344908},
    {1000.0, 995.62730888986946467},
    {12345.678, 12340.048540931560339},
    {100000.0, 99993.324599984316463},
};

// Composite trapezoid on [-pi, pi), exact to rounding for smooth periodic integrands.
template <class F>
double periodic_integral(F f, int n)
{
    const double h = kTwoPi / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(-kPi + h * i);
    return s * h;
}

// Composite Simpson on [0, hi].
template <class F>
double simpson(F f, double hi, int n)
{
    const double h = hi / n;
    double s = f(0.0) + f(hi);
    for (int i = 1; i < n; ++i) s += f(h * i) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("log I0 against high-precision reference values")
{
    for (const auto& r : kLogI0Table) {
        CAPTURE(r.x);
        const double got = log_i0(r.x);
        CHECK(std::abs(got - r.value) <= 1e-10 * std::max(1.0, std::abs(r.value)));
        CHECK(log_i0(-r.x) == got);
    }
    CHECK(std::isfinite(log_i0(1e12)));
}

TEST_CASE("log I0 agrees with a library Bessel function")
{
    for (double x = 0.0; x < 700.0; x += 0.37) {
        const double ref = std::log(boost::math::cyl_bessel_i(0, x));
        CHECK(std::abs(log_i0(x) - ref) <= 1e-12 * std::max(1.0, ref));
    }
}

TEST_CASE("log I0 is increasing and continuous at the crossover")
{
    double prev = log_i0(0.0);
    for (double x = 0.01; x < 60.0; x += 0.01) {
        const double v = log_i0(x);
        CHECK(v > prev);
        prev = v;
    }
    const double below = log_i0(std::nextafter(kLogI0Crossover, 0.0));
    const double at = log_i0(kLogI0Crossover);
    CHECK(std::abs(at - below) < 1e-13 * at);
}

TEST_CASE("radii density")
{
    const double sigma_sq = 0.4;
    SUBCASE("reduces to the Rayleigh product when k = 0")
    {
        for (double rx : {0.1, 0.5, 1.3})
            for (double ry : {0.2, 0.9}) {
                const double rayleigh = std::log(rx / sigma_sq) - rx * rx / (2 * sigma_sq)
                                        + std::log(ry / sigma_sq) - ry * ry / (2 * sigma_sq);
                CHECK(radii_likelihood(rx, ry, 0.0, 0.0, sigma_sq) == doctest::Approx(rayleigh).epsilon(1e-12));
            }
    }
    SUBCASE("integrates to one")
    {
        const double kx = 1.7, ky = 0.6;
        const double total = simpson(
            [&](double rx) {
                if (rx == 0.0) return 0.0;
                return simpson(
                    [&](double ry) { return ry == 0.0 ? 0.0 : std::exp(radii_likelihood(rx, ry, kx, ky, sigma_sq)); },
                    8.0, 400);
            },
            8.0, 400);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS(radii_likelihood(1, 1, 1, 1, 0.0));
}

TEST_CASE("phase density normalizes over both observed phases")
{
    const double sigma_sq = 0.25;
    const DVector d_k{1.2, std::polar(0.8, 0.9), std::polar(1.1, -2.2)};
    for (double scale : {0.3, 1.0, 2.5}) {
        const double mx = 1.0 * scale, my = 0.7 * scale, mp = 1.4;
        const int n = 256;
        const double total = periodic_integral(
            [&](double t) {
                return periodic_integral(
                    [&](double g) { return std::exp(phase_likelihood(make_dr(mx, my, mp, t, g), d_k, sigma_sq)); }, n);
            },
            n);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("joint density factorizes into radii and phases")
{
    const double sigma_sq = 0.5;
    const DVector d_k{0.9, std::polar(1.4, 0.3), std::polar(0.6, 1.7)};
    const DVector d_r = make_dr(1.1, 1.2, 0.8, -0.4, 2.0);
    const double joint = joint_likelihood(d_r, d_k, sigma_sq);
    const double split = radii_likelihood(1.1, 1.2, 0.9, 1.4, sigma_sq) + phase_likelihood(d_r, d_k, sigma_sq);
    CHECK(joint == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("successive densities")
{
    const double sigma_sq = 0.3;
    const DVector d_k{1.0, std::polar(1.5, -1.0), std::polar(0.9, 0.4)};
    SUBCASE("gamma conditional integrates to one")
    {
        const DVector base = make_dr(0.8, 1.6, 1.1, -0.7, 0.0);
        const double total = periodic_integral(
            [&](double g) {
                DVector d = base;
                d.c3 = std::polar(std::abs(base.c3), g);
                return std::exp(gamma_conditional_likelihood(d, d_k, sigma_sq));
            },
            512);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("first step integrates to one over theta and both radii")
    {
        const auto inner_theta = [&](double rx, double ry) {
            return periodic_integral(
                [&](double t) { return std::exp(first_step_likelihood(make_dr(rx, ry, 1.0, t, 0.0), d_k, sigma_sq)); },
                64);
        };
        const double total = simpson(
            [&](double rx) {
                if (rx == 0.0) return 0.0;
                return simpson([&](double ry) { return ry == 0.0 ? 0.0 : inner_theta(rx, ry); }, 5.0, 200);
            },
            5.0, 200);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
    }
    SUBCASE("first step does not depend on the fourth entry")
    {
        const DVector a = make_dr(0.8, 1.6, 1.1, -0.7, 0.0);
        const DVector b = make_dr(0.8, 1.6, 3.0, -0.7, 2.5);
        CHECK(first_step_likelihood(a, d_k, sigma_sq) == first_step_likelihood(b, d_k, sigma_sq));
    }
}

TEST_CASE("likelihood terms")
{
    const DVector d_k{1.0, cdouble(0.0, 1.0), cdouble(1.0, 0.0)};
    const DVector d_r{2.0, cdouble(0.0, 2.0), cdouble(0.0, 2.0)};
    const auto t = likelihood_terms(d_r, d_k, 0.5);
    CHECK(t.lambda_x == doctest::Approx(4.0));
    CHECK(t.lambda_y == doctest::Approx(4.0));
    CHECK(t.prev_lambda_y == doctest::Approx(4.0));
    // hat inner product 2 + 2 = 4 ; full adds 1 * conj(2i) = -2i
    CHECK(t.corr_mag_hat == doctest::Approx(4.0));
    CHECK(t.alpha == doctest::Approx(0.0));
    CHECK(t.corr_mag == doctest::Approx(std::sqrt(20.0)));
    CHECK(t.beta == doctest::Approx(std::atan2(-2.0, 4.0)));
}

TEST_CASE("symbol cost")
{
    CHECK(symbol_cost(3.0, 1.0, 0.0, Mode::exact) == doctest::Approx(1.0));
    CHECK(symbol_cost(3.0, 1.0, 0.7, Mode::high_snr) == doctest::Approx(1.0));
    CHECK(symbol_cost(3.0, 1.0, 0.5, Mode::exact) == doctest::Approx(3.0 - log_i0(2.0)));
    double prev = symbol_cost(2.0, 0.0, 0.2, Mode::exact);
    for (double c = 0.05; c < 5.0; c += 0.05) {
        const double v = symbol_cost(2.0, c, 0.2, Mode::exact);
        CHECK(v < prev);
        prev = v;
    }
    // exact tends to the high-SNR cost as the noise vanishes
    const double hi = symbol_cost(2.0, 1.5, 0.0, Mode::high_snr);
    CHECK(std::abs(symbol_cost(2.0, 1.5, 1e-6, Mode::exact) - hi) < 1e-4);
    CHECK(mode_name(Mode::exact) == std::string("exact"));
    CHECK(mode_name(Mode::high_snr) == std::string("high_snr"));
}
