#include "doctest.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>

#include <cmath>
#include <random>

#include "stokesdd/channel.hpp"

using namespace stokesdd;

namespace {

JonesPair random_pair(Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    return {{g(rng), g(rng)}, {g(rng), g(rng)}};
}

// Pearson statistic of equal-width bins against an expected cdf.
template <class Cdf>
double pearson(const std::vector<double>& xs, double lo, double hi, int bins, Cdf cdf)
{
    std::vector<double> obs(static_cast<std::size_t>(bins), 0.0);
    for (double x : xs) {
        int b = static_cast<int>((x - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        obs[static_cast<std::size_t>(b)] += 1.0;
    }
    double stat = 0.0;
    const double n = static_cast<double>(xs.size());
    for (int b = 0; b < bins; ++b) {
        const double l = b == 0 ? -1e300 : lo + (hi - lo) * b / bins;
        const double h = b == bins - 1 ? 1e300 : lo + (hi - lo) * (b + 1) / bins;
        const double e = n * (cdf(h) - cdf(l));
        stat += (obs[static_cast<std::size_t>(b)] - e) * (obs[static_cast<std::size_t>(b)] - e) / e;
    }
    return stat;
}

double chi2_critical(int dof)
{
    return boost::math::quantile(boost::math::chi_squared(dof), 0.999);
}

}  // namespace

TEST_CASE("channel matrix construction and inverse")
{
    CHECK_THROWS_AS(ChannelMatrix(cdouble(1, 0), cdouble(0.1, 0)), std::invalid_argument);
    const ChannelMatrix h(cdouble(0.6, 0.0), cdouble(0.0, 0.8));
    const JonesPair e{{1, 0}, {0, 0}};
    const JonesPair k = h.apply(e);
    CHECK(std::abs(k.x - cdouble(0.6, 0)) < 1e-15);
    CHECK(std::abs(k.y - cdouble(0.0, 0.8)) < 1e-15);

    const ChannelMatrix swap(cdouble(0, 0), cdouble(1, 0));
    const JonesPair s = swap.apply({{1, 2}, {3, 4}});
    CHECK(std::abs(s.x - cdouble(3, 4)) < 1e-15);
    CHECK(std::abs(s.y - cdouble(-1, -2)) < 1e-15);

    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto hh = sample_channel(rng);
        CHECK(std::abs(std::norm(hh.a()) + std::norm(hh.b()) - 1.0) < 1e-12);
        const JonesPair v = random_pair(rng);
        const JonesPair w = hh.apply(v);
        CHECK(std::abs(w.norm_sq() - v.norm_sq()) < 1e-12 * v.norm_sq());
        const JonesPair back = hh.apply_inverse(w);
        CHECK(std::abs(back.x - v.x) < 1e-12);
        CHECK(std::abs(back.y - v.y) < 1e-12);
    }
}

TEST_CASE("random channel follows the rotation-invariant measure")
{
    // Reference: normalize an isotropic 4-d Gaussian onto the 3-sphere, which
    // is the Haar measure on this matrix family. Under it |b|^2 is uniform.
    Rng rng(2024);
    Rng ref_rng(99);
    const int n = 100000;
    std::vector<double> b2, ref_b2, arg_a;
    for (int i = 0; i < n; ++i) {
        const auto h = sample_channel(rng);
        b2.push_back(std::norm(h.b()));
        arg_a.push_back(std::arg(h.a()));
        const JonesPair g = random_pair(ref_rng);
        ref_b2.push_back(std::norm(g.y) / g.norm_sq());
    }
    const auto uniform01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(pearson(b2, 0.0, 1.0, 20, uniform01) < chi2_critical(19));
    CHECK(pearson(ref_b2, 0.0, 1.0, 20, uniform01) < chi2_critical(19));
    double mean = 0.0;
    for (double v : b2) mean += v;
    mean /= n;
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    const auto uniform_angle = [](double x) { return std::clamp((x + kPi) / kTwoPi, 0.0, 1.0); };
    CHECK(pearson(arg_a, -kPi, kPi, 24, uniform_angle) < chi2_critical(23));

    const auto hz = sample_channel_b_zero(rng);
    CHECK(hz.b() == cdouble(0.0, 0.0));
    CHECK(std::abs(std::abs(hz.a()) - 1.0) < 1e-15);
}

TEST_CASE("additive noise statistics")
{
    Rng rng(5);
    const JonesPair k{{1.5, -0.5}, {0.0, 2.0}};
    CHECK(add_noise(k, 0.0, rng).x == k.x);
    CHECK_THROWS_AS(add_noise(k, -1.0, rng), std::invalid_argument);

    const double sigma_sq = 0.3;
    const int n = 200000;
    double s1 = 0, s2 = 0, cross = 0;
    std::vector<double> scaled;
    for (int i = 0; i < n; ++i) {
        const JonesPair r = add_noise(k, sigma_sq, rng);
        const double re = r.x.real() - k.x.real();
        const double im = r.x.imag() - k.x.imag();
        s1 += re * re;
        s2 += im * im;
        cross += re * im;
        scaled.push_back(std::norm(r.y) / sigma_sq);
    }
    CHECK(std::abs(s1 / n - sigma_sq) < 0.01 * sigma_sq);
    CHECK(std::abs(s2 / n - sigma_sq) < 0.01 * sigma_sq);
    CHECK(std::abs(cross / n) < 0.01 * sigma_sq);

    // |r_y|^2 / sigma^2 is noncentral chi-square with 2 dof (a Rician amplitude)
    const boost::math::non_central_chi_squared nc(2.0, std::norm(k.y) / sigma_sq);
    const auto cdf = [&](double x) { return x <= 0 ? 0.0 : x > 1e200 ? 1.0 : boost::math::cdf(nc, x); };
    CHECK(pearson(scaled, 0.0, 40.0, 40, cdf) < chi2_critical(39));
}

TEST_CASE("Stokes map")
{
    SUBCASE("identity channel")
    {
        const auto m = stokes_map(ChannelMatrix::identity());
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(m.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == doctest::Approx(i == j ? 1.0 : 0.0));
    }
    SUBCASE("polarization swap")
    {
        const auto m = stokes_map(ChannelMatrix(cdouble(0, 0), cdouble(1, 0)));
        const double expect[4][4] = {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(m.m[i][j] - expect[i][j]) < 1e-15);
    }
    SUBCASE("agrees with the quadruple of the rotated field")
    {
        Rng rng(17);
        for (int t = 0; t < 500; ++t) {
            const auto h = sample_channel(rng);
            const JonesPair e = random_pair(rng);
            const auto lhs = stokes_map(h).apply(stokes_quadruple(e));
            const auto rhs = stokes_quadruple(h.apply(e));
            for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12 * (1.0 + e.norm_sq()));
        }
    }
    SUBCASE("quadruple overloads agree")
    {
        const JonesPair e{std::polar(2.0, 0.4), std::polar(0.5, -1.1)};
        const auto q1 = stokes_quadruple(e);
        const auto q2 = stokes_quadruple(2.0, 0.5, 1.5);
        for (std::size_t i = 0; i < 4; ++i) CHECK(q1[i] == doctest::Approx(q2[i]));
    }
}

TEST_CASE("inverse Stokes map")
{
    Rng rng(23);
    for (int t = 0; t < 500; ++t) {
        const auto h = sample_channel(rng);
        const JonesPair e = random_pair(rng);
        const auto g = invert_stokes_map(stokes_map(h), stokes_quadruple(h.apply(e)));
        CHECK(std::abs(g.mag_x - std::abs(e.x)) < 1e-9);
        CHECK(std::abs(g.mag_y - std::abs(e.y)) < 1e-9);
        CHECK(angles_equal(g.theta, std::arg(e.x * std::conj(e.y)), 1e-8));
    }
    const auto m = stokes_map(ChannelMatrix::identity());
    CHECK_THROWS_AS(invert_stokes_map(m, stokes_quadruple(1.0, 0.0, 0.0)), DegenerateError);
    CHECK_THROWS_AS(invert_stokes_map(m, {-1.0, 1.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("fourth-dimension recovery")
{
    SUBCASE("b = 0 reduces to an unrotated phase")
    {
        const ChannelMatrix h(std::polar(1.0, 0.7), cdouble{});
        const SlotGeometry cur{1.0, 2.0, 0.3};
        const SlotGeometry prev{1.5, 1.5, -0.2};
        const cdouble c = fading_coefficient(h, cur, prev);
        // a^2 |e_x| |De_y| with a = e^{0.7 i}
        CHECK(std::abs(c - std::polar(1.0 * 1.5, 1.4)) < 1e-12);
        // the offset between gamma' and gamma is the constant 2 arg(a)
        for (double g : {-3.0, -0.5, 0.0, 2.2}) {
            const double rec = recover_gamma(h, cur, prev, wrap_angle(g + 1.4), {1.0, 1.5});
            CHECK(angles_equal(rec, g, 1e-12));
        }
    }
    SUBCASE("noiseless recovery for random channels")
    {
        Rng rng(31);
        int checked = 0;
        for (int t = 0; t < 1000; ++t) {
            const auto h = sample_channel(rng);
            const JonesPair prev = random_pair(rng);
            const JonesPair cur = random_pair(rng);
            const JonesPair kp = h.apply(prev);
            const JonesPair kc = h.apply(cur);
            const SlotGeometry gc{std::abs(cur.x), std::abs(cur.y), std::arg(cur.x * std::conj(cur.y))};
            const SlotGeometry gp{std::abs(prev.x), std::abs(prev.y), std::arg(prev.x * std::conj(prev.y))};
            const double gamma_prime = std::arg(kc.x * std::conj(kp.y));
            const double gamma = std::arg(cur.x * std::conj(prev.y));
            const cdouble c = fading_coefficient(h, gc, gp);
            // |c| equals |k_x| |Dk_y|: the map is a pure phase rotation
            CHECK(std::abs(std::abs(c) - std::abs(kc.x) * std::abs(kp.y)) < 1e-10);
            if (std::abs(c) < 1e-6) continue;
            ++checked;
            const double rec = recover_gamma(h, gc, gp, gamma_prime, {std::abs(kc.x), std::abs(kp.y)});
            CHECK(angles_equal(rec, gamma, 1e-8));
        }
        CHECK(checked > 990);
    }
    SUBCASE("constructed deep fade")
    {
        const double s = std::sqrt(0.5);
        const ChannelMatrix h(cdouble(s, 0), cdouble(s, 0));
        const SlotGeometry g{1.0, 1.0, 0.0};
        CHECK(std::abs(fading_coefficient(h, g, g)) < 1e-15);
        CHECK_THROWS_AS(recover_gamma(h, g, g, 0.0, {0.0, 0.0}), DegenerateError);
    }
}
