#include "doctest.h"

#include <cmath>

#include "stokesdd/frontend.hpp"

using namespace stokesdd;

TEST_CASE("front end photocurrents")
{
    const JonesPair r{{1.0, 1.0}, {0.0, 2.0}};
    const cdouble prev_y{3.0, 0.0};
    const auto w = front_end(r, prev_y);
    // r_x r_y* = (1 + i)(-2i) = 2 - 2i ; r_x prev* = 3 + 3i
    CHECK(w.w1 == doctest::Approx(2.0));
    CHECK(w.w2 == doctest::Approx(4.0));
    CHECK(w.w3 == doctest::Approx(4.0));
    CHECK(w.w4 == doctest::Approx(-4.0));
    CHECK(w.w5 == doctest::Approx(6.0));
    CHECK(w.w6 == doctest::Approx(6.0));

    SUBCASE("interference terms are bounded by the intensities")
    {
        Rng rng(3);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const JonesPair v{{g(rng), g(rng)}, {g(rng), g(rng)}};
            const cdouble p{g(rng), g(rng)};
            const auto o = front_end(v, p);
            CHECK(o.w3 * o.w3 + o.w4 * o.w4 == doctest::Approx(4.0 * o.w1 * o.w2));
            CHECK(o.w5 * o.w5 + o.w6 * o.w6 == doctest::Approx(4.0 * o.w1 * std::norm(p)));
        }
    }
}

TEST_CASE("observation to detection vector")
{
    Rng rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const JonesPair r{{g(rng), g(rng)}, {g(rng), g(rng)}};
        const cdouble prev{g(rng), g(rng)};
        const DVector d = observation_to_dr(front_end(r, prev), std::abs(prev));
        const DVector ref = make_dvector(r, prev);
        CHECK(d.c1 == doctest::Approx(ref.c1));
        CHECK(std::abs(d.c2 - ref.c2) < 1e-12 * (1.0 + std::abs(ref.c2)));
        CHECK(std::abs(d.c3 - ref.c3) < 1e-12 * (1.0 + std::abs(ref.c3)));
        CHECK(angles_equal(std::arg(d.c2), std::arg(r.x * std::conj(r.y)), 1e-10));
        CHECK(angles_equal(std::arg(d.c3), std::arg(r.x * std::conj(prev)), 1e-10));
        CHECK(d.norm_sq() == doctest::Approx(r.norm_sq() + std::norm(prev)));
    }

    SUBCASE("d-vector is invariant to a common phase")
    {
        const JonesPair v{std::polar(1.3, 0.2), std::polar(0.7, -2.0)};
        const cdouble p = std::polar(2.0, 1.0);
        const cdouble rot = std::polar(1.0, 0.77);
        const DVector a = make_dvector(v, p);
        const DVector b = make_dvector({v.x * rot, v.y * rot}, p * rot);
        CHECK(a.c1 == doctest::Approx(b.c1));
        CHECK(std::abs(a.c2 - b.c2) < 1e-14);
        CHECK(std::abs(a.c3 - b.c3) < 1e-14);
    }

    SUBCASE("zero intensity")
    {
        const FrontEndObservation w{0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
        CHECK_THROWS_AS(observation_to_dr(w, 1.0), DegenerateError);
        bool ok = true;
        const DVector d = observation_to_dr_lenient(w, 1.0, &ok);
        CHECK_FALSE(ok);
        CHECK(d.c1 == 0.0);
        CHECK(d.c2 == cdouble(1.0, 0.0));
        CHECK(d.c3 == cdouble(1.0, 0.0));
        const DVector z = make_dvector({{0, 0}, {0, 2}}, {1, 0});
        CHECK(z.c2 == cdouble(0, -2));
    }
}
