#include "stokesdd/frontend.hpp"

#include <cmath>

namespace stokesdd {

DVector make_dvector(const JonesPair& v, cdouble prev_y)
{
    const double mx = std::abs(v.x);
    const cdouble ref = mx > 0.0 ? v.x / mx : cdouble(1.0, 0.0);
    return {mx, std::conj(v.y) * ref, std::conj(prev_y) * ref};
}

FrontEndObservation front_end(const JonesPair& r, cdouble prev_r_y)
{
    const cdouble cur = 2.0 * r.x * std::conj(r.y);
    const cdouble dif = 2.0 * r.x * std::conj(prev_r_y);
    return {std::norm(r.x), std::norm(r.y), cur.real(), cur.imag(), dif.real(), dif.imag()};
}

DVector observation_to_dr_lenient(const FrontEndObservation& w, double prev_mag_r_y, bool* phase_defined)
{
    DVector d;
    d.c1 = std::sqrt(std::max(0.0, w.w1));
    const double my = std::sqrt(std::max(0.0, w.w2));
    bool ok = true;
    if (w.w1 > 0.0 && w.w2 > 0.0) {
        d.c2 = std::polar(my, std::atan2(w.w4, w.w3));
    } else {
        d.c2 = cdouble(my, 0.0);
        ok = false;
    }
    if (w.w1 > 0.0 && prev_mag_r_y > 0.0) {
        d.c3 = std::polar(prev_mag_r_y, std::atan2(w.w6, w.w5));
    } else {
        d.c3 = cdouble(std::max(0.0, prev_mag_r_y), 0.0);
        ok = false;
    }
    if (phase_defined) *phase_defined = ok;
    return d;
}

DVector observation_to_dr(const FrontEndObservation& w, double prev_mag_r_y)
{
    bool ok = true;
    DVector d = observation_to_dr_lenient(w, prev_mag_r_y, &ok);
    if (!ok) throw DegenerateError("observation_to_dr: zero-intensity slot, phase undefined");
    return d;
}

}  // namespace stokesdd
