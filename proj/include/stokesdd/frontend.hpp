#pragma once

#include "stokesdd/channel.hpp"
#include "stokesdd/constellation.hpp"

namespace stokesdd {

/// The six photocurrents of one slot.
struct FrontEndObservation {
    double w1 = 0.0;  // |r_x|^2
    double w2 = 0.0;  // |r_y|^2
    double w3 = 0.0;  // 2 Re(r_x r_y*)
    double w4 = 0.0;  // 2 Im(r_x r_y*)
    double w5 = 0.0;  // 2 Re(r_x Dr_y*)
    double w6 = 0.0;  // 2 Im(r_x Dr_y*)
};

/// Detection-space vector [|v_x|, |v_y| e^{i theta}, |Dv_y| e^{i gamma}] in
/// the e, k or r domain. The first two entries form the truncated ("hatted")
/// vector used by the first successive step.
struct DVector {
    double c1 = 0.0;
    cdouble c2{};
    cdouble c3{};

    double norm_sq() const { return c1 * c1 + std::norm(c2) + std::norm(c3); }
    double hat_norm_sq() const { return c1 * c1 + std::norm(c2); }
};

/// <u, v> = sum u(i) v(i)*.
inline cdouble inner(const DVector& u, const DVector& v)
{
    return u.c1 * v.c1 + u.c2 * std::conj(v.c2) + u.c3 * std::conj(v.c3);
}

inline cdouble inner_hat(const DVector& u, const DVector& v)
{
    return u.c1 * v.c1 + u.c2 * std::conj(v.c2);
}

/// d-vector of `v` given the previous slot's Y sample. Built from relative
/// phases only; when v.x = 0 the reference phase is taken as zero.
DVector make_dvector(const JonesPair& v, cdouble prev_y);

FrontEndObservation front_end(const JonesPair& r, cdouble prev_r_y);

/// d_r = [sqrt(w1), sqrt(w2) e^{i theta''}, prev_mag_r_y e^{i gamma''}].
/// Throws DegenerateError when w1 w2 = 0 or w1 prev_mag_r_y = 0, since
/// theta'' or gamma'' is then undefined.
DVector observation_to_dr(const FrontEndObservation& w, double prev_mag_r_y);

/// Same as observation_to_dr but never throws: undefined phases are set to
/// zero and reported through `phase_defined`.
DVector observation_to_dr_lenient(const FrontEndObservation& w, double prev_mag_r_y,
                                  bool* phase_defined);

}  // namespace stokesdd
