#pragma once

#include <array>
#include <random>
#include <stdexcept>

#include "stokesdd/constellation.hpp"

namespace stokesdd {

/// Raised when a phase or the fourth dimension cannot be recovered because a
/// magnitude it depends on is (numerically) zero.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fiber polarization rotation [[a, b], [-b*, a*]] with |a|^2 + |b|^2 = 1.
class ChannelMatrix {
public:
    ChannelMatrix() = default;
    /// Throws std::invalid_argument unless |a|^2 + |b|^2 = 1 to 1e-12.
    ChannelMatrix(cdouble a, cdouble b);

    static ChannelMatrix identity() { return {}; }

    cdouble a() const { return a_; }
    cdouble b() const { return b_; }

    JonesPair apply(const JonesPair& e) const;
    /// Conjugate transpose; exact inverse for this family.
    JonesPair apply_inverse(const JonesPair& k) const;

private:
    cdouble a_{1.0, 0.0};
    cdouble b_{0.0, 0.0};
};

using Rng = std::mt19937_64;

/// Draws H from the rotation-invariant measure: a = cos(phi) e^{i alpha},
/// b = sin(phi) e^{i beta}, alpha and beta uniform, cos(2 phi) uniform on [-1, 1].
ChannelMatrix sample_channel(Rng& rng);
/// Same measure restricted to b = 0, i.e. a = e^{i zeta}.
ChannelMatrix sample_channel_b_zero(Rng& rng);

JonesPair apply_channel(const ChannelMatrix& h, const JonesPair& e);

/// r = k + n, with real and imaginary parts of each polarization's noise
/// i.i.d. N(0, sigma_sq).
JonesPair add_noise(const JonesPair& k, double sigma_sq, Rng& rng);

/// Real 4x4 map taking (|e_x|^2, |e_y|^2, 2|e_x||e_y|cos theta,
/// 2|e_x||e_y|sin theta) to the same quadruple in the k domain.
struct StokesMap {
    std::array<std::array<double, 4>, 4> m{};

    std::array<double, 4> apply(const std::array<double, 4>& q) const;
};

StokesMap stokes_map(const ChannelMatrix& h);

/// Intensity/interference quadruple of a Jones pair.
std::array<double, 4> stokes_quadruple(double mag_x, double mag_y, double theta);
std::array<double, 4> stokes_quadruple(const JonesPair& v);

/// Magnitudes and relative phase of one slot: (|.x|, |.y|, arg(.x .y*)).
struct SlotGeometry {
    double mag_x = 0.0;
    double mag_y = 0.0;
    double theta = 0.0;
};

/// Solves m q_e = k_quad and recovers (|e_x|, |e_y|, theta). Throws
/// DegenerateError for inconsistent quadruples (negative intensities beyond
/// tolerance) or when a recovered magnitude is zero so theta is undefined.
SlotGeometry invert_stokes_map(const StokesMap& m, const std::array<double, 4>& k_quad);

/// c = [a^2, -b^2, -ab, ab] . l, the gain of the fourth subchannel:
/// e^{i gamma'} = c e^{i gamma} / (|k_x| |Dk_y|).
cdouble fading_coefficient(const ChannelMatrix& h, const SlotGeometry& current,
                           const SlotGeometry& previous);

/// gamma = gamma' - arg(c). `k_mags` holds (|k_x|, |Dk_y|). Throws
/// DegenerateError when |c| or |k_x||Dk_y| vanishes (deep fade).
double recover_gamma(const ChannelMatrix& h, const SlotGeometry& current,
                     const SlotGeometry& previous, double gamma_prime,
                     std::array<double, 2> k_mags);

}  // namespace stokesdd
