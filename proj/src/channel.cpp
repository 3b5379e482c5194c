#include "stokesdd/channel.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace stokesdd {

ChannelMatrix::ChannelMatrix(cdouble a, cdouble b) : a_(a), b_(b)
{
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
        throw std::invalid_argument("ChannelMatrix: |a|^2 + |b|^2 must equal 1");
}

JonesPair ChannelMatrix::apply(const JonesPair& e) const
{
    return {a_ * e.x + b_ * e.y, -std::conj(b_) * e.x + std::conj(a_) * e.y};
}

JonesPair ChannelMatrix::apply_inverse(const JonesPair& k) const
{
    return {std::conj(a_) * k.x - b_ * k.y, std::conj(b_) * k.x + a_ * k.y};
}

ChannelMatrix sample_channel(Rng& rng)
{
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double cos2phi = unit(rng);
    const double alpha = angle(rng);
    const double beta = angle(rng);
    const double c = std::sqrt(0.5 * (1.0 + cos2phi));
    const double s = std::sqrt(0.5 * (1.0 - cos2phi));
    // renormalize so the constructor's unit-norm check holds to rounding
    const double n = std::sqrt(c * c + s * s);
    return {std::polar(c / n, alpha), std::polar(s / n, beta)};
}

ChannelMatrix sample_channel_b_zero(Rng& rng)
{
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    return {std::polar(1.0, angle(rng)), cdouble{}};
}

JonesPair apply_channel(const ChannelMatrix& h, const JonesPair& e) { return h.apply(e); }

JonesPair add_noise(const JonesPair& k, double sigma_sq, Rng& rng)
{
    if (sigma_sq < 0.0) throw std::invalid_argument("add_noise: sigma_sq must be >= 0");
    if (sigma_sq == 0.0) return k;
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma_sq));
    const double nxr = gauss(rng);
    const double nxi = gauss(rng);
    const double nyr = gauss(rng);
    const double nyi = gauss(rng);
    return {k.x + cdouble(nxr, nxi), k.y + cdouble(nyr, nyi)};
}

std::array<double, 4> StokesMap::apply(const std::array<double, 4>& q) const
{
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[i] += m[i][j] * q[j];
    return out;
}

StokesMap stokes_map(const ChannelMatrix& h)
{
    const cdouble a = h.a();
    const cdouble b = h.b();
    const cdouble abc = a * std::conj(b);
    const cdouble ab = a * b;
    const cdouble diff = a * a - b * b;
    const cdouble sum = a * a + b * b;
    const double a2 = std::norm(a);
    const double b2 = std::norm(b);
    StokesMap s;
    s.m = {{{a2, b2, abc.real(), -abc.imag()},
            {b2, a2, -abc.real(), abc.imag()},
            {-2.0 * ab.real(), 2.0 * ab.real(), diff.real(), -sum.imag()},
            {-2.0 * ab.imag(), 2.0 * ab.imag(), diff.imag(), sum.real()}}};
    return s;
}

std::array<double, 4> stokes_quadruple(double mag_x, double mag_y, double theta)
{
    const double cross = 2.0 * mag_x * mag_y;
    return {mag_x * mag_x, mag_y * mag_y, cross * std::cos(theta), cross * std::sin(theta)};
}

std::array<double, 4> stokes_quadruple(const JonesPair& v)
{
    const cdouble cross = 2.0 * v.x * std::conj(v.y);
    return {std::norm(v.x), std::norm(v.y), cross.real(), cross.imag()};
}

SlotGeometry invert_stokes_map(const StokesMap& m, const std::array<double, 4>& k_quad)
{
    Eigen::Matrix4d mat;
    Eigen::Vector4d rhs;
    for (int i = 0; i < 4; ++i) {
        rhs(i) = k_quad[static_cast<std::size_t>(i)];
        for (int j = 0; j < 4; ++j) mat(i, j) = m.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const Eigen::Vector4d q = mat.partialPivLu().solve(rhs);

    const double scale = std::max(1.0, std::abs(k_quad[0]) + std::abs(k_quad[1]));
    const double tol = 1e-9 * scale;
    if (q(0) < -tol || q(1) < -tol)
        throw std::domain_error("invert_stokes_map: inconsistent quadruple (negative intensity)");
    SlotGeometry g;
    g.mag_x = std::sqrt(std::max(0.0, q(0)));
    g.mag_y = std::sqrt(std::max(0.0, q(1)));
    if (g.mag_x * g.mag_y <= tol)
        throw DegenerateError("invert_stokes_map: zero magnitude, theta undefined");
    g.theta = std::atan2(q(3), q(2));
    return g;
}

cdouble fading_coefficient(const ChannelMatrix& h, const SlotGeometry& cur, const SlotGeometry& prev)
{
    const cdouble a = h.a();
    const cdouble b = h.b();
    return a * a * cur.mag_x * prev.mag_y
           - b * b * cur.mag_y * prev.mag_x * std::polar(1.0, -(cur.theta + prev.theta))
           - a * b * cur.mag_x * prev.mag_x * std::polar(1.0, -prev.theta)
           + a * b * cur.mag_y * prev.mag_y * std::polar(1.0, -cur.theta);
}

double recover_gamma(const ChannelMatrix& h, const SlotGeometry& current, const SlotGeometry& previous,
                     double gamma_prime, std::array<double, 2> k_mags)
{
    const double scale = (current.mag_x + current.mag_y) * (previous.mag_x + previous.mag_y);
    if (k_mags[0] * k_mags[1] <= 1e-12 * std::max(scale, 1e-300))
        throw DegenerateError("recover_gamma: |k_x||Dk_y| vanishes (deep fade)");
    const cdouble c = fading_coefficient(h, current, previous);
    if (std::abs(c) <= 1e-12 * std::max(scale, 1e-300))
        throw DegenerateError("recover_gamma: fading coefficient vanishes (deep fade)");
    return wrap_angle(gamma_prime - std::arg(c));
}

}  // namespace stokesdd
