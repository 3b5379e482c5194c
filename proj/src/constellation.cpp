#include "stokesdd/constellation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stokesdd {

double wrap_angle(double a)
{
    double w = std::fmod(a + kPi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    w -= kPi;
    // fmod can land exactly on +pi after rounding
    if (w >= kPi) w -= kTwoPi;
    return w;
}

bool angles_equal(double a, double b, double tol)
{
    return std::abs(wrap_angle(a - b)) <= tol;
}

Constellation::Constellation(int n_r, int n_p, double r1, double delta_sq)
    : n_r_(n_r), n_p_(n_p), r1_(r1), delta_sq_(delta_sq)
{
    if (n_r < 1) throw std::invalid_argument("constellation: ring count must be >= 1");
    if (n_p < 1) throw std::invalid_argument("constellation: phase count must be >= 1");
    if (!(r1 > 0.0) || !std::isfinite(r1))
        throw std::invalid_argument("constellation: r1 must be positive");
    if (n_r == 1) {
        delta_sq_ = 0.0;
    } else if (!(delta_sq > 0.0) || !std::isfinite(delta_sq)) {
        throw std::invalid_argument("constellation: delta_sq must be positive");
    }
    radii_.reserve(static_cast<std::size_t>(n_r_));
    for (int m = 0; m < n_r_; ++m) radii_.push_back(r1_ * std::sqrt(1.0 + m * delta_sq_));
}

double Constellation::phase(int index) const
{
    return wrap_angle(kTwoPi * static_cast<double>(index) / n_p_);
}

std::vector<double> Constellation::phase_set() const
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_p_));
    for (int l = 0; l < n_p_; ++l) out.push_back(phase(l));
    return out;
}

int Constellation::phase_index(double angle, double tol) const
{
    const double step = kTwoPi / n_p_;
    double t = std::fmod(angle, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    const int l = static_cast<int>(std::lround(t / step)) % n_p_;
    if (!angles_equal(angle, phase(l), tol))
        throw std::domain_error("phase_index: angle " + std::to_string(angle) + " is off the phase grid");
    return l;
}

int Constellation::ring_index(double magnitude, double tol) const
{
    for (int m = 0; m < n_r_; ++m) {
        if (std::abs(magnitude - radii_[static_cast<std::size_t>(m)]) <= tol * std::max(1.0, radii_[static_cast<std::size_t>(m)]))
            return m;
    }
    throw std::domain_error("ring_index: magnitude " + std::to_string(magnitude) + " is not a ring radius");
}

cdouble Constellation::point(int index) const
{
    return std::polar(radius(ring_of(index)), kTwoPi * phase_of(index) / n_p_);
}

JonesPair Constellation::pair_point(int pair_index) const
{
    return {point(pair_x(pair_index)), point(pair_y(pair_index))};
}

int Constellation::encode(const SymbolIndex& sym, int prev_phase_y) const
{
    const int px = ((sym.gamma + prev_phase_y) % n_p_ + n_p_) % n_p_;
    const int py = ((px - sym.theta) % n_p_ + n_p_) % n_p_;
    return point_index(sym.ring_x, px) * points() + point_index(sym.ring_y, py);
}

SymbolIndex Constellation::decode(int pair_index, int prev_phase_y) const
{
    const int ix = pair_x(pair_index);
    const int iy = pair_y(pair_index);
    const int px = phase_of(ix);
    const int py = phase_of(iy);
    return {ring_of(ix), ring_of(iy), ((px - py) % n_p_ + n_p_) % n_p_,
            ((px - prev_phase_y) % n_p_ + n_p_) % n_p_};
}

FourDSymbol Constellation::values(const SymbolIndex& sym) const
{
    return {radius(sym.ring_x), radius(sym.ring_y), phase(sym.theta), phase(sym.gamma)};
}

double Constellation::mean_energy() const
{
    return r1_ * r1_ * (1.0 + delta_sq_ * (n_r_ - 1) / 2.0);
}

Constellation build_constellation(int n_r, int n_p, double r1, double delta_sq)
{
    return Constellation(n_r, n_p, r1, delta_sq);
}

double balanced_delta_sq(int n_r, int n_p)
{
    if (n_r < 2) throw std::invalid_argument("balanced_delta_sq: needs at least two rings");
    if (n_p < 2) throw std::invalid_argument("balanced_delta_sq: needs at least two phases");
    const double s = std::sin(kPi / n_p);
    return 4.0 * s * s * (2.0 * n_r - 3.0)
           + 4.0 * s * std::sqrt(4.0 * (n_r - 1.0) * (n_r - 2.0) * s * s + 1.0);
}

double snr_to_noise_sigma_sq(const Constellation& c, double snr_linear)
{
    if (!(snr_linear > 0.0)) throw std::invalid_argument("snr_to_noise_sigma_sq: SNR must be positive");
    return c.mean_energy() / (2.0 * snr_linear);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

JonesPair pilot_symbol(const Constellation& c)
{
    return {cdouble(c.r1(), 0.0), cdouble(c.r1(), 0.0)};
}

}  // namespace stokesdd
