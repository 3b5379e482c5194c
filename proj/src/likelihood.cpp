#include "stokesdd/likelihood.hpp"

#include <cmath>
#include <stdexcept>

namespace stokesdd {

namespace {

double log_i0_series(double x)
{
    // sum_k (x^2/4)^k / (k!)^2, all terms positive
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::log(sum);
}

double log_i0_asymptotic(double x)
{
    // I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0;
    double tail = 0.0;
    const double kmax = 2.0 * x;
    for (int k = 1; k <= kmax && k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next > term) break;  // series starts diverging
        term = next;
        tail += term;
        if (term < 1e-17 * (1.0 + tail)) break;
    }
    return x - 0.5 * std::log(kTwoPi * x) + std::log1p(tail);
}

}  // namespace

double log_i0(double x)
{
    x = std::abs(x);
    if (x < kLogI0Crossover) return log_i0_series(x);
    return log_i0_asymptotic(x);
}

const char* mode_name(Mode m) { return m == Mode::exact ? "exact" : "high_snr"; }

DVector make_dr(double mag_x, double mag_y, double prev_mag_y, double theta_pp, double gamma_pp)
{
    return {mag_x, std::polar(mag_y, theta_pp), std::polar(prev_mag_y, gamma_pp)};
}

LikelihoodTerms likelihood_terms(const DVector& d_r, const DVector& d_k, double sigma_sq)
{
    LikelihoodTerms t;
    t.lambda_x = d_r.c1 * d_k.c1 / sigma_sq;
    t.lambda_y = std::abs(d_r.c2) * std::abs(d_k.c2) / sigma_sq;
    t.prev_lambda_y = std::abs(d_r.c3) * std::abs(d_k.c3) / sigma_sq;
    const cdouble hat = inner_hat(d_k, d_r);
    const cdouble full = inner(d_k, d_r);
    t.corr_mag_hat = std::abs(hat);
    t.corr_mag = std::abs(full);
    t.alpha = std::arg(hat);
    t.beta = wrap_angle(std::arg(full) - t.alpha);
    return t;
}

double radii_likelihood(double r_x, double r_y, double k_x, double k_y, double sigma_sq)
{
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("radii_likelihood: sigma_sq must be positive");
    return std::log(r_x * r_y / (sigma_sq * sigma_sq))
           - (r_x * r_x + r_y * r_y + k_x * k_x + k_y * k_y) / (2.0 * sigma_sq)
           + log_i0(r_x * k_x / sigma_sq) + log_i0(r_y * k_y / sigma_sq);
}

double phase_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq)
{
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("phase_likelihood: sigma_sq must be positive");
    const LikelihoodTerms t = likelihood_terms(d_r, d_k, sigma_sq);
    return log_i0(t.corr_mag / sigma_sq) - std::log(4.0 * kPi * kPi) - log_i0(t.lambda_x)
           - log_i0(t.lambda_y) - log_i0(t.prev_lambda_y);
}

double joint_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq)
{
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("joint_likelihood: sigma_sq must be positive");
    const double rx = d_r.c1;
    const double ry = std::abs(d_r.c2);
    const double kx = d_k.c1;
    const double ky = std::abs(d_k.c2);
    const double corr = std::abs(inner(d_k, d_r));
    const double prev_lambda = std::abs(d_r.c3) * std::abs(d_k.c3) / sigma_sq;
    return std::log(rx * ry / (4.0 * kPi * kPi * sigma_sq * sigma_sq)) + log_i0(corr / sigma_sq)
           - (rx * rx + ry * ry + kx * kx + ky * ky) / (2.0 * sigma_sq) - log_i0(prev_lambda);
}

double first_step_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq)
{
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("first_step_likelihood: sigma_sq must be positive");
    const double rx = d_r.c1;
    const double ry = std::abs(d_r.c2);
    const double corr = std::abs(inner_hat(d_k, d_r));
    return std::log(rx * ry / (kTwoPi * sigma_sq * sigma_sq))
           - (d_r.hat_norm_sq() + d_k.hat_norm_sq()) / (2.0 * sigma_sq) + log_i0(corr / sigma_sq);
}

double gamma_conditional_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq)
{
    return joint_likelihood(d_r, d_k, sigma_sq) - first_step_likelihood(d_r, d_k, sigma_sq);
}

double symbol_cost(double dk_norm_sq, double corr_mag, double sigma_sq, Mode mode)
{
    if (mode == Mode::high_snr || sigma_sq == 0.0) return dk_norm_sq - 2.0 * corr_mag;
    return dk_norm_sq - 2.0 * sigma_sq * log_i0(corr_mag / sigma_sq);
}

}  // namespace stokesdd
