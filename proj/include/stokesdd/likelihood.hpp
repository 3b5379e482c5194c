#pragma once

#include "stokesdd/frontend.hpp"

namespace stokesdd {

/// ln I0(x) for x >= 0 (negative x is folded, I0 being even). Power series
/// below kLogI0Crossover, asymptotic expansion of e^{-x} sqrt(2 pi x) I0(x)
/// above it. Never forms I0 itself, so it is finite for any finite x.
double log_i0(double x);

inline constexpr double kLogI0Crossover = 20.0;

/// Quantities shared by the likelihoods of one (observation, hypothesis)
/// pair. The lambda values are |r_u||k_u| / sigma^2.
struct LikelihoodTerms {
    double lambda_x = 0.0;
    double lambda_y = 0.0;
    double prev_lambda_y = 0.0;
    double corr_mag = 0.0;      // |<d_k, d_r>|
    double corr_mag_hat = 0.0;  // |<d_k^, d_r^>|
    double alpha = 0.0;         // arg <d_k^, d_r^>
    double beta = 0.0;          // arg <d_k, d_r> - alpha
};

LikelihoodTerms likelihood_terms(const DVector& d_r, const DVector& d_k, double sigma_sq);

/// d_r built from magnitudes and the two observed phases.
DVector make_dr(double mag_x, double mag_y, double prev_mag_y, double theta_pp, double gamma_pp);

// All densities below are natural logs.

/// ln f(|r_x|, |r_y| | d_k): product of two Rician densities.
double radii_likelihood(double r_x, double r_y, double k_x, double k_y, double sigma_sq);

/// ln f(theta'', gamma'' | d_k, |Dr_y|, |r_x|, |r_y|) on [-pi, pi)^2.
double phase_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq);

/// ln f(|r_x|, |r_y|, theta'', gamma'' | d_k, |Dr_y|).
double joint_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq);

/// ln f(|r_x|, |r_y|, theta'' | d_k^), the first successive step's density.
double first_step_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq);

/// ln f(gamma'' | d_k, d_r^, |Dr_y|) = joint - first step.
double gamma_conditional_likelihood(const DVector& d_r, const DVector& d_k, double sigma_sq);

enum class Mode { exact, high_snr };

const char* mode_name(Mode m);

/// |d_k|^2 - 2 sigma^2 ln I0(|<d_k,d_r>| / sigma^2) (exact) or
/// |d_k|^2 - 2 |<d_k,d_r>| (high SNR). At sigma_sq = 0 the exact cost is its
/// limit, which is the high-SNR cost.
double symbol_cost(double dk_norm_sq, double corr_mag, double sigma_sq, Mode mode);

}  // namespace stokesdd
