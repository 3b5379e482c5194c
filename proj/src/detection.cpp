#include "stokesdd/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stokesdd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index-ordered argmin of symbol_cost. The high-SNR cost is a lower bound of
// the exact one (ln I0(x) <= x), which lets the exact search skip the Bessel
// evaluation for candidates that cannot win.
template <class Candidate>
DetectionResult argmin_cost(int count, double sigma_sq, Mode mode, Candidate&& candidate)
{
    DetectionResult best;
    best.score = kInf;
    const bool exact = mode == Mode::exact && sigma_sq > 0.0;
    for (int i = 0; i < count; ++i) {
        const auto [norm_sq, corr] = candidate(i);
        const double bound = norm_sq - 2.0 * corr;
        double cost = bound;
        if (exact) {
            if (bound > best.score + 1e-12 * (std::abs(best.score) + norm_sq)) continue;
            cost = norm_sq - 2.0 * sigma_sq * log_i0(corr / sigma_sq);
        }
        if (cost < best.score) {
            best.score = cost;
            best.index = i;
        }
    }
    return best;
}

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

DetectionResult detect_symbol(const DVector& d_r, std::span<const Hypothesis> hypotheses, double sigma_sq,
                              Mode mode)
{
    if (hypotheses.empty()) throw std::invalid_argument("detect_symbol: empty hypothesis set");
    DetectionResult r = argmin_cost(static_cast<int>(hypotheses.size()), sigma_sq, mode, [&](int i) {
        const DVector& dk = hypotheses[static_cast<std::size_t>(i)].d_k;
        return std::pair{dk.norm_sq(), std::abs(inner(dk, d_r))};
    });
    r.index = hypotheses[static_cast<std::size_t>(r.index)].index;
    return r;
}

Receiver::Receiver(const Constellation& c, const ChannelMatrix& h, double sigma_sq)
    : c_(c), h_(h), sigma_sq_(sigma_sq)
{
    if (sigma_sq < 0.0) throw std::invalid_argument("Receiver: sigma_sq must be >= 0");
    const int n = c_.pairs();
    k_.reserve(static_cast<std::size_t>(n));
    kx_mag_.reserve(static_cast<std::size_t>(n));
    kx_unit_.reserve(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        const JonesPair k = h_.apply(c_.pair_point(p));
        const double m = std::abs(k.x);
        k_.push_back(k);
        kx_mag_.push_back(m);
        kx_unit_.push_back(m > 0.0 ? k.x / m : cdouble(1.0, 0.0));
    }
    const int nr = c_.rings();
    const int np = c_.phases();
    hat_.reserve(static_cast<std::size_t>(nr * nr * np));
    for (int rx = 0; rx < nr; ++rx)
        for (int ry = 0; ry < nr; ++ry)
            for (int t = 0; t < np; ++t) {
                const JonesPair e{cdouble(c_.radius(rx), 0.0), std::polar(c_.radius(ry), -kTwoPi * t / np)};
                DVector d = make_dvector(h_.apply(e), cdouble{});
                d.c3 = cdouble{};
                hat_.push_back(d);
            }
}

DVector Receiver::d_k(int pair, int prev_pair) const
{
    const auto s = static_cast<std::size_t>(pair);
    return {kx_mag_[s], std::conj(k_[s].y) * kx_unit_[s], std::conj(k_of(prev_pair).y) * kx_unit_[s]};
}

std::vector<Hypothesis> Receiver::hypotheses(int prev_pair) const
{
    std::vector<Hypothesis> out;
    out.reserve(k_.size());
    for (int p = 0; p < c_.pairs(); ++p) out.push_back({d_k(p, prev_pair), p});
    return out;
}

SlotDecision Receiver::detect_symbol(const DVector& d_r, int prev_pair, Mode mode) const
{
    const cdouble prev_ky_conj = std::conj(k_of(prev_pair).y);
    const double prev_sq = std::norm(prev_ky_conj);
    const cdouble r2 = std::conj(d_r.c2);
    const cdouble r3 = std::conj(d_r.c3);
    const DetectionResult best = argmin_cost(c_.pairs(), sigma_sq_, mode, [&](int p) {
        const auto s = static_cast<std::size_t>(p);
        const cdouble corr = kx_mag_[s] * d_r.c1 + std::conj(k_[s].y) * kx_unit_[s] * r2
                             + prev_ky_conj * kx_unit_[s] * r3;
        return std::pair{k_[s].norm_sq() + prev_sq, std::abs(corr)};
    });
    SlotDecision d;
    d.pair = best.index;
    d.score = best.score;
    d.symbol = c_.decode(best.index, c_.phase_of(c_.pair_y(prev_pair)));
    return d;
}

int Receiver::successive_hypothesis_count() const
{
    return (c_.rings() * c_.rings() + 1) * c_.phases();
}

SlotDecision Receiver::detect_successive(const DVector& d_r, int prev_pair, Mode mode) const
{
    const DetectionResult step1 = argmin_cost(static_cast<int>(hat_.size()), sigma_sq_, mode, [&](int i) {
        const DVector& dk = hat_[static_cast<std::size_t>(i)];
        return std::pair{dk.hat_norm_sq(), std::abs(inner_hat(dk, d_r))};
    });
    const int np = c_.phases();
    const int nr = c_.rings();
    const int t = step1.index % np;
    const int ry = (step1.index / np) % nr;
    const int rx = step1.index / (np * nr);
    const double alpha = std::arg(inner_hat(hat_[static_cast<std::size_t>(step1.index)], d_r));
    const int prev_py = c_.phase_of(c_.pair_y(prev_pair));
    const cdouble prev_ky_conj = std::conj(k_of(prev_pair).y);

    SlotDecision d;
    d.score = step1.score;
    int best_g = 0;
    if (std::abs(d_r.c3) == 0.0 || std::abs(prev_ky_conj) == 0.0) {
        d.fourth_undecidable = true;
    } else {
        const double target = std::arg(d_r.c3) + alpha;
        double best = -kInf;
        for (int g = 0; g < np; ++g) {
            const int pair = c_.encode({rx, ry, t, g}, prev_py);
            const double gamma_k = std::arg(prev_ky_conj * kx_unit_[static_cast<std::size_t>(pair)]);
            const double v = std::cos(gamma_k - target);
            if (v > best) {
                best = v;
                best_g = g;
            }
        }
    }
    d.pair = c_.encode({rx, ry, t, best_g}, prev_py);
    d.symbol = c_.decode(d.pair, prev_py);
    return d;
}

double Receiver::sequence_branch_cost(const DVector& d_r, double prev_mag_r_y, int pair, int prev_pair,
                                      Mode mode) const
{
    const DVector dk = d_k(pair, prev_pair);
    const double corr = std::abs(inner(dk, d_r));
    const double kk = k_of(pair).norm_sq();
    const double prev_lambda_num = std::abs(k_of(prev_pair).y) * prev_mag_r_y;
    if (mode == Mode::high_snr || sigma_sq_ == 0.0) return kk - 2.0 * corr + 2.0 * prev_lambda_num;
    return kk - 2.0 * sigma_sq_ * (log_i0(corr / sigma_sq_) - log_i0(prev_lambda_num / sigma_sq_));
}

std::vector<SlotDecision> Receiver::detect_sequence(std::span<const DVector> obs, Mode mode) const
{
    if (obs.empty()) throw std::invalid_argument("detect_sequence: empty block");
    const int n_states = c_.pairs();
    const auto ns = static_cast<std::size_t>(n_states);
    const bool exact = mode == Mode::exact && sigma_sq_ > 0.0;
    const int pilot = c_.pilot_pair();

    std::vector<double> metric(ns, kInf);
    std::vector<double> next(ns);
    std::vector<std::vector<int>> back(obs.size(), std::vector<int>(ns, pilot));
    std::vector<cdouble> a(ns);
    std::vector<cdouble> b(ns);
    std::vector<double> prev_term(ns);
    metric[static_cast<std::size_t>(pilot)] = 0.0;

    for (std::size_t j = 0; j < obs.size(); ++j) {
        const DVector& dr = obs[j];
        const double prev_mag_r_y = std::abs(dr.c3);
        const cdouble r2 = std::conj(dr.c2);
        const cdouble r3 = std::conj(dr.c3);
        for (std::size_t s = 0; s < ns; ++s) {
            a[s] = kx_mag_[s] * dr.c1 + std::conj(k_[s].y) * kx_unit_[s] * r2;
            b[s] = kx_unit_[s] * r3;
            const double num = std::abs(k_[s].y) * prev_mag_r_y;
            prev_term[s] = exact ? 2.0 * sigma_sq_ * log_i0(num / sigma_sq_) : 2.0 * num;
        }
        for (std::size_t s = 0; s < ns; ++s) {
            const double kk = k_[s].norm_sq();
            double best = kInf;
            int arg = 0;
            for (std::size_t p = 0; p < ns; ++p) {
                if (metric[p] == kInf) continue;
                const double corr = std::abs(a[s] + b[s] * std::conj(k_[p].y));
                const double link = exact ? 2.0 * sigma_sq_ * log_i0(corr / sigma_sq_) : 2.0 * corr;
                const double m = metric[p] + kk - link + prev_term[p];
                if (m < best) {
                    best = m;
                    arg = static_cast<int>(p);
                }
            }
            next[s] = best;
            back[j][s] = arg;
        }
        metric.swap(next);
    }

    int state = 0;
    for (int s = 1; s < n_states; ++s)
        if (metric[static_cast<std::size_t>(s)] < metric[static_cast<std::size_t>(state)]) state = s;
    const double total = metric[static_cast<std::size_t>(state)];

    std::vector<int> pairs(obs.size());
    for (std::size_t j = obs.size(); j-- > 0;) {
        pairs[j] = state;
        state = back[j][static_cast<std::size_t>(state)];
    }
    std::vector<SlotDecision> out(obs.size());
    int prev = pilot;
    for (std::size_t j = 0; j < obs.size(); ++j) {
        out[j].pair = pairs[j];
        out[j].symbol = c_.decode(pairs[j], c_.phase_of(c_.pair_y(prev)));
        out[j].score = total;
        prev = pairs[j];
    }
    return out;
}

std::vector<SlotDecision> detect_sequence(std::span<const DVector> observations, const Constellation& c,
                                          const ChannelMatrix& h, double sigma_sq, Mode mode)
{
    return Receiver(c, h, sigma_sq).detect_sequence(observations, mode);
}

SlotDecision detect_successive(const DVector& d_r, const Constellation& c, const ChannelMatrix& h,
                               double sigma_sq, int prev_pair, Mode mode)
{
    return Receiver(c, h, sigma_sq).detect_successive(d_r, prev_pair, mode);
}

std::vector<FourDSymbol> decisions_to_e_domain(std::span<const DVector> decided, const ChannelMatrix& h,
                                               const Constellation& c)
{
    const StokesMap m = stokes_map(h);
    SlotGeometry prev{c.r1(), c.r1(), 0.0};
    std::vector<FourDSymbol> out;
    out.reserve(decided.size());
    for (const DVector& dk : decided) {
        const double kx = dk.c1;
        const double ky = std::abs(dk.c2);
        const SlotGeometry cur = invert_stokes_map(m, stokes_quadruple(kx, ky, std::arg(dk.c2)));
        const double gamma = recover_gamma(h, cur, prev, std::arg(dk.c3), {kx, std::abs(dk.c3)});
        out.push_back({cur.mag_x, cur.mag_y, wrap_angle(cur.theta), gamma});
        prev = cur;
    }
    return out;
}

SymbolIndex nearest_symbol(const Constellation& c, const FourDSymbol& s)
{
    auto ring = [&](double mag) {
        int best = 0;
        for (int m = 1; m < c.rings(); ++m)
            if (std::abs(c.radius(m) - mag) < std::abs(c.radius(best) - mag)) best = m;
        return best;
    };
    auto phase = [&](double ang) {
        double t = std::fmod(ang, kTwoPi);
        if (t < 0.0) t += kTwoPi;
        return mod(static_cast<int>(std::lround(t * c.phases() / kTwoPi)), c.phases());
    };
    return {ring(s.mag_x), ring(s.mag_y), phase(s.theta), phase(s.gamma)};
}

}  // namespace stokesdd
