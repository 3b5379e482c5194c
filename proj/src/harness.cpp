#include "stokesdd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "stokesdd/rng.hpp"

namespace stokesdd {

namespace {

constexpr std::uint64_t kRateStream = 0x72617465ULL;

void parallel_for(long long count, int threads, const std::function<void(long long)>& body)
{
    if (threads <= 1 || count <= 1) {
        for (long long i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::jthread> pool;
    const int n = static_cast<int>(std::min<long long>(threads, count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (long long i = next++; i < count; i = next++) body(i);
        });
    }
}

int uniform_int(Rng& rng, int n)
{
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

}  // namespace

const char* detector_name(DetectorKind k)
{
    switch (k) {
    case DetectorKind::symbol: return "sym";
    case DetectorKind::sequence: return "seq";
    case DetectorKind::successive: return "suc";
    }
    return "?";
}

void ExperimentConfig::validate() const
{
    if (n_r < 1) throw std::invalid_argument("constellation.n_r must be >= 1");
    if (n_p < 1) throw std::invalid_argument("constellation.n_p must be >= 1");
    if (!(r1 > 0.0)) throw std::invalid_argument("constellation.r1 must be positive");
    if (delta_sq.empty()) throw std::invalid_argument("constellation.delta_sq must not be empty");
    for (double d : delta_sq)
        if (n_r > 1 && !(d > 0.0)) throw std::invalid_argument("constellation.delta_sq values must be positive");
    if (snr_db.empty()) throw std::invalid_argument("sweep.snr_db must not be empty");
    for (double s : snr_db)
        if (!std::isfinite(s)) throw std::invalid_argument("sweep.snr_db values must be finite");
    if (block_length < 1) throw std::invalid_argument("sweep.block_length must be >= 1");
    if (max_blocks < 1) throw std::invalid_argument("sweep.max_blocks must be >= 1");
    if (target_errors < 0) throw std::invalid_argument("sweep.target_errors must be >= 0");
    if (batch_blocks < 1) throw std::invalid_argument("sweep.batch_blocks must be >= 1");
    if (detectors.empty()) throw std::invalid_argument("detector.list must not be empty");
    if (channel == ChannelMode::fixed && std::abs(std::norm(fixed_a) + std::norm(fixed_b) - 1.0) > 1e-12)
        throw std::invalid_argument("channel.a and channel.b must satisfy |a|^2 + |b|^2 = 1");
    if (rate_samples < 1) throw std::invalid_argument("rate.samples must be >= 1");
    if (rate_target_stderr < 0.0) throw std::invalid_argument("rate.target_stderr must be >= 0");
    if (!(gap_target_ser > 0.0 && gap_target_ser < 1.0))
        throw std::invalid_argument("gap.target_ser must lie in (0, 1)");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

double SerPoint::ser(int dim) const
{
    return trials > 0 ? static_cast<double>(errors[static_cast<std::size_t>(dim)]) / trials : 0.0;
}

std::array<double, 2> SerPoint::ci(int dim) const
{
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = ser(dim);
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    const long long e = errors[static_cast<std::size_t>(dim)];
    return {e == 0 ? 0.0 : std::max(0.0, centre - half), e == trials ? 1.0 : std::min(1.0, centre + half)};
}

ChannelMatrix draw_channel(const ExperimentConfig& cfg, Rng& rng)
{
    switch (cfg.channel) {
    case ChannelMode::random: return sample_channel(rng);
    case ChannelMode::b_zero: return sample_channel_b_zero(rng);
    case ChannelMode::fixed: return {cfg.fixed_a, cfg.fixed_b};
    }
    return {};
}

BlockSample simulate_block(const Constellation& c, const ChannelMatrix& h, int block_length, double sigma_sq,
                           Rng& rng)
{
    BlockSample b;
    b.h = h;
    const auto n = static_cast<std::size_t>(block_length);
    b.tx_pairs.reserve(n + 1);
    b.tx.reserve(n);
    b.received.reserve(n + 1);
    b.w.reserve(n);
    b.d_r.reserve(n);

    b.tx_pairs.push_back(c.pilot_pair());
    b.received.push_back(add_noise(h.apply(pilot_symbol(c)), sigma_sq, rng));
    int prev_py = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        SymbolIndex s{uniform_int(rng, c.rings()), uniform_int(rng, c.rings()), uniform_int(rng, c.phases()),
                      uniform_int(rng, c.phases())};
        const int pair = c.encode(s, prev_py);
        prev_py = c.phase_of(c.pair_y(pair));
        b.tx.push_back(s);
        b.tx_pairs.push_back(pair);
        b.received.push_back(add_noise(h.apply(c.pair_point(pair)), sigma_sq, rng));
        const JonesPair& prev = b.received[j - 1];
        const FrontEndObservation w = front_end(b.received[j], prev.y);
        b.w.push_back(w);
        b.d_r.push_back(observation_to_dr_lenient(w, std::sqrt(std::norm(prev.y)), nullptr));
    }
    return b;
}

std::vector<SlotDecision> run_detector(const Receiver& rx, const BlockSample& block, DetectorSpec spec,
                                       Feedback feedback)
{
    if (spec.kind == DetectorKind::sequence) return rx.detect_sequence(block.d_r, spec.mode);
    std::vector<SlotDecision> out;
    out.reserve(block.d_r.size());
    int prev = block.tx_pairs.front();
    for (std::size_t j = 0; j < block.d_r.size(); ++j) {
        SlotDecision d = spec.kind == DetectorKind::symbol ? rx.detect_symbol(block.d_r[j], prev, spec.mode)
                                                           : rx.detect_successive(block.d_r[j], prev, spec.mode);
        prev = feedback == Feedback::genie ? block.tx_pairs[j + 1] : d.pair;
        out.push_back(d);
    }
    return out;
}

std::array<bool, 4> dimension_errors(const SymbolIndex& sent, const SymbolIndex& decided)
{
    return {sent.ring_x != decided.ring_x, sent.ring_y != decided.ring_y, sent.theta != decided.theta,
            sent.gamma != decided.gamma};
}

std::vector<SerCurve> run_ser_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::size_t nd = cfg.detectors.size();
    std::vector<SerCurve> curves;
    for (std::size_t di = 0; di < cfg.delta_sq.size(); ++di) {
        const Constellation c(cfg.n_r, cfg.n_p, cfg.r1, cfg.delta_sq[di]);
        std::vector<SerCurve> local(nd);
        for (std::size_t k = 0; k < nd; ++k) {
            local[k].delta_sq = c.delta_sq();
            local[k].detector = cfg.detectors[k];
        }
        for (std::size_t pi = 0; pi < cfg.snr_db.size(); ++pi) {
            const double sigma_sq = snr_to_noise_sigma_sq(c, db_to_linear(cfg.snr_db[pi]));
            std::vector<SerPoint> pts(nd);
            for (auto& p : pts) p.snr_db = cfg.snr_db[pi];
            long long done = 0;
            while (done < cfg.max_blocks) {
                const long long batch = std::min<long long>(cfg.batch_blocks, cfg.max_blocks - done);
                std::vector<std::vector<std::array<long long, 4>>> tallies(
                    static_cast<std::size_t>(batch), std::vector<std::array<long long, 4>>(nd));
                parallel_for(batch, cfg.threads, [&](long long i) {
                    const auto block_index = static_cast<std::uint64_t>(done + i);
                    Rng rng = make_stream(cfg.seed, {di, pi, block_index});
                    const ChannelMatrix h = draw_channel(cfg, rng);
                    const BlockSample block = simulate_block(c, h, cfg.block_length, sigma_sq, rng);
                    const Receiver rx(c, h, sigma_sq);
                    for (std::size_t k = 0; k < nd; ++k) {
                        const auto dec = run_detector(rx, block, cfg.detectors[k], cfg.feedback);
                        auto& t = tallies[static_cast<std::size_t>(i)][k];
                        for (std::size_t j = 0; j < dec.size(); ++j) {
                            const auto err = dimension_errors(block.tx[j], dec[j].symbol);
                            for (std::size_t d = 0; d < 4; ++d) t[d] += err[d] ? 1 : 0;
                        }
                    }
                });
                for (const auto& block_tally : tallies)
                    for (std::size_t k = 0; k < nd; ++k) {
                        for (std::size_t d = 0; d < 4; ++d) pts[k].errors[d] += block_tally[k][d];
                        pts[k].trials += cfg.block_length;
                        pts[k].blocks += 1;
                    }
                done += batch;
                if (cfg.target_errors > 0) {
                    bool enough = true;
                    for (const auto& p : pts)
                        for (long long e : p.errors) enough = enough && e >= cfg.target_errors;
                    if (enough) break;
                }
            }
            for (std::size_t k = 0; k < nd; ++k) local[k].points.push_back(pts[k]);
        }
        for (auto& l : local) curves.push_back(std::move(l));
    }
    return curves;
}

double mutual_information_sample(const Receiver& rx, int pair, int prev_pair, const DVector& d_r)
{
    const double s2 = rx.sigma_sq();
    if (!(s2 > 0.0)) throw std::invalid_argument("mutual_information_sample: sigma_sq must be positive");
    const int n = rx.constellation().pairs();
    // terms of the joint log-density that do not depend on the hypothesis cancel
    auto score = [&](int p) {
        const DVector dk = rx.d_k(p, prev_pair);
        const JonesPair& k = rx.k_of(p);
        return log_i0(std::abs(inner(dk, d_r)) / s2) - k.norm_sq() / (2.0 * s2);
    };
    std::vector<double> scores(static_cast<std::size_t>(n));
    double top = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < n; ++p) {
        scores[static_cast<std::size_t>(p)] = score(p);
        top = std::max(top, scores[static_cast<std::size_t>(p)]);
    }
    double acc = 0.0;
    for (double s : scores) acc += std::exp(s - top);
    const double log_mean = top + std::log(acc) - std::log(static_cast<double>(n));
    return scores[static_cast<std::size_t>(pair)] - log_mean;
}

std::vector<RateCurve> run_rate_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<RateCurve> curves;
    for (std::size_t di = 0; di < cfg.delta_sq.size(); ++di) {
        const Constellation c(cfg.n_r, cfg.n_p, cfg.r1, cfg.delta_sq[di]);
        RateCurve curve;
        curve.delta_sq = c.delta_sq();
        for (std::size_t pi = 0; pi < cfg.snr_db.size(); ++pi) {
            const double sigma_sq = snr_to_noise_sigma_sq(c, db_to_linear(cfg.snr_db[pi]));
            std::vector<double> values(static_cast<std::size_t>(cfg.rate_samples));
            parallel_for(cfg.rate_samples, cfg.threads, [&](long long s) {
                Rng rng = make_stream(cfg.seed, {kRateStream, di, pi, static_cast<std::uint64_t>(s)});
                const ChannelMatrix h = draw_channel(cfg, rng);
                const int prev_pair = uniform_int(rng, c.pairs());
                const int pair = uniform_int(rng, c.pairs());
                const JonesPair prev_r = add_noise(h.apply(c.pair_point(prev_pair)), sigma_sq, rng);
                const JonesPair r = add_noise(h.apply(c.pair_point(pair)), sigma_sq, rng);
                const FrontEndObservation w = front_end(r, prev_r.y);
                const DVector d_r = observation_to_dr_lenient(w, std::abs(prev_r.y), nullptr);
                const Receiver rx(c, h, sigma_sq);
                values[static_cast<std::size_t>(s)] = mutual_information_sample(rx, pair, prev_pair, d_r);
            });
            double sum = 0.0;
            for (double v : values) sum += v;
            const double n = static_cast<double>(values.size());
            const double mean = sum / n;
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            RatePoint p;
            p.snr_db = cfg.snr_db[pi];
            p.rate_bits = mean / std::log(2.0);
            p.stderr_bits = sd / std::sqrt(n) / std::log(2.0);
            p.samples = cfg.rate_samples;
            p.precise_enough = cfg.rate_target_stderr <= 0.0 || p.stderr_bits <= cfg.rate_target_stderr;
            curve.points.push_back(p);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

double snr_at_ser(const std::vector<SerPoint>& points, int dim, double target_ser, bool* bracketed)
{
    if (bracketed) *bracketed = false;
    std::vector<SerPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const SerPoint& a, const SerPoint& b) { return a.snr_db < b.snr_db; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const double s0 = sorted[i].ser(dim);
        double s1 = sorted[i + 1].ser(dim);
        if (s0 >= target_ser && s1 < target_ser && s0 > 0.0) {
            // a zero count is replaced by half an error so the log stays finite
            if (s1 == 0.0) s1 = 0.5 / static_cast<double>(std::max<long long>(sorted[i + 1].trials, 1));
            const double x0 = sorted[i].snr_db;
            const double x1 = sorted[i + 1].snr_db;
            const double l0 = std::log10(s0);
            const double l1 = std::log10(s1);
            const double lt = std::log10(target_ser);
            if (bracketed) *bracketed = true;
            if (l0 == l1) return x0;
            return x0 + (lt - l0) * (x1 - x0) / (l1 - l0);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<GapEntry> compare_gap(const SerCurve& reference, const SerCurve& compared, double target_ser)
{
    std::vector<GapEntry> out;
    for (int d = 0; d < 4; ++d) {
        GapEntry e;
        e.dimension = d + 1;
        bool ok_ref = false;
        bool ok_cmp = false;
        e.reference_snr_db = snr_at_ser(reference.points, d, target_ser, &ok_ref);
        e.compared_snr_db = snr_at_ser(compared.points, d, target_ser, &ok_cmp);
        e.bracketed = ok_ref && ok_cmp;
        e.gap_db = e.bracketed ? e.compared_snr_db - e.reference_snr_db : std::numeric_limits<double>::quiet_NaN();
        out.push_back(e);
    }
    return out;
}

std::vector<GapReport> compare_successive_gap(const ExperimentConfig& cfg, std::vector<SerCurve>* curves)
{
    ExperimentConfig run = cfg;
    std::vector<Mode> modes;
    for (const auto& d : cfg.detectors)
        if (std::find(modes.begin(), modes.end(), d.mode) == modes.end()) modes.push_back(d.mode);
    run.detectors.clear();
    for (Mode m : modes) {
        run.detectors.push_back({DetectorKind::symbol, m});
        run.detectors.push_back({DetectorKind::successive, m});
    }
    std::vector<SerCurve> all = run_ser_sweep(run);
    std::vector<GapReport> reports;
    const std::size_t per_delta = run.detectors.size();
    for (std::size_t base = 0; base < all.size(); base += per_delta) {
        for (std::size_t k = 0; k < per_delta; k += 2) {
            GapReport r;
            r.delta_sq = all[base + k].delta_sq;
            r.reference = all[base + k].detector;
            r.compared = all[base + k + 1].detector;
            r.entries = compare_gap(all[base + k], all[base + k + 1], cfg.gap_target_ser);
            reports.push_back(std::move(r));
        }
    }
    if (curves) *curves = std::move(all);
    return reports;
}

}  // namespace stokesdd
