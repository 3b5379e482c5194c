#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stokesdd/detection.hpp"

namespace stokesdd {

enum class DetectorKind { symbol, sequence, successive };
enum class ChannelMode { random, b_zero, fixed };
enum class Feedback { decision, genie };

struct DetectorSpec {
    DetectorKind kind = DetectorKind::symbol;
    Mode mode = Mode::exact;

    friend bool operator==(const DetectorSpec&, const DetectorSpec&) = default;
};

/// "sym", "seq" or "suc".
const char* detector_name(DetectorKind k);

struct ExperimentConfig {
    int n_r = 2;
    int n_p = 4;
    double r1 = 1.0;
    std::vector<double> delta_sq{1.0};
    std::vector<double> snr_db{10.0};

    int block_length = 64;
    long long max_blocks = 1000;
    /// Stop a point once every detector has this many errors in every
    /// dimension; 0 always runs max_blocks.
    long long target_errors = 100;
    /// Blocks per scheduling batch; the stopping rule is checked between
    /// batches, so results do not depend on the thread count.
    int batch_blocks = 16;

    std::vector<DetectorSpec> detectors{{DetectorKind::symbol, Mode::exact}};
    ChannelMode channel = ChannelMode::random;
    cdouble fixed_a{1.0, 0.0};
    cdouble fixed_b{0.0, 0.0};
    Feedback feedback = Feedback::decision;

    std::uint64_t seed = 1;

    long long rate_samples = 2000;
    /// Reported as insufficient when a rate estimate's standard error
    /// exceeds this; 0 disables the check.
    double rate_target_stderr = 0.0;

    double gap_target_ser = 1e-3;

    std::string output_dir = ".";
    int threads = 1;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// Error tallies of one detector at one SNR, per dimension (0-based: |e_x|,
/// |e_y|, theta, gamma).
struct SerPoint {
    double snr_db = 0.0;
    std::array<long long, 4> errors{};
    long long trials = 0;
    long long blocks = 0;

    double ser(int dim) const;
    /// Wilson score interval at 95 %.
    std::array<double, 2> ci(int dim) const;
};

struct SerCurve {
    double delta_sq = 0.0;
    DetectorSpec detector;
    std::vector<SerPoint> points;
};

/// One simulated pilot-led block.
struct BlockSample {
    ChannelMatrix h;
    std::vector<int> tx_pairs;          // slots 0..n, slot 0 is the pilot
    std::vector<SymbolIndex> tx;        // slots 1..n
    std::vector<JonesPair> received;    // slots 0..n
    std::vector<FrontEndObservation> w; // slots 1..n
    std::vector<DVector> d_r;           // slots 1..n
};

ChannelMatrix draw_channel(const ExperimentConfig& cfg, Rng& rng);

BlockSample simulate_block(const Constellation& c, const ChannelMatrix& h, int block_length, double sigma_sq,
                           Rng& rng);

/// Runs one detector variant over a block. Symbol-by-symbol and successive
/// detection feed back their own decisions unless `feedback` is genie.
std::vector<SlotDecision> run_detector(const Receiver& rx, const BlockSample& block, DetectorSpec spec,
                                       Feedback feedback);

/// Per-dimension error flags of a decided symbol.
std::array<bool, 4> dimension_errors(const SymbolIndex& sent, const SymbolIndex& decided);

/// One curve per (delta_sq, detector) with one point per SNR. Deterministic
/// in (config, seed) for any thread count.
std::vector<SerCurve> run_ser_sweep(const ExperimentConfig& cfg);

struct RatePoint {
    double snr_db = 0.0;
    double rate_bits = 0.0;
    double stderr_bits = 0.0;
    long long samples = 0;
    bool precise_enough = true;
};

struct RateCurve {
    double delta_sq = 0.0;
    std::vector<RatePoint> points;
};

/// One Monte Carlo term, in nats, of
/// I(|K_x|,|K_y|,Theta',Gamma'; |R_x|,|R_y|,Theta'',Gamma'' | |DK_y|,|DR_y|):
/// ln f(y | x) - ln mean_x' f(y | x') with x' over the uniform pair alphabet
/// under the same channel and previous slot.
double mutual_information_sample(const Receiver& rx, int pair, int prev_pair, const DVector& d_r);

std::vector<RateCurve> run_rate_sweep(const ExperimentConfig& cfg);

struct GapEntry {
    int dimension = 0;  // 1..4
    double reference_snr_db = 0.0;
    double compared_snr_db = 0.0;
    double gap_db = 0.0;
    bool bracketed = false;
};

/// SNR (dB) where a dimension's SER curve crosses `target_ser`, by linear
/// interpolation in (snr_db, log SER). Sets `bracketed` false and returns NaN
/// when the sweep does not straddle the target.
double snr_at_ser(const std::vector<SerPoint>& points, int dim, double target_ser, bool* bracketed);

/// Gap compared - reference per dimension at `target_ser`.
std::vector<GapEntry> compare_gap(const SerCurve& reference, const SerCurve& compared, double target_ser);

struct GapReport {
    double delta_sq = 0.0;
    DetectorSpec reference;
    DetectorSpec compared;
    std::vector<GapEntry> entries;
};

/// Runs sym and suc (in each configured mode) on shared blocks and reports
/// the successive-minus-symbol gap per dimension. `curves` receives the
/// underlying SER curves when non-null.
std::vector<GapReport> compare_successive_gap(const ExperimentConfig& cfg, std::vector<SerCurve>* curves = nullptr);

}  // namespace stokesdd
