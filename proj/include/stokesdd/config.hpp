#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stokesdd/harness.hpp"

namespace stokesdd {

/// Parses the flat `key = value` config format. Lines starting with `#` are
/// comments. Lists are comma separated; `sweep.snr_db` also accepts
/// `start:step:stop`. `constellation.delta_sq` accepts `balanced`.
///
/// Keys:
///   constellation.n_r, constellation.n_p, constellation.r1, constellation.delta_sq
///   channel.mode (random | b_zero | fixed), channel.a, channel.b (as `re, im`)
///   sweep.snr_db, sweep.block_length, sweep.max_blocks, sweep.target_errors,
///   sweep.batch_blocks
///   detector.list (sym, seq, suc), detector.mode (exact | high_snr | both),
///   detector.feedback (decision | genie)
///   rate.samples, rate.target_stderr, gap.target_ser, seed, output.dir
///
/// Throws std::invalid_argument on unknown keys or malformed values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text of every result-affecting setting, in fixed key order.
/// Thread count and output directory are excluded.
std::string normalized_config(const ExperimentConfig& cfg);

/// FNV-1a 64 of normalized_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::vector<DetectorSpec> parse_detectors(const std::string& list, const std::string& mode);

/// Shortest round-trip text of a double.
std::string format_double(double v);

}  // namespace stokesdd
