#include "stokesdd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace stokesdd {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out))
        throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v)
{
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw std::invalid_argument(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 3) {
            const double start = to_double(key, parts[0]);
            const double step = to_double(key, parts[1]);
            const double stop = to_double(key, parts[2]);
            if (!(step > 0.0) || stop < start) throw std::invalid_argument(key + ": bad range '" + item + "'");
            const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
            for (long long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
        } else {
            out.push_back(to_double(key, item));
        }
    }
    if (out.empty()) throw std::invalid_argument(key + ": empty list");
    return out;
}

cdouble to_complex(const std::string& key, const std::string& v)
{
    const auto parts = split(v, ',');
    if (parts.size() != 2) throw std::invalid_argument(key + ": expected 're, im'");
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

Mode to_mode(const std::string& v)
{
    if (v == "exact") return Mode::exact;
    if (v == "high_snr") return Mode::high_snr;
    throw std::invalid_argument("unknown detector mode '" + v + "'");
}

DetectorKind to_kind(const std::string& v)
{
    if (v == "sym") return DetectorKind::symbol;
    if (v == "seq") return DetectorKind::sequence;
    if (v == "suc") return DetectorKind::successive;
    throw std::invalid_argument("unknown detector '" + v + "'");
}

const char* channel_name(ChannelMode m)
{
    switch (m) {
    case ChannelMode::random: return "random";
    case ChannelMode::b_zero: return "b_zero";
    case ChannelMode::fixed: return "fixed";
    }
    return "?";
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return {buf, ptr};
}

std::vector<DetectorSpec> parse_detectors(const std::string& list, const std::string& mode)
{
    std::vector<Mode> modes;
    if (mode == "both") modes = {Mode::exact, Mode::high_snr};
    else modes = {to_mode(mode)};
    std::vector<DetectorSpec> out;
    for (const auto& name : split(list, ','))
        for (Mode m : modes) out.push_back({to_kind(name), m});
    if (out.empty()) throw std::invalid_argument("detector.list must not be empty");
    return out;
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key)) throw std::invalid_argument("config: duplicate key '" + key + "'");
        kv[key] = value;
    }

    std::string det_list = "sym";
    std::string det_mode = "exact";
    bool have_list = false;
    std::string delta_text;
    for (const auto& [key, v] : kv) {
        if (key == "constellation.n_r") cfg.n_r = static_cast<int>(to_int(key, v));
        else if (key == "constellation.n_p") cfg.n_p = static_cast<int>(to_int(key, v));
        else if (key == "constellation.r1") cfg.r1 = to_double(key, v);
        else if (key == "constellation.delta_sq") delta_text = v;
        else if (key == "channel.mode") {
            if (v == "random") cfg.channel = ChannelMode::random;
            else if (v == "b_zero") cfg.channel = ChannelMode::b_zero;
            else if (v == "fixed") cfg.channel = ChannelMode::fixed;
            else throw std::invalid_argument("channel.mode: unknown value '" + v + "'");
        }
        else if (key == "channel.a") cfg.fixed_a = to_complex(key, v);
        else if (key == "channel.b") cfg.fixed_b = to_complex(key, v);
        else if (key == "sweep.snr_db") cfg.snr_db = to_list(key, v);
        else if (key == "sweep.block_length") cfg.block_length = static_cast<int>(to_int(key, v));
        else if (key == "sweep.max_blocks") cfg.max_blocks = to_int(key, v);
        else if (key == "sweep.target_errors") cfg.target_errors = to_int(key, v);
        else if (key == "sweep.batch_blocks") cfg.batch_blocks = static_cast<int>(to_int(key, v));
        else if (key == "detector.list") { det_list = v; have_list = true; }
        else if (key == "detector.mode") det_mode = v;
        else if (key == "detector.variants") {
            cfg.detectors.clear();
            for (const auto& item : split(v, ',')) {
                const auto parts = split(item, '/');
                if (parts.size() != 2) throw std::invalid_argument("detector.variants: expected 'kind/mode'");
                cfg.detectors.push_back({to_kind(parts[0]), to_mode(parts[1])});
            }
            if (have_list || kv.count("detector.mode"))
                throw std::invalid_argument("detector.variants excludes detector.list and detector.mode");
        }
        else if (key == "detector.feedback") {
            if (v == "decision") cfg.feedback = Feedback::decision;
            else if (v == "genie") cfg.feedback = Feedback::genie;
            else throw std::invalid_argument("detector.feedback: unknown value '" + v + "'");
        }
        else if (key == "rate.samples") cfg.rate_samples = to_int(key, v);
        else if (key == "rate.target_stderr") cfg.rate_target_stderr = to_double(key, v);
        else if (key == "gap.target_ser") cfg.gap_target_ser = to_double(key, v);
        else if (key == "seed") cfg.seed = to_uint(key, v);
        else if (key == "output.dir") cfg.output_dir = v;
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (!kv.count("detector.variants")) cfg.detectors = parse_detectors(det_list, det_mode);
    if (!delta_text.empty()) {
        if (delta_text == "balanced") {
            if (cfg.n_r < 2 || cfg.n_p < 2)
                throw std::invalid_argument("constellation.delta_sq = balanced needs n_r >= 2 and n_p >= 2");
            cfg.delta_sq = {balanced_delta_sq(cfg.n_r, cfg.n_p)};
        } else {
            cfg.delta_sq = to_list("constellation.delta_sq", delta_text);
        }
    }
    if (cfg.n_r == 1)
        for (double& d : cfg.delta_sq) d = 0.0;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string normalized_config(const ExperimentConfig& cfg)
{
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
        return s;
    };
    std::ostringstream o;
    o << "constellation.n_r = " << cfg.n_r << "\n";
    o << "constellation.n_p = " << cfg.n_p << "\n";
    o << "constellation.r1 = " << format_double(cfg.r1) << "\n";
    o << "constellation.delta_sq = " << list(cfg.delta_sq) << "\n";
    o << "channel.mode = " << channel_name(cfg.channel) << "\n";
    if (cfg.channel == ChannelMode::fixed) {
        o << "channel.a = " << format_double(cfg.fixed_a.real()) << ", " << format_double(cfg.fixed_a.imag()) << "\n";
        o << "channel.b = " << format_double(cfg.fixed_b.real()) << ", " << format_double(cfg.fixed_b.imag()) << "\n";
    }
    o << "sweep.snr_db = " << list(cfg.snr_db) << "\n";
    o << "sweep.block_length = " << cfg.block_length << "\n";
    o << "sweep.max_blocks = " << cfg.max_blocks << "\n";
    o << "sweep.target_errors = " << cfg.target_errors << "\n";
    o << "sweep.batch_blocks = " << cfg.batch_blocks << "\n";
    o << "detector.variants = ";
    for (std::size_t i = 0; i < cfg.detectors.size(); ++i)
        o << (i ? ", " : "") << detector_name(cfg.detectors[i].kind) << "/" << mode_name(cfg.detectors[i].mode);
    o << "\n";
    o << "detector.feedback = " << (cfg.feedback == Feedback::genie ? "genie" : "decision") << "\n";
    o << "rate.samples = " << cfg.rate_samples << "\n";
    o << "rate.target_stderr = " << format_double(cfg.rate_target_stderr) << "\n";
    o << "gap.target_ser = " << format_double(cfg.gap_target_ser) << "\n";
    o << "seed = " << cfg.seed << "\n";
    return o.str();
}

std::string config_hash(const ExperimentConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : normalized_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace stokesdd
