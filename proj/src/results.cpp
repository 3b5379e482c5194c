#include "stokesdd/results.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "stokesdd/config.hpp"

namespace stokesdd {

namespace {

std::map<std::string, std::string> base_metadata(const std::string& kind, const ExperimentConfig& cfg)
{
    return {{"experiment", kind},
            {"config_hash", config_hash(cfg)},
            {"seed", std::to_string(cfg.seed)},
            {"code_version", kCodeVersion},
            {"config", normalized_config(cfg)}};
}

std::string meta_path(const std::string& csv_path)
{
    std::filesystem::path p(csv_path);
    p.replace_extension(".meta");
    return p.string();
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void ResultTable::check() const
{
    for (const auto& r : rows)
        if (r.size() != columns.size()) throw std::invalid_argument("result row width does not match header");
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

ResultTable ser_table(const std::vector<SerCurve>& curves, const ExperimentConfig& cfg)
{
    ResultTable t;
    t.kind = "ser";
    t.columns = {"snr_db", "dimension", "detector", "mode", "errors", "trials", "ser", "ci_low", "ci_high", "delta_sq"};
    for (const auto& c : curves)
        for (const auto& p : c.points)
            for (int d = 0; d < 4; ++d) {
                const auto ci = p.ci(d);
                t.rows.push_back({format_number(p.snr_db), std::to_string(d + 1), detector_name(c.detector.kind),
                                  mode_name(c.detector.mode), std::to_string(p.errors[static_cast<std::size_t>(d)]),
                                  std::to_string(p.trials), format_number(p.ser(d)), format_number(ci[0]),
                                  format_number(ci[1]), format_number(c.delta_sq)});
            }
    t.metadata = base_metadata(t.kind, cfg);
    return t;
}

ResultTable rate_table(const std::vector<RateCurve>& curves, const ExperimentConfig& cfg)
{
    ResultTable t;
    t.kind = "rate";
    t.columns = {"snr_db", "rate_bits", "stderr", "samples", "delta_sq"};
    for (const auto& c : curves)
        for (const auto& p : c.points)
            t.rows.push_back({format_number(p.snr_db), format_number(p.rate_bits), format_number(p.stderr_bits),
                              std::to_string(p.samples), format_number(c.delta_sq)});
    t.metadata = base_metadata(t.kind, cfg);
    return t;
}

ResultTable gap_table(const std::vector<GapReport>& reports, const ExperimentConfig& cfg)
{
    ResultTable t;
    t.kind = "gap";
    t.columns = {"delta_sq", "dimension", "reference", "compared", "mode", "target_ser",
                 "reference_snr_db", "compared_snr_db", "gap_db", "bracketed"};
    for (const auto& r : reports)
        for (const auto& e : r.entries)
            t.rows.push_back({format_number(r.delta_sq), std::to_string(e.dimension), detector_name(r.reference.kind),
                              detector_name(r.compared.kind), mode_name(r.reference.mode),
                              format_number(cfg.gap_target_ser), format_number(e.reference_snr_db),
                              format_number(e.compared_snr_db), format_number(e.gap_db), e.bracketed ? "1" : "0"});
    t.metadata = base_metadata(t.kind, cfg);
    return t;
}

ResultTable table1_table()
{
    ResultTable t;
    t.kind = "table1";
    t.columns = {"n_r", "n_p", "delta_sq_bl"};
    const int pairs[6][2] = {{2, 4}, {4, 4}, {4, 8}, {8, 4}, {8, 8}, {8, 16}};
    for (const auto& p : pairs)
        t.rows.push_back({std::to_string(p[0]), std::to_string(p[1]), format_number(balanced_delta_sq(p[0], p[1]))});
    t.metadata = {{"experiment", "table1"}, {"code_version", kCodeVersion}};
    return t;
}

void write_results(const ResultTable& table, const std::string& path)
{
    table.check();
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + path + "'");
        for (std::size_t i = 0; i < table.columns.size(); ++i) f << (i ? "," : "") << table.columns[i];
        f << "\n";
        for (const auto& r : table.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
            f << "\n";
        }
        if (!f) throw std::runtime_error("write failed for '" + path + "'");
    }
    if (table.metadata.empty()) return;
    nlohmann::ordered_json meta;
    meta["kind"] = table.kind;
    meta["columns"] = table.columns;
    for (const auto& [k, v] : table.metadata) meta["metadata"][k] = v;
    const std::string mp = meta_path(path);
    std::ofstream m(mp, std::ios::binary | std::ios::trunc);
    if (!m) throw std::runtime_error("cannot write '" + mp + "'");
    m << meta.dump(2) << "\n";
    if (!m) throw std::runtime_error("write failed for '" + mp + "'");
}

ResultTable read_results(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    ResultTable t;
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("'" + path + "' has no header row");
    t.columns = split_csv_line(line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        t.rows.push_back(split_csv_line(line));
    }
    t.check();
    std::ifstream m(meta_path(path), std::ios::binary);
    if (m) {
        const auto meta = nlohmann::json::parse(m);
        t.kind = meta.at("kind").get<std::string>();
        if (meta.contains("metadata"))
            for (const auto& [k, v] : meta["metadata"].items()) t.metadata[k] = v.get<std::string>();
    }
    return t;
}

std::string result_path(const std::string& dir, const std::string& kind, const ExperimentConfig& cfg)
{
    return (std::filesystem::path(dir) / (kind + "_" + config_hash(cfg) + ".csv")).string();
}

}  // namespace stokesdd
