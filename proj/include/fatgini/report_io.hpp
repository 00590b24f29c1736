#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fatgini/experiments.hpp"

namespace fatgini {

/// Shortest decimal form that round-trips the double exactly; "nan" for NaN.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
    return {
        {"family", to_string(cfg.family)},
        {"alpha", cfg.alpha},
        {"scale", cfg.scale},
        {"sizes", cfg.sizes},
        {"replications", cfg.replications},
        {"epsilon", cfg.epsilon},
        {"master_seed", cfg.master_seed},
        {"normalization", to_string(cfg.normalization)},
    };
}

// Reports are reproducible artifacts: reruns with the same config must be
// byte-identical, so wall_seconds never enters the serialized form.

inline nlohmann::json to_json(const ExperimentReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({
            {"n", r.n},
            {"direct_mean", r.direct_mean},
            {"direct_bias", r.direct_bias},
            {"direct_std", r.direct_std},
            {"ml_mean", r.ml_mean},
            {"ml_std", r.ml_std},
            {"ml_rejections", r.ml_rejections},
            {"error_ratio", r.error_ratio},
        });
    }
    nlohmann::json doc = {
        {"config", to_json(report.config)},
        {"analytic_gini", report.analytic_target},
        {"rows", rows},
    };
    if (report.config.include_raw) {
        nlohmann::json raw = nlohmann::json::array();
        for (const auto& rec : report.raw) {
            raw.push_back({
                {"n", rec.n},
                {"rep", rec.rep},
                {"seed", rec.seed},
                {"direct", rec.direct},
                {"ml", rec.ml},
                {"accepted", rec.accepted},
            });
        }
        doc["raw"] = std::move(raw);
    }
    return doc;
}

inline std::string to_csv(const ExperimentReport& report) {
    std::string out = "n,direct_mean,direct_bias,direct_std,ml_mean,ml_std,ml_rejections,error_ratio\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.n) + ',' + format_double(r.direct_mean) + ','
               + format_double(r.direct_bias) + ',' + format_double(r.direct_std) + ','
               + format_double(r.ml_mean) + ',' + format_double(r.ml_std) + ','
               + std::to_string(r.ml_rejections) + ',' + format_double(r.error_ratio) + '\n';
    }
    return out;
}

inline nlohmann::json to_json(const AggregationReport& report) {
    return {
        {"config", to_json(report.config)},
        {"units", report.units},
        {"unit_size", report.unit_size},
        {"per_unit_mean_gini", report.per_unit_mean_gini},
        {"pooled_gini", report.pooled_gini},
        {"weighted_avg", report.weighted_avg},
        {"superadditivity_gap", report.superadditivity_gap},
        {"gap_std_error", report.gap_std_error},
    };
}

inline std::string to_csv(const AggregationReport& report) {
    std::string out =
        "units,unit_size,per_unit_mean_gini,pooled_gini,weighted_avg,superadditivity_gap,gap_std_error\n";
    out += std::to_string(report.units) + ',' + std::to_string(report.unit_size) + ','
           + format_double(report.per_unit_mean_gini) + ',' + format_double(report.pooled_gini)
           + ',' + format_double(report.weighted_avg) + ','
           + format_double(report.superadditivity_gap) + ','
           + format_double(report.gap_std_error) + '\n';
    return out;
}

inline std::string to_csv(std::span<const HistogramBin> bins) {
    std::string out = "bin_left,bin_right,count,density\n";
    for (const auto& b : bins)
        out += format_double(b.left) + ',' + format_double(b.right) + ','
               + std::to_string(b.count) + ',' + format_double(b.density) + '\n';
    return out;
}

inline std::string to_csv(std::span<const ConvergenceRow> rows) {
    std::string out = "U,mu1_partial\n";
    for (const auto& r : rows)
        out += std::to_string(r.terms) + ',' + format_double(r.mu1) + '\n';
    return out;
}

inline std::string to_csv(std::span<const StdDeclineRow> rows) {
    std::string out = "n,analytic_std,mc_std\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + ',' + format_double(r.analytic_std) + ','
               + format_double(r.mc_std) + '\n';
    return out;
}

inline nlohmann::json to_json(std::span<const ConvergenceRow> rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back({{"U", r.terms}, {"mu1_partial", r.mu1}});
    return arr;
}

inline nlohmann::json to_json(const StdDeclineReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : report.rows)
        arr.push_back({{"n", r.n}, {"analytic_std", r.analytic_std}, {"mc_std", r.mc_std}});
    return {{"config", to_json(report.config)}, {"rows", arr}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fatgini
