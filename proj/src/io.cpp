#include "qoc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace qoc::io {

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::vector<std::string>& required, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
    }
    for (const auto& key : required) {
        if (!obj.contains(key))
            throw ConfigError(where + ": missing key \"" + key + "\"");
    }
}

namespace {

std::vector<double> double_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

}  // namespace

json to_json(const arma::ArmaModel& model) {
    return {{"ar", model.ar()}, {"ma", model.ma()}, {"sigma_w2", model.sigma_w2()}};
}

arma::ArmaModel arma_from_json(const json& j, const std::string& where) {
    check_keys(j, {"ar", "ma", "sigma_w2"}, {"sigma_w2"}, where);
    std::vector<double> ar, ma;
    if (j.contains("ar")) ar = double_list(j["ar"], where + ".ar");
    if (j.contains("ma")) ma = double_list(j["ma"], where + ".ma");
    try {
        return {std::move(ar), std::move(ma), number(j["sigma_w2"], where + ".sigma_w2")};
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

json to_json(const arma::DcNoiseModel& model) {
    return {{"dc_variance", model.variance}};
}

json to_json(const control::PulseSequence& seq) {
    return {{"thetas", seq.thetas()}, {"target_angle", seq.target_angle()}};
}

control::PulseSequence sequence_from_json(const json& j, const std::string& where) {
    check_keys(j, {"thetas", "target_angle"}, {"thetas", "target_angle"}, where);
    try {
        return {double_list(j["thetas"], where + ".thetas"),
                number(j["target_angle"], where + ".target_angle")};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

json to_json(const control::NoiseModel& noise) {
    json j{{"control", to_json(noise.control)},
           {"dephasing_mean", noise.dephasing_mean}};
    j["dephasing_residual"] =
        noise.dephasing_residual ? to_json(*noise.dephasing_residual) : json(nullptr);
    return j;
}

control::NoiseModel noise_from_json(const json& j, const std::string& where) {
    check_keys(j, {"control", "dephasing_mean", "dephasing_residual"}, {"control"},
               where);
    control::NoiseModel noise{arma_from_json(j.at("control"), where + ".control"),
                              0.0, std::nullopt};
    if (j.contains("dephasing_mean"))
        noise.dephasing_mean = number(j["dephasing_mean"], where + ".dephasing_mean");
    if (j.contains("dephasing_residual") && !j["dephasing_residual"].is_null())
        noise.dephasing_residual =
            arma_from_json(j["dephasing_residual"], where + ".dephasing_residual");
    return noise;
}

json to_json(const bounds::WeakNoiseReport& report) {
    return {{"first_order", report.first_order},
            {"second_order_bound", report.second_order_bound},
            {"second_order_bound_loose", report.second_order_bound_loose},
            {"ratio", report.ratio},
            {"weak_noise_margin", report.accumulated_angle.margin},
            {"pass", report.pass}};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvWriter::add_row(const std::string& label, const std::vector<double>& values) {
    std::string row = label;
    for (double v : values) {
        row += ',';
        row += format_double(v);
    }
    rows_.push_back(std::move(row));
}

std::string CsvWriter::write(const std::string& path) const {
    std::string content;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) content += ',';
        content += columns_[i];
    }
    content += '\n';
    for (const auto& row : rows_) {
        content += row;
        content += '\n';
    }
    write_text(path, content);
    return content;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qoc::io
