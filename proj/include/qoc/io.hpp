#ifndef QOC_IO_HPP
#define QOC_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoc/arma.hpp"
#include "qoc/bounds.hpp"
#include "qoc/control.hpp"

// JSON wire formats and deterministic CSV output. Schemas are strict:
// unknown keys are rejected.

namespace qoc::io {

using json = nlohmann::json;

/// Raised on any malformed or schema-violating configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Throws ConfigError unless the object's keys are a subset of `allowed`
/// and include every key in `required`.
void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::vector<std::string>& required, const std::string& where);

/// {"ar": [...], "ma": [...], "sigma_w2": x}
json to_json(const arma::ArmaModel& model);
arma::ArmaModel arma_from_json(const json& j, const std::string& where);

/// {"dc_variance": x}
json to_json(const arma::DcNoiseModel& model);

/// {"thetas": [...], "target_angle": x}
json to_json(const control::PulseSequence& seq);
control::PulseSequence sequence_from_json(const json& j, const std::string& where);

/// {"control": {...}, "dephasing_mean": x, "dephasing_residual": {...}|null}
json to_json(const control::NoiseModel& noise);
control::NoiseModel noise_from_json(const json& j, const std::string& where);

/// {"first_order", "second_order_bound", "ratio", "weak_noise_margin", "pass"}
json to_json(const bounds::WeakNoiseReport& report);

/// Round-trip exact float formatting (17 significant digits).
std::string format_double(double v);

/// CSV with a header row and fixed column order.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row(const std::string& label, const std::vector<double>& values);

    /// Serializes and writes the file; returns the byte content.
    std::string write(const std::string& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

void write_text(const std::string& path, const std::string& content);

}  // namespace qoc::io

#endif
