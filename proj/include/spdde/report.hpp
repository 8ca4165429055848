#pragma once

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

namespace spdde {

/// One checked point. slack = bound - estimate; the row passes iff slack >= -tolerance
/// (strict_tolerance demands slack > -tolerance).
struct CertificateRow {
    double time = 0.0;
    std::string label;
    double estimate = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    double tolerance = 0.0;
    double slack = 0.0;
    bool pass = true;
};

struct CertificateReport {
    std::string name;
    bool pass = true;
    double margin = std::numeric_limits<double>::infinity();  ///< min slack over rows
    std::vector<CertificateRow> rows;
    std::vector<std::string> notes;

    explicit CertificateReport(std::string n = {}) : name(std::move(n)) {}

    void add(double time, std::string label, double estimate, double bound, double std_error,
             double tolerance, bool strict = false);
    void note(std::string text) { notes.push_back(std::move(text)); }
    /// First failing row, or nullptr.
    const CertificateRow* first_failure() const;

    nlohmann::json to_json() const;
};

}  // namespace spdde
