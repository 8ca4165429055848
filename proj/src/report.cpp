#include "spdde/report.hpp"

#include <algorithm>
#include <cmath>

namespace spdde {

void CertificateReport::add(double time, std::string label, double estimate, double bound,
                            double std_error, double tolerance, bool strict) {
    CertificateRow row;
    row.time = time;
    row.label = std::move(label);
    row.estimate = estimate;
    row.bound = bound;
    row.std_error = std_error;
    row.tolerance = tolerance;
    row.slack = bound - estimate;
    row.pass = strict ? row.slack > -tolerance : row.slack >= -tolerance;
    if (std::isnan(row.slack)) row.pass = false;
    pass = pass && row.pass;
    margin = std::min(margin, row.slack);
    rows.push_back(std::move(row));
}

const CertificateRow* CertificateReport::first_failure() const {
    for (const auto& r : rows) {
        if (!r.pass) return &r;
    }
    return nullptr;
}

nlohmann::json CertificateReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"time", r.time},
                             {"label", r.label},
                             {"estimate", r.estimate},
                             {"bound", r.bound},
                             {"std_error", r.std_error},
                             {"tolerance", r.tolerance},
                             {"slack", r.slack},
                             {"pass", r.pass}});
    }
    nlohmann::json j;
    j["certificate"] = name;
    j["verdict"] = pass ? "pass" : "fail";
    j["margin"] = rows.empty() ? nlohmann::json(nullptr) : nlohmann::json(margin);
    j["notes"] = notes;
    j["rows"] = std::move(rows_json);
    return j;
}

}  // namespace spdde
