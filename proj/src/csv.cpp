#include "spdde/csv.hpp"

#include "spdde/error.hpp"

#include <cstdio>
#include <fstream>

namespace spdde {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t M = traj.states.empty() ? 0 : traj.states.front().size();
    out << "time";
    for (std::size_t k = 1; k <= M; ++k) out << ",mode_" << k;
    out << ",active_index\n";
    for (std::size_t m = 0; m < traj.states.size(); ++m) {
        out << format_double(traj.time(m));
        for (std::size_t k = 0; k < M; ++k) out << ',' << format_double(traj.states[m][k]);
        out << ',' << traj.active[m] << '\n';
    }
}

void write_curve_csv(std::ostream& out, std::span<const double> times, std::span<const double> values,
                     std::span<const double> envelope) {
    const bool env = !envelope.empty();
    out << (env ? "time,value,envelope\n" : "time,value\n");
    for (std::size_t m = 0; m < times.size(); ++m) {
        out << format_double(times[m]) << ',' << format_double(values[m]);
        if (env) out << ',' << format_double(envelope[m]);
        out << '\n';
    }
}

void write_moments_csv(std::ostream& out, const MeanCurve& curve) {
    out << "time,mean_norm_sq,std_error\n";
    for (std::size_t m = 0; m < curve.times.size(); ++m) {
        out << format_double(curve.times[m]) << ',' << format_double(curve.estimate[m]) << ','
            << format_double(curve.std_error[m]) << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::config, "cannot write " + path.string());
    f << content;
    if (!f) throw Error(ErrorKind::config, "write failed for " + path.string());
}

}  // namespace spdde
