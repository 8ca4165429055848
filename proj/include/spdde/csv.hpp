#pragma once

#include "spdde/comparison.hpp"
#include "spdde/integrator.hpp"
#include "spdde/stability.hpp"

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

namespace spdde {

/// %.17g, enough digits to round-trip a double.
std::string format_double(double v);

/// Header time,mode_1,...,mode_M,active_index.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Header time,value[,envelope]; the envelope column is written when non-empty.
void write_curve_csv(std::ostream& out, std::span<const double> times, std::span<const double> values,
                     std::span<const double> envelope = {});

/// Header time,mean_norm_sq,std_error.
void write_moments_csv(std::ostream& out, const MeanCurve& curve);

/// Writes `content` to `path`, creating parent directories; throws config on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace spdde
