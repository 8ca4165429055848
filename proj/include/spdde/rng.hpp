#pragma once

#include <array>
#include <cstdint>

namespace spdde {

/// Purpose of a random stream. Each role of each trajectory gets its own
/// counter space, so changing how one role is consumed never shifts another.
enum class StreamRole : std::uint32_t {
    wiener = 1,
    jump_count = 2,
    jump_time = 3,
    jump_mark = 4,
    switching = 5,
    sampling = 6,
};

/// Philox4x32-10 block: maps (key, counter) to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream keyed by (master_seed, trajectory, role).
///
/// The n-th draw is a pure function of the key and n, so a stream yields the
/// same sequence no matter which worker owns it or when it runs.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t trajectory, StreamRole role);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal via Box-Muller; consumes two raw draws per pair.
    double normal();
    double exponential(double mean);
    /// Poisson(mean) by sequential inversion, split for large means.
    std::uint64_t poisson(double mean);

    /// Raw 64-bit draws consumed so far.
    std::uint64_t draws() const noexcept { return counter_; }

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t trajectory() const noexcept { return trajectory_; }
    StreamRole role() const noexcept { return role_; }

private:
    std::uint64_t seed_;
    std::uint64_t trajectory_;
    StreamRole role_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    bool have_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

/// The four streams consumed by one simulated path.
struct TrajectoryStreams {
    RngStream wiener;
    RngStream jump_count;
    RngStream jump_time;
    RngStream jump_mark;

    TrajectoryStreams(std::uint64_t master_seed, std::uint64_t trajectory)
        : wiener(master_seed, trajectory, StreamRole::wiener),
          jump_count(master_seed, trajectory, StreamRole::jump_count),
          jump_time(master_seed, trajectory, StreamRole::jump_time),
          jump_mark(master_seed, trajectory, StreamRole::jump_mark) {}

    std::uint64_t total_draws() const noexcept {
        return wiener.draws() + jump_count.draws() + jump_time.draws() + jump_mark.draws();
    }
};

}  // namespace spdde
