#include "spdde/rng.hpp"

#include "spdde/error.hpp"

#include <cmath>
#include <numbers>

namespace spdde {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trajectory, StreamRole role)
    : seed_(master_seed), trajectory_(trajectory), role_(role) {}

std::uint64_t RngStream::next_u64() {
    // Two 64-bit outputs per Philox block; the block index is counter / 2.
    const std::uint64_t n = counter_++;
    if ((n & 1u) == 0) {
        const std::uint64_t block = n >> 1;
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
            static_cast<std::uint32_t>(trajectory_),
            static_cast<std::uint32_t>(trajectory_ >> 32) ^ (static_cast<std::uint32_t>(role_) << 24)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        block_ = philox4x32(ctr, key);
        return (static_cast<std::uint64_t>(block_[0]) << 32) | block_[1];
    }
    return (static_cast<std::uint64_t>(block_[2]) << 32) | block_[3];
}

double RngStream::uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(next_u64() >> 11) + 0.5) * scale;
}

double RngStream::normal() {
    if (have_spare_normal_) {
        have_spare_normal_ = false;
        return spare_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    have_spare_normal_ = true;
    return radius * std::cos(angle);
}

double RngStream::exponential(double mean) {
    if (!(mean > 0.0)) throw Error(ErrorKind::invalid_parameter, "exponential mean must be > 0");
    return -mean * std::log(uniform());
}

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw Error(ErrorKind::invalid_parameter, "Poisson mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;
    if (mean > 500.0) {
        const double half = 0.5 * mean;
        return poisson(half) + poisson(mean - half);
    }
    const double u = uniform();
    std::uint64_t k = 0;
    double p = std::exp(-mean);
    double cdf = p;
    while (u > cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        const double next = cdf + p;
        if (next == cdf) break;  // tail below double resolution
        cdf = next;
    }
    return k;
}

}  // namespace spdde
