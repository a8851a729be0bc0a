#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace ptpsim {

/// Seed for the stream `name` under run seed `seed`. Streams with different
/// names are independent, so adding a consumer never perturbs another one.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view name);

/**
 * A named deterministic random stream.
 *
 * Uses mt19937_64 (fully specified by the standard) and draws its own
 * normal/uniform variates: the std:: distributions are implementation
 * defined, which would break trace reproducibility across toolchains.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view name);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Standard normal via Box-Muller.
    double gaussian();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace ptpsim
