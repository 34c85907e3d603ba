#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace rdp {

/// Philox4x32-10 counter-based generator (Salmon et al.); stateless, so
/// any draw can be computed independently of the others.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key)
    {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Draws addressed by (sample index, coordinate) under a 64-bit seed and a stream id.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint32_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream)
    {
    }

    Philox4x32::Counter raw(std::uint64_t index, std::uint32_t coord) const
    {
        return Philox4x32::block({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), coord, stream_},
                                 key_);
    }

    /// Two uniforms in (0, 1) with 53-bit resolution.
    std::pair<double, double> uniforms(std::uint64_t index, std::uint32_t coord) const
    {
        const auto b = raw(index, coord);
        return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
    }

    /// Two independent standard normals (Box-Muller).
    std::pair<double, double> normals(std::uint64_t index, std::uint32_t coord) const
    {
        const auto [u1, u2] = uniforms(index, coord);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo)
    {
        const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_;
};

} // namespace rdp
