#pragma once

// Wire format of the preparer -> measurer message:
//   bytes 0..7  x as IEEE-754 binary64, little-endian
//   byte  8     n (0 azimuth, 1 zenith)
//   byte  9     k (patch index, 1..12)

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "ontic/icosa.hpp"

namespace ontic {

inline constexpr std::size_t kMessageSize = 10;

using OnticMessage = std::array<std::byte, kMessageSize>;

inline OnticMessage serialize(const PatchedOnticState& s) {
    OnticMessage out{};
    const auto bits = std::bit_cast<std::uint64_t>(s.x);
    for (std::size_t i = 0; i < 8; ++i) out[i] = static_cast<std::byte>((bits >> (8 * i)) & 0xffu);
    out[8] = static_cast<std::byte>(s.n);
    out[9] = static_cast<std::byte>(s.k);
    return out;
}

/// Throws std::invalid_argument on an unknown branch byte or patch index.
inline PatchedOnticState deserialize(std::span<const std::byte, kMessageSize> in) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < 8; ++i) bits |= std::to_integer<std::uint64_t>(in[i]) << (8 * i);
    const auto n = std::to_integer<std::uint8_t>(in[8]);
    const auto k = std::to_integer<std::uint8_t>(in[9]);
    if (n > 1) throw std::invalid_argument("bad branch byte " + std::to_string(n));
    if (k < 1 || k > kPatchCount) throw std::invalid_argument("bad patch index " + std::to_string(k));
    return {std::bit_cast<double>(bits), static_cast<Branch>(n), k};
}

}  // namespace ontic
