#ifndef BIOZERO_HASH_HPP_
#define BIOZERO_HASH_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace biozero {

using Digest = std::array<uint8_t, 32>;

/// SHA-256 of the input bytes. Each call is metered as one hash invocation.
Digest sha256(std::span<const uint8_t> data);

}  // namespace biozero

#endif  // BIOZERO_HASH_HPP_
