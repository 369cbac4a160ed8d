#ifndef BIOZERO_SYNTH_HPP_
#define BIOZERO_SYNTH_HPP_

#include <cstdint>
#include <optional>

#include "biozero/protocol.hpp"

namespace biozero {

struct SynthPair {
    BiometricVector f0;
    BiometricVector f1;
    uint64_t achieved_distance = 0;
};

/// Deterministic synthetic enrollment/probe pair. With a target distance the
/// pair is constructed so compute_distance(f0, f1) equals it exactly (greedy
/// square decomposition across the N slots); without one both vectors are
/// uniform. Throws std::invalid_argument when the target cannot be packed
/// into N slots of at most (2^m - 1)^2 each.
SynthPair synth_features(uint64_t seed, size_t n, uint32_t feature_bits,
                         std::optional<uint64_t> target_distance);

}  // namespace biozero

#endif  // BIOZERO_SYNTH_HPP_
