#include "biozero/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace biozero {

namespace {

uint64_t isqrt(uint64_t v) {
    if (v == 0) return 0;
    uint64_t r = uint64_t(std::sqrt(double(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

SynthPair synth_features(uint64_t seed, size_t n, uint32_t feature_bits,
                         std::optional<uint64_t> target_distance) {
    if (n == 0) throw std::invalid_argument("synth_features: n must be positive");
    if (feature_bits == 0 || feature_bits > 15) {
        throw std::invalid_argument("synth_features: feature_bits must be 1..15");
    }
    const uint64_t maxv = (uint64_t(1) << feature_bits) - 1;
    Rng rng(seed);

    SynthPair out;
    out.f0.feature_bits = feature_bits;
    out.f1.feature_bits = feature_bits;
    out.f0.values.resize(n);
    out.f1.values.resize(n);

    if (!target_distance) {
        for (size_t i = 0; i < n; ++i) {
            out.f0.values[i] = uint32_t(rng.next_u64() % (maxv + 1));
            out.f1.values[i] = uint32_t(rng.next_u64() % (maxv + 1));
        }
        out.achieved_distance = protocol::compute_distance(out.f0, out.f1);
        return out;
    }

    const uint64_t target = *target_distance;
    if (target > uint64_t(n) * maxv * maxv) {
        throw std::invalid_argument("synth_features: target distance not achievable");
    }

    // Large targets need per-slot deltas near the full feature range, which a
    // mid-range f0 cannot host; anchor f0 at the extremes in that case.
    const uint64_t half = (maxv + 1) / 2;
    const bool extreme = target > uint64_t(n) * half * half;
    for (size_t i = 0; i < n; ++i) {
        out.f0.values[i] = extreme ? uint32_t((i % 2) ? maxv : 0)
                                   : uint32_t(rng.next_u64() % (maxv + 1));
        out.f1.values[i] = out.f0.values[i];
    }

    uint64_t remaining = target;
    for (size_t i = 0; i < n && remaining > 0; ++i) {
        uint64_t up = maxv - out.f0.values[i];
        uint64_t down = out.f0.values[i];
        uint64_t cap = std::max(up, down);
        uint64_t delta = std::min(isqrt(remaining), cap);
        if (delta == 0) continue;
        if (up >= delta) {
            out.f1.values[i] = uint32_t(out.f0.values[i] + delta);
        } else {
            out.f1.values[i] = uint32_t(out.f0.values[i] - delta);
        }
        remaining -= delta * delta;
    }
    if (remaining > 0) {
        throw std::invalid_argument(
            "synth_features: target distance not achievable with the drawn base vector");
    }
    out.achieved_distance = protocol::compute_distance(out.f0, out.f1);
    return out;
}

}  // namespace biozero
