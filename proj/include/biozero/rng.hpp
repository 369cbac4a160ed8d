#ifndef BIOZERO_RNG_HPP_
#define BIOZERO_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

#include <gmpxx.h>

namespace biozero {

/// Deterministic random source. Seeded instances reproduce the same stream on
/// every platform (mt19937_64 has a pinned specification), which is what the
/// golden-transcript and bench fixtures rely on. Not a CSPRNG; the protocol
/// layer takes the generator as a parameter so deployments can substitute an
/// OS-entropy implementation behind the same interface.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    static Rng nondeterministic() {
        std::random_device rd;
        uint64_t s = (uint64_t(rd()) << 32) ^ rd();
        return Rng(s);
    }

    uint64_t next_u64() { return engine_(); }

    void fill_bytes(std::span<uint8_t> out) {
        size_t i = 0;
        while (i < out.size()) {
            uint64_t w = engine_();
            for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
                out[i] = uint8_t(w >> (8 * b));
            }
        }
    }

    /// Uniform integer in [0, bound) by rejection sampling.
    mpz_class below(const mpz_class& bound);

private:
    std::mt19937_64 engine_;
};

}  // namespace biozero

#endif  // BIOZERO_RNG_HPP_
