#include "biozero/rng.hpp"

#include <vector>

namespace biozero {

mpz_class Rng::below(const mpz_class& bound) {
    if (bound <= 0) return mpz_class(0);
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    size_t nbytes = (bits + 7) / 8;
    unsigned top_mask = bits % 8 ? ((1u << (bits % 8)) - 1) : 0xff;
    std::vector<uint8_t> buf(nbytes);
    for (;;) {
        fill_bytes(buf);
        buf[0] &= uint8_t(top_mask);
        mpz_class v;
        mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
        if (v < bound) return v;
    }
}

}  // namespace biozero
