#include "biozero/hash.hpp"

#include <stdexcept>

#include <openssl/evp.h>

#include "biozero/group.hpp"

namespace biozero {

Digest sha256(std::span<const uint8_t> data) {
    detail::count_hash();
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("SHA-256 failed");
    }
    return out;
}

}  // namespace biozero
