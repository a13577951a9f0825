#include "saft/hashing.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace saft {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr)) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string combine_hashes(const std::vector<std::pair<std::string, std::string>>& parts) {
    std::string joined;
    for (const auto& [label, digest] : parts) {
        joined += label;
        joined += '=';
        joined += digest;
        joined += '\n';
    }
    return sha256_hex(joined);
}

}  // namespace saft
