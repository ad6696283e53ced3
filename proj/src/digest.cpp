#include "webharvest/digest.hpp"

#include <openssl/evp.h>

#include "webharvest/errors.hpp"

namespace webharvest {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &md_len, EVP_sha256(), nullptr)) {
        throw Error("sha256 digest failed");
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(md_len * 2, '0');
    for (unsigned int i = 0; i < md_len; ++i) {
        out[i * 2] = digits[md[i] >> 4];
        out[i * 2 + 1] = digits[md[i] & 0xf];
    }
    return out;
}

std::string image_id_from_digest(const std::string& digest_hex) {
    if (digest_hex.size() < 32) throw Error("content digest too short");
    return digest_hex.substr(0, 32);
}

} // namespace webharvest
