#include "pcscrypt/aes.hpp"

// AES_KEY is immutable once expanded, so encrypt_block() is reentrant.
#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/aes.h>

#include "pcscrypt/error.hpp"

namespace pcscrypt::fpe {

struct AesBlockCipher::Schedule {
    AES_KEY key;
};

AesBlockCipher::AesBlockCipher(std::span<const std::uint8_t> key) : schedule_(std::make_unique<Schedule>()) {
    if (key.size() != 16 && key.size() != 24 && key.size() != 32) {
        throw ParameterError("AES key must be 16, 24 or 32 bytes, got " + std::to_string(key.size()));
    }
    key_bits_ = key.size() * 8;
    if (AES_set_encrypt_key(key.data(), static_cast<int>(key_bits_), &schedule_->key) != 0) {
        throw ParameterError("AES key schedule failed");
    }
}

AesBlockCipher::~AesBlockCipher() = default;

AesBlockCipher::AesBlockCipher(const AesBlockCipher& other)
    : schedule_(std::make_unique<Schedule>(*other.schedule_)), key_bits_(other.key_bits_) {}

AesBlockCipher& AesBlockCipher::operator=(const AesBlockCipher& other) {
    if (this != &other) {
        schedule_ = std::make_unique<Schedule>(*other.schedule_);
        key_bits_ = other.key_bits_;
    }
    return *this;
}

AesBlockCipher::AesBlockCipher(AesBlockCipher&&) noexcept = default;
AesBlockCipher& AesBlockCipher::operator=(AesBlockCipher&&) noexcept = default;

void AesBlockCipher::encrypt_block(const AesBlock& in, AesBlock& out) const noexcept {
    AES_encrypt(in.data(), out.data(), &schedule_->key);
}

}  // namespace pcscrypt::fpe
