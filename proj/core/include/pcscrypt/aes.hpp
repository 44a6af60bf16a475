#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

namespace pcscrypt::fpe {

using AesBlock = std::array<std::uint8_t, 16>;

/// Forward AES block encryption (FIPS-197) behind a narrow interface: the key
/// schedule is expanded once and encrypt_block() is const and reentrant.
/// Accepts 16-, 24- or 32-byte keys.
class AesBlockCipher {
public:
    explicit AesBlockCipher(std::span<const std::uint8_t> key);
    ~AesBlockCipher();

    AesBlockCipher(const AesBlockCipher& other);
    AesBlockCipher& operator=(const AesBlockCipher& other);
    AesBlockCipher(AesBlockCipher&&) noexcept;
    AesBlockCipher& operator=(AesBlockCipher&&) noexcept;

    void encrypt_block(const AesBlock& in, AesBlock& out) const noexcept;

    [[nodiscard]] AesBlock encrypt_block(const AesBlock& in) const noexcept {
        AesBlock out;
        encrypt_block(in, out);
        return out;
    }

    [[nodiscard]] std::size_t key_bits() const noexcept { return key_bits_; }

private:
    struct Schedule;
    std::unique_ptr<Schedule> schedule_;
    std::size_t key_bits_ = 0;
};

}  // namespace pcscrypt::fpe
