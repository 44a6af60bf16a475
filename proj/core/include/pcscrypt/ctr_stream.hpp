#pragma once

// Counter mode over a format-preserving block permutation with modulo-radix
// symbol addition, plus the one-symbol-per-call streaming form used on the
// PCS datapath.
//
// Conventions shared by both link ends:
//  - counter value v is fed to the block cipher as str(v, B, radix),
//    most-significant digit first;
//  - keystream symbol S_0 is the first digit of the cipher output and the
//    symbol selector consumes S_0, S_1, ... in order;
//  - a final partial block of r symbols uses the first r keystream symbols.
//
// A (key, init_counter) pair must never encrypt two different streams.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcscrypt/error.hpp"
#include "pcscrypt/ff3.hpp"
#include "pcscrypt/numeral.hpp"

namespace pcscrypt::ctr {

using Digit = std::uint16_t;
using fpe::uint128;

/// Keyed permutation of fixed-length numeral strings (F_K).
class BlockPermutation {
public:
    virtual ~BlockPermutation() = default;
    [[nodiscard]] virtual std::uint32_t radix() const noexcept = 0;
    [[nodiscard]] virtual std::size_t block_size() const noexcept = 0;
    /// `in` and `out` both have block_size() digits. Must be reentrant.
    virtual void permute(std::span<const Digit> in, std::span<Digit> out) const = 0;
};

/// FF3 under a fixed tweak as F_K.
class Ff3Permutation final : public BlockPermutation {
public:
    Ff3Permutation(const fpe::CipherKey& key, std::uint32_t radix, std::size_t block_size);

    [[nodiscard]] std::uint32_t radix() const noexcept override { return cipher_.params().radix; }
    [[nodiscard]] std::size_t block_size() const noexcept override { return block_size_; }
    void permute(std::span<const Digit> in, std::span<Digit> out) const override;

private:
    fpe::Ff3Cipher cipher_;
    fpe::Tweak tweak_;
    std::size_t block_size_;
};

/// Counter value held as its B-digit numeral, so it wraps modulo radix^B at
/// any block size.
class CounterState {
public:
    /// Throws RangeError when value >= radix^block_size.
    CounterState(uint128 value, std::uint32_t radix, std::size_t block_size);

    /// The largest counter, radix^B - 1.
    [[nodiscard]] static CounterState last(std::uint32_t radix, std::size_t block_size);

    void increment() noexcept;
    /// Adds `n` modulo radix^B.
    void advance(uint128 n) noexcept;

    [[nodiscard]] std::span<const Digit> digits() const noexcept { return digits_; }
    [[nodiscard]] fpe::NumeralString numeral() const { return fpe::NumeralString(digits_, radix_); }
    [[nodiscard]] std::uint32_t radix() const noexcept { return radix_; }
    [[nodiscard]] std::size_t block_size() const noexcept { return digits_.size(); }

    friend bool operator==(const CounterState&, const CounterState&) = default;

private:
    CounterState() = default;
    std::vector<Digit> digits_;
    std::uint32_t radix_ = 2;
};

struct StreamCipherConfig {
    fpe::CipherKey key;
    std::uint32_t radix = 267;
    std::size_t blocksize = 22;
    uint128 init_counter = 0;
    unsigned bits_per_symbol = 8;
};

/// Outcome of validate_config(). Big values are decimal strings because
/// radix^B exceeds 128 bits at the PCS profile.
struct ConfigReport : ValidationReport {
    /// Q = floor(sqrt(radix^B)): blocks encryptable under one key.
    std::string block_budget;
    /// L = Q * B * b bits.
    std::string data_limit_bits;
    /// log2(sqrt(radix^B) * B), for display next to the 71 - log2(b) bound.
    double log2_security_margin = 0.0;
};

/// FF3 bounds for (radix, blocksize), then sqrt(radix^B) * B >= 2^71 / b
/// evaluated exactly as radix^B * (B*b)^2 >= 2^142, then init_counter < radix^B.
[[nodiscard]] ConfigReport validate_config(const StreamCipherConfig& cfg);

/// floor(sqrt(radix^B)). Always fits in 128 bits for FF3-legal parameters.
[[nodiscard]] uint128 block_budget(std::uint32_t radix, std::size_t block_size);

using KeystreamBlock = std::vector<Digit>;

/// Counter mode over an arbitrary block permutation.
class CtrMode {
public:
    /// `block_limit`, when set, caps the number of keystream blocks one
    /// message may consume; exceeding it throws BudgetExceededError.
    CtrMode(std::shared_ptr<const BlockPermutation> permutation, CounterState init,
            std::optional<uint128> block_limit = std::nullopt);

    /// F_K applied to the counter's numeral.
    [[nodiscard]] KeystreamBlock keystream_block(const CounterState& counter) const;

    /// Concatenated keystream for `n_blocks` counters starting at `first`.
    /// Blocks are independent, so the work is split across `threads` workers
    /// (0 = hardware concurrency); the result is identical for any split.
    [[nodiscard]] std::vector<Digit> keystream(const CounterState& first, std::size_t n_blocks,
                                               unsigned threads = 0) const;

    [[nodiscard]] std::vector<Digit> encrypt(std::span<const Digit> plaintext, unsigned threads = 0) const;
    [[nodiscard]] std::vector<Digit> decrypt(std::span<const Digit> ciphertext, unsigned threads = 0) const;

    [[nodiscard]] const CounterState& initial_counter() const noexcept { return init_; }
    [[nodiscard]] std::uint32_t radix() const noexcept { return permutation_->radix(); }
    [[nodiscard]] std::size_t block_size() const noexcept { return permutation_->block_size(); }

private:
    std::vector<Digit> apply(std::span<const Digit> input, bool subtract, unsigned threads) const;

    std::shared_ptr<const BlockPermutation> permutation_;
    CounterState init_;
    std::optional<uint128> block_limit_;
};

/// Validates `cfg` (ConfigError with the report on failure) and builds the
/// FF3-backed counter mode with the Q-block budget armed.
[[nodiscard]] CtrMode make_ctr(const StreamCipherConfig& cfg);

[[nodiscard]] KeystreamBlock keystream_block(const StreamCipherConfig& cfg, const CounterState& counter);
[[nodiscard]] std::vector<Digit> encrypt_message(const StreamCipherConfig& cfg, std::span<const Digit> plaintext);
[[nodiscard]] std::vector<Digit> decrypt_message(const StreamCipherConfig& cfg, std::span<const Digit> ciphertext);

enum class Direction : std::uint8_t { encrypt, decrypt };

/// One symbol in, one symbol out. Holds the current keystream block and a
/// modulo-B position; the block is refreshed from the next counter value
/// whenever the position wraps.
class SymbolStream {
public:
    SymbolStream(std::shared_ptr<const BlockPermutation> permutation, CounterState init, Direction direction,
                 std::optional<uint128> block_limit = std::nullopt);

    /// Validated FF3 stream for `cfg`, Q-block budget armed.
    [[nodiscard]] static SymbolStream from_config(const StreamCipherConfig& cfg, Direction direction);

    /// Throws MalformedInputError for symbol >= radix and BudgetExceededError
    /// when a new block would exceed the budget.
    Digit next(Digit symbol);
    void process(std::span<const Digit> in, std::span<Digit> out);

    /// The counter value the next refresh will use.
    [[nodiscard]] const CounterState& counter() const noexcept { return counter_; }
    [[nodiscard]] uint128 blocks_consumed() const noexcept { return blocks_consumed_; }
    /// Position of the next keystream symbol inside the current block.
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    void refresh();

    std::shared_ptr<const BlockPermutation> permutation_;
    CounterState counter_;
    Direction direction_;
    std::optional<uint128> block_limit_;
    KeystreamBlock block_;
    std::size_t position_;
    uint128 blocks_consumed_ = 0;
    std::uint32_t radix_;
};

}  // namespace pcscrypt::ctr
