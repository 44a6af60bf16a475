#include "pcscrypt/ctr_stream.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

namespace pcscrypt::ctr {

namespace mp = boost::multiprecision;

namespace {

mp::cpp_int big_pow(std::uint32_t radix, std::size_t exponent) {
    return mp::pow(mp::cpp_int(radix), static_cast<unsigned>(exponent));
}

uint128 to_uint128(const mp::cpp_int& v) {
    uint128 out = 0;
    for (int shift = 0; shift < 128; shift += 32) {
        out |= static_cast<uint128>(static_cast<std::uint32_t>((v >> shift) & 0xFFFFFFFFu)) << shift;
    }
    return out;
}

mp::cpp_int from_uint128(uint128 v) {
    mp::cpp_int out = static_cast<std::uint64_t>(v >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(v);
    return out;
}

void check_digits(std::span<const Digit> digits, std::uint32_t radix) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= radix) {
            throw MalformedInputError("symbol " + std::to_string(digits[i]) + " at offset " + std::to_string(i) +
                                      " is not below radix " + std::to_string(radix));
        }
    }
}

inline Digit combine(Digit p, Digit k, std::uint32_t radix, bool subtract) {
    const std::uint32_t s = subtract ? p + radix - k : static_cast<std::uint32_t>(p) + k;
    return static_cast<Digit>(s >= radix ? s - radix : s);
}

}  // namespace

Ff3Permutation::Ff3Permutation(const fpe::CipherKey& key, std::uint32_t radix, std::size_t block_size)
    : cipher_(key, fpe::Ff3Params::for_radix(radix)), tweak_(key.tweak), block_size_(block_size) {
    const auto& p = cipher_.params();
    if (block_size < p.minlen || block_size > p.maxlen) {
        throw ParameterError("block size " + std::to_string(block_size) + " outside FF3 bounds [" +
                             std::to_string(p.minlen) + ", " + std::to_string(p.maxlen) + "] for radix " +
                             std::to_string(radix));
    }
}

void Ff3Permutation::permute(std::span<const Digit> in, std::span<Digit> out) const {
    cipher_.encrypt_digits(in, out, tweak_);
}

// ---------------------------------------------------------------------------
// CounterState

CounterState::CounterState(uint128 value, std::uint32_t radix, std::size_t block_size) : radix_(radix) {
    const auto numeral = fpe::str(value, block_size, radix);
    digits_.assign(numeral.digits().begin(), numeral.digits().end());
}

CounterState CounterState::last(std::uint32_t radix, std::size_t block_size) {
    CounterState c;
    c.radix_ = radix;
    c.digits_.assign(block_size, static_cast<Digit>(radix - 1));
    return c;
}

void CounterState::increment() noexcept {
    for (std::size_t i = digits_.size(); i-- > 0;) {
        if (digits_[i] + 1u < radix_) {
            ++digits_[i];
            return;
        }
        digits_[i] = 0;
    }
}

void CounterState::advance(uint128 n) noexcept {
    std::uint32_t carry = 0;
    for (std::size_t i = digits_.size(); i-- > 0 && (n != 0 || carry != 0);) {
        const auto add = static_cast<std::uint32_t>(n % radix_);
        n /= radix_;
        const std::uint32_t s = digits_[i] + add + carry;
        digits_[i] = static_cast<Digit>(s % radix_);
        carry = s / radix_;
    }
}

// ---------------------------------------------------------------------------
// Configuration bounds

uint128 block_budget(std::uint32_t radix, std::size_t block_size) {
    return to_uint128(mp::sqrt(big_pow(radix, block_size)));
}

ConfigReport validate_config(const StreamCipherConfig& cfg) {
    ConfigReport report;
    const auto params = fpe::Ff3Params::for_radix(cfg.radix);
    auto ff3 = fpe::validate_params(params);
    report.violations = std::move(ff3.violations);
    if (!report.ok()) return report;

    if (cfg.blocksize < params.minlen || cfg.blocksize > params.maxlen) {
        report.violations.push_back("blocksize " + std::to_string(cfg.blocksize) + " outside [" +
                                    std::to_string(params.minlen) + ", " + std::to_string(params.maxlen) +
                                    "] allowed by FF3 at radix " + std::to_string(cfg.radix));
    }
    if (cfg.bits_per_symbol == 0) {
        report.violations.emplace_back("bits_per_symbol must be positive");
        return report;
    }

    const mp::cpp_int space = big_pow(cfg.radix, cfg.blocksize);
    const mp::cpp_int q = mp::sqrt(space);
    report.block_budget = q.str();
    report.data_limit_bits = mp::cpp_int(q * cfg.blocksize * cfg.bits_per_symbol).str();
    report.log2_security_margin =
        0.5 * static_cast<double>(cfg.blocksize) * std::log2(static_cast<double>(cfg.radix)) +
        std::log2(static_cast<double>(cfg.blocksize));

    const mp::cpp_int bb = mp::cpp_int(cfg.blocksize) * cfg.bits_per_symbol;
    if (space * bb * bb < (mp::cpp_int(1) << 142)) {
        report.violations.push_back("sqrt(radix^B)*B >= 2^71/b fails: radix=" + std::to_string(cfg.radix) +
                                    " B=" + std::to_string(cfg.blocksize) + " b=" +
                                    std::to_string(cfg.bits_per_symbol) + " gives log2(sqrt(R^B)*B) = " +
                                    std::to_string(report.log2_security_margin) + " < " +
                                    std::to_string(71.0 - std::log2(static_cast<double>(cfg.bits_per_symbol))));
    }
    if (from_uint128(cfg.init_counter) >= space) {
        report.violations.push_back("init_counter " + fpe::to_decimal(cfg.init_counter) + " >= radix^B");
    }
    return report;
}

// ---------------------------------------------------------------------------
// CtrMode

CtrMode::CtrMode(std::shared_ptr<const BlockPermutation> permutation, CounterState init,
                 std::optional<uint128> block_limit)
    : permutation_(std::move(permutation)), init_(std::move(init)), block_limit_(block_limit) {
    if (init_.radix() != permutation_->radix() || init_.block_size() != permutation_->block_size()) {
        throw ParameterError("counter format does not match the block permutation");
    }
}

KeystreamBlock CtrMode::keystream_block(const CounterState& counter) const {
    KeystreamBlock out(block_size());
    permutation_->permute(counter.digits(), out);
    return out;
}

std::vector<Digit> CtrMode::keystream(const CounterState& first, std::size_t n_blocks, unsigned threads) const {
    const std::size_t b = block_size();
    std::vector<Digit> out(n_blocks * b);
    auto fill = [&](std::size_t begin, std::size_t end) {
        CounterState counter = first;
        counter.advance(begin);
        for (std::size_t i = begin; i < end; ++i) {
            permutation_->permute(counter.digits(), std::span(out).subspan(i * b, b));
            counter.increment();
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    constexpr std::size_t kMinBlocksPerWorker = 512;
    const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(1, n_blocks / kMinBlocksPerWorker));
    if (workers <= 1) {
        fill(0, n_blocks);
        return out;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n_blocks + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n_blocks, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(fill, begin, end);
        }
    }
    return out;
}

std::vector<Digit> CtrMode::apply(std::span<const Digit> input, bool subtract, unsigned threads) const {
    const std::uint32_t radix = this->radix();
    check_digits(input, radix);
    const std::size_t b = block_size();
    const std::size_t n_blocks = (input.size() + b - 1) / b;
    if (block_limit_ && n_blocks > *block_limit_) {
        throw BudgetExceededError("message needs " + std::to_string(n_blocks) + " keystream blocks, budget is " +
                                  fpe::to_decimal(*block_limit_));
    }
    const auto ks = keystream(init_, n_blocks, threads);
    std::vector<Digit> out(input.size());
    // Keystream symbol i pairs with input symbol i; the final partial block
    // therefore uses the leading (most significant) symbols of its block.
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = combine(input[i], ks[i], radix, subtract);
    return out;
}

std::vector<Digit> CtrMode::encrypt(std::span<const Digit> plaintext, unsigned threads) const {
    return apply(plaintext, false, threads);
}

std::vector<Digit> CtrMode::decrypt(std::span<const Digit> ciphertext, unsigned threads) const {
    return apply(ciphertext, true, threads);
}

namespace {

void require_valid(const StreamCipherConfig& cfg) {
    if (auto report = validate_config(cfg); !report.ok()) {
        throw ConfigError("invalid stream cipher configuration: " + report.summary());
    }
}

}  // namespace

CtrMode make_ctr(const StreamCipherConfig& cfg) {
    require_valid(cfg);
    return CtrMode(std::make_shared<Ff3Permutation>(cfg.key, cfg.radix, cfg.blocksize),
                   CounterState(cfg.init_counter, cfg.radix, cfg.blocksize), block_budget(cfg.radix, cfg.blocksize));
}

KeystreamBlock keystream_block(const StreamCipherConfig& cfg, const CounterState& counter) {
    return make_ctr(cfg).keystream_block(counter);
}

std::vector<Digit> encrypt_message(const StreamCipherConfig& cfg, std::span<const Digit> plaintext) {
    return make_ctr(cfg).encrypt(plaintext);
}

std::vector<Digit> decrypt_message(const StreamCipherConfig& cfg, std::span<const Digit> ciphertext) {
    return make_ctr(cfg).decrypt(ciphertext);
}

// ---------------------------------------------------------------------------
// SymbolStream

SymbolStream::SymbolStream(std::shared_ptr<const BlockPermutation> permutation, CounterState init,
                           Direction direction, std::optional<uint128> block_limit)
    : permutation_(std::move(permutation)),
      counter_(std::move(init)),
      direction_(direction),
      block_limit_(block_limit),
      block_(permutation_->block_size()),
      position_(permutation_->block_size()),
      radix_(permutation_->radix()) {
    if (counter_.radix() != radix_ || counter_.block_size() != permutation_->block_size()) {
        throw ParameterError("counter format does not match the block permutation");
    }
}

SymbolStream SymbolStream::from_config(const StreamCipherConfig& cfg, Direction direction) {
    require_valid(cfg);
    return SymbolStream(std::make_shared<Ff3Permutation>(cfg.key, cfg.radix, cfg.blocksize),
                        CounterState(cfg.init_counter, cfg.radix, cfg.blocksize), direction,
                        block_budget(cfg.radix, cfg.blocksize));
}

void SymbolStream::refresh() {
    if (block_limit_ && blocks_consumed_ >= *block_limit_) {
        throw BudgetExceededError("keystream budget of " + fpe::to_decimal(*block_limit_) +
                                  " blocks exhausted; rekey");
    }
    permutation_->permute(counter_.digits(), block_);
    counter_.increment();
    ++blocks_consumed_;
    position_ = 0;
}

Digit SymbolStream::next(Digit symbol) {
    if (symbol >= radix_) {
        throw MalformedInputError("symbol " + std::to_string(symbol) + " is not below radix " + std::to_string(radix_));
    }
    if (position_ == block_.size()) refresh();
    return combine(symbol, block_[position_++], radix_, direction_ == Direction::decrypt);
}

void SymbolStream::process(std::span<const Digit> in, std::span<Digit> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = next(in[i]);
}

}  // namespace pcscrypt::ctr
