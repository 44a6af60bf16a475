#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pcscrypt/codec8b10b.hpp"
#include "pcscrypt/ctr_stream.hpp"
#include "pcscrypt/ff3.hpp"
#include "pcscrypt/stat_analysis.hpp"
#include "pcscrypt/symbol_space.hpp"

using namespace pcscrypt;

namespace {

ctr::StreamCipherConfig bench_config() {
    ctr::StreamCipherConfig cfg;
    cfg.key = fpe::CipherKey::from_hex("2b7e151628aed2a6abf7158809cf4f3c");
    return cfg;
}

std::vector<std::uint16_t> random_indices(std::size_t n) {
    std::mt19937_64 rng(1);
    std::vector<std::uint16_t> v(n);
    for (auto& x : v) x = static_cast<std::uint16_t>(rng() % 267);
    return v;
}

void BM_Ff3Block(benchmark::State& state) {
    const fpe::Ff3Cipher cipher(bench_config().key, fpe::Ff3Params::for_radix(267));
    auto block = random_indices(22);
    for (auto _ : state) {
        cipher.encrypt_digits(block, block, fpe::Tweak{});
        benchmark::DoNotOptimize(block.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Ff3Block);

void BM_Keystream(benchmark::State& state) {
    const auto ctr = ctr::make_ctr(bench_config());
    const auto blocks = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto ks = ctr.keystream(ctr.initial_counter(), blocks, static_cast<unsigned>(state.range(1)));
        benchmark::DoNotOptimize(ks.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(blocks * 22));
}
BENCHMARK(BM_Keystream)->Args({4096, 1})->Args({4096, 0});

void BM_SymbolStream(benchmark::State& state) {
    auto stream = ctr::SymbolStream::from_config(bench_config(), ctr::Direction::encrypt);
    const auto in = random_indices(1 << 16);
    std::vector<std::uint16_t> out(in.size());
    for (auto _ : state) {
        stream.process(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_SymbolStream);

void BM_Encode8b10b(benchmark::State& state) {
    const auto idx = random_indices(1 << 16);
    std::vector<codec::Symbol8b10b> syms;
    for (const auto i : idx) syms.push_back(alphabet::reverse_map(std::uint32_t{i}));
    codec::Encoder enc;
    for (auto _ : state) {
        for (const auto s : syms) benchmark::DoNotOptimize(enc(s));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(syms.size()));
}
BENCHMARK(BM_Encode8b10b);

void BM_Decode8b10b(benchmark::State& state) {
    const auto idx = random_indices(1 << 16);
    codec::Encoder enc;
    std::vector<codec::TenBitCode> codes;
    for (const auto i : idx) codes.push_back(enc(alphabet::reverse_map(std::uint32_t{i})));
    for (auto _ : state) {
        codec::Decoder dec;
        for (const auto c : codes) benchmark::DoNotOptimize(dec(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(codes.size()));
}
BENCHMARK(BM_Decode8b10b);

void BM_SerialCorrelation(benchmark::State& state) {
    const auto seq = random_indices(25000 + 1000);
    for (auto _ : state) benchmark::DoNotOptimize(stats::serial_correlation(seq, 25000, 1000, 1));
}
BENCHMARK(BM_SerialCorrelation);

}  // namespace

BENCHMARK_MAIN();
