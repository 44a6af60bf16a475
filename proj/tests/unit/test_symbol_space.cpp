#include <gtest/gtest.h>

#include <set>

#include "pcscrypt/error.hpp"
#include "pcscrypt/symbol_space.hpp"

using namespace pcscrypt;
using namespace pcscrypt::alphabet;
using codec::Symbol8b10b;
namespace sym = codec::symbols;

TEST(SymbolSpace, DataBytesMapToThemselves) {
    for (unsigned v = 0; v < 256; ++v) {
        EXPECT_EQ(map_symbol(Symbol8b10b::data(static_cast<std::uint8_t>(v))).value(), v);
    }
}

TEST(SymbolSpace, ControlCodesMapToTail) {
    EXPECT_EQ(map_symbol(sym::K28_0).value(), 256);
    EXPECT_EQ(map_symbol(sym::K28_5).value(), 261);
    EXPECT_EQ(map_symbol(Symbol8b10b{0xDC, true}).value(), 262);
    EXPECT_EQ(map_symbol(sym::K23_7).value(), 263);
    EXPECT_EQ(map_symbol(sym::K27_7).value(), 264);
    EXPECT_EQ(map_symbol(sym::K29_7).value(), 265);
    EXPECT_EQ(map_symbol(sym::K30_7).value(), 266);
}

TEST(SymbolSpace, K28_7IsExcluded) {
    EXPECT_THROW((void)map_symbol(sym::K28_7), ExcludedSymbolError);
    EXPECT_FALSE(is_mappable(sym::K28_7));
}

TEST(SymbolSpace, InvalidControlRejected) {
    EXPECT_THROW((void)map_symbol(Symbol8b10b{0x00, true}), InvalidSymbolError);
    EXPECT_FALSE(is_mappable(Symbol8b10b{0x00, true}));
}

TEST(SymbolSpace, BijectionOverAllIndices) {
    std::set<std::pair<int, bool>> seen;
    for (std::uint32_t i = 0; i < kRadix; ++i) {
        const auto s = reverse_map(i);
        EXPECT_TRUE(is_mappable(s));
        EXPECT_NE(s, sym::K28_7);
        EXPECT_EQ(map_symbol(s).value(), i);
        seen.insert({s.value, s.is_control});
    }
    EXPECT_EQ(seen.size(), 267u);
}

TEST(SymbolSpace, IndexRangeChecked) {
    EXPECT_THROW(SymbolIndex(267), RangeError);
    EXPECT_THROW((void)reverse_map(std::uint32_t{267}), RangeError);
    EXPECT_NO_THROW(SymbolIndex(266));
}

TEST(SymbolSpace, ModularArithmeticExhaustive) {
    for (std::uint32_t a = 0; a < kRadix; ++a) {
        for (std::uint32_t k = 0; k < kRadix; ++k) {
            const auto c = add_mod(SymbolIndex(a), SymbolIndex(k));
            ASSERT_EQ(c.value(), (a + k) % kRadix);
            ASSERT_EQ(sub_mod(c, SymbolIndex(k)).value(), a);
        }
    }
}
