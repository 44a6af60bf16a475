#include "pcscrypt/symbol_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "pcscrypt/error.hpp"
#include "pcscrypt/symbol_space.hpp"

namespace pcscrypt::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto hash = s.find('#');
    if (hash != std::string_view::npos) s = s.substr(0, hash);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

SymbolFile read_text(std::istream& in) {
    SymbolFile f;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty()) continue;
        try {
            f.symbols.push_back(codec::parse_symbol(body));
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(number) + ": " + e.what());
        } catch (const InvalidSymbolError& e) {
            throw InvalidSymbolError("line " + std::to_string(number) + ": " + e.what());
        }
        f.lines.push_back(number);
    }
    return f;
}

SymbolFile read_binary(std::istream& in) {
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    constexpr std::size_t kHeader = 4 + 1 + 8;
    if (raw.size() < kHeader || !std::equal(raw.begin(), raw.begin() + 4, kBinaryMagic)) {
        throw FormatError("not a binary symbol file (bad magic)");
    }
    if (static_cast<std::uint8_t>(raw[4]) != kBinaryVersion) {
        throw FormatError("unsupported binary symbol file version " +
                          std::to_string(static_cast<std::uint8_t>(raw[4])));
    }
    std::uint64_t count = 0;
    for (int i = 0; i < 8; ++i) count |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(raw[5 + i])) << (8 * i);
    const std::size_t body = raw.size() - kHeader;
    if (body % 2 != 0 || body / 2 != count) {
        throw FormatError("binary symbol file declares " + std::to_string(count) + " symbols but holds " +
                          std::to_string(body) + " payload bytes");
    }
    SymbolFile f;
    f.symbols.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto flags = static_cast<std::uint8_t>(raw[kHeader + 2 * i]);
        const auto value = static_cast<std::uint8_t>(raw[kHeader + 2 * i + 1]);
        if ((flags & 0xFEu) != 0) {
            throw FormatError("offset " + std::to_string(i) + ": reserved flag bits set");
        }
        const Symbol8b10b s{value, (flags & 1u) != 0};
        if (!s.valid()) {
            throw InvalidSymbolError("offset " + std::to_string(i) + ": K flag on non-control byte " +
                                     std::to_string(value));
        }
        f.symbols.push_back(s);
    }
    return f;
}

}  // namespace

SymbolFormat format_for(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".sym") return SymbolFormat::text;
    if (ext == ".symb") return SymbolFormat::binary;
    if (ext == ".idx") return SymbolFormat::index;
    throw FormatError("unknown symbol file extension '" + ext + "' (expected .sym, .symb or .idx)");
}

std::string SymbolFile::where(std::size_t i) const {
    if (i < lines.size()) return "line " + std::to_string(lines[i]);
    return "offset " + std::to_string(i);
}

SymbolFile read_symbols(std::istream& in, SymbolFormat format) {
    switch (format) {
        case SymbolFormat::text: return read_text(in);
        case SymbolFormat::binary: return read_binary(in);
        case SymbolFormat::index: break;
    }
    SymbolFile f;
    for (const auto i : read_indices(in)) f.symbols.push_back(alphabet::reverse_map(std::uint32_t{i}));
    return f;
}

SymbolFile read_symbols(const std::filesystem::path& path) {
    const auto format = format_for(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_symbols(in, format);
}

void write_symbols(std::ostream& out, std::span<const Symbol8b10b> symbols, SymbolFormat format) {
    switch (format) {
        case SymbolFormat::text:
            for (const auto s : symbols) out << codec::to_string(s) << '\n';
            return;
        case SymbolFormat::binary: {
            out.write(kBinaryMagic, 4);
            out.put(static_cast<char>(kBinaryVersion));
            const std::uint64_t count = symbols.size();
            for (int i = 0; i < 8; ++i) out.put(static_cast<char>((count >> (8 * i)) & 0xFFu));
            std::vector<char> body(2 * symbols.size());
            for (std::size_t i = 0; i < symbols.size(); ++i) {
                body[2 * i] = symbols[i].is_control ? 1 : 0;
                body[2 * i + 1] = static_cast<char>(symbols[i].value);
            }
            out.write(body.data(), static_cast<std::streamsize>(body.size()));
            return;
        }
        case SymbolFormat::index: {
            std::vector<std::uint16_t> idx;
            idx.reserve(symbols.size());
            for (const auto s : symbols) idx.push_back(alphabet::map_symbol(s).value());
            write_indices(out, idx);
            return;
        }
    }
}

void write_symbols(const std::filesystem::path& path, std::span<const Symbol8b10b> symbols) {
    const auto format = format_for(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    write_symbols(out, symbols, format);
    if (!out) throw FormatError("write failed for " + path.string());
}

std::vector<std::uint16_t> read_indices(std::istream& in, std::uint32_t radix) {
    std::vector<std::uint16_t> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty()) continue;
        std::uint32_t v = 0;
        const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc{} || end != body.data() + body.size()) {
            throw FormatError("line " + std::to_string(number) + ": '" + std::string(body) + "' is not an index");
        }
        if (v >= radix) {
            throw FormatError("line " + std::to_string(number) + ": index " + std::to_string(v) +
                              " is not below " + std::to_string(radix));
        }
        out.push_back(static_cast<std::uint16_t>(v));
    }
    return out;
}

void write_indices(std::ostream& out, std::span<const std::uint16_t> indices) {
    std::string buf;
    buf.reserve(indices.size() * 4);
    for (const auto i : indices) {
        buf += std::to_string(i);
        buf += '\n';
    }
    out << buf;
}

std::vector<std::uint16_t> read_index_trace(const std::filesystem::path& path) {
    if (format_for(path) == SymbolFormat::index) {
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open " + path.string());
        return read_indices(in);
    }
    const auto file = read_symbols(path);
    std::vector<std::uint16_t> out;
    out.reserve(file.symbols.size());
    for (std::size_t i = 0; i < file.symbols.size(); ++i) {
        try {
            out.push_back(alphabet::map_symbol(file.symbols[i]).value());
        } catch (const ExcludedSymbolError& e) {
            throw ExcludedSymbolError(file.where(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace pcscrypt::io
