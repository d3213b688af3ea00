#include "core/share_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace alcc {

using nlohmann::json;

namespace {

constexpr char kShareMagic[8] = {'A', 'L', 'C', 'C', 'S', 'H', 'R', '1'};
constexpr char kLccMagic[8] = {'A', 'L', 'C', 'C', 'F', 'X', 'P', '1'};

void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little)
        fail(errc::io, "share files require a little-endian host");
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

std::uint64_t fingerprint_parse(const std::string& hex) {
    return std::strtoull(hex.c_str(), nullptr, 16);
}

void write_file(const std::string& path, const char magic[8], const std::string& header,
                const void* payload, std::size_t payload_bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io, "cannot open for writing: " + path);
    out.write(magic, 8);
    const std::uint64_t hlen = header.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(payload_bytes));
    if (!out) fail(errc::io, "write failed: " + path);
}

json read_header(std::ifstream& in, const char magic[8], const std::string& path) {
    char got[8];
    in.read(got, 8);
    if (!in || std::memcmp(got, magic, 8) != 0) fail(errc::io, "bad share file magic: " + path);
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!in || hlen > (1u << 20)) fail(errc::io, "bad share file header: " + path);
    std::string text(hlen, '\0');
    in.read(text.data(), static_cast<std::streamsize>(hlen));
    if (!in) fail(errc::io, "truncated share file header: " + path);
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        fail(errc::io, std::string("share file header parse: ") + e.what());
    }
}

} // namespace

void save_shares(const ShareSet& s, const std::string& path) {
    require_little_endian();
    json h;
    h["format"] = "cplx128-le";
    h["fingerprint"] = fingerprint_hex(s.fingerprint);
    h["m"] = s.m;
    h["n"] = s.n;
    json idx = json::array();
    for (const auto& [i, mat] : s.shares) {
        if (mat.rows() != s.m || mat.cols() != s.n)
            fail(errc::dimension_mismatch, "save_shares: share shape mismatch");
        idx.push_back(i);
    }
    h["workers"] = idx;
    const std::string header = h.dump();

    std::vector<double> payload;
    payload.reserve(s.shares.size() * s.m * s.n * 2);
    for (const auto& [i, mat] : s.shares)
        for (std::size_t e = 0; e < mat.size(); ++e) {
            payload.push_back(mat.data()[e].real());
            payload.push_back(mat.data()[e].imag());
        }
    write_file(path, kShareMagic, header, payload.data(), payload.size() * sizeof(double));
}

ShareSet load_shares(const std::string& path) {
    require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io, "cannot open: " + path);
    const json h = read_header(in, kShareMagic, path);

    ShareSet s;
    if (h.at("format").get<std::string>() != "cplx128-le")
        fail(errc::io, "unsupported share payload format");
    s.fingerprint = fingerprint_parse(h.at("fingerprint").get<std::string>());
    s.m = h.at("m").get<std::size_t>();
    s.n = h.at("n").get<std::size_t>();
    const auto workers = h.at("workers").get<std::vector<std::uint32_t>>();

    const std::size_t per = s.m * s.n;
    std::vector<double> buf(per * 2);
    for (const auto idx : workers) {
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(double)));
        if (!in) fail(errc::io, "truncated share payload: " + path);
        CMatrix mat(s.m, s.n);
        for (std::size_t e = 0; e < per; ++e) mat.data()[e] = cplx(buf[2 * e], buf[2 * e + 1]);
        s.shares.emplace_back(idx, std::move(mat));
    }
    return s;
}

void save_lcc_shares(const LccShareFile& s, const std::string& path) {
    require_little_endian();
    const std::size_t word_bytes = (s.bits + 7) / 8;
    json h;
    h["format"] = "word-le";
    h["p"] = s.p;
    h["bits"] = s.bits;
    h["delta"] = s.delta;
    h["mode"] = s.mode;
    h["m"] = s.m;
    h["n"] = s.n;
    h["word_bytes"] = word_bytes;
    json idx = json::array();
    for (const auto& [i, words] : s.shares) {
        if (words.size() != s.m * s.n) fail(errc::dimension_mismatch, "save_lcc_shares: share size mismatch");
        idx.push_back(i);
    }
    h["workers"] = idx;
    const std::string header = h.dump();

    std::vector<unsigned char> payload;
    payload.reserve(s.shares.size() * s.m * s.n * word_bytes);
    for (const auto& [i, words] : s.shares)
        for (const std::uint64_t w : words)
            for (std::size_t b = 0; b < word_bytes; ++b)
                payload.push_back(static_cast<unsigned char>((w >> (8 * b)) & 0xff));
    write_file(path, kLccMagic, header, payload.data(), payload.size());
}

LccShareFile load_lcc_shares(const std::string& path) {
    require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io, "cannot open: " + path);
    const json h = read_header(in, kLccMagic, path);

    LccShareFile s;
    if (h.at("format").get<std::string>() != "word-le")
        fail(errc::io, "unsupported share payload format");
    s.p = h.at("p").get<std::uint64_t>();
    s.bits = h.at("bits").get<std::uint32_t>();
    s.delta = h.at("delta").get<double>();
    s.mode = h.at("mode").get<std::string>();
    s.m = h.at("m").get<std::size_t>();
    s.n = h.at("n").get<std::size_t>();
    const std::size_t word_bytes = h.at("word_bytes").get<std::size_t>();
    if (word_bytes != (s.bits + 7) / 8) fail(errc::io, "word size disagrees with bit width");
    const auto workers = h.at("workers").get<std::vector<std::uint32_t>>();

    const std::size_t per = s.m * s.n;
    std::vector<unsigned char> buf(per * word_bytes);
    for (const auto idx : workers) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!in) fail(errc::io, "truncated share payload: " + path);
        std::vector<std::uint64_t> words(per, 0);
        for (std::size_t e = 0; e < per; ++e)
            for (std::size_t b = 0; b < word_bytes; ++b)
                words[e] |= static_cast<std::uint64_t>(buf[e * word_bytes + b]) << (8 * b);
        s.shares.emplace_back(idx, std::move(words));
    }
    return s;
}

} // namespace alcc
