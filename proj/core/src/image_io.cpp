#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "tvwf/imaging.hpp"

namespace tvwf {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path);
    return data;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw IoError("write failed on " + path);
}

// --- PGM ---

struct Cursor {
    const std::string& data;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < data.size()) {
            const unsigned char c = static_cast<unsigned char>(data[pos]);
            if (std::isspace(c)) {
                ++pos;
            } else if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    // Returns the value and the byte offset where its token started.
    std::pair<long, std::size_t> parse_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos;
        if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
            throw ParseError(std::string("expected ") + what, start);
        long v = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            v = v * 10 + (data[pos] - '0');
            if (v > 1'000'000'000L) throw ParseError(std::string(what) + " out of range", start);
            ++pos;
        }
        return {v, start};
    }
};

ImageBuffer parse_pgm(const std::string& data) {
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
        throw ParseError("not a P2/P5 PGM file", 0);
    const bool binary = data[1] == '5';
    Cursor cur{data, 2};

    const auto [w, w_at] = cur.parse_uint("width");
    const auto [h, h_at] = cur.parse_uint("height");
    if (w < 1) throw ParseError("width must be positive", w_at);
    if (h < 1) throw ParseError("height must be positive", h_at);
    const auto [maxval, maxval_at] = cur.parse_uint("maxval");
    if (maxval != 255 && maxval != 65535)
        throw ParseError("unsupported maxval (expected 255 or 65535)", maxval_at);

    ImageBuffer buf;
    buf.width = static_cast<int>(w);
    buf.height = static_cast<int>(h);
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    buf.pixels.resize(count);
    // exact division, not reciprocal-multiply: levels must decode to the
    // canonical v/maxval double so quantized images round trip bitwise
    const double max_d = static_cast<double>(maxval);

    if (binary) {
        if (cur.pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[cur.pos])))
            throw ParseError("expected single whitespace before binary pixel data", cur.pos);
        ++cur.pos;
        const std::size_t bytes_per = maxval == 255 ? 1 : 2;
        if (data.size() - cur.pos < count * bytes_per)
            throw ParseError("truncated pixel data", data.size());
        for (std::size_t k = 0; k < count; ++k) {
            long v;
            if (bytes_per == 1) {
                v = static_cast<unsigned char>(data[cur.pos + k]);
            } else {
                const auto hi = static_cast<unsigned char>(data[cur.pos + 2 * k]);
                const auto lo = static_cast<unsigned char>(data[cur.pos + 2 * k + 1]);
                v = (static_cast<long>(hi) << 8) | lo;
            }
            buf.pixels[k] = static_cast<double>(v) / max_d;
        }
        cur.pos += count * bytes_per;
        if (cur.pos != data.size()) throw ParseError("trailing bytes after pixel data", cur.pos);
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            const auto [v, at] = cur.parse_uint("pixel value");
            if (v > maxval) throw ParseError("pixel value exceeds maxval", at);
            buf.pixels[k] = static_cast<double>(v) / max_d;
        }
        cur.skip_space_and_comments();
        if (cur.pos != data.size()) throw ParseError("trailing bytes after pixel data", cur.pos);
    }
    return buf;
}

// --- TVWF float container ---

constexpr std::size_t kTvwfHeader = 16;

std::uint32_t u32_le(const std::string& data, std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(data[at])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(data[at + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(data[at + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(data[at + 3])) << 24;
}

void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

ScalarField parse_tvwf(const std::string& data, double h) {
    if (data.size() < 4 || data.compare(0, 4, "TVWF") != 0)
        throw ParseError("bad magic (expected TVWF)", 0);
    if (data.size() < kTvwfHeader) throw ParseError("truncated header", data.size());
    const std::uint32_t w = u32_le(data, 4);
    const std::uint32_t ht = u32_le(data, 8);
    const std::uint32_t reserved = u32_le(data, 12);
    if (reserved != 0) throw ParseError("nonzero reserved header field", 12);
    if (w < 2 || ht < 2) throw ParseError("dimensions must be at least 2x2", 4);
    if (w > (1u << 20) || ht > (1u << 20)) throw ParseError("dimensions out of range", 4);

    const std::size_t count = static_cast<std::size_t>(w) * ht;
    const std::size_t need = kTvwfHeader + 8 * count;
    if (data.size() < need) throw ParseError("truncated payload", data.size());
    if (data.size() > need) throw ParseError("trailing bytes after payload", need);

    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t at = kTvwfHeader + 8 * k;
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b)
            bits = (bits << 8) |
                   static_cast<unsigned char>(data[at + static_cast<std::size_t>(b)]);
        const double v = std::bit_cast<double>(bits);
        if (!std::isfinite(v)) throw ParseError("non-finite value in payload", at);
        values[k] = v;
    }
    return ScalarField(Grid(static_cast<int>(w), static_cast<int>(ht), h), std::move(values));
}

std::string serialize_tvwf(const ScalarField& u) {
    std::string out;
    out.reserve(kTvwfHeader + 8 * u.values.size());
    out += "TVWF";
    put_u32_le(out, static_cast<std::uint32_t>(u.grid.nx));
    put_u32_le(out, static_cast<std::uint32_t>(u.grid.ny));
    put_u32_le(out, 0);
    for (const double v : u.values) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            out.push_back(static_cast<char>(bits & 0xff));
            bits >>= 8;
        }
    }
    return out;
}

bool ends_with_pgm(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0;
}

}  // namespace

ImageBuffer read_pgm(const std::string& path) { return parse_pgm(read_file(path)); }

void write_pgm(const ImageBuffer& buf, const std::string& path, PgmFlavor flavor, int maxval) {
    if (maxval != 255 && maxval != 65535)
        throw Error("write_pgm: maxval must be 255 or 65535");
    if (buf.width < 1 || buf.height < 1 ||
        static_cast<int>(buf.pixels.size()) != buf.width * buf.height)
        throw Error("write_pgm: inconsistent buffer dimensions");

    std::string out = flavor == PgmFlavor::binary ? "P5\n" : "P2\n";
    out += std::to_string(buf.width) + " " + std::to_string(buf.height) + "\n";
    out += std::to_string(maxval) + "\n";

    std::string line;
    for (const double p : buf.pixels) {
        const double clamped = p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
        const long q = std::lround(clamped * maxval);
        if (flavor == PgmFlavor::binary) {
            if (maxval == 255) {
                out.push_back(static_cast<char>(q));
            } else {
                out.push_back(static_cast<char>((q >> 8) & 0xff));
                out.push_back(static_cast<char>(q & 0xff));
            }
        } else {
            const std::string tok = std::to_string(q);
            if (line.empty()) {
                line = tok;
            } else if (line.size() + 1 + tok.size() > 70) {  // netpbm line limit
                out += line;
                out.push_back('\n');
                line = tok;
            } else {
                line += " " + tok;
            }
        }
    }
    if (flavor == PgmFlavor::ascii && !line.empty()) {
        out += line;
        out.push_back('\n');
    }
    write_file(path, out);
}

ScalarField read_field(const std::string& path, double h) {
    return parse_tvwf(read_file(path), h);
}

void write_field(const ScalarField& u, const std::string& path) {
    write_file(path, serialize_tvwf(u));
}

ImageBuffer read_image(const std::string& path) {
    const std::string data = read_file(path);
    if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5'))
        return parse_pgm(data);
    if (data.size() >= 4 && data.compare(0, 4, "TVWF") == 0) {
        const ScalarField f = parse_tvwf(data, 1.0);
        ImageBuffer buf;
        buf.width = f.grid.nx;
        buf.height = f.grid.ny;
        buf.pixels = f.values;
        return buf;
    }
    throw ParseError("unrecognized image magic", 0);
}

void write_image(const ImageBuffer& buf, const std::string& path) {
    if (ends_with_pgm(path)) {
        write_pgm(buf, path);
    } else {
        write_field(to_field(buf, 1.0), path);
    }
}

}  // namespace tvwf
