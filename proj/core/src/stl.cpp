#include "archmark/stl.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "archmark/error.hpp"

namespace archmark {
namespace {

static_assert(std::endian::native == std::endian::little, "binary STL I/O assumes a little-endian host");

constexpr std::size_t kHeaderBytes = 80;
constexpr std::size_t kRecordBytes = 50;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::parse, msg); }

float read_f32(const std::uint8_t* p)
{
    float v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

std::uint32_t read_u32(const std::uint8_t* p)
{
    std::uint32_t v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

bool starts_with_solid(std::span<const std::uint8_t> bytes)
{
    std::size_t i = 0;
    while (i < bytes.size() && std::isspace(bytes[i]))
        ++i;
    static constexpr std::string_view kSolid = "solid";
    if (bytes.size() - i < kSolid.size())
        return false;
    return std::memcmp(bytes.data() + i, kSolid.data(), kSolid.size()) == 0;
}

TriangleSoup parse_binary(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kHeaderBytes + 4)
        fail("binary STL truncated: " + std::to_string(bytes.size()) + " bytes, header needs 84");
    const std::uint32_t count = read_u32(bytes.data() + kHeaderBytes);
    const std::size_t expected = kHeaderBytes + 4 + std::size_t(count) * kRecordBytes;
    if (bytes.size() < expected) {
        const std::size_t complete = (bytes.size() - kHeaderBytes - 4) / kRecordBytes;
        fail("binary STL truncated: header declares " + std::to_string(count) + " triangles but record " +
             std::to_string(complete) + " at byte " + std::to_string(kHeaderBytes + 4 + complete * kRecordBytes) +
             " is incomplete");
    }
    if (bytes.size() > expected)
        fail("binary STL triangle count mismatch: header declares " + std::to_string(count) + " triangles (" +
             std::to_string(expected) + " bytes) but file has " + std::to_string(bytes.size()) + " bytes");

    TriangleSoup soup;
    soup.triangles.reserve(count);
    soup.stored_normals.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const std::uint8_t* rec = bytes.data() + kHeaderBytes + 4 + t * kRecordBytes;
        Vec3 n(read_f32(rec), read_f32(rec + 4), read_f32(rec + 8));
        std::array<Vec3, 3> tri;
        for (int v = 0; v < 3; ++v) {
            const std::uint8_t* p = rec + 12 + v * 12;
            tri[v] = Vec3(read_f32(p), read_f32(p + 4), read_f32(p + 8));
            if (!tri[v].allFinite())
                fail("binary STL non-finite coordinate at byte " + std::to_string(p - bytes.data()));
        }
        soup.stored_normals.push_back(n);
        soup.triangles.push_back(tri);
    }
    return soup;
}

class AsciiReader {
public:
    explicit AsciiReader(std::string_view text) : text_(text) {}

    /// Next whitespace-delimited token, or empty at end of input.
    std::string_view next()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n')
                ++line_;
            ++pos_;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        token_line_ = line_;
        return text_.substr(start, pos_ - start);
    }

    void skip_line()
    {
        while (pos_ < text_.size() && text_[pos_] != '\n')
            ++pos_;
    }

    void expect(std::string_view keyword)
    {
        const auto tok = next();
        if (tok != keyword)
            fail("ASCII STL line " + std::to_string(token_line_) + ": expected '" + std::string(keyword) +
                 "', found '" + std::string(tok) + "'");
    }

    double number()
    {
        const auto tok = next();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
            fail("ASCII STL line " + std::to_string(token_line_) + ": non-numeric token '" + std::string(tok) + "'");
        return v;
    }

    Vec3 vec3()
    {
        const double x = number();
        const double y = number();
        const double z = number();
        return {x, y, z};
    }

    std::size_t line() const { return token_line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t token_line_ = 1;
};

TriangleSoup parse_ascii(std::span<const std::uint8_t> bytes)
{
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    AsciiReader in(text);
    in.expect("solid");
    in.skip_line(); // solid name

    TriangleSoup soup;
    for (;;) {
        const auto tok = in.next();
        if (tok == "endsolid")
            break;
        if (tok.empty())
            fail("ASCII STL line " + std::to_string(in.line()) + ": missing 'endsolid'");
        if (tok != "facet")
            fail("ASCII STL line " + std::to_string(in.line()) + ": expected 'facet', found '" + std::string(tok) + "'");
        in.expect("normal");
        const Vec3 n = in.vec3();
        in.expect("outer");
        in.expect("loop");
        std::array<Vec3, 3> tri;
        int nverts = 0;
        for (;;) {
            const auto kw = in.next();
            if (kw == "endloop")
                break;
            if (kw != "vertex")
                fail("ASCII STL line " + std::to_string(in.line()) + ": expected 'vertex', found '" +
                     std::string(kw) + "'");
            const Vec3 p = in.vec3();
            if (nverts < 3)
                tri[nverts] = p;
            ++nverts;
        }
        if (nverts != 3)
            fail("ASCII STL line " + std::to_string(in.line()) + ": facet has " + std::to_string(nverts) +
                 " vertices, expected 3");
        in.expect("endfacet");
        soup.triangles.push_back(tri);
        soup.stored_normals.push_back(n);
    }
    return soup;
}

void put_f32(std::vector<std::uint8_t>& out, float v)
{
    std::uint8_t b[4];
    std::memcpy(b, &v, 4);
    out.insert(out.end(), b, b + 4);
}

} // namespace

TriangleSoup parse_stl(std::span<const std::uint8_t> bytes)
{
    if (bytes.empty())
        fail("empty STL input");
    // A binary file may legitimately start with "solid" in its header, so the
    // exact binary size test takes precedence.
    if (bytes.size() >= kHeaderBytes + 4) {
        const std::uint32_t count = read_u32(bytes.data() + kHeaderBytes);
        if (bytes.size() == kHeaderBytes + 4 + std::size_t(count) * kRecordBytes)
            return parse_binary(bytes);
    }
    if (starts_with_solid(bytes))
        return parse_ascii(bytes);
    return parse_binary(bytes);
}

TriangleSoup read_stl(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_stl(bytes);
}

std::vector<std::uint8_t> write_binary_stl(const TriangleSoup& soup, std::string_view header)
{
    std::vector<std::uint8_t> out(kHeaderBytes, 0);
    std::memcpy(out.data(), header.data(), std::min(header.size(), kHeaderBytes));
    // Binary headers must not begin with "solid" or readers may take them for ASCII.
    if (header.substr(0, 5) == "solid")
        out[0] = 'S';
    const auto count = static_cast<std::uint32_t>(soup.triangles.size());
    std::uint8_t cb[4];
    std::memcpy(cb, &count, 4);
    out.insert(out.end(), cb, cb + 4);
    out.reserve(out.size() + count * kRecordBytes);
    const bool keep_normals = soup.stored_normals.size() == soup.triangles.size();
    for (std::size_t t = 0; t < soup.triangles.size(); ++t) {
        const auto& tri = soup.triangles[t];
        Vec3 n;
        if (keep_normals) {
            n = soup.stored_normals[t];
        } else {
            n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
            if (n.norm() > 0)
                n.normalize();
        }
        for (int k = 0; k < 3; ++k)
            put_f32(out, static_cast<float>(n[k]));
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k)
                put_f32(out, static_cast<float>(tri[v][k]));
        out.push_back(0);
        out.push_back(0);
    }
    return out;
}

void save_binary_stl(const TriangleSoup& soup, const std::filesystem::path& path)
{
    const auto bytes = write_binary_stl(soup);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::invalid_input, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace archmark
