#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archmark/geometry.hpp"

namespace archmark {

/// Unordered triangle list as stored in an STL file (millimetres).
struct TriangleSoup {
    std::vector<std::array<Vec3, 3>> triangles;
    /// Normals as written in the file; empty if the source carried none.
    /// Never used for geometry.
    std::vector<Vec3> stored_normals;

    std::size_t size() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }
    bool operator==(const TriangleSoup&) const = default;
};

/// Parses binary or ASCII STL. Throws Error(ErrorKind::parse) with the byte
/// offset (binary) or line number (ASCII) of the problem.
TriangleSoup parse_stl(std::span<const std::uint8_t> bytes);
TriangleSoup read_stl(const std::filesystem::path& path);

/// Binary STL encoding. Coordinates are narrowed to float32. Stored normals
/// are written back when present, otherwise computed from the winding.
std::vector<std::uint8_t> write_binary_stl(const TriangleSoup& soup, std::string_view header = "archmark");
void save_binary_stl(const TriangleSoup& soup, const std::filesystem::path& path);

} // namespace archmark
