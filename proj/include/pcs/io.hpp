#pragma once

#include <iosfwd>
#include <string>

#include "pcs/core.hpp"
#include "pcs/metrics.hpp"

namespace pcs {

enum class CloudFormat { Xyz, PlyAscii };

/// Format from the file extension: .xyz or .ply (case-insensitive).
CloudFormat format_from_path(const std::string& path);

/// XYZ: one point per line, three whitespace-separated reals; blank lines and
/// '#' comment lines are skipped. PLY: ASCII header, vertex element with
/// x/y/z properties (other vertex properties skipped positionally), faces
/// ignored. NaN or infinite coordinates are rejected with a ParseError.
PointCloud read_cloud(const std::string& path);
PointCloud read_cloud(const std::string& path, CloudFormat format);
PointCloud read_cloud_stream(std::istream& in, CloudFormat format, const std::string& name);

/// Deterministic byte output: coordinates printed as shortest decimals that
/// round-trip to the exact double. Writing the same cloud twice produces
/// byte-identical files.
void write_cloud(const PointCloud& cloud, const std::string& path);
void write_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format);
void write_cloud_stream(const PointCloud& cloud, std::ostream& out, CloudFormat format);

/// Triangle soup from an ASCII PLY with a face element; faces with more than
/// three vertices are fan-triangulated around their first vertex.
TriangleMesh read_mesh(const std::string& path);
TriangleMesh read_mesh_stream(std::istream& in, const std::string& name);

/// Shortest round-trip decimal form of a double (the writer's number format).
std::string format_double(double value);

} // namespace pcs
