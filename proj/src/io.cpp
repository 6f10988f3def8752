#include "pcs/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace pcs {

namespace {

std::string rtrim_cr(std::string line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok)
        tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& token, const std::string& name, long line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc::result_out_of_range)
        throw ParseError(name, line_no, "number out of range: '" + token + "'");
    if (ec != std::errc() || ptr != end)
        throw ParseError(name, line_no, "not a number: '" + token + "'");
    if (!std::isfinite(value))
        throw ParseError(name, line_no, "non-finite coordinate: '" + token + "'");
    return value;
}

long parse_long(const std::string& token, const std::string& name, long line_no) {
    long value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || value < 0)
        throw ParseError(name, line_no, "not a non-negative integer: '" + token + "'");
    return value;
}

struct PlyElement {
    std::string name;
    long count = 0;
    std::vector<std::string> property_names;   // scalar properties, in order
    bool has_list_property = false;            // face-style element
};

struct PlyHeader {
    std::vector<PlyElement> elements;
    long header_lines = 0;
};

PlyHeader read_ply_header(std::istream& in, const std::string& name) {
    PlyHeader header;
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line))
        throw ParseError(name, 1, "empty file, expected 'ply'");
    ++line_no;
    if (rtrim_cr(line) != "ply")
        throw ParseError(name, 1, "missing 'ply' magic line");

    bool format_seen = false;
    bool ended = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = rtrim_cr(line);
        const auto tokens = split_ws(line);
        if (tokens.empty())
            throw ParseError(name, line_no, "blank line inside header");
        if (tokens[0] == "comment" || tokens[0] == "obj_info")
            continue;
        if (tokens[0] == "format") {
            if (tokens.size() != 3 || tokens[1] != "ascii")
                throw ParseError(name, line_no, "only 'format ascii 1.0' is supported");
            format_seen = true;
        } else if (tokens[0] == "element") {
            if (tokens.size() != 3)
                throw ParseError(name, line_no, "malformed element line");
            PlyElement elem;
            elem.name = tokens[1];
            elem.count = parse_long(tokens[2], name, line_no);
            header.elements.push_back(elem);
        } else if (tokens[0] == "property") {
            if (header.elements.empty())
                throw ParseError(name, line_no, "property before any element");
            if (tokens.size() >= 2 && tokens[1] == "list") {
                if (tokens.size() != 5)
                    throw ParseError(name, line_no, "malformed list property");
                header.elements.back().has_list_property = true;
            } else {
                if (tokens.size() != 3)
                    throw ParseError(name, line_no, "malformed property line");
                header.elements.back().property_names.push_back(tokens[2]);
            }
        } else if (tokens[0] == "end_header") {
            ended = true;
            break;
        } else {
            throw ParseError(name, line_no, "unknown header keyword '" + tokens[0] + "'");
        }
    }
    if (!ended)
        throw ParseError(name, line_no, "header not terminated by end_header");
    if (!format_seen)
        throw ParseError(name, line_no, "header missing format line");
    header.header_lines = line_no;
    return header;
}

std::string next_data_line(std::istream& in, long& line_no, const std::string& name,
                           const char* what) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        line = rtrim_cr(line);
        if (!is_blank(line))
            return line;
    }
    throw ParseError(name, line_no, std::string("unexpected end of file reading ") + what);
}

PointCloud read_xyz(std::istream& in, const std::string& name) {
    PointCloud cloud;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = rtrim_cr(line);
        if (is_blank(line))
            continue;
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] == '#')
            continue;
        const auto tokens = split_ws(line);
        if (tokens.size() != 3)
            throw ParseError(name, line_no,
                             "expected 3 coordinates, got " + std::to_string(tokens.size()));
        cloud.points.push_back(Point3{parse_double(tokens[0], name, line_no),
                                      parse_double(tokens[1], name, line_no),
                                      parse_double(tokens[2], name, line_no)});
    }
    return cloud;
}

struct PlyContents {
    PointCloud vertices;
    std::vector<std::vector<long>> faces;
};

PlyContents read_ply(std::istream& in, const std::string& name, bool want_faces) {
    const PlyHeader header = read_ply_header(in, name);
    long line_no = header.header_lines;

    PlyContents contents;
    bool vertex_seen = false;

    for (const PlyElement& elem : header.elements) {
        if (elem.name == "vertex") {
            vertex_seen = true;
            if (elem.has_list_property)
                throw ParseError(name, line_no, "list property in vertex element unsupported");
            const auto& props = elem.property_names;
            const auto find_prop = [&](const char* p) {
                const auto it = std::find(props.begin(), props.end(), p);
                if (it == props.end())
                    throw ParseError(name, line_no,
                                     std::string("vertex element lacks property ") + p);
                return static_cast<std::size_t>(it - props.begin());
            };
            const std::size_t ix = find_prop("x");
            const std::size_t iy = find_prop("y");
            const std::size_t iz = find_prop("z");

            contents.vertices.points.reserve(static_cast<std::size_t>(elem.count));
            for (long i = 0; i < elem.count; ++i) {
                const std::string line = next_data_line(in, line_no, name, "vertex");
                const auto tokens = split_ws(line);
                if (tokens.size() != props.size())
                    throw ParseError(name, line_no,
                                     "expected " + std::to_string(props.size()) +
                                         " vertex values, got " + std::to_string(tokens.size()));
                contents.vertices.points.push_back(Point3{parse_double(tokens[ix], name, line_no),
                                                          parse_double(tokens[iy], name, line_no),
                                                          parse_double(tokens[iz], name, line_no)});
            }
        } else if (elem.name == "face" && want_faces) {
            if (!elem.has_list_property)
                throw ParseError(name, line_no, "face element lacks a list property");
            contents.faces.reserve(static_cast<std::size_t>(elem.count));
            for (long i = 0; i < elem.count; ++i) {
                const std::string line = next_data_line(in, line_no, name, "face");
                const auto tokens = split_ws(line);
                if (tokens.empty())
                    throw ParseError(name, line_no, "empty face line");
                const long arity = parse_long(tokens[0], name, line_no);
                if (arity < 3)
                    throw ParseError(name, line_no, "face with fewer than 3 vertices");
                if (static_cast<long>(tokens.size()) != arity + 1)
                    throw ParseError(name, line_no, "face vertex count mismatch");
                std::vector<long> face(static_cast<std::size_t>(arity));
                for (long k = 0; k < arity; ++k)
                    face[static_cast<std::size_t>(k)] =
                        parse_long(tokens[static_cast<std::size_t>(k + 1)], name, line_no);
                contents.faces.push_back(std::move(face));
            }
        } else {
            // Unwanted element: skip its data lines.
            for (long i = 0; i < elem.count; ++i)
                next_data_line(in, line_no, name, elem.name.c_str());
        }
    }
    if (!vertex_seen)
        throw ParseError(name, line_no, "no vertex element in file");
    return contents;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

CloudFormat format_from_path(const std::string& path) {
    const auto pos = path.find_last_of('.');
    std::string ext = pos == std::string::npos ? "" : path.substr(pos);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".xyz")
        return CloudFormat::Xyz;
    if (ext == ".ply")
        return CloudFormat::PlyAscii;
    throw InvalidParam("cannot infer cloud format from '" + path +
                       "' (expected .xyz or .ply); pass the format explicitly");
}

PointCloud read_cloud_stream(std::istream& in, CloudFormat format, const std::string& name) {
    if (format == CloudFormat::Xyz)
        return read_xyz(in, name);
    return read_ply(in, name, /*want_faces=*/false).vertices;
}

PointCloud read_cloud(const std::string& path, CloudFormat format) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return read_cloud_stream(in, format, path);
}

PointCloud read_cloud(const std::string& path) {
    return read_cloud(path, format_from_path(path));
}

void write_cloud_stream(const PointCloud& cloud, std::ostream& out, CloudFormat format) {
    if (format == CloudFormat::PlyAscii) {
        out << "ply\n"
            << "format ascii 1.0\n"
            << "element vertex " << cloud.size() << "\n"
            << "property double x\n"
            << "property double y\n"
            << "property double z\n"
            << "end_header\n";
    }
    for (const Point3& p : cloud)
        out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z)
            << '\n';
}

void write_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    write_cloud_stream(cloud, out, format);
    out.flush();
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

void write_cloud(const PointCloud& cloud, const std::string& path) {
    write_cloud(cloud, path, format_from_path(path));
}

TriangleMesh read_mesh_stream(std::istream& in, const std::string& name) {
    const PlyContents contents = read_ply(in, name, /*want_faces=*/true);
    if (contents.faces.empty())
        throw ParseError(name, 0, "no face element (or zero faces) in mesh file");

    TriangleMesh mesh;
    const auto& verts = contents.vertices.points;
    for (const auto& face : contents.faces) {
        for (long idx : face)
            if (idx >= static_cast<long>(verts.size()))
                throw ParseError(name, 0, "face references vertex " + std::to_string(idx) +
                                              " beyond vertex count");
        // Fan triangulation around the first vertex.
        for (std::size_t k = 1; k + 1 < face.size(); ++k)
            mesh.triangles.push_back(Triangle{verts[static_cast<std::size_t>(face[0])],
                                              verts[static_cast<std::size_t>(face[k])],
                                              verts[static_cast<std::size_t>(face[k + 1])]});
    }
    return mesh;
}

TriangleMesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return read_mesh_stream(in, path);
}

} // namespace pcs
