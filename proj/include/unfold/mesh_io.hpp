#pragma once
// Mesh ingestion: OFF and Wavefront OBJ readers feeding build_polyhedron.
//
// Both readers return raw (vertices, faces) data; validation, orientation
// repair and coplanar-face merging all happen in build_polyhedron, so a
// triangulated cube OFF comes back with six quad faces.

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "unfold/errors.hpp"
#include "unfold/polyhedron.hpp"

namespace unfold {

enum class MeshFormat { auto_detect, off, obj };

struct RawMesh {
    std::vector<Point3> vertices;
    std::vector<std::vector<int>> faces;
};

namespace detail {

// Strips '#' comments and returns the next line with visible content.
inline bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) return true;
        }
    }
    return false;
}

inline double parse_double(const std::string& tok, const char* what) {
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw FormatError(std::string(what) + ": bad number '" + tok + "'");
    }
    if (used != tok.size())
        throw FormatError(std::string(what) + ": bad number '" + tok + "'");
    return value;
}

inline long parse_long(const std::string& tok, const char* what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw FormatError(std::string(what) + ": bad integer '" + tok + "'");
    }
    if (used != tok.size())
        throw FormatError(std::string(what) + ": bad integer '" + tok + "'");
    return value;
}

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(std::move(t));
    return toks;
}

}  // namespace detail

/// Reads an OFF stream. Accepts the optional "OFF" header token, per-face
/// trailing color values, and '#' comments anywhere.
inline RawMesh read_off(std::istream& in) {
    std::string line;
    if (!detail::next_content_line(in, line)) throw FormatError("off: empty input");
    auto toks = detail::split_tokens(line);

    // Header may be "OFF" alone, "OFF nv nf ne" on one line, or absent.
    std::size_t counts_at = 0;
    if (!toks.empty() && (toks[0] == "OFF" || toks[0] == "off")) {
        counts_at = 1;
        if (toks.size() == 1) {
            if (!detail::next_content_line(in, line)) throw FormatError("off: missing counts");
            toks = detail::split_tokens(line);
            counts_at = 0;
        }
    }
    if (toks.size() < counts_at + 2) throw FormatError("off: malformed count line");
    long nv = detail::parse_long(toks[counts_at], "off counts");
    long nf = detail::parse_long(toks[counts_at + 1], "off counts");
    if (nv < 4 || nf < 4)
        throw FormatError("off: need at least 4 vertices and 4 faces, got " +
                          std::to_string(nv) + "/" + std::to_string(nf));

    RawMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(nv));
    while (mesh.vertices.size() < static_cast<std::size_t>(nv)) {
        if (!detail::next_content_line(in, line))
            throw FormatError("off: truncated vertex list");
        toks = detail::split_tokens(line);
        if (toks.size() < 3) throw FormatError("off: vertex line needs 3 coordinates");
        mesh.vertices.push_back({detail::parse_double(toks[0], "off vertex"),
                                 detail::parse_double(toks[1], "off vertex"),
                                 detail::parse_double(toks[2], "off vertex")});
    }
    mesh.faces.reserve(static_cast<std::size_t>(nf));
    while (mesh.faces.size() < static_cast<std::size_t>(nf)) {
        if (!detail::next_content_line(in, line))
            throw FormatError("off: truncated face list");
        toks = detail::split_tokens(line);
        long n = detail::parse_long(toks[0], "off face");
        if (n < 3) throw FormatError("off: face with fewer than 3 vertices");
        if (toks.size() < static_cast<std::size_t>(n) + 1)
            throw FormatError("off: face line shorter than its vertex count");
        std::vector<int> face;
        face.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i)
            face.push_back(static_cast<int>(detail::parse_long(toks[static_cast<std::size_t>(i) + 1], "off face")));
        mesh.faces.push_back(std::move(face));
    }
    return mesh;
}

/// Reads a Wavefront OBJ stream: 'v' and 'f' records only, everything else
/// skipped. Handles i, i/t, i/t/n, i//n references and negative indices.
inline RawMesh read_obj(std::istream& in) {
    RawMesh mesh;
    std::string line;
    while (detail::next_content_line(in, line)) {
        auto toks = detail::split_tokens(line);
        if (toks[0] == "v") {
            if (toks.size() < 4) throw FormatError("obj: vertex line needs 3 coordinates");
            mesh.vertices.push_back({detail::parse_double(toks[1], "obj vertex"),
                                     detail::parse_double(toks[2], "obj vertex"),
                                     detail::parse_double(toks[3], "obj vertex")});
        } else if (toks[0] == "f") {
            if (toks.size() < 4) throw FormatError("obj: face with fewer than 3 vertices");
            std::vector<int> face;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                std::string ref = toks[i].substr(0, toks[i].find('/'));
                long idx = detail::parse_long(ref, "obj face");
                if (idx < 0) idx += static_cast<long>(mesh.vertices.size());
                else idx -= 1;  // OBJ indices are 1-based
                face.push_back(static_cast<int>(idx));
            }
            mesh.faces.push_back(std::move(face));
        }
    }
    if (mesh.vertices.empty() || mesh.faces.empty())
        throw FormatError("obj: no vertex/face records found");
    return mesh;
}

inline MeshFormat detect_format(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "off") return MeshFormat::off;
    if (ext == "obj") return MeshFormat::obj;
    throw FormatError("cannot infer mesh format from '" + path + "' (use .off/.obj or pass the format explicitly)");
}

inline RawMesh read_mesh(std::istream& in, MeshFormat format) {
    switch (format) {
        case MeshFormat::off: return read_off(in);
        case MeshFormat::obj: return read_obj(in);
        default: throw FormatError("auto_detect needs a file path");
    }
}

/// Loads and validates a mesh file into a Polyhedron.
inline Polyhedron load_polyhedron(const std::string& path,
                                  MeshFormat format = MeshFormat::auto_detect,
                                  const Tolerance& tol = {}) {
    if (format == MeshFormat::auto_detect) format = detect_format(path);
    std::ifstream in(path);
    if (!in) throw IOError("cannot open '" + path + "'");
    RawMesh mesh = read_mesh(in, format);
    return build_polyhedron(std::move(mesh.vertices), std::move(mesh.faces), tol);
}

/// Writes an OFF file for round-tripping results out of the tool.
inline void write_off(std::ostream& out, const Polyhedron& P) {
    std::size_t ne = P.edges.size();
    out << "OFF\n" << P.vertices.size() << ' ' << P.faces.size() << ' ' << ne << '\n';
    out.precision(17);
    for (const auto& v : P.vertices) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const auto& f : P.faces) {
        out << f.size();
        for (int v : f) out << ' ' << v;
        out << '\n';
    }
}

}  // namespace unfold
