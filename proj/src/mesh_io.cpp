#include "bjorling/mesh_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <vector>

namespace bjorling {

namespace {

void append_g9(std::string& out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

void write_le64(std::ostream& out, std::uint64_t bits)
{
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = char((bits >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void write_le_double(std::ostream& out, double v) { write_le64(out, std::bit_cast<std::uint64_t>(v)); }

void write_le32(std::ostream& out, std::uint32_t v)
{
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = char((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

}  // namespace

void export_obj(const SurfacePatch& patch, std::ostream& out)
{
    const int nu = patch.nu(), nv = patch.nv();
    std::string buf;
    buf.reserve(std::size_t(nu) * nv * 40);

    for (int k = 0; k < nv; ++k) {
        for (int j = 0; j < nu; ++j) {
            const Vec3& x = patch.X(j, k);
            buf += "v ";
            append_g9(buf, x.x());
            buf += ' ';
            append_g9(buf, x.y());
            buf += ' ';
            append_g9(buf, x.z());
            buf += '\n';
        }
    }

    // normal index per vertex; 0 where the node is singular
    std::vector<int> normal_id(std::size_t(nu) * nv, 0);
    int next_normal = 1;
    for (int k = 0; k < nv; ++k) {
        for (int j = 0; j < nu; ++j) {
            if (patch.singular(j, k)) continue;
            const Vec3& n = patch.N(j, k);
            buf += "vn ";
            append_g9(buf, n.x());
            buf += ' ';
            append_g9(buf, n.y());
            buf += ' ';
            append_g9(buf, n.z());
            buf += '\n';
            normal_id[patch.idx(j, k)] = next_normal++;
        }
    }

    auto face = [&](int a, int b, int c) {
        const int na = normal_id[a], nb = normal_id[b], nc = normal_id[c];
        buf += 'f';
        if (na && nb && nc) {
            for (int v : {a, b, c}) {
                buf += ' ';
                buf += std::to_string(v + 1);
                buf += "//";
                buf += std::to_string(normal_id[v]);
            }
        } else {
            for (int v : {a, b, c}) {
                buf += ' ';
                buf += std::to_string(v + 1);
            }
        }
        buf += '\n';
    };

    for (int k = 0; k + 1 < nv; ++k) {
        for (int j = 0; j + 1 < nu; ++j) {
            const int a = int(patch.idx(j, k));
            const int b = int(patch.idx(j + 1, k));
            const int c = int(patch.idx(j + 1, k + 1));
            const int d = int(patch.idx(j, k + 1));
            face(a, b, c);
            face(a, c, d);
        }
    }
    out << buf;
}

void export_ply(const SurfacePatch& patch, std::ostream& out)
{
    const int nu = patch.nu(), nv = patch.nv();
    const bool with_normals = !patch.any_singular();
    const std::size_t nverts = std::size_t(nu) * nv;
    const std::size_t nfaces = std::size_t(nu - 1) * (nv - 1) * 2;

    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << nverts << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    if (with_normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
    out << "element face " << nfaces << "\n";
    out << "property list uchar uint32 vertex_indices\n";
    out << "end_header\n";

    for (int k = 0; k < nv; ++k) {
        for (int j = 0; j < nu; ++j) {
            const Vec3& x = patch.X(j, k);
            write_le_double(out, x.x());
            write_le_double(out, x.y());
            write_le_double(out, x.z());
            if (with_normals) {
                const Vec3& n = patch.N(j, k);
                write_le_double(out, n.x());
                write_le_double(out, n.y());
                write_le_double(out, n.z());
            }
        }
    }

    auto face = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        const char three = 3;
        out.write(&three, 1);
        write_le32(out, a);
        write_le32(out, b);
        write_le32(out, c);
    };
    for (int k = 0; k + 1 < nv; ++k) {
        for (int j = 0; j + 1 < nu; ++j) {
            face(std::uint32_t(patch.idx(j, k)), std::uint32_t(patch.idx(j + 1, k)),
                 std::uint32_t(patch.idx(j + 1, k + 1)));
            face(std::uint32_t(patch.idx(j, k)), std::uint32_t(patch.idx(j + 1, k + 1)),
                 std::uint32_t(patch.idx(j, k + 1)));
        }
    }
}

void export_mesh(const SurfacePatch& patch, const std::string& format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write mesh to '" + path + "'");
    if (format == "obj")
        export_obj(patch, out);
    else if (format == "ply")
        export_ply(patch, out);
    else
        throw InputError("unknown mesh format '" + format + "' (use obj or ply)");
    out.flush();
    if (!out) throw InputError("I/O failure while writing '" + path + "'");
}

}  // namespace bjorling
