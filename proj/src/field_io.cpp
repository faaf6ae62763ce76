#include "heli/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "heli/errors.hpp"

namespace heli {

namespace {

void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
    const unsigned char* p;
    std::size_t n;
    std::size_t pos = 0;

    void need(std::size_t k, const char* what) {
        if (pos + k > n) throw TruncatedFile(std::string("read_field: truncated ") + what);
    }
    std::uint16_t u16() {
        need(2, "header");
        std::uint16_t v = static_cast<std::uint16_t>(p[pos] | (p[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4, "header");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8, "header");
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[pos + i]) << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

} // namespace

template <int NC>
void write_field(const FieldT<NC>& f, const std::string& path) {
    require_finite(f, "write_field");
    std::string buf;
    buf.reserve(43 + 8 * f.raw().size());
    buf.append(kVf3Magic, 4);
    put_u16(buf, kVf3Version);
    for (int a = 0; a < 3; ++a) put_u32(buf, static_cast<std::uint32_t>(f.grid().dims[a]));
    buf.push_back(static_cast<char>(NC));
    for (int a = 0; a < 3; ++a) put_f64(buf, f.grid().lengths[a]);
    for (double v : f.raw()) put_f64(buf, v);

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("write_field: cannot open " + path);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw FormatError("write_field: write failed for " + path);
}

template void write_field<1>(const FieldT<1>&, const std::string&);
template void write_field<3>(const FieldT<3>&, const std::string&);
template void write_field<9>(const FieldT<9>&, const std::string&);

AnyField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("read_field: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

    Reader r{reinterpret_cast<const unsigned char*>(data.data()), data.size()};
    r.need(4, "magic");
    if (std::memcmp(data.data(), kVf3Magic, 4) != 0)
        throw FormatError("read_field: bad magic in " + path);
    r.pos = 4;
    const std::uint16_t version = r.u16();
    if (version != kVf3Version)
        throw FormatError("read_field: unsupported version " + std::to_string(version));
    std::array<int, 3> dims{};
    for (int a = 0; a < 3; ++a) {
        const std::uint32_t d = r.u32();
        if (d < 4 || d > (1u << 24)) throw FormatError("read_field: bad dim " + std::to_string(d));
        dims[a] = static_cast<int>(d);
    }
    r.need(1, "components");
    const int ncomp = r.p[r.pos++];
    if (ncomp != 1 && ncomp != 3 && ncomp != 9)
        throw FormatError("read_field: bad component count " + std::to_string(ncomp));
    std::array<double, 3> lengths{};
    for (int a = 0; a < 3; ++a) {
        lengths[a] = r.f64();
        if (!(lengths[a] > 0.0)) throw FormatError("read_field: non-positive length");
    }

    const GridSpec grid = GridSpec::torus(dims[0], dims[1], dims[2], lengths[0], lengths[1],
                                          lengths[2]);
    const std::size_t nvals = static_cast<std::size_t>(ncomp) * grid.point_count();
    if (r.pos + 8 * nvals > r.n)
        throw TruncatedFile("read_field: payload needs " + std::to_string(8 * nvals) +
                            " bytes, found " + std::to_string(r.n - r.pos));

    auto load = [&](auto field) -> AnyField {
        for (double& v : field.raw()) v = r.f64();
        return field;
    };
    if (ncomp == 1) return load(ScalarField(grid));
    if (ncomp == 3) return load(VectorField(grid));
    return load(TensorField(grid));
}

ScalarField read_scalar_field(const std::string& path) {
    AnyField any = read_field(path);
    if (auto* f = std::get_if<ScalarField>(&any)) return std::move(*f);
    throw FormatError("read_scalar_field: " + path + " is not a scalar field");
}

VectorField read_vector_field(const std::string& path) {
    AnyField any = read_field(path);
    if (auto* f = std::get_if<VectorField>(&any)) return std::move(*f);
    throw FormatError("read_vector_field: " + path + " is not a vector field");
}

template <int NC>
FieldT<NC> as_slab(const FieldT<NC>& f) {
    const auto& g = f.grid();
    FieldT<NC> out(GridSpec::slab(g.dims[0], g.dims[1], g.dims[2], g.lengths[0], g.lengths[1],
                                  g.lengths[2]));
    out.raw() = f.raw();
    return out;
}

template FieldT<1> as_slab<1>(const FieldT<1>&);
template FieldT<3> as_slab<3>(const FieldT<3>&);
template FieldT<9> as_slab<9>(const FieldT<9>&);

} // namespace heli
