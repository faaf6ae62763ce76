#ifndef HELI_FIELD_IO_HPP
#define HELI_FIELD_IO_HPP

#include <string>
#include <variant>

#include "heli/field.hpp"

namespace heli {

/// VF3 binary field format, version 1. Little-endian throughout:
///   bytes 0-3   magic "VF3\0"
///   bytes 4-5   version (u16)
///   bytes 6-17  dims (3 x u32)
///   byte  18    components (u8, one of 1/3/9)
///   bytes 19-42 lengths (3 x f64)
///   payload     components * Nx*Ny*Nz f64, x-fastest, component-major
inline constexpr char kVf3Magic[4] = {'V', 'F', '3', '\0'};
inline constexpr std::uint16_t kVf3Version = 1;

using AnyField = std::variant<ScalarField, VectorField, TensorField>;

template <int NC>
void write_field(const FieldT<NC>& f, const std::string& path);

/// Reads any VF3 file; the grid is reconstructed as a torus (the format
/// carries no periodicity flags; slab consumers re-wrap via as_slab below).
AnyField read_field(const std::string& path);

ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

/// Reinterprets a torus-read field on the slab grid with the same dims and
/// lengths (z becomes the non-periodic axis).
template <int NC>
FieldT<NC> as_slab(const FieldT<NC>& f);

} // namespace heli

#endif
