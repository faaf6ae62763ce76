#ifndef HELI_GRID_HPP
#define HELI_GRID_HPP

#include <array>
#include <cstddef>
#include <string>

namespace heli {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform sample grid for a periodic box or a slab.
///
/// Periodic axes carry nodes at x_i = i*h (left cell edges); non-periodic
/// axes are cell-centered, x_i = (i + 1/2)*h, so no node lies on the
/// boundary.
struct GridSpec {
    std::array<int, 3> dims{};
    std::array<double, 3> lengths{kTwoPi, kTwoPi, kTwoPi};
    std::array<bool, 3> periodic{true, true, true};

    static GridSpec torus(int n, double length = kTwoPi);
    static GridSpec torus(int nx, int ny, int nz,
                          double lx = kTwoPi, double ly = kTwoPi, double lz = kTwoPi);
    /// T^2 x (0, height) slab, z non-periodic.
    static GridSpec slab(int nx, int ny, int nz,
                         double lx = kTwoPi, double ly = kTwoPi, double height = 1.0);

    double spacing(int axis) const { return lengths[axis] / dims[axis]; }
    double min_spacing() const;
    double min_length() const;
    std::size_t point_count() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
    double volume() const { return lengths[0] * lengths[1] * lengths[2]; }
    bool fully_periodic() const { return periodic[0] && periodic[1] && periodic[2]; }

    /// Node coordinate along `axis`.
    double coord(int axis, int index) const {
        const double off = periodic[axis] ? 0.0 : 0.5;
        return (index + off) * spacing(axis);
    }

    /// x-fastest linear index.
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
    }

    /// Throws InvalidParams if dims < 4 or lengths <= 0.
    void validate() const;

    bool operator==(const GridSpec&) const = default;

    std::string describe() const;
};

/// Throws GridMismatch unless a == b.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

} // namespace heli

#endif
