#ifndef HELI_TEST_SUPPORT_HPP
#define HELI_TEST_SUPPORT_HPP

#include <complex>

#include "heli/field.hpp"
#include "heli/rng.hpp"
#include "heli/spectral.hpp"

namespace heli::test {

/// Random real band-limited scalar with modes |k|_inf <= kmax.
inline ScalarField random_band_limited_scalar(const GridSpec& grid, int kmax, Rng& rng) {
    SpectralScalar F(grid);
    for (int kz = -kmax; kz <= kmax; ++kz)
        for (int ky = -kmax; ky <= kmax; ++ky)
            for (int kx = 0; kx <= kmax; ++kx) {
                if (kx == 0 && (ky < 0 || (ky == 0 && kz <= 0))) continue;
                const std::complex<double> z{rng.normal(), rng.normal()};
                F.at(0, kx, ky, kz) = z;
                F.at(0, -kx, -ky, -kz) = std::conj(z);
            }
    return to_physical(F);
}

inline VectorField random_band_limited_vector(const GridSpec& grid, int kmax, Rng& rng) {
    VectorField out(grid);
    for (int c = 0; c < 3; ++c) {
        const ScalarField f = random_band_limited_scalar(grid, kmax, rng);
        std::copy(f.component(0).begin(), f.component(0).end(), out.component(c).begin());
    }
    return out;
}

inline TensorField random_symmetric_band_limited_tensor(const GridSpec& grid, int kmax,
                                                        Rng& rng) {
    TensorField out(grid);
    for (int r = 0; r < 3; ++r)
        for (int c = r; c < 3; ++c) {
            const ScalarField f = random_band_limited_scalar(grid, kmax, rng);
            std::copy(f.component(0).begin(), f.component(0).end(),
                      out.component(tensor_index(r, c)).begin());
            std::copy(f.component(0).begin(), f.component(0).end(),
                      out.component(tensor_index(c, r)).begin());
        }
    return out;
}

/// cos(kappa . x) sample field.
inline ScalarField cosine_mode(const GridSpec& grid, int kx, int ky, int kz) {
    ScalarField f(grid);
    auto v = f.component(0);
    const double wx = kTwoPi * kx / grid.lengths[0];
    const double wy = kTwoPi * ky / grid.lengths[1];
    const double wz = kTwoPi * kz / grid.lengths[2];
    std::size_t idx = 0;
    for (int k = 0; k < grid.dims[2]; ++k)
        for (int j = 0; j < grid.dims[1]; ++j)
            for (int i = 0; i < grid.dims[0]; ++i, ++idx)
                v[idx] = std::cos(wx * grid.coord(0, i) + wy * grid.coord(1, j) +
                                  wz * grid.coord(2, k));
    return f;
}

} // namespace heli::test

#endif
