#ifndef HELI_FFT_HPP
#define HELI_FFT_HPP

#include <complex>

#include "heli/grid.hpp"

namespace heli::detail {

/// In-place 3D c2c DFT on data laid out x-fastest for `grid` dims.
/// sign = -1 forward (e^{-ik.x}), +1 backward; both unnormalized.
/// Plans are FFTW_ESTIMATE (reproducible) and cached; execution is
/// thread-safe for concurrent calls.
void dft3(const GridSpec& grid, std::complex<double>* data, int sign);

/// In-place 2D c2c DFT on an (nx, ny) plane, x-fastest.
void dft2(int nx, int ny, std::complex<double>* data, int sign);

} // namespace heli::detail

#endif
