#ifndef HELI_SPECTRAL_HPP
#define HELI_SPECTRAL_HPP

#include <complex>
#include <span>
#include <vector>

#include "heli/field.hpp"

namespace heli {

/// Discrete Fourier coefficients of a real field, one full complex cube per
/// component, x-fastest. Convention: fhat_k = (prod N_i)^{-1} sum_x f(x)
/// e^{-i kappa.x} with kappa = 2 pi k / L, so a real field obeys
/// coeff(-k) = conj(coeff(k)).
template <int NC>
class SpectralFieldT {
  public:
    static constexpr int kComponents = NC;
    using cplx = std::complex<double>;

    SpectralFieldT() = default;
    explicit SpectralFieldT(const GridSpec& grid)
        : grid_(grid), coeffs_(NC * grid.point_count(), cplx{0.0, 0.0}) {}

    const GridSpec& grid() const { return grid_; }
    std::size_t points() const { return grid_.point_count(); }

    std::span<cplx> component(int c) {
        return {coeffs_.data() + static_cast<std::size_t>(c) * points(), points()};
    }
    std::span<const cplx> component(int c) const {
        return {coeffs_.data() + static_cast<std::size_t>(c) * points(), points()};
    }

    /// Coefficient of integer wavevector (kx,ky,kz), each in [-N/2, N/2).
    cplx& at(int c, int kx, int ky, int kz) {
        return coeffs_[static_cast<std::size_t>(c) * points() + kindex(kx, ky, kz)];
    }
    cplx at(int c, int kx, int ky, int kz) const {
        return coeffs_[static_cast<std::size_t>(c) * points() + kindex(kx, ky, kz)];
    }

    std::size_t kindex(int kx, int ky, int kz) const {
        auto fold = [](int k, int n) { return k >= 0 ? k : k + n; };
        return grid_.index(fold(kx, grid_.dims[0]), fold(ky, grid_.dims[1]),
                           fold(kz, grid_.dims[2]));
    }

    std::vector<cplx>& raw() { return coeffs_; }
    const std::vector<cplx>& raw() const { return coeffs_; }

  private:
    GridSpec grid_;
    std::vector<cplx> coeffs_;
};

using SpectralScalar = SpectralFieldT<1>;
using SpectralVector = SpectralFieldT<3>;
using SpectralTensor = SpectralFieldT<9>;

/// Integer wavenumber of storage slot i along one axis (i in [0,N)).
inline int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Per-axis physical wavevector table kappa = 2 pi k / L; the Nyquist slot of
/// an even axis is zeroed in `deriv` (odd-symmetric multiplier).
struct WaveTable {
    std::vector<double> kx, ky, kz;       // kappa values per slot
    std::vector<double> dkx, dky, dkz;    // derivative multipliers (Nyquist zeroed)
    explicit WaveTable(const GridSpec& g);
    const std::vector<double>& kappa(int axis) const {
        return axis == 0 ? kx : axis == 1 ? ky : kz;
    }
    const std::vector<double>& deriv(int axis) const {
        return axis == 0 ? dkx : axis == 1 ? dky : dkz;
    }
};

template <int NC>
SpectralFieldT<NC> to_spectral(const FieldT<NC>& f);

/// Largest Hermitian-symmetry violation max|c(k) - conj(c(-k))| scaled by
/// max(1, max|c|).
template <int NC>
double hermitian_violation(const SpectralFieldT<NC>& F);

/// Inverse transform; throws AsymmetricSpectrum if hermitian_violation > tol.
template <int NC>
FieldT<NC> to_physical(const SpectralFieldT<NC>& F, double tol = 1e-12);

/// Zeroes modes with |k_i| > N_i/3 on any axis (2/3-rule dealiasing).
template <int NC>
void dealias_truncate(SpectralFieldT<NC>& F);

/// sum_k |k|^2-weighted inner products need kappa magnitudes repeatedly;
/// fills |kappa|^2 per slot.
std::vector<double> kappa_squared(const GridSpec& g);

extern template class SpectralFieldT<1>;
extern template class SpectralFieldT<3>;
extern template class SpectralFieldT<9>;

} // namespace heli

#endif
