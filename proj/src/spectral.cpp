#include "heli/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "heli/errors.hpp"
#include "heli/fft.hpp"
#include "heli/parallel.hpp"

namespace heli {

template class SpectralFieldT<1>;
template class SpectralFieldT<3>;
template class SpectralFieldT<9>;

WaveTable::WaveTable(const GridSpec& g) {
    auto fill = [&](int axis, std::vector<double>& k, std::vector<double>& d) {
        const int n = g.dims[axis];
        const double scale = kTwoPi / g.lengths[axis];
        k.resize(n);
        d.resize(n);
        for (int i = 0; i < n; ++i) {
            const int w = wavenumber(i, n);
            k[i] = scale * w;
            const bool nyquist = (n % 2 == 0) && (i == n / 2);
            d[i] = nyquist ? 0.0 : scale * w;
        }
    };
    fill(0, kx, dkx);
    fill(1, ky, dky);
    fill(2, kz, dkz);
}

std::vector<double> kappa_squared(const GridSpec& g) {
    const WaveTable wt(g);
    std::vector<double> out(g.point_count());
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx)
                out[idx] = wt.kx[i] * wt.kx[i] + wt.ky[j] * wt.ky[j] + wt.kz[k] * wt.kz[k];
    return out;
}

template <int NC>
SpectralFieldT<NC> to_spectral(const FieldT<NC>& f) {
    require_finite(f, "to_spectral");
    if (!f.grid().fully_periodic())
        throw GridMismatch("to_spectral: requires a fully periodic grid");
    SpectralFieldT<NC> F(f.grid());
    const double scale = 1.0 / static_cast<double>(f.points());
    for (int c = 0; c < NC; ++c) {
        auto src = f.component(c);
        auto dst = F.component(c);
        parallel_for(src.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) dst[i] = {src[i], 0.0};
        });
        detail::dft3(f.grid(), dst.data(), -1);
        parallel_for(dst.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) dst[i] *= scale;
        });
    }
    return F;
}

template <int NC>
double hermitian_violation(const SpectralFieldT<NC>& F) {
    const auto& g = F.grid();
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
    double maxmag = 0.0, viol = 0.0;
    for (int c = 0; c < NC; ++c) {
        const auto v = F.component(c);
        for (int k = 0; k < nz; ++k) {
            const int mk = (nz - k) % nz;
            for (int j = 0; j < ny; ++j) {
                const int mj = (ny - j) % ny;
                for (int i = 0; i < nx; ++i) {
                    const int mi = (nx - i) % nx;
                    const auto a = v[g.index(i, j, k)];
                    const auto b = v[g.index(mi, mj, mk)];
                    maxmag = std::max(maxmag, std::abs(a));
                    viol = std::max(viol, std::abs(a - std::conj(b)));
                }
            }
        }
    }
    return viol / std::max(1.0, maxmag);
}

template <int NC>
FieldT<NC> to_physical(const SpectralFieldT<NC>& F, double tol) {
    const double viol = hermitian_violation(F);
    if (viol > tol)
        throw AsymmetricSpectrum("to_physical: Hermitian symmetry violated by " +
                                 std::to_string(viol));
    FieldT<NC> f(F.grid());
    std::vector<std::complex<double>> buf(F.points());
    for (int c = 0; c < NC; ++c) {
        auto src = F.component(c);
        std::copy(src.begin(), src.end(), buf.begin());
        detail::dft3(F.grid(), buf.data(), +1);
        auto dst = f.component(c);
        parallel_for(buf.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) dst[i] = buf[i].real();
        });
    }
    return f;
}

template <int NC>
void dealias_truncate(SpectralFieldT<NC>& F) {
    const auto& g = F.grid();
    const int cx = g.dims[0] / 3, cy = g.dims[1] / 3, cz = g.dims[2] / 3;
    for (int c = 0; c < NC; ++c) {
        auto v = F.component(c);
        std::size_t idx = 0;
        for (int k = 0; k < g.dims[2]; ++k) {
            const bool zcut = std::abs(wavenumber(k, g.dims[2])) > cz;
            for (int j = 0; j < g.dims[1]; ++j) {
                const bool ycut = zcut || std::abs(wavenumber(j, g.dims[1])) > cy;
                for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                    if (ycut || std::abs(wavenumber(i, g.dims[0])) > cx) v[idx] = {0.0, 0.0};
                }
            }
        }
    }
}

template SpectralFieldT<1> to_spectral<1>(const FieldT<1>&);
template SpectralFieldT<3> to_spectral<3>(const FieldT<3>&);
template SpectralFieldT<9> to_spectral<9>(const FieldT<9>&);
template double hermitian_violation<1>(const SpectralFieldT<1>&);
template double hermitian_violation<3>(const SpectralFieldT<3>&);
template double hermitian_violation<9>(const SpectralFieldT<9>&);
template FieldT<1> to_physical<1>(const SpectralFieldT<1>&, double);
template FieldT<3> to_physical<3>(const SpectralFieldT<3>&, double);
template FieldT<9> to_physical<9>(const SpectralFieldT<9>&, double);
template void dealias_truncate<1>(SpectralFieldT<1>&);
template void dealias_truncate<3>(SpectralFieldT<3>&);
template void dealias_truncate<9>(SpectralFieldT<9>&);

} // namespace heli
