#include "heli/sample.hpp"

#include <cmath>

#include "heli/errors.hpp"

namespace heli {

template <int NC>
SpectralInterpolant<NC>::SpectralInterpolant(const SpectralFieldT<NC>& F, double drop_tol) {
    const auto& g = F.grid();
    const WaveTable wt(g);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                double amax = 0.0;
                std::array<std::complex<double>, NC> cs;
                for (int c = 0; c < NC; ++c) {
                    cs[c] = F.component(c)[idx];
                    amax = std::max(amax, std::abs(cs[c]));
                }
                if (amax <= drop_tol) continue;
                modes_.push_back({{wt.kx[i], wt.ky[j], wt.kz[k]}, cs});
            }
}

template <int NC>
std::array<double, NC> SpectralInterpolant<NC>::operator()(const Vec3& x) const {
    std::array<double, NC> out{};
    for (const auto& m : modes_) {
        const double phase = m.kappa[0] * x[0] + m.kappa[1] * x[1] + m.kappa[2] * x[2];
        const std::complex<double> e{std::cos(phase), std::sin(phase)};
        for (int c = 0; c < NC; ++c) out[c] += (m.coeff[c] * e).real();
    }
    return out;
}

template <int NC>
std::array<std::array<double, NC>, 3> SpectralInterpolant<NC>::gradient(const Vec3& x) const {
    std::array<std::array<double, NC>, 3> out{};
    for (const auto& m : modes_) {
        const double phase = m.kappa[0] * x[0] + m.kappa[1] * x[1] + m.kappa[2] * x[2];
        const std::complex<double> e{std::cos(phase), std::sin(phase)};
        for (int a = 0; a < 3; ++a) {
            const std::complex<double> ike = std::complex<double>{0.0, m.kappa[a]} * e;
            for (int c = 0; c < NC; ++c) out[a][c] += (m.coeff[c] * ike).real();
        }
    }
    return out;
}

template class SpectralInterpolant<1>;
template class SpectralInterpolant<3>;

namespace {

// Folds x into [0, L) on periodic axes; checks range on non-periodic ones.
double fold_coordinate(double x, double length, bool periodic) {
    if (periodic) {
        double y = std::fmod(x, length);
        if (y < 0) y += length;
        return y;
    }
    if (x < 0.0 || x > length)
        throw OutOfDomain("sample_at: coordinate " + std::to_string(x) +
                          " outside non-periodic extent [0," + std::to_string(length) + "]");
    return x;
}

} // namespace

template <int NC>
std::vector<std::array<double, NC>> sample_at(const FieldT<NC>& f, const std::vector<Vec3>& points,
                                              SampleMethod method) {
    const auto& g = f.grid();
    std::vector<std::array<double, NC>> out(points.size());

    if (method == SampleMethod::Spectral) {
        SpectralInterpolant<NC> interp(to_spectral(f));
        for (std::size_t p = 0; p < points.size(); ++p) {
            Vec3 x = points[p];
            for (int a = 0; a < 3; ++a) x[a] = fold_coordinate(x[a], g.lengths[a], g.periodic[a]);
            out[p] = interp(x);
        }
        return out;
    }

    for (std::size_t p = 0; p < points.size(); ++p) {
        Vec3 x = points[p];
        std::array<int, 3> i0{}, i1{};
        std::array<double, 3> w{};
        for (int a = 0; a < 3; ++a) {
            x[a] = fold_coordinate(x[a], g.lengths[a], g.periodic[a]);
            const double h = g.spacing(a);
            const double off = g.periodic[a] ? 0.0 : 0.5;
            double s = x[a] / h - off;
            if (g.periodic[a]) {
                double fl = std::floor(s);
                w[a] = s - fl;
                int base = static_cast<int>(fl) % g.dims[a];
                if (base < 0) base += g.dims[a];
                i0[a] = base;
                i1[a] = (base + 1) % g.dims[a];
            } else {
                // clamp to the cell-centered sample range
                s = std::min(std::max(s, 0.0), static_cast<double>(g.dims[a] - 1));
                i0[a] = static_cast<int>(std::floor(s));
                i1[a] = std::min(i0[a] + 1, g.dims[a] - 1);
                w[a] = s - i0[a];
            }
        }
        for (int c = 0; c < NC; ++c) {
            double acc = 0.0;
            for (int dz = 0; dz < 2; ++dz)
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const double wt = (dx ? w[0] : 1 - w[0]) * (dy ? w[1] : 1 - w[1]) *
                                          (dz ? w[2] : 1 - w[2]);
                        acc += wt * f.at(c, dx ? i1[0] : i0[0], dy ? i1[1] : i0[1],
                                         dz ? i1[2] : i0[2]);
                    }
            out[p][c] = acc;
        }
    }
    return out;
}

template std::vector<std::array<double, 1>> sample_at<1>(const FieldT<1>&,
                                                         const std::vector<Vec3>&, SampleMethod);
template std::vector<std::array<double, 3>> sample_at<3>(const FieldT<3>&,
                                                         const std::vector<Vec3>&, SampleMethod);

} // namespace heli
