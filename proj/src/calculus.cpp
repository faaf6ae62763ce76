#include "heli/calculus.hpp"

#include <cmath>

#include "heli/errors.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "heli/rng.hpp"

namespace heli {

namespace {

void require_torus(const GridSpec& g, const char* where) {
    if (!g.fully_periodic())
        throw GridMismatch(std::string(where) + ": requires a fully periodic grid");
}

// Multiplies component c of F by i * kappa_axis in place.
void apply_ik(SpectralFieldT<1>& F, int axis) {
    const auto& g = F.grid();
    const WaveTable wt(g);
    auto v = F.component(0);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const double ka = axis == 0 ? wt.dkx[i] : axis == 1 ? wt.dky[j] : wt.dkz[k];
                v[idx] *= std::complex<double>{0.0, ka};
            }
}

} // namespace

SpectralVector curl_spec(const SpectralVector& U) {
    const auto& g = U.grid();
    const WaveTable wt(g);
    SpectralVector W(g);
    auto u0 = U.component(0), u1 = U.component(1), u2 = U.component(2);
    auto w0 = W.component(0), w1 = W.component(1), w2 = W.component(2);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const std::complex<double> ikx{0.0, wt.dkx[i]};
                const std::complex<double> iky{0.0, wt.dky[j]};
                const std::complex<double> ikz{0.0, wt.dkz[k]};
                w0[idx] = iky * u2[idx] - ikz * u1[idx];
                w1[idx] = ikz * u0[idx] - ikx * u2[idx];
                w2[idx] = ikx * u1[idx] - iky * u0[idx];
            }
    return W;
}

VectorField curl(const VectorField& u) {
    require_torus(u.grid(), "curl");
    return to_physical(curl_spec(to_spectral(u)));
}

ScalarField divergence(const VectorField& u) {
    require_torus(u.grid(), "divergence");
    const auto U = to_spectral(u);
    const auto& g = u.grid();
    const WaveTable wt(g);
    SpectralScalar D(g);
    auto d = D.component(0);
    auto u0 = U.component(0), u1 = U.component(1), u2 = U.component(2);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx)
                d[idx] = std::complex<double>{0.0, wt.dkx[i]} * u0[idx] +
                         std::complex<double>{0.0, wt.dky[j]} * u1[idx] +
                         std::complex<double>{0.0, wt.dkz[k]} * u2[idx];
    return to_physical(D);
}

VectorField gradient(const ScalarField& f) {
    require_torus(f.grid(), "gradient");
    const auto F = to_spectral(f);
    SpectralVector G(f.grid());
    for (int a = 0; a < 3; ++a) {
        SpectralScalar Fa(f.grid());
        std::copy(F.component(0).begin(), F.component(0).end(), Fa.component(0).begin());
        apply_ik(Fa, a);
        std::copy(Fa.component(0).begin(), Fa.component(0).end(), G.component(a).begin());
    }
    return to_physical(G);
}

SpectralTensor vector_gradient_spec(const SpectralVector& U) {
    const auto& g = U.grid();
    const WaveTable wt(g);
    SpectralTensor G(g);
    for (int r = 0; r < 3; ++r) {
        auto src = U.component(r);
        for (int a = 0; a < 3; ++a) {
            auto dst = G.component(tensor_index(r, a));
            std::size_t idx = 0;
            for (int k = 0; k < g.dims[2]; ++k)
                for (int j = 0; j < g.dims[1]; ++j)
                    for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                        const double ka = a == 0 ? wt.dkx[i] : a == 1 ? wt.dky[j] : wt.dkz[k];
                        dst[idx] = std::complex<double>{0.0, ka} * src[idx];
                    }
        }
    }
    return G;
}

TensorField vector_gradient(const VectorField& u) {
    require_torus(u.grid(), "vector_gradient");
    return to_physical(vector_gradient_spec(to_spectral(u)));
}

VectorField tensor_divergence(const TensorField& R) {
    require_torus(R.grid(), "tensor_divergence");
    const auto S = to_spectral(R);
    const auto& g = R.grid();
    const WaveTable wt(g);
    SpectralVector D(g);
    for (int r = 0; r < 3; ++r) {
        auto dst = D.component(r);
        for (int l = 0; l < 3; ++l) {
            auto src = S.component(tensor_index(r, l));
            std::size_t idx = 0;
            for (int k = 0; k < g.dims[2]; ++k)
                for (int j = 0; j < g.dims[1]; ++j)
                    for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                        const double ka = l == 0 ? wt.dkx[i] : l == 1 ? wt.dky[j] : wt.dkz[k];
                        dst[idx] += std::complex<double>{0.0, ka} * src[idx];
                    }
        }
    }
    return to_physical(D);
}

ScalarField laplacian(const ScalarField& f) {
    require_torus(f.grid(), "laplacian");
    auto F = to_spectral(f);
    const auto k2 = kappa_squared(f.grid());
    auto v = F.component(0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= -k2[i];
    return to_physical(F);
}

template <int NC>
FieldT<NC> partial_derivative(const FieldT<NC>& f, int axis) {
    require_torus(f.grid(), "partial_derivative");
    auto F = to_spectral(f);
    const auto& g = f.grid();
    const WaveTable wt(g);
    for (int c = 0; c < NC; ++c) {
        auto v = F.component(c);
        std::size_t idx = 0;
        for (int k = 0; k < g.dims[2]; ++k)
            for (int j = 0; j < g.dims[1]; ++j)
                for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                    const double ka = axis == 0 ? wt.dkx[i] : axis == 1 ? wt.dky[j] : wt.dkz[k];
                    v[idx] *= std::complex<double>{0.0, ka};
                }
    }
    return to_physical(F);
}

template FieldT<1> partial_derivative<1>(const FieldT<1>&, int);
template FieldT<3> partial_derivative<3>(const FieldT<3>&, int);
template FieldT<9> partial_derivative<9>(const FieldT<9>&, int);

void leray_project_spec(SpectralVector& U) {
    const auto& g = U.grid();
    const WaveTable wt(g);
    auto u0 = U.component(0), u1 = U.component(1), u2 = U.component(2);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const double kx = wt.kx[i], ky = wt.ky[j], kz = wt.kz[k];
                const double k2 = kx * kx + ky * ky + kz * kz;
                if (k2 == 0.0) continue;
                const std::complex<double> kd = (kx * u0[idx] + ky * u1[idx] + kz * u2[idx]) / k2;
                u0[idx] -= kx * kd;
                u1[idx] -= ky * kd;
                u2[idx] -= kz * kd;
            }
}

VectorField leray_project(const VectorField& u) {
    require_torus(u.grid(), "leray_project");
    auto U = to_spectral(u);
    leray_project_spec(U);
    return to_physical(U);
}

SpectralScalar multiply_dealiased(const SpectralScalar& A, const SpectralScalar& B) {
    require_same_grid(A.grid(), B.grid(), "multiply_dealiased");
    SpectralScalar At = A, Bt = B;
    dealias_truncate(At);
    dealias_truncate(Bt);
    const auto a = to_physical(At);
    const auto b = to_physical(Bt);
    auto P = to_spectral(multiply(a, b));
    dealias_truncate(P);
    return P;
}

ScalarField pressure_from_velocity(const VectorField& u, Dealias dealias) {
    require_torus(u.grid(), "pressure_from_velocity");
    require_finite(u, "pressure_from_velocity");
    const auto& g = u.grid();
    const WaveTable wt(g);

    SpectralTensor T(g);
    if (dealias == Dealias::TwoThirds) {
        auto U = to_spectral(u);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                SpectralScalar Ur(g), Uc(g);
                std::copy(U.component(r).begin(), U.component(r).end(), Ur.component(0).begin());
                std::copy(U.component(c).begin(), U.component(c).end(), Uc.component(0).begin());
                auto P = multiply_dealiased(Ur, Uc);
                std::copy(P.component(0).begin(), P.component(0).end(),
                          T.component(tensor_index(r, c)).begin());
            }
    } else {
        T = to_spectral(outer(u, u));
    }

    SpectralScalar P(g);
    auto p = P.component(0);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const double kv[3] = {wt.dkx[i], wt.dky[j], wt.dkz[k]};
                const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                if (k2 == 0.0) continue; // zero-mean gauge
                std::complex<double> ddT{0.0, 0.0};
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c)
                        ddT += -kv[r] * kv[c] * T.component(tensor_index(r, c))[idx];
                p[idx] = -ddT / k2;
            }
    return to_physical(P);
}

ScalarField helicity_density(const VectorField& u) {
    return dot(u, curl(u));
}

double total_helicity(const VectorField& u) { return integrate(helicity_density(u)); }

double time_bump(double t, double duration) {
    const double tau = t / duration;
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    const double s = tau * (1.0 - tau);
    return 64.0 * s * s * s;
}

double time_bump_derivative(double t, double duration) {
    const double tau = t / duration;
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    const double s = tau * (1.0 - tau);
    return 64.0 * 3.0 * s * s * (1.0 - 2.0 * tau) / duration;
}

TestBattery make_test_battery(const GridSpec& grid, int count, std::uint64_t seed,
                              double duration) {
    TestBattery battery;
    Rng rng(seed);
    const double bump_sup = 1.0;                       // max of 64 (tau(1-tau))^3
    const double dbump_sup = 64.0 * 3.0 * 0.25 * 0.25 / duration * 1.2; // loose bound
    for (int t = 0; t < count; ++t) {
        // random vector potential with modes |k|_inf <= 2, curl gives psi
        SpectralVector A(grid);
        for (int c = 0; c < 3; ++c) {
            for (int kz = -2; kz <= 2; ++kz)
                for (int ky = -2; ky <= 2; ++ky)
                    for (int kx = 0; kx <= 2; ++kx) {
                        if (kx == 0 && ky == 0 && kz == 0) continue;
                        if (kx == 0 && (ky < 0 || (ky == 0 && kz < 0))) continue;
                        const std::complex<double> z{rng.normal(), rng.normal()};
                        A.at(c, kx, ky, kz) = z;
                        A.at(c, -kx, -ky, -kz) = std::conj(z);
                    }
        }
        auto Psi = curl_spec(A);
        VectorField psi = to_physical(Psi);
        TensorField gpsi = to_physical(vector_gradient_spec(Psi));
        const double sup = (max_abs(psi)) * (bump_sup + dbump_sup) + max_abs(gpsi) * bump_sup;
        battery.psi.push_back(std::move(psi));
        battery.grad_psi.push_back(std::move(gpsi));
        battery.sup_norm.push_back(sup);
    }
    return battery;
}

ResidualReport euler_residual(const std::vector<VectorField>& u_series,
                              const std::vector<ScalarField>& p_series, double dt,
                              const TestBattery& battery, Dealias dealias) {
    if (u_series.size() < 3)
        throw InsufficientData("euler_residual: need at least 3 time slices");
    if (p_series.size() != u_series.size())
        throw InsufficientData("euler_residual: velocity/pressure series length mismatch");
    const std::size_t nt = u_series.size();
    const double duration = dt * static_cast<double>(nt - 1);
    const std::size_t ntest = battery.psi.size();

    // Per-slice space integrals, then time quadrature (trapezoid).
    std::vector<double> acc(ntest, 0.0);
    for (std::size_t n = 0; n < nt; ++n) {
        const double t = dt * static_cast<double>(n);
        const double w = (n == 0 || n + 1 == nt) ? 0.5 * dt : dt;
        const double b = time_bump(t, duration);
        const double bp = time_bump_derivative(t, duration);

        TensorField uu(u_series[n].grid());
        if (dealias == Dealias::TwoThirds) {
            auto U = to_spectral(u_series[n]);
            dealias_truncate(U);
            const auto ut = to_physical(U);
            uu = outer(ut, ut);
            auto UU = to_spectral(uu);
            dealias_truncate(UU);
            uu = to_physical(UU);
        } else {
            uu = outer(u_series[n], u_series[n]);
        }

        for (std::size_t i = 0; i < ntest; ++i) {
            const double a_term = integrate(dot(battery.psi[i], u_series[n]));
            const double b_term = integrate(double_contract(uu, battery.grad_psi[i]));
            // div(psi) = 0 by construction; the pressure term is kept for the
            // contract but contributes only round-off.
            double c_term = 0.0;
            {
                ScalarField divpsi(u_series[n].grid());
                auto d = divpsi.component(0);
                for (int axis = 0; axis < 3; ++axis) {
                    auto gp = battery.grad_psi[i].component(tensor_index(axis, axis));
                    for (std::size_t q = 0; q < d.size(); ++q) d[q] += gp[q];
                }
                c_term = integrate(multiply(p_series[n], divpsi));
            }
            acc[i] += w * (bp * a_term + b * (b_term + c_term));
        }
    }

    ResidualReport report;
    report.per_test.resize(ntest);
    double sumsq = 0.0;
    for (std::size_t i = 0; i < ntest; ++i) {
        const double norm = battery.sup_norm[i] > 0 ? battery.sup_norm[i] : 1.0;
        report.per_test[i] = acc[i] / norm;
        report.max_abs = std::max(report.max_abs, std::abs(report.per_test[i]));
        sumsq += report.per_test[i] * report.per_test[i];
    }
    report.rms = ntest ? std::sqrt(sumsq / static_cast<double>(ntest)) : 0.0;
    return report;
}

} // namespace heli
