#include "heli/fields_lab.hpp"

#include <cmath>

#include "heli/calculus.hpp"
#include "heli/errors.hpp"
#include "heli/parallel.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "heli/rng.hpp"
#include "heli/spectral.hpp"

namespace heli {

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int r = 0; r < 3; ++r)
        for (int j = 0; j < 3; ++j)
            for (int s = 0; s < 3; ++s) c[3 * r + j] += a[3 * r + s] * b[3 * s + j];
    return c;
}

Vec3 mat3_vec(const Mat3& a, const Vec3& v) {
    return {a[0] * v[0] + a[1] * v[1] + a[2] * v[2], a[3] * v[0] + a[4] * v[1] + a[5] * v[2],
            a[6] * v[0] + a[7] * v[1] + a[8] * v[2]};
}

double mat3_det(const Mat3& a) {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Mat3 mat3_inverse(const Mat3& a) {
    const double det = mat3_det(a);
    if (det == 0.0) throw InvalidParams("mat3_inverse: singular matrix");
    const double inv = 1.0 / det;
    Mat3 c;
    c[0] = (a[4] * a[8] - a[5] * a[7]) * inv;
    c[1] = (a[2] * a[7] - a[1] * a[8]) * inv;
    c[2] = (a[1] * a[5] - a[2] * a[4]) * inv;
    c[3] = (a[5] * a[6] - a[3] * a[8]) * inv;
    c[4] = (a[0] * a[8] - a[2] * a[6]) * inv;
    c[5] = (a[2] * a[3] - a[0] * a[5]) * inv;
    c[6] = (a[3] * a[7] - a[4] * a[6]) * inv;
    c[7] = (a[1] * a[6] - a[0] * a[7]) * inv;
    c[8] = (a[0] * a[4] - a[1] * a[3]) * inv;
    return c;
}

double ShearProfile::eval(double z, double height) const {
    const double w = kTwoPi / 2.0 / height; // pi / H
    double v = 0.0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m)
        v += cos_coeffs[m] * std::cos(static_cast<double>(m) * w * z);
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m)
        v += sin_coeffs[m] * std::sin(static_cast<double>(m + 1) * w * z);
    return v;
}

double ShearProfile::derivative(double z, double height) const {
    const double w = kTwoPi / 2.0 / height;
    double v = 0.0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m)
        v -= cos_coeffs[m] * static_cast<double>(m) * w * std::sin(static_cast<double>(m) * w * z);
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m)
        v += sin_coeffs[m] * static_cast<double>(m + 1) * w *
             std::cos(static_cast<double>(m + 1) * w * z);
    return v;
}

RotatedShearRecipe RotatedShearRecipe::standard() {
    RotatedShearRecipe r;
    r.u_profile.cos_coeffs = {0.0, 1.0}; // cos(pi z/H)
    r.v_profile.sin_coeffs = {1.0};      // sin(pi z/H)
    return r;
}

namespace {

VectorField sample_abc(const AbcRecipe& r, const GridSpec& g) {
    VectorField u(g);
    auto u0 = u.component(0), u1 = u.component(1), u2 = u.component(2);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k) {
        const double z = g.coord(2, k);
        for (int j = 0; j < g.dims[1]; ++j) {
            const double y = g.coord(1, j);
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const double x = g.coord(0, i);
                u0[idx] = r.A * std::sin(z) + r.C * std::cos(y);
                u1[idx] = r.B * std::sin(x) + r.A * std::cos(z);
                u2[idx] = r.C * std::sin(y) + r.B * std::cos(x);
            }
        }
    }
    return u;
}

VectorField sample_taylor_green(const GridSpec& g) {
    VectorField u(g);
    auto u0 = u.component(0), u1 = u.component(1);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k) {
        const double z = g.coord(2, k);
        for (int j = 0; j < g.dims[1]; ++j) {
            const double y = g.coord(1, j);
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const double x = g.coord(0, i);
                u0[idx] = std::sin(x) * std::cos(y) * std::cos(z);
                u1[idx] = -std::cos(x) * std::sin(y) * std::cos(z);
            }
        }
    }
    return u;
}

VectorField sample_rotated_shear(const RotatedShearRecipe& r, const GridSpec& g) {
    VectorField u(g);
    auto u0 = u.component(0), u1 = u.component(1);
    const double H = g.lengths[2];
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k) {
        const double z = g.coord(2, k);
        const double U = r.u_profile.eval(z, H);
        const double V = r.v_profile.eval(z, H);
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                u0[idx] = U;
                u1[idx] = V;
            }
    }
    return u;
}

VectorField sample_gradient(const GradientRecipe& r, const GridSpec& g) {
    Rng rng(r.seed);
    SpectralScalar Phi(g);
    const int K = r.max_mode;
    for (int kz = -K; kz <= K; ++kz)
        for (int ky = -K; ky <= K; ++ky)
            for (int kx = 0; kx <= K; ++kx) {
                if (kx == 0 && (ky < 0 || (ky == 0 && kz <= 0))) continue;
                const std::complex<double> z{rng.normal(), rng.normal()};
                Phi.at(0, kx, ky, kz) = z;
                Phi.at(0, -kx, -ky, -kz) = std::conj(z);
            }
    return gradient(to_physical(Phi));
}

} // namespace

VectorField synth_besov_field(double theta, std::uint64_t seed, const GridSpec& grid,
                              bool c0_log_decay, double spectrum_slope) {
    if (!(theta > 0.0 && theta < 1.0))
        throw InvalidParams("synth_besov_field: theta must lie in (0,1)");
    if (!grid.fully_periodic())
        throw DomainMismatch("synth_besov_field: requires a torus grid");
    const double slope = spectrum_slope != 0.0 ? spectrum_slope : -(theta + 1.5);

    Rng rng(seed);
    SpectralVector U(grid);
    const int nx = grid.dims[0], ny = grid.dims[1], nz = grid.dims[2];
    const WaveTable wt(grid);
    // Deterministic half-space walk; conjugate mirror enforces symmetry.
    for (int c = 0; c < 3; ++c) {
        for (int kz = -(nz / 2 - 1); kz <= nz / 2 - 1; ++kz)
            for (int ky = -(ny / 2 - 1); ky <= ny / 2 - 1; ++ky)
                for (int kx = 0; kx <= nx / 2 - 1; ++kx) {
                    if (kx == 0 && (ky < 0 || (ky == 0 && kz <= 0))) continue;
                    const double kpx = wt.kx[kx >= 0 ? kx : kx + nx];
                    const double kpy = wt.ky[ky >= 0 ? ky : ky + ny];
                    const double kpz = wt.kz[kz >= 0 ? kz : kz + nz];
                    const double kk = std::sqrt(kpx * kpx + kpy * kpy + kpz * kpz);
                    double mag = std::pow(kk, slope);
                    if (c0_log_decay) mag /= std::log(std::exp(1.0) + kk);
                    const std::complex<double> gauss{rng.normal(), rng.normal()};
                    const std::complex<double> v = mag * gauss * std::sqrt(0.5);
                    U.at(c, kx, ky, kz) = v;
                    U.at(c, -kx, -ky, -kz) = std::conj(v);
                }
    }
    leray_project_spec(U);

    double sum2 = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const auto& z : U.component(c)) sum2 += std::norm(z);
    const double l2 = std::sqrt(grid.volume() * sum2);
    if (l2 > 0.0) {
        const double inv = 1.0 / l2;
        for (int c = 0; c < 3; ++c)
            for (auto& z : U.component(c)) z *= inv;
    }
    return to_physical(U);
}

VectorField sample_recipe(const FieldRecipe& recipe, const GridSpec& grid) {
    grid.validate();
    return std::visit(
        [&](const auto& r) -> VectorField {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, RotatedShearRecipe>) {
                if (grid.fully_periodic())
                    throw DomainMismatch("sample_recipe: rotated shear is a slab recipe");
                return sample_rotated_shear(r, grid);
            } else {
                if (!grid.fully_periodic())
                    throw DomainMismatch("sample_recipe: torus recipe on slab grid");
                if constexpr (std::is_same_v<T, AbcRecipe>) return sample_abc(r, grid);
                if constexpr (std::is_same_v<T, TaylorGreenRecipe>)
                    return sample_taylor_green(grid);
                if constexpr (std::is_same_v<T, SyntheticBesovRecipe>)
                    return synth_besov_field(r.theta, r.seed, grid, r.c0_log_decay,
                                             r.spectrum_slope);
                if constexpr (std::is_same_v<T, GradientRecipe>) return sample_gradient(r, grid);
            }
            throw InvalidParams("sample_recipe: unhandled recipe");
        },
        recipe);
}

namespace {

class SteadySpectralSampler : public VelocitySampler {
  public:
    explicit SteadySpectralSampler(const VectorField& u)
        : interp_(to_spectral(u)), max_speed_(0.0) {
        const auto m2 = magnitude_squared(u);
        for (double v : m2.component(0)) max_speed_ = std::max(max_speed_, v);
        max_speed_ = std::sqrt(max_speed_);
    }
    Vec3 velocity(const Vec3& x, double) const override {
        const auto v = interp_(x);
        return {v[0], v[1], v[2]};
    }
    Mat3 velocity_gradient(const Vec3& x, double) const override {
        const auto gr = interp_.gradient(x); // [axis][component]
        Mat3 g;
        for (int r = 0; r < 3; ++r)
            for (int a = 0; a < 3; ++a) g[3 * r + a] = gr[a][r];
        return g;
    }
    double max_speed() const override { return max_speed_; }

  private:
    SpectralInterpolant<3> interp_;
    double max_speed_;
};

class SeriesSampler : public VelocitySampler {
  public:
    SeriesSampler(const std::vector<VectorField>& series, double dt) : dt_(dt) {
        if (series.size() < 2) throw InsufficientData("flow_map_integrate: series needs >=2 slices");
        for (const auto& u : series) slices_.emplace_back(u);
        for (const auto& s : slices_) max_speed_ = std::max(max_speed_, s.max_speed());
    }
    Vec3 velocity(const Vec3& x, double t) const override {
        const auto [n, w] = locate(t);
        const Vec3 a = slices_[n].velocity(x, t);
        const Vec3 b = slices_[n + 1].velocity(x, t);
        return {(1 - w) * a[0] + w * b[0], (1 - w) * a[1] + w * b[1], (1 - w) * a[2] + w * b[2]};
    }
    Mat3 velocity_gradient(const Vec3& x, double t) const override {
        const auto [n, w] = locate(t);
        const Mat3 a = slices_[n].velocity_gradient(x, t);
        const Mat3 b = slices_[n + 1].velocity_gradient(x, t);
        Mat3 g;
        for (int i = 0; i < 9; ++i) g[i] = (1 - w) * a[i] + w * b[i];
        return g;
    }
    double max_speed() const override { return max_speed_; }

  private:
    std::pair<std::size_t, double> locate(double t) const {
        double s = t / dt_;
        const double nmax = static_cast<double>(slices_.size() - 2);
        s = std::min(std::max(s, 0.0), nmax + 1.0);
        std::size_t n = static_cast<std::size_t>(std::min(std::floor(s), nmax));
        return {n, s - static_cast<double>(n)};
    }
    std::vector<SteadySpectralSampler> slices_;
    double dt_;
    double max_speed_ = 0.0;
};

// One RK4 step of the coupled (X, grad X) system; sgn = -1 reverses the
// velocity (and runs clock backward from t0 for non-autonomous samplers).
void rk4_step(const VelocitySampler& s, double sgn, double t, double dt, Vec3& x, Mat3& J) {
    struct Stage {
        Vec3 v;
        Mat3 g;
    };
    auto eval = [&](const Vec3& xx, double tt) -> Stage {
        return {s.velocity(xx, tt), s.velocity_gradient(xx, tt)};
    };
    auto axpy = [](const Vec3& x0, double a, const Vec3& d) -> Vec3 {
        return {x0[0] + a * d[0], x0[1] + a * d[1], x0[2] + a * d[2]};
    };
    auto jdot = [](const Mat3& g, const Mat3& J0) { return mat3_mul(g, J0); };
    auto jaxpy = [](const Mat3& J0, double a, const Mat3& d) {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r[i] = J0[i] + a * d[i];
        return r;
    };

    const Stage k1 = eval(x, t);
    const Mat3 j1 = jdot(k1.g, J);
    const Stage k2 = eval(axpy(x, sgn * 0.5 * dt, k1.v), t + sgn * 0.5 * dt);
    const Mat3 j2 = jdot(k2.g, jaxpy(J, sgn * 0.5 * dt, j1));
    const Stage k3 = eval(axpy(x, sgn * 0.5 * dt, k2.v), t + sgn * 0.5 * dt);
    const Mat3 j3 = jdot(k3.g, jaxpy(J, sgn * 0.5 * dt, j2));
    const Stage k4 = eval(axpy(x, sgn * dt, k3.v), t + sgn * dt);
    const Mat3 j4 = jdot(k4.g, jaxpy(J, sgn * dt, j3));

    for (int a = 0; a < 3; ++a)
        x[a] += sgn * dt / 6.0 * (k1.v[a] + 2 * k2.v[a] + 2 * k3.v[a] + k4.v[a]);
    for (int i = 0; i < 9; ++i) J[i] += sgn * dt / 6.0 * (j1[i] + 2 * j2[i] + 2 * j3[i] + j4[i]);
}

void integrate_lattice(const VelocitySampler& s, double sgn, double t_final, double dt,
                       std::vector<Vec3>& xs, std::vector<Mat3>& js) {
    const std::size_t nsteps = static_cast<std::size_t>(std::llround(t_final / dt));
    const double step = nsteps > 0 ? t_final / static_cast<double>(nsteps) : dt;
    parallel_for(xs.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            Vec3 x = xs[p];
            Mat3 J = js[p];
            // Backward runs use the reversed clock t_final - tau.
            for (std::size_t n = 0; n < nsteps; ++n) {
                const double t = sgn > 0 ? step * static_cast<double>(n)
                                         : t_final - step * static_cast<double>(n);
                rk4_step(s, sgn, t, step, x, J);
            }
            xs[p] = x;
            js[p] = J;
        }
    });
}

} // namespace

FlowMap flow_map_integrate(const VelocitySampler& sampler, const GridSpec& lattice,
                           double t_final, double dt, bool with_backward) {
    if (!(dt > 0.0) || t_final < 0.0)
        throw InvalidParams("flow_map_integrate: need dt > 0 and t_final >= 0");
    const double umax = sampler.max_speed();
    const double h = lattice.min_spacing();
    if (umax > 0.0 && dt > h / (4.0 * umax))
        throw StepTooLarge("flow_map_integrate: dt " + std::to_string(dt) + " exceeds h/(4 umax) = " +
                           std::to_string(h / (4.0 * umax)));

    FlowMap map;
    map.grid = lattice;
    map.time = t_final;
    map.positions.resize(lattice.point_count());
    map.jacobians.assign(lattice.point_count(), kIdentity3);
    std::size_t idx = 0;
    for (int k = 0; k < lattice.dims[2]; ++k)
        for (int j = 0; j < lattice.dims[1]; ++j)
            for (int i = 0; i < lattice.dims[0]; ++i, ++idx)
                map.positions[idx] = {lattice.coord(0, i), lattice.coord(1, j),
                                      lattice.coord(2, k)};

    if (t_final == 0.0) {
        if (with_backward) {
            map.has_backward = true;
            map.inverse_positions = map.positions;
            map.inverse_jacobians = map.jacobians;
        }
        return map;
    }

    std::vector<Vec3> x0 = map.positions;
    integrate_lattice(sampler, +1.0, t_final, dt, map.positions, map.jacobians);

    if (with_backward) {
        map.inverse_positions = x0;
        map.inverse_jacobians.assign(lattice.point_count(), kIdentity3);
        integrate_lattice(sampler, -1.0, t_final, dt, map.inverse_positions,
                          map.inverse_jacobians);
        map.has_backward = true;
    }
    return map;
}

FlowMap flow_map_integrate(const VectorField& u, double t_final, double dt, bool with_backward) {
    SteadySpectralSampler sampler(u);
    return flow_map_integrate(sampler, u.grid(), t_final, dt, with_backward);
}

FlowMap flow_map_integrate(const std::vector<VectorField>& u_series, double series_dt,
                           double t_final, double dt, bool with_backward) {
    SeriesSampler sampler(u_series, series_dt);
    return flow_map_integrate(sampler, u_series.front().grid(), t_final, dt, with_backward);
}

VectorField cauchy_vorticity(const FlowMap& flow, const VectorField& omega0) {
    require_same_grid(flow.grid, omega0.grid(), "cauchy_vorticity");
    if (flow.time == 0.0) return omega0;
    if (!flow.has_backward)
        throw NeedBackwardFlow("cauchy_vorticity: flow map lacks the backward pass");

    const SpectralInterpolant<3> w0(to_spectral(omega0));
    VectorField out(omega0.grid());
    auto o0 = out.component(0), o1 = out.component(1), o2 = out.component(2);
    parallel_for(flow.positions.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const Vec3& y = flow.inverse_positions[p];
            // grad X_t at y is the inverse of the backward-map Jacobian at x.
            const Mat3 Jf = mat3_inverse(flow.inverse_jacobians[p]);
            const auto w = w0(y);
            const Vec3 wv = mat3_vec(Jf, {w[0], w[1], w[2]});
            o0[p] = wv[0];
            o1[p] = wv[1];
            o2[p] = wv[2];
        }
    });
    return out;
}

} // namespace heli
