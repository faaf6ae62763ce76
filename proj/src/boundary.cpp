#include "heli/boundary.hpp"

#include <cmath>
#include <complex>
#include <functional>

#include "heli/errors.hpp"
#include "heli/fft.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "heli/spectral.hpp"

namespace heli {

SlabDomain::SlabDomain(const GridSpec& g) : grid(g) {
    if (g.fully_periodic() || g.periodic[2] || !g.periodic[0] || !g.periodic[1])
        throw DomainMismatch("SlabDomain: grid must be periodic in x,y and bounded in z");
    const int nz = g.dims[2];
    z_nodes.resize(nz);
    z_weights.assign(nz, 1.0 / nz);
    for (int k = 0; k < nz; ++k) z_nodes[k] = g.coord(2, k);
}

ScalarField distance_field(const SlabDomain& d) {
    ScalarField out(d.grid);
    auto v = out.component(0);
    const double H = d.height();
    std::size_t idx = 0;
    for (int k = 0; k < d.grid.dims[2]; ++k) {
        const double dist = std::min(d.z_nodes[k], H - d.z_nodes[k]);
        for (int j = 0; j < d.grid.dims[1]; ++j)
            for (int i = 0; i < d.grid.dims[0]; ++i, ++idx) v[idx] = dist;
    }
    return out;
}

CutoffProfile cutoff_chi_r(const SlabDomain& d, double r) {
    const double hz = d.grid.spacing(2);
    if (!(r > 2.0 * hz) || !(r < 0.5 * d.height()))
        throw InvalidRadius("cutoff_chi_r: r must lie in (2 h_z, H/2), got " + std::to_string(r));
    CutoffProfile prof;
    prof.r = r;
    prof.values = ScalarField(d.grid);
    prof.gradient = VectorField(d.grid);
    auto v = prof.values.component(0);
    auto gz = prof.gradient.component(2);
    const double H = d.height();
    std::size_t idx = 0;
    for (int k = 0; k < d.grid.dims[2]; ++k) {
        const double z = d.z_nodes[k];
        const double dist = std::min(z, H - z);
        const double chi = std::min(dist / r, 1.0);
        const double slope = dist >= r ? 0.0 : (z < H - z ? 1.0 / r : -1.0 / r);
        for (int j = 0; j < d.grid.dims[1]; ++j)
            for (int i = 0; i < d.grid.dims[0]; ++i, ++idx) {
                v[idx] = chi;
                gz[idx] = slope;
            }
    }
    return prof;
}

namespace {

// d/dz by 4th-order centered differences, one-sided at the two layers
// nearest each face.
void dz_fd4(const GridSpec& g, std::span<const double> src, std::span<double> dst) {
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
    const double inv12h = 1.0 / (12.0 * g.spacing(2));
    const std::size_t plane = static_cast<std::size_t>(nx) * ny;
    auto at = [&](int k, std::size_t p) { return src[static_cast<std::size_t>(k) * plane + p]; };
    for (int k = 0; k < nz; ++k) {
        double c[5];
        int base;
        if (k == 0) {
            base = 0;
            c[0] = -25; c[1] = 48; c[2] = -36; c[3] = 16; c[4] = -3;
        } else if (k == 1) {
            base = 0;
            c[0] = -3; c[1] = -10; c[2] = 18; c[3] = -6; c[4] = 1;
        } else if (k == nz - 2) {
            base = nz - 5;
            c[0] = -1; c[1] = 6; c[2] = -18; c[3] = 10; c[4] = 3;
        } else if (k == nz - 1) {
            base = nz - 5;
            c[0] = 3; c[1] = -16; c[2] = 36; c[3] = -48; c[4] = 25;
        } else {
            base = k - 2;
            c[0] = 1; c[1] = -8; c[2] = 0; c[3] = 8; c[4] = -1;
        }
        for (std::size_t p = 0; p < plane; ++p) {
            double acc = 0.0;
            for (int s = 0; s < 5; ++s) acc += c[s] * at(base + s, p);
            dst[static_cast<std::size_t>(k) * plane + p] = acc * inv12h;
        }
    }
}

// Horizontal spectral derivative (axis 0 or 1) applied plane by plane.
void dxy_spectral(const GridSpec& g, int axis, std::span<const double> src,
                  std::span<double> dst) {
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
    const std::size_t plane = static_cast<std::size_t>(nx) * ny;
    std::vector<std::complex<double>> buf(plane);
    std::vector<double> kx(nx), ky(ny);
    for (int i = 0; i < nx; ++i) {
        const int w = wavenumber(i, nx);
        kx[i] = ((nx % 2 == 0) && i == nx / 2) ? 0.0 : kTwoPi * w / g.lengths[0];
    }
    for (int j = 0; j < ny; ++j) {
        const int w = wavenumber(j, ny);
        ky[j] = ((ny % 2 == 0) && j == ny / 2) ? 0.0 : kTwoPi * w / g.lengths[1];
    }
    for (int k = 0; k < nz; ++k) {
        const std::size_t off = static_cast<std::size_t>(k) * plane;
        for (std::size_t p = 0; p < plane; ++p) buf[p] = {src[off + p], 0.0};
        detail::dft2(nx, ny, buf.data(), -1);
        std::size_t q = 0;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i, ++q)
                buf[q] *= std::complex<double>{0.0, axis == 0 ? kx[i] : ky[j]};
        detail::dft2(nx, ny, buf.data(), +1);
        const double scale = 1.0 / static_cast<double>(plane);
        for (std::size_t p = 0; p < plane; ++p) dst[off + p] = buf[p].real() * scale;
    }
}

void require_slab(const GridSpec& g, const char* where) {
    if (g.fully_periodic() || g.periodic[2])
        throw DomainMismatch(std::string(where) + ": requires a slab grid");
}

} // namespace

VectorField slab_gradient(const ScalarField& f) {
    require_slab(f.grid(), "slab_gradient");
    VectorField out(f.grid());
    dxy_spectral(f.grid(), 0, f.component(0), out.component(0));
    dxy_spectral(f.grid(), 1, f.component(0), out.component(1));
    dz_fd4(f.grid(), f.component(0), out.component(2));
    return out;
}

VectorField slab_curl(const VectorField& u) {
    require_slab(u.grid(), "slab_curl");
    const auto& g = u.grid();
    std::vector<double> tmp_a(u.points()), tmp_b(u.points());
    VectorField out(g);

    // omega_x = d_y u3 - d_z u2
    dxy_spectral(g, 1, u.component(2), tmp_a);
    dz_fd4(g, u.component(1), tmp_b);
    for (std::size_t i = 0; i < u.points(); ++i) out.component(0)[i] = tmp_a[i] - tmp_b[i];
    // omega_y = d_z u1 - d_x u3
    dz_fd4(g, u.component(0), tmp_a);
    dxy_spectral(g, 0, u.component(2), tmp_b);
    for (std::size_t i = 0; i < u.points(); ++i) out.component(1)[i] = tmp_a[i] - tmp_b[i];
    // omega_z = d_x u2 - d_y u1
    dxy_spectral(g, 0, u.component(1), tmp_a);
    dxy_spectral(g, 1, u.component(0), tmp_b);
    for (std::size_t i = 0; i < u.points(); ++i) out.component(2)[i] = tmp_a[i] - tmp_b[i];
    return out;
}

ScalarField slab_divergence(const VectorField& u) {
    require_slab(u.grid(), "slab_divergence");
    const auto& g = u.grid();
    std::vector<double> tmp(u.points());
    ScalarField out(g);
    auto o = out.component(0);
    dxy_spectral(g, 0, u.component(0), tmp);
    for (std::size_t i = 0; i < u.points(); ++i) o[i] += tmp[i];
    dxy_spectral(g, 1, u.component(1), tmp);
    for (std::size_t i = 0; i < u.points(); ++i) o[i] += tmp[i];
    dz_fd4(g, u.component(2), tmp);
    for (std::size_t i = 0; i < u.points(); ++i) o[i] += tmp[i];
    return out;
}

double slab_integrate(const ScalarField& f) { return integrate(f); }

double TraceEstimate::mean() const {
    if (values.empty()) return 0.0;
    return pairwise_sum(values) / static_cast<double>(values.size());
}

namespace {

// Cumulative in-column layer averages extrapolated linearly to the face.
TraceEstimate trace_from_layers(const GridSpec& g, Face face, int shells,
                                const std::function<double(std::size_t)>& layer_value) {
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
    if (shells < 3) throw ShellUnderResolved("trace estimate: need >= 3 shells");
    if (shells > nz / 2)
        throw ShellUnderResolved("trace estimate: shells exceed half the layer count");
    const double hz = g.spacing(2);
    const std::size_t plane = static_cast<std::size_t>(nx) * ny;

    TraceEstimate est;
    est.face = face;
    est.values.assign(plane, 0.0);
    for (int m = 1; m <= shells; ++m) est.shell_radii.push_back(0.5 * hz * m);

    // Precompute LS coefficients for the linear fit through (rho_m, A_m).
    std::vector<double> rho = est.shell_radii;
    double sr = 0, srr = 0;
    for (double x : rho) {
        sr += x;
        srr += x * x;
    }
    const double n = shells;
    const double den = n * srr - sr * sr;

    double residual = 0.0;
    for (std::size_t p = 0; p < plane; ++p) {
        std::vector<double> A(shells);
        double acc = 0.0;
        for (int m = 1; m <= shells; ++m) {
            const int layer = face == Face::Bottom ? m - 1 : nz - m;
            acc += layer_value(static_cast<std::size_t>(layer) * plane + p);
            A[m - 1] = acc / m;
        }
        double sy = 0, sxy = 0;
        for (int m = 0; m < shells; ++m) {
            sy += A[m];
            sxy += rho[m] * A[m];
        }
        const double slope = (n * sxy - sr * sy) / den;
        const double intercept = (sy - slope * sr) / n;
        est.values[p] = intercept;
        for (int m = 0; m < shells; ++m)
            residual = std::max(residual, std::abs(A[m] - (intercept + slope * rho[m])));
    }
    est.residual = residual;
    return est;
}

} // namespace

TraceEstimate normal_trace_estimate(const VectorField& U, const SlabDomain& d, Face face,
                                    int shells) {
    require_same_grid(U.grid(), d.grid, "normal_trace_estimate");
    // -U.grad(dist): grad(dist) = +e3 below midplane, -e3 above.
    const double sign = face == Face::Bottom ? -1.0 : 1.0;
    auto uz = U.component(2);
    return trace_from_layers(d.grid, face, shells,
                             [&](std::size_t idx) { return sign * uz[idx]; });
}

TraceEstimate full_trace_estimate(const ScalarField& f, const SlabDomain& d, Face face,
                                  int shells) {
    require_same_grid(f.grid(), d.grid, "full_trace_estimate");
    auto v = f.component(0);
    return trace_from_layers(d.grid, face, shells, [&](std::size_t idx) { return v[idx]; });
}

TracePairingReport trace_pairing_limit(const VectorField& U, const ScalarField& phi,
                                       const SlabDomain& d, const std::vector<double>& radii,
                                       double tolerance) {
    require_same_grid(U.grid(), d.grid, "trace_pairing_limit");
    require_same_grid(phi.grid(), d.grid, "trace_pairing_limit");
    if (radii.size() < 4) throw InvalidParams("trace_pairing_limit: need >= 4 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]))
            throw InvalidParams("trace_pairing_limit: radii must be strictly decreasing");

    TracePairingReport rep;
    rep.radii = radii;
    for (double r : radii) {
        const CutoffProfile chi = cutoff_chi_r(d, r);
        rep.lhs.push_back(slab_integrate(dot(U, multiply(phi, chi.gradient))));
    }

    // RHS from the trace estimators.
    double rhs = 0.0;
    for (Face face : {Face::Bottom, Face::Top}) {
        const TraceEstimate un = normal_trace_estimate(U, d, face);
        const TraceEstimate ph = full_trace_estimate(phi, d, face);
        double acc = 0.0;
        for (std::size_t p = 0; p < un.values.size(); ++p) acc += ph.values[p] * un.values[p];
        rhs -= acc / static_cast<double>(un.values.size()) * d.face_area();
    }
    rep.rhs = rhs;

    // Linear extrapolation of LHS_r to r = 0.
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(radii.size());
        for (std::size_t i = 0; i < radii.size(); ++i) {
            sx += radii[i];
            sy += rep.lhs[i];
            sxx += radii[i] * radii[i];
            sxy += radii[i] * rep.lhs[i];
        }
        const double den = n * sxx - sx * sx;
        const double slope = (n * sxy - sx * sy) / den;
        rep.lhs_extrapolated = (sy - slope * sx) / n;
    }

    rep.gaps_decreasing = true;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        rep.gaps.push_back(std::abs(rep.lhs[i] - rep.rhs));
        if (i > 0 && rep.gaps[i] > rep.gaps[i - 1] + 1e-12) rep.gaps_decreasing = false;
    }
    rep.final_gap = std::abs(rep.lhs_extrapolated - rep.rhs);
    rep.pass = rep.gaps_decreasing && rep.final_gap < tolerance;
    return rep;
}

FluxReport boundary_helicity_flux(const VectorField& u, const ScalarField& p,
                                  const SlabDomain& d) {
    require_same_grid(u.grid(), d.grid, "boundary_helicity_flux");
    require_same_grid(p.grid(), d.grid, "boundary_helicity_flux");
    const VectorField omega = slab_curl(u);

    // head = |u|^2/2 - p
    ScalarField head = magnitude_squared(u);
    {
        auto v = head.component(0);
        auto pp = p.component(0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * v[i] - pp[i];
    }

    FluxReport rep;
    const double umax = max_abs(u);
    double flux = 0.0, worst_residual = 0.0;
    for (Face face : {Face::Bottom, Face::Top}) {
        const TraceEstimate un = normal_trace_estimate(u, d, face);
        const TraceEstimate wn = normal_trace_estimate(omega, d, face);
        const TraceEstimate hd = full_trace_estimate(head, d, face);
        double tang = 0.0, acc = 0.0;
        for (std::size_t q = 0; q < un.values.size(); ++q) {
            tang = std::max(tang, std::abs(un.values[q]));
            acc += hd.values[q] * wn.values[q];
        }
        flux += acc / static_cast<double>(un.values.size()) * d.face_area();
        rep.tangency = std::max(rep.tangency, tang);
        worst_residual = std::max({worst_residual, wn.residual, hd.residual});
    }
    rep.flux = flux;
    if (umax > 0.0 && rep.tangency > kTangencyGate * umax) {
        rep.trusted = false;
        rep.note = "velocity not tangent within the impermeability gate";
    }
    const double scale = std::max(1.0, umax * umax);
    if (worst_residual > 0.05 * scale) {
        rep.trusted = false;
        rep.note += std::string(rep.note.empty() ? "" : "; ") + "trace shells far from linear";
    }
    return rep;
}

double slab_total_helicity(const VectorField& u, const SlabDomain& d) {
    require_same_grid(u.grid(), d.grid, "slab_total_helicity");
    return slab_integrate(dot(u, slab_curl(u)));
}

namespace {

double alpha_bump(double t, double center, double halfwidth) {
    const double tau = (t - center) / halfwidth;
    const double s = 1.0 - tau * tau;
    return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double alpha_bump_derivative(double t, double center, double halfwidth) {
    const double tau = (t - center) / halfwidth;
    const double s = 1.0 - tau * tau;
    if (s <= 0.0) return 0.0;
    return alpha_bump(t, center, halfwidth) * (-2.0 * tau / (s * s)) / halfwidth;
}

} // namespace

BudgetReport helicity_budget(const std::vector<VectorField>& u_series,
                             const std::vector<ScalarField>& p_series, double dt,
                             const SlabDomain& d, int alpha_battery) {
    if (u_series.size() < 8)
        throw InsufficientData("helicity_budget: need >= 8 time slices");
    if (u_series.size() != p_series.size())
        throw InsufficientData("helicity_budget: velocity/pressure series length mismatch");
    if (alpha_battery < 1) throw InvalidParams("helicity_budget: empty alpha battery");

    const std::size_t nt = u_series.size();
    const double duration = dt * static_cast<double>(nt - 1);

    BudgetReport rep;
    rep.times.resize(nt);
    rep.helicity.resize(nt);
    rep.flux.resize(nt);
    for (std::size_t n = 0; n < nt; ++n) {
        rep.times[n] = dt * static_cast<double>(n);
        rep.helicity[n] = slab_total_helicity(u_series[n], d);
        const FluxReport f = boundary_helicity_flux(u_series[n], p_series[n], d);
        rep.flux[n] = f.flux;
        rep.trusted = rep.trusted && f.trusted;
    }

    for (int a = 0; a < alpha_battery; ++a) {
        const double center = duration * (a + 1.0) / (alpha_battery + 1.0);
        const double halfwidth = duration / (alpha_battery + 1.0);
        double lhs = 0.0, rhs = 0.0, amax = 0.0, apmax = 0.0;
        for (std::size_t n = 0; n < nt; ++n) {
            const double w = (n == 0 || n + 1 == nt) ? 0.5 * dt : dt;
            const double al = alpha_bump(rep.times[n], center, halfwidth);
            const double alp = alpha_bump_derivative(rep.times[n], center, halfwidth);
            lhs += w * alp * rep.helicity[n];
            rhs += w * al * rep.flux[n];
            amax = std::max(amax, std::abs(al));
            apmax = std::max(apmax, std::abs(alp));
        }
        const double norm = std::max(amax + apmax, 1e-300);
        rep.residual_raw.push_back(std::abs(lhs - rhs));
        rep.residual.push_back(std::abs(lhs - rhs) / norm);
        rep.max_residual = std::max(rep.max_residual, rep.residual.back());
    }
    return rep;
}

} // namespace heli
