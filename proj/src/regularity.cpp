#include "heli/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "heli/errors.hpp"
#include "heli/mollify.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "heli/rng.hpp"
#include "heli/spectral.hpp"

namespace heli {

namespace {

void require_torus(const GridSpec& g, const char* where) {
    if (!g.fully_periodic())
        throw GridMismatch(std::string(where) + ": requires a fully periodic grid");
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i]; syy += ys[i] * ys[i];
    }
    LineFit f;
    const double den = n * sxx - sx * sx;
    if (den == 0.0 || n < 2) return f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (f.intercept + f.slope * xs[i]);
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// All 26 nonzero lattice offsets in {-1,0,1}^3.
std::vector<std::array<int, 3>> lattice_directions() {
    std::vector<std::array<int, 3>> dirs;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c)
                if (a || b || c) dirs.push_back({a, b, c});
    return dirs;
}

ScalarField shifted_difference(const ScalarField& f, const std::array<int, 3>& steps) {
    const auto& g = f.grid();
    ScalarField out(g);
    auto src = f.component(0);
    auto dst = out.component(0);
    std::size_t idx = 0;
    for (int k = 0; k < g.dims[2]; ++k) {
        const int kk = ((k + steps[2]) % g.dims[2] + g.dims[2]) % g.dims[2];
        for (int j = 0; j < g.dims[1]; ++j) {
            const int jj = ((j + steps[1]) % g.dims[1] + g.dims[1]) % g.dims[1];
            for (int i = 0; i < g.dims[0]; ++i, ++idx) {
                const int ii = ((i + steps[0]) % g.dims[0] + g.dims[0]) % g.dims[0];
                dst[idx] = src[g.index(ii, jj, kk)] - src[idx];
            }
        }
    }
    return out;
}

double increment_norm(const ScalarField& diff, double p) {
    if (std::isinf(p)) return max_abs(diff);
    return lp_norm(diff, p);
}

// (actual |h|, ratio ||d_h f||_p / |h|^theta) for every direction x magnitude.
std::vector<std::pair<double, double>> increment_ratios(const ScalarField& f,
                                                        const BesovParams& params) {
    const auto& g = f.grid();
    std::vector<std::pair<double, double>> entries;
    for (const auto& dir : lattice_directions()) {
        const double step_len = std::sqrt(
            dir[0] * dir[0] * g.spacing(0) * g.spacing(0) +
            dir[1] * dir[1] * g.spacing(1) * g.spacing(1) +
            dir[2] * dir[2] * g.spacing(2) * g.spacing(2));
        for (double a : params.increments) {
            const int m = std::max(1, static_cast<int>(std::llround(a / step_len)));
            const double actual = m * step_len;
            if (actual > 0.5 * g.min_length()) continue; // keep within half box
            const ScalarField diff =
                shifted_difference(f, {m * dir[0], m * dir[1], m * dir[2]});
            entries.emplace_back(actual,
                                 increment_norm(diff, params.p) / std::pow(actual, params.theta));
        }
    }
    return entries;
}

} // namespace

void BesovParams::validate(const GridSpec& grid) const {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParams("BesovParams: theta must be in (0,1)");
    if (!(p >= 1.0)) throw InvalidParams("BesovParams: p must be >= 1");
    if (increments.empty()) throw InvalidParams("BesovParams: empty increment ladder");
    for (std::size_t i = 0; i < increments.size(); ++i) {
        if (increments[i] < grid.min_spacing())
            throw InvalidParams("BesovParams: increment below grid spacing");
        if (i > 0 && !(increments[i] < increments[i - 1]))
            throw InvalidParams("BesovParams: increment ladder must be decreasing");
    }
}

SeminormReport h_half_seminorm_fourier(const ScalarField& f) {
    require_torus(f.grid(), "h_half_seminorm_fourier");
    const auto F = to_spectral(f);
    const auto k2 = kappa_squared(f.grid());
    std::vector<double> terms(f.points());
    auto c = F.component(0);
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::sqrt(k2[i]) * std::norm(c[i]);
    SeminormReport rep;
    rep.method = "fourier";
    rep.value = std::sqrt(pairwise_sum(terms));
    return rep;
}

double gagliardo_pair_sum_mode(const GridSpec& grid, const std::array<int, 3>& mode) {
    // For f = cos(kappa.x): sum_x |f(x) - f(x+r)|^2 = N^3 (1 - cos(kappa.r)).
    const double h3 = grid.cell_volume();
    const double kap[3] = {kTwoPi * mode[0] / grid.lengths[0], kTwoPi * mode[1] / grid.lengths[1],
                           kTwoPi * mode[2] / grid.lengths[2]};
    double acc = 0.0;
    for (int rz = 0; rz < grid.dims[2]; ++rz)
        for (int ry = 0; ry < grid.dims[1]; ++ry)
            for (int rx = 0; rx < grid.dims[0]; ++rx) {
                if (rx == 0 && ry == 0 && rz == 0) continue;
                auto torus_delta = [&](int r, int axis) {
                    const int n = grid.dims[axis];
                    const int s = r > n / 2 ? r - n : r;
                    return s * grid.spacing(axis);
                };
                const double dx = torus_delta(rx, 0), dy = torus_delta(ry, 1),
                             dz = torus_delta(rz, 2);
                const double d2 = dx * dx + dy * dy + dz * dz;
                const double kr = kap[0] * dx + kap[1] * dy + kap[2] * dz;
                acc += (1.0 - std::cos(kr)) / (d2 * d2);
            }
    return acc * h3 * h3 * static_cast<double>(grid.point_count());
}

double gagliardo_calibration(const GridSpec& grid) {
    static std::mutex mu;
    static std::map<std::array<int, 3>, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(grid.dims);
    if (it != cache.end()) return it->second;
    const std::vector<std::array<int, 3>> battery = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {2, 0, 0}, {1, 1, 1}};
    double acc = 0.0;
    for (const auto& m : battery) {
        const double kx = kTwoPi * m[0] / grid.lengths[0];
        const double ky = kTwoPi * m[1] / grid.lengths[1];
        const double kz = kTwoPi * m[2] / grid.lengths[2];
        const double kmag = std::sqrt(kx * kx + ky * ky + kz * kz);
        const double fourier_sq = kmag * 0.5; // [cos]^2 = |kappa| (1/2)^2 * 2
        acc += gagliardo_pair_sum_mode(grid, m) / fourier_sq;
    }
    const double gamma = acc / static_cast<double>(battery.size());
    cache.emplace(grid.dims, gamma);
    return gamma;
}

SeminormReport gagliardo_seminorm_mc(const ScalarField& f, std::size_t samples,
                                     std::uint64_t seed) {
    require_torus(f.grid(), "gagliardo_seminorm_mc");
    const auto& g = f.grid();
    if (g.dims[0] > 32 || g.dims[1] > 32 || g.dims[2] > 32)
        throw CostGuard("gagliardo_seminorm_mc: N > 32 per axis");
    if (samples < 10000) throw InvalidParams("gagliardo_seminorm_mc: need >= 1e4 samples");

    // Bucket displacements into dyadic |r| shells (units of min spacing).
    struct Shell {
        std::vector<std::array<int, 3>> members;
        std::vector<double> kernel; // K(r) = d^{-4}
    };
    const double h = g.min_spacing();
    std::vector<Shell> shells;
    auto shell_of = [&](double d) {
        int s = 0;
        double lim = 1.5 * h;
        while (d > lim) {
            lim *= 2.0;
            ++s;
        }
        return s;
    };
    for (int rz = 0; rz < g.dims[2]; ++rz)
        for (int ry = 0; ry < g.dims[1]; ++ry)
            for (int rx = 0; rx < g.dims[0]; ++rx) {
                if (rx == 0 && ry == 0 && rz == 0) continue;
                auto delta = [&](int r, int axis) {
                    const int n = g.dims[axis];
                    const int s = r > n / 2 ? r - n : r;
                    return s * g.spacing(axis);
                };
                const double dx = delta(rx, 0), dy = delta(ry, 1), dz = delta(rz, 2);
                const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                const int s = shell_of(d);
                if (s >= static_cast<int>(shells.size())) shells.resize(s + 1);
                shells[s].members.push_back({rx, ry, rz});
                shells[s].kernel.push_back(1.0 / (d * d * d * d));
            }

    const double pair_weight = g.cell_volume() * g.cell_volume();
    const std::size_t per_shell = std::max<std::size_t>(1, samples / shells.size());
    auto v = f.component(0);

    double total = 0.0, var_total = 0.0;
    for (std::size_t s = 0; s < shells.size(); ++s) {
        const Shell& sh = shells[s];
        if (sh.members.empty()) continue;
        Rng rng(seed * 1315423911ull + s);
        const double scale =
            static_cast<double>(sh.members.size()) * static_cast<double>(g.point_count());
        double acc = 0.0, acc2 = 0.0;
        for (std::size_t n = 0; n < per_shell; ++n) {
            const std::size_t mi = rng.integer(sh.members.size());
            const auto& r = sh.members[mi];
            const int i = static_cast<int>(rng.integer(g.dims[0]));
            const int j = static_cast<int>(rng.integer(g.dims[1]));
            const int k = static_cast<int>(rng.integer(g.dims[2]));
            const double a = v[g.index(i, j, k)];
            const double b = v[g.index((i + r[0]) % g.dims[0], (j + r[1]) % g.dims[1],
                                       (k + r[2]) % g.dims[2])];
            const double w = (a - b) * (a - b) * sh.kernel[mi] * pair_weight * scale;
            acc += w;
            acc2 += w * w;
        }
        const double m = acc / static_cast<double>(per_shell);
        const double var =
            std::max(0.0, acc2 / static_cast<double>(per_shell) - m * m) /
            static_cast<double>(per_shell);
        total += m;
        var_total += var;
    }

    const double gamma = gagliardo_calibration(g);
    SeminormReport rep;
    rep.method = "gagliardo_mc";
    const double value_sq = std::max(total / gamma, 0.0);
    rep.value = std::sqrt(value_sq);
    // delta method: d sqrt(S/gamma) = dS / (2 sqrt(S gamma))
    rep.mc_stderr = total > 0.0 ? std::sqrt(var_total) / (2.0 * std::sqrt(total * gamma)) : 0.0;
    return rep;
}

SeminormReport besov_seminorm(const ScalarField& f, const BesovParams& params) {
    require_torus(f.grid(), "besov_seminorm");
    params.validate(f.grid());
    const auto entries = increment_ratios(f, params);
    SeminormReport rep;
    rep.method = "finite_difference";
    for (const auto& [h, ratio] : entries) rep.value = std::max(rep.value, ratio);
    // per-magnitude table: sup over directions near each requested magnitude
    for (double a : params.increments) {
        double best = 0.0;
        for (const auto& [h, ratio] : entries)
            if (h <= a * 1.0000000001) best = std::max(best, ratio);
        rep.rung_table.emplace_back(a, best);
    }
    return rep;
}

std::vector<std::pair<double, double>> besov_modulus(const ScalarField& f,
                                                     const BesovParams& params) {
    require_torus(f.grid(), "besov_modulus");
    params.validate(f.grid());
    const auto entries = increment_ratios(f, params);
    std::vector<std::pair<double, double>> table;
    std::vector<double> eps_sorted = params.increments;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    for (double eps : eps_sorted) {
        double sup = 0.0;
        for (const auto& [h, ratio] : entries)
            if (h <= eps * 1.0000000001) sup = std::max(sup, ratio);
        table.emplace_back(eps, sup);
    }
    return table;
}

bool c0_modulus_proxy(const std::vector<std::pair<double, double>>& modulus_table) {
    if (modulus_table.size() < 2) throw InvalidParams("c0_modulus_proxy: table too short");
    const double lo = modulus_table.front().second;
    const double hi = modulus_table.back().second;
    if (hi <= 0.0) return true; // constant fields: trivially c_0
    return lo / hi < kC0ProxyRatioGate;
}

std::vector<double> default_increments(const GridSpec& grid, int count) {
    std::vector<double> out;
    double a = grid.min_length() / 4.0;
    for (int i = 0; i < count && a >= grid.min_spacing(); ++i, a *= 0.5) out.push_back(a);
    if (out.size() < 2) throw InvalidParams("default_increments: grid too coarse");
    return out;
}

ScalingFit scaling_exponent(const ScalarField& f, double p,
                            const std::vector<double>& increments) {
    require_torus(f.grid(), "scaling_exponent");
    if (increments.size() < 5)
        throw InvalidParams("scaling_exponent: need >= 5 increment magnitudes");
    const double lo = *std::min_element(increments.begin(), increments.end());
    const double hi = *std::max_element(increments.begin(), increments.end());
    if (hi / lo < 10.0)
        throw InvalidParams("scaling_exponent: increments must span a decade");
    BesovParams params;
    params.theta = 0.5; // unused by the ratios below
    params.p = p;
    params.increments = increments;
    std::sort(params.increments.begin(), params.increments.end(), std::greater<>());
    params.validate(f.grid());

    std::vector<double> xs, ys;
    const auto& g = f.grid();
    for (const auto& dir : lattice_directions()) {
        const double step_len = std::sqrt(
            dir[0] * dir[0] * g.spacing(0) * g.spacing(0) +
            dir[1] * dir[1] * g.spacing(1) * g.spacing(1) +
            dir[2] * dir[2] * g.spacing(2) * g.spacing(2));
        for (double a : params.increments) {
            const int m = std::max(1, static_cast<int>(std::llround(a / step_len)));
            const double actual = m * step_len;
            if (actual > 0.5 * g.min_length()) continue;
            const ScalarField diff = shifted_difference(f, {m * dir[0], m * dir[1], m * dir[2]});
            const double norm = increment_norm(diff, p);
            if (norm <= 0.0) continue;
            xs.push_back(std::log(actual));
            ys.push_back(std::log(norm));
        }
    }
    const LineFit fit = fit_line(xs, ys);
    ScalingFit out;
    out.theta = fit.slope;
    out.r2 = fit.r2;
    out.poor_fit = fit.r2 < 0.9;
    return out;
}

CommutatorBoundReport verify_commutator_bounds(const ScalarField& f, const ScalarField& g,
                                               double theta, double p,
                                               const std::vector<double>& epsilons,
                                               int k_order) {
    require_torus(f.grid(), "verify_commutator_bounds");
    require_same_grid(f.grid(), g.grid(), "verify_commutator_bounds");
    if (k_order != 1 && k_order != 2)
        throw InvalidParams("verify_commutator_bounds: k must be 1 or 2");
    if (epsilons.size() < 3)
        throw InvalidParams("verify_commutator_bounds: need >= 3 epsilons");
    const double h = f.grid().min_spacing();
    for (double e : epsilons)
        if (e < 2.0 * h)
            throw EpsilonUnderResolved("verify_commutator_bounds: eps below 2h");
    const bool do_quad = p >= 2.0;

    CommutatorBoundReport rep;
    rep.grad_predicted = theta - k_order;
    rep.quad_predicted = 2.0 * theta;

    const ScalarField fg = multiply(f, g);
    for (double eps : epsilons) {
        const Mollifier m = make_mollifier(MollifierKind::Bump, eps, f.grid());
        const ScalarField fe = mollify(f, m);

        double grad_norm;
        const VectorField g1 = gradient(fe);
        if (k_order == 1) {
            grad_norm = lp_norm_magnitude(g1, p);
        } else {
            TensorField hess(f.grid());
            for (int a = 0; a < 3; ++a) {
                const VectorField da = partial_derivative(g1, a);
                for (int r = 0; r < 3; ++r) {
                    auto dst = hess.component(tensor_index(r, a));
                    auto src = da.component(r);
                    std::copy(src.begin(), src.end(), dst.begin());
                }
            }
            grad_norm = lp_norm_magnitude(hess, p);
        }
        rep.grad_table.emplace_back(eps, grad_norm);

        if (do_quad) {
            const ScalarField ge = mollify(g, m);
            const ScalarField comm = sub(multiply(fe, ge), mollify(fg, m));
            rep.quad_table.emplace_back(eps, lp_norm(comm, p / 2.0));
        }
    }

    auto slope_of = [](const std::vector<std::pair<double, double>>& table) {
        std::vector<double> xs, ys;
        for (const auto& [e, v] : table) {
            xs.push_back(std::log(e));
            ys.push_back(std::log(std::max(v, 1e-300)));
        }
        return fit_line(xs, ys).slope;
    };
    rep.grad_slope = slope_of(rep.grad_table);
    rep.grad_pass = rep.grad_slope >= rep.grad_predicted - 0.25;
    if (do_quad) {
        rep.quad_slope = slope_of(rep.quad_table);
        rep.quad_pass = rep.quad_slope >= rep.quad_predicted - 0.25;
    }
    return rep;
}

ProductBoundReport verify_product_h_half(const ScalarField& f, const ScalarField& g) {
    require_torus(f.grid(), "verify_product_h_half");
    require_same_grid(f.grid(), g.grid(), "verify_product_h_half");
    const ScalarField fg = multiply(f, g);
    ProductBoundReport rep;
    rep.lhs = l2_norm(fg) + h_half_seminorm_fourier(fg).value;
    rep.rhs = max_abs(f) * l2_norm(g) + max_abs(g) * h_half_seminorm_fourier(f).value +
              max_abs(f) * h_half_seminorm_fourier(g).value;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

HolderEstimate holder_exponent_estimate(const std::vector<double>& series, double dt) {
    if (series.size() < 256)
        throw InsufficientData("holder_exponent_estimate: need >= 256 samples");
    HolderEstimate est;
    const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
    if (*mx - *mn == 0.0) {
        est.conserved = true;
        return est;
    }
    std::vector<double> xs, ys;
    for (std::size_t lag = 1; lag <= series.size() / 8; lag *= 2) {
        double m = 0.0;
        for (std::size_t n = 0; n + lag < series.size(); ++n)
            m = std::max(m, std::abs(series[n + lag] - series[n]));
        if (m > 0.0) {
            xs.push_back(std::log(static_cast<double>(lag) * dt));
            ys.push_back(std::log(m));
        }
    }
    const LineFit fit = fit_line(xs, ys);
    est.sigma = std::min(fit.slope, 1.0);
    est.r2 = fit.r2;
    return est;
}

double support_dimension_boxcount(const std::vector<double>& series, double dt,
                                  double threshold) {
    if (series.size() < 256)
        throw InsufficientData("support_dimension_boxcount: need >= 256 samples");
    const std::size_t n = series.size() - 1;
    std::vector<char> flagged(n);
    for (std::size_t i = 0; i < n; ++i)
        flagged[i] = std::abs(series[i + 1] - series[i]) / dt > threshold;

    std::vector<double> xs, ys;
    for (std::size_t box = 1; box <= n / 8; box *= 2) {
        std::size_t count = 0;
        for (std::size_t start = 0; start < n; start += box) {
            const std::size_t end = std::min(start + box, n);
            for (std::size_t i = start; i < end; ++i)
                if (flagged[i]) {
                    ++count;
                    break;
                }
        }
        if (count > 0) {
            xs.push_back(-std::log(static_cast<double>(box) * dt));
            ys.push_back(std::log(static_cast<double>(count)));
        }
    }
    return fit_line(xs, ys).slope;
}

} // namespace heli
