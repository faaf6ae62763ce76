#include "heli/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "heli/errors.hpp"
#include "heli/parallel.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"

namespace heli {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double bump_profile(double r) {
    const double t = 1.0 - r * r;
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// Radial integral I(s) = int_0^1 r^2 rho(r) sinc(s r) dr by composite GL;
// panel count grows with s to track the oscillation.
double bump_radial_integral(double s) {
    const int panels = std::max(6, static_cast<int>(std::ceil(s / 3.0)) + 6);
    const double dw = 1.0 / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * dw, b = a + dw;
        for (int q = 0; q < kGL; ++q) {
            const double r = 0.5 * (a + b) + 0.5 * dw * kGLx[q];
            const double sr = s * r;
            const double sinc = std::abs(sr) < 1e-8 ? 1.0 - sr * sr / 6.0 : std::sin(sr) / sr;
            acc += 0.5 * dw * kGLw[q] * r * r * bump_profile(r) * sinc;
        }
    }
    return acc;
}

double bump_mass_integral() {
    static const double mass = bump_radial_integral(0.0);
    return mass;
}

} // namespace

double mollifier_symbol(MollifierKind kind, double s) {
    if (kind == MollifierKind::Gaussian) return std::exp(-0.5 * s * s);
    if (s == 0.0) return 1.0;
    return bump_radial_integral(s) / bump_mass_integral();
}

Mollifier make_mollifier(MollifierKind kind, double epsilon, const GridSpec& grid) {
    if (!(epsilon > 0.0))
        throw EpsilonTooLarge("make_mollifier: epsilon must be positive");
    if (!(epsilon < grid.min_length() / 4.0))
        throw EpsilonTooLarge("make_mollifier: epsilon " + std::to_string(epsilon) +
                              " >= min length / 4 = " + std::to_string(grid.min_length() / 4.0));
    Mollifier m{kind, epsilon, grid, std::vector<double>(grid.point_count(), 1.0)};

    const auto k2 = kappa_squared(grid);
    // Distinct s values repeat heavily on near-cubic grids; memoize per |kappa|^2.
    std::map<double, double> memo;
    for (std::size_t i = 0; i < k2.size(); ++i) {
        auto it = memo.find(k2[i]);
        if (it == memo.end()) {
            const double s = epsilon * std::sqrt(k2[i]);
            it = memo.emplace(k2[i], mollifier_symbol(kind, s)).first;
        }
        m.symbol[i] = it->second;
    }
    m.symbol[0] = 1.0; // exact mean preservation
    return m;
}

template <int NC>
SpectralFieldT<NC> mollify_spec(const SpectralFieldT<NC>& F, const Mollifier& m) {
    require_same_grid(F.grid(), m.grid, "mollify");
    SpectralFieldT<NC> out = F;
    for (int c = 0; c < NC; ++c) {
        auto v = out.component(c);
        parallel_for(v.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) v[i] *= m.symbol[i];
        });
    }
    return out;
}

template <int NC>
FieldT<NC> mollify(const FieldT<NC>& f, const Mollifier& m) {
    return to_physical(mollify_spec(to_spectral(f), m));
}

template SpectralFieldT<1> mollify_spec<1>(const SpectralFieldT<1>&, const Mollifier&);
template SpectralFieldT<3> mollify_spec<3>(const SpectralFieldT<3>&, const Mollifier&);
template SpectralFieldT<9> mollify_spec<9>(const SpectralFieldT<9>&, const Mollifier&);
template FieldT<1> mollify<1>(const FieldT<1>&, const Mollifier&);
template FieldT<3> mollify<3>(const FieldT<3>&, const Mollifier&);
template FieldT<9> mollify<9>(const FieldT<9>&, const Mollifier&);

CommutatorField commutator_R(const VectorField& u, const Mollifier& m) {
    require_same_grid(u.grid(), m.grid, "commutator_R");
    const VectorField ue = mollify(u, m);
    const TensorField uu_e = mollify(outer(u, u), m);
    CommutatorField out{m.epsilon, sub(outer(ue, ue), uu_e)};
    return out;
}

ScalarField defect_density(const VectorField& u, const ScalarField& p, const Mollifier& m) {
    (void)p; // unused: the defect involves only the velocity
    const auto Ue = mollify_spec(to_spectral(u), m);
    const TensorField grad_omega_e = to_physical(vector_gradient_spec(curl_spec(Ue)));
    const CommutatorField R = commutator_R(u, m);
    return scale(double_contract(grad_omega_e, R.R), 2.0);
}

ScalarField energy_defect_density(const VectorField& u, const Mollifier& m) {
    const auto Ue = mollify_spec(to_spectral(u), m);
    const TensorField grad_u_e = to_physical(vector_gradient_spec(Ue));
    const CommutatorField R = commutator_R(u, m);
    return double_contract(grad_u_e, R.R);
}

VectorField helicity_current(const VectorField& u, const ScalarField& p) {
    require_same_grid(u.grid(), p.grid(), "helicity_current");
    const VectorField omega = curl(u);
    const ScalarField h = dot(u, omega);
    ScalarField head = p;
    {
        auto v = head.component(0);
        auto u0 = u.component(0), u1 = u.component(1), u2 = u.component(2);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] -= 0.5 * (u0[i] * u0[i] + u1[i] * u1[i] + u2[i] * u2[i]);
    }
    return add(multiply(h, u), multiply(head, omega));
}

VectorField helicity_current(const VectorField& u, const ScalarField& p, const Mollifier& m) {
    return helicity_current(mollify(u, m), mollify(p, m));
}

VectorField correction_current(const VectorField& u, const Mollifier& m) {
    const auto Ue = mollify_spec(to_spectral(u), m);
    const VectorField ue = to_physical(Ue);
    const VectorField omega_e = to_physical(curl_spec(Ue));
    const TensorField grad_ue = to_physical(vector_gradient_spec(Ue));
    const CommutatorField C = commutator_R(u, m);

    VectorField out = scale(vector_dot_tensor(omega_e, C.R), 2.0);
    for (int l = 0; l < 3; ++l) {
        const VectorField col = tensor_column(C.R, l);
        const VectorField dl_u = tensor_column(grad_ue, l); // (d_l u)_k = grad(k,l)
        out = add(out, cross(dl_u, col));
        out = sub(out, partial_derivative(cross(ue, col), l));
    }
    return out;
}

LeviCivitaReport verify_levi_civita_identities(const VectorField& u, const TensorField& R) {
    require_same_grid(u.grid(), R.grid(), "verify_levi_civita_identities");
    const VectorField divR = tensor_divergence(R);

    // identity 1: u . curl div R = -div(u x div R) + curl u . div R
    const ScalarField lhs1 = dot(u, curl(divR));
    const ScalarField rhs1 =
        add(scale(divergence(cross(u, divR)), -1.0), dot(curl(u), divR));
    const double res1 = max_abs(sub(lhs1, rhs1));

    // identity 2: div(u x div R) = d_l div(u x R^{.,l}) - div(d_l u x R^{.,l})
    const ScalarField lhs2 = divergence(cross(u, divR));
    ScalarField rhs2(u.grid());
    const TensorField grad_u = vector_gradient(u);
    VectorField mixed(u.grid());
    for (int l = 0; l < 3; ++l) {
        const VectorField col = tensor_column(R, l);
        rhs2 = add(rhs2, partial_derivative(divergence(cross(u, col)), l));
        mixed = add(mixed, cross(tensor_column(grad_u, l), col));
    }
    rhs2 = sub(rhs2, divergence(mixed));
    const double res2 = max_abs(sub(lhs2, rhs2));

    return {res1, res2};
}

std::vector<double> default_epsilon_ladder(const GridSpec& grid, int rungs) {
    if (rungs < 4) throw InvalidParams("default_epsilon_ladder: need at least 4 rungs");
    const double L = grid.min_length();
    const double h = std::max({grid.spacing(0), grid.spacing(1), grid.spacing(2)});
    const double emax = L / 8.0;
    const double emin = std::max(2.0 * h, L / 256.0);
    if (!(emin < emax))
        throw EpsilonUnderResolved("default_epsilon_ladder: grid too coarse (L/8 <= 2h)");
    const double ratio = std::pow(emin / emax, 1.0 / (rungs - 1));
    std::vector<double> eps(rungs);
    for (int j = 0; j < rungs; ++j) eps[j] = emax * std::pow(ratio, j);
    return eps;
}

std::vector<ScalarField> make_pairing_bumps(const GridSpec& grid, int placements) {
    const double L0 = grid.lengths[0], L1 = grid.lengths[1], L2 = grid.lengths[2];
    std::vector<std::array<double, 3>> centers = {
        {0.5 * L0, 0.5 * L1, 0.5 * L2},  {0.75 * L0, 0.5 * L1, 0.5 * L2},
        {0.25 * L0, 0.5 * L1, 0.5 * L2}, {0.5 * L0, 0.75 * L1, 0.5 * L2},
        {0.5 * L0, 0.5 * L1, 0.75 * L2}};
    if (placements < 1 || placements > static_cast<int>(centers.size()))
        throw InvalidParams("make_pairing_bumps: placements must be in [1,5]");

    std::vector<ScalarField> bumps;
    for (int b = 0; b < placements; ++b) {
        ScalarField phi(grid, 1.0);
        auto v = phi.component(0);
        for (int axis = 0; axis < 3; ++axis) {
            const double w = grid.lengths[axis] / 4.0; // half-width
            const double c = centers[b][axis];
            const double L = grid.lengths[axis];
            std::size_t idx = 0;
            for (int k = 0; k < grid.dims[2]; ++k)
                for (int j = 0; j < grid.dims[1]; ++j)
                    for (int i = 0; i < grid.dims[0]; ++i, ++idx) {
                        const int n = axis == 0 ? i : axis == 1 ? j : k;
                        double d = grid.coord(axis, n) - c;
                        if (grid.periodic[axis]) {
                            d = std::fmod(d + 1.5 * L, L) - 0.5 * L;
                        }
                        const double tau = d / w;
                        const double t2 = 1.0 - tau * tau;
                        v[idx] *= t2 > 0.0 ? t2 * t2 * t2 : 0.0;
                    }
        }
        bumps.push_back(std::move(phi));
    }
    return bumps;
}

std::string to_string(DefectVerdict v) {
    switch (v) {
        case DefectVerdict::Vanishes: return "vanishes";
        case DefectVerdict::ConvergesNonzero: return "converges_nonzero";
        default: return "no_convergence";
    }
}

namespace {

struct SlopeFit {
    double slope = 0.0;
    double r2 = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& eps, const std::vector<double>& vals, int last) {
    const int n = static_cast<int>(eps.size());
    const int m = std::min(last, n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = n - m; i < n; ++i) {
        const double x = std::log(eps[i]);
        const double y = std::log(std::max(std::abs(vals[i]), 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double den = m * sxx - sx * sx;
    SlopeFit f;
    if (den == 0.0) return f;
    f.slope = (m * sxy - sx * sy) / den;
    const double ss_tot = syy - sy * sy / m;
    const double ss_res = ss_tot - f.slope * f.slope * den / m;
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// One Aitken delta-squared pass over a sequence ordered toward the limit.
std::vector<double> aitken_pass(const std::vector<double>& s) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
        const double den = s[i + 2] - 2.0 * s[i + 1] + s[i];
        const double num = s[i + 2] - s[i + 1];
        if (std::abs(den) < 1e-300)
            out.push_back(s[i + 2]);
        else
            out.push_back(s[i + 2] - num * num / den);
    }
    return out;
}

double iterated_aitken(std::vector<double> s) {
    while (s.size() >= 3) {
        auto next = aitken_pass(s);
        if (next.empty()) break;
        s = std::move(next);
    }
    return s.back();
}

void validate_ladder(const std::vector<double>& eps, const GridSpec& grid) {
    if (eps.size() < 4)
        throw InvalidParams("defect_ladder: need at least 4 epsilon rungs");
    const double h = std::max({grid.spacing(0), grid.spacing(1), grid.spacing(2)});
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i > 0 && !(eps[i] < eps[i - 1]))
            throw InvalidParams("defect_ladder: epsilon ladder must be strictly decreasing");
        if (eps[i] < 2.0 * h)
            throw EpsilonUnderResolved("defect_ladder: epsilon " + std::to_string(eps[i]) +
                                       " below 2h = " + std::to_string(2.0 * h));
    }
}

DefectVerdict judge(const DefectLadder& lad) {
    const double final_pairing =
        lad.pairings.empty()
            ? 0.0
            : *std::max_element(lad.pairings.back().begin(), lad.pairings.back().end(),
                                [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (lad.fitted_slope > kVanishSlopeGate &&
        std::abs(final_pairing) < kVanishPairingTol * lad.defect_scale)
        return DefectVerdict::Vanishes;
    const int n = static_cast<int>(lad.l1_norms.size());
    if (std::abs(lad.fitted_slope) <= kVanishSlopeGate && n >= 2) {
        const double rel = std::abs(lad.l1_norms[n - 1] - lad.l1_norms[n - 2]) /
                           std::max(std::abs(lad.l1_norms[n - 1]), 1e-300);
        if (rel < 0.25) return DefectVerdict::ConvergesNonzero;
    }
    return DefectVerdict::NoConvergence;
}

} // namespace

DefectLadder defect_ladder(const VectorField& u, const ScalarField& p,
                           const std::vector<double>& epsilons,
                           const std::vector<ScalarField>& test_functions, MollifierKind kind) {
    validate_ladder(epsilons, u.grid());
    DefectLadder lad;
    lad.epsilons = epsilons;
    lad.space_only = true;
    lad.defect_scale = std::pow(rms(u), 3) * u.grid().volume();
    lad.defect_fields.resize(epsilons.size(), ScalarField(u.grid()));
    lad.l1_norms.resize(epsilons.size());
    lad.pairings.assign(epsilons.size(), std::vector<double>(test_functions.size(), 0.0));

    parallel_tasks(epsilons.size(), [&](std::size_t j) {
        const Mollifier m = make_mollifier(kind, epsilons[j], u.grid());
        ScalarField D = defect_density(u, p, m);
        lad.l1_norms[j] = lp_norm(D, 1.0);
        for (std::size_t t = 0; t < test_functions.size(); ++t)
            lad.pairings[j][t] = integrate(multiply(D, test_functions[t]));
        lad.defect_fields[j] = std::move(D);
    });

    const auto fit = fit_loglog(lad.epsilons, lad.l1_norms, 4);
    lad.fitted_slope = fit.slope;
    lad.slope_r2 = fit.r2;
    lad.extrapolated_pairing.resize(test_functions.size());
    for (std::size_t t = 0; t < test_functions.size(); ++t) {
        std::vector<double> seq(epsilons.size());
        for (std::size_t j = 0; j < epsilons.size(); ++j) seq[j] = lad.pairings[j][t];
        lad.extrapolated_pairing[t] = iterated_aitken(seq);
    }
    lad.verdict = judge(lad);
    return lad;
}

DefectLadder defect_ladder(const std::vector<VectorField>& u_series,
                           const std::vector<ScalarField>& p_series, double dt,
                           const std::vector<double>& epsilons,
                           const std::vector<ScalarField>& test_functions, MollifierKind kind) {
    if (u_series.empty()) throw InsufficientData("defect_ladder: empty series");
    if (u_series.size() != p_series.size())
        throw InsufficientData("defect_ladder: velocity/pressure series length mismatch");
    validate_ladder(epsilons, u_series[0].grid());
    const GridSpec grid = u_series[0].grid();
    const std::size_t nt = u_series.size();
    const double duration = dt * static_cast<double>(nt - 1);

    DefectLadder lad;
    lad.epsilons = epsilons;
    lad.space_only = false;
    lad.defect_scale = std::pow(rms(u_series[0]), 3) * grid.volume();
    lad.defect_fields.resize(epsilons.size(), ScalarField(grid));
    lad.l1_norms.assign(epsilons.size(), 0.0);
    lad.pairings.assign(epsilons.size(), std::vector<double>(test_functions.size(), 0.0));

    parallel_tasks(epsilons.size(), [&](std::size_t j) {
        const Mollifier m = make_mollifier(kind, epsilons[j], grid);
        ScalarField time_avg(grid);
        for (std::size_t n = 0; n < nt; ++n) {
            const double t = dt * static_cast<double>(n);
            const double w = (n == 0 || n + 1 == nt) ? 0.5 * dt : dt;
            const double b = nt == 1 ? 1.0 : time_bump(t, duration);
            ScalarField D = defect_density(u_series[n], p_series[n], m);
            lad.l1_norms[j] += w * lp_norm(D, 1.0);
            for (std::size_t tf = 0; tf < test_functions.size(); ++tf)
                lad.pairings[j][tf] += w * b * integrate(multiply(D, test_functions[tf]));
            time_avg = add(time_avg, scale(D, w / duration));
        }
        lad.defect_fields[j] = std::move(time_avg);
    });

    const auto fit = fit_loglog(lad.epsilons, lad.l1_norms, 4);
    lad.fitted_slope = fit.slope;
    lad.slope_r2 = fit.r2;
    lad.extrapolated_pairing.resize(test_functions.size());
    for (std::size_t t = 0; t < test_functions.size(); ++t) {
        std::vector<double> seq(epsilons.size());
        for (std::size_t j = 0; j < epsilons.size(); ++j) seq[j] = lad.pairings[j][t];
        lad.extrapolated_pairing[t] = iterated_aitken(seq);
    }
    lad.verdict = judge(lad);
    return lad;
}

double defect_pairing_balance(const VectorField& u, const ScalarField& p, const Mollifier& m,
                              const ScalarField& phi) {
    const VectorField current = helicity_current(u, p, m);
    const VectorField corr = correction_current(u, m);
    const VectorField grad_phi = gradient(phi);
    return integrate(dot(sub(current, corr), grad_phi));
}

} // namespace heli
