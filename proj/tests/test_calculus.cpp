#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heli/calculus.hpp"
#include "heli/errors.hpp"
#include "heli/fields_lab.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "test_support.hpp"

using namespace heli;
using test::cosine_mode;
using test::random_band_limited_scalar;
using test::random_band_limited_vector;

namespace {

// Reflection of the x axis: u'(x,y,z) = (-u1, u2, u3)(-x, y, z).
VectorField mirror_x(const VectorField& u) {
    const auto& g = u.grid();
    VectorField out(g);
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < g.dims[2]; ++k)
            for (int j = 0; j < g.dims[1]; ++j)
                for (int i = 0; i < g.dims[0]; ++i) {
                    const int mi = (g.dims[0] - i) % g.dims[0];
                    const double sign = c == 0 ? -1.0 : 1.0;
                    out.at(c, i, j, k) = sign * u.at(c, mi, j, k);
                }
    return out;
}

} // namespace

TEST_CASE("curl: ABC is a Beltrami eigenfield with eigenvalue 1") {
    const GridSpec g = GridSpec::torus(32);
    const VectorField u = sample_recipe(AbcRecipe{1.0, 1.0, 1.0}, g);
    CHECK(max_abs(sub(curl(u), u)) < 1e-12);
}

TEST_CASE("curl of a gradient vanishes") {
    Rng rng(41);
    const GridSpec g = GridSpec::torus(16);
    const ScalarField phi = random_band_limited_scalar(g, 4, rng);
    CHECK(max_abs(curl(gradient(phi))) < 1e-12);
}

TEST_CASE("curl of Taylor-Green matches the closed form") {
    const GridSpec g = GridSpec::torus(32);
    const VectorField u = sample_recipe(TaylorGreenRecipe{}, g);
    const VectorField w = curl(u);
    double worst = 0.0;
    for (int k = 0; k < 32; ++k)
        for (int j = 0; j < 32; ++j)
            for (int i = 0; i < 32; ++i) {
                const double x = g.coord(0, i), y = g.coord(1, j), z = g.coord(2, k);
                worst = std::max(worst,
                                 std::abs(w.at(0, i, j, k) + std::cos(x) * std::sin(y) * std::sin(z)));
                worst = std::max(worst,
                                 std::abs(w.at(1, i, j, k) + std::sin(x) * std::cos(y) * std::sin(z)));
                worst = std::max(
                    worst,
                    std::abs(w.at(2, i, j, k) - 2.0 * std::sin(x) * std::sin(y) * std::cos(z)));
            }
    CHECK(worst < 1e-12);
}

TEST_CASE("divergence: ABC is solenoidal; gradient of cos is exact") {
    const GridSpec g = GridSpec::torus(32);
    CHECK(max_abs(divergence(sample_recipe(AbcRecipe{}, g))) < 1e-12);

    const VectorField grad = gradient(cosine_mode(g, 1, 0, 0));
    double worst = 0.0;
    for (int i = 0; i < 32; ++i)
        worst = std::max(worst, std::abs(grad.at(0, i, 3, 5) + std::sin(g.coord(0, i))));
    worst = std::max({worst, max_abs(grad) > 1.0 + 1e-14 ? 1.0 : 0.0});
    CHECK(worst < 1e-14);
    CHECK(max_abs(sub(grad, gradient(cosine_mode(g, 1, 0, 0)))) == 0.0);
}

TEST_CASE("divergence of a Leray projection vanishes") {
    Rng rng(42);
    const GridSpec g = GridSpec::torus(16);
    const VectorField v = random_band_limited_vector(g, 5, rng);
    CHECK(max_abs(divergence(leray_project(v))) < 1e-12);
}

TEST_CASE("div.curl = 0 and curl.grad = 0 on random band-limited fields") {
    Rng rng(43);
    const GridSpec g = GridSpec::torus(16);
    for (int trial = 0; trial < 5; ++trial) {
        const VectorField v = random_band_limited_vector(g, 5, rng);
        CHECK(max_abs(divergence(curl(v))) < 1e-12);
        const ScalarField f = random_band_limited_scalar(g, 5, rng);
        CHECK(max_abs(curl(gradient(f))) < 1e-12);
    }
}

TEST_CASE("curl rejects slab grids") {
    const VectorField u(GridSpec::slab(8, 8, 8));
    CHECK_THROWS_AS((void)curl(u), GridMismatch);
}

TEST_CASE("pressure: ABC recovers -|u|^2/2 + mean") {
    const GridSpec g = GridSpec::torus(64);
    const VectorField u = sample_recipe(AbcRecipe{}, g);
    const ScalarField p = pressure_from_velocity(u);

    ScalarField expected = scale(magnitude_squared(u), -0.5);
    const double m = mean(expected);
    for (auto& v : expected.raw()) v -= m;
    CHECK(max_abs(sub(p, expected)) < 1e-11);
}

TEST_CASE("pressure: constant and shear flows have p = 0") {
    const GridSpec g = GridSpec::torus(16);
    VectorField c(g);
    for (auto& v : c.component(0)) v = 2.0;
    CHECK(max_abs(pressure_from_velocity(c)) < 1e-13);

    // u = (sin x2, 0, 0): div div (u x u) = 0
    VectorField shear(g);
    {
        auto v = shear.component(0);
        std::size_t idx = 0;
        for (int k = 0; k < 16; ++k)
            for (int j = 0; j < 16; ++j)
                for (int i = 0; i < 16; ++i, ++idx) v[idx] = std::sin(g.coord(1, j));
    }
    CHECK(max_abs(pressure_from_velocity(shear)) < 1e-13);
}

TEST_CASE("pressure: zero mean and spectral Poisson residual") {
    Rng rng(44);
    const GridSpec g = GridSpec::torus(24);
    const VectorField u = leray_project(random_band_limited_vector(g, 4, rng));
    const ScalarField p = pressure_from_velocity(u);
    CHECK(std::abs(mean(p)) < 1e-13);

    // -lap p = div div (u x u), both sides spectrally
    const ScalarField lhs = scale(laplacian(p), -1.0);
    const TensorField uu = outer(u, u);
    const ScalarField rhs = divergence(tensor_divergence(uu));
    CHECK(max_abs(sub(lhs, rhs)) / std::max(1.0, max_abs(rhs)) < 1e-11);
}

TEST_CASE("dealiased and plain products agree on well-resolved fields, differ on rough ones") {
    Rng rng(45);
    const GridSpec g = GridSpec::torus(24);
    const VectorField smooth = random_band_limited_vector(g, 3, rng); // 2*3 < 2/3 * 12
    const ScalarField a = pressure_from_velocity(smooth, Dealias::Off);
    const ScalarField b = pressure_from_velocity(smooth, Dealias::TwoThirds);
    CHECK(max_abs(sub(a, b)) < 1e-12);

    const VectorField rough = random_band_limited_vector(g, 11, rng);
    const ScalarField c = pressure_from_velocity(rough, Dealias::Off);
    const ScalarField d = pressure_from_velocity(rough, Dealias::TwoThirds);
    CHECK(max_abs(sub(c, d)) > 1e-8); // aliasing is actually removed
}

TEST_CASE("helicity: ABC totals 3 (2pi)^3") {
    const GridSpec g = GridSpec::torus(32);
    const VectorField u = sample_recipe(AbcRecipe{}, g);
    const double expected = 3.0 * g.volume();
    CHECK(total_helicity(u) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("helicity: mirror-symmetric and gradient fields have H = 0") {
    const GridSpec g = GridSpec::torus(32);
    CHECK(std::abs(total_helicity(sample_recipe(TaylorGreenRecipe{}, g))) < 1e-12);

    Rng rng(46);
    const VectorField gradf = gradient(random_band_limited_scalar(g, 4, rng));
    CHECK(std::abs(total_helicity(gradf)) < 1e-12);
}

TEST_CASE("helicity: invariant under grid refinement for band-limited u") {
    const VectorField u32 = sample_recipe(AbcRecipe{0.7, 1.3, -0.4}, GridSpec::torus(32));
    const VectorField u64 = sample_recipe(AbcRecipe{0.7, 1.3, -0.4}, GridSpec::torus(64));
    const double h32 = total_helicity(u32), h64 = total_helicity(u64);
    CHECK(std::abs(h32 - h64) / std::abs(h64) < 1e-11);
}

TEST_CASE("helicity parity: reflection flips the sign") {
    Rng rng(47);
    const GridSpec g = GridSpec::torus(16);
    const VectorField u = leray_project(random_band_limited_vector(g, 4, rng));
    const double h = total_helicity(u);
    const double hm = total_helicity(mirror_x(u));
    CHECK(std::abs(h + hm) < 1e-11 * std::max(1.0, std::abs(h)));
}

TEST_CASE("euler_residual: steady ABC with exact pressure is a weak solution") {
    const GridSpec g = GridSpec::torus(24);
    const VectorField u = sample_recipe(AbcRecipe{}, g);
    const ScalarField p = pressure_from_velocity(u);

    const int слices = 33;
    std::vector<VectorField> us(слices, u);
    std::vector<ScalarField> ps(слices, p);
    const double dt = 1.0 / (слices - 1);
    const TestBattery battery = make_test_battery(g, 20, 7, dt * (слices - 1));
    const ResidualReport rep = euler_residual(us, ps, dt, battery);
    CHECK(rep.max_abs < 1e-10);
}

TEST_CASE("euler_residual: zero fields give zero residual") {
    const GridSpec g = GridSpec::torus(8);
    std::vector<VectorField> us(5, VectorField(g));
    std::vector<ScalarField> ps(5, ScalarField(g));
    const TestBattery battery = make_test_battery(g, 5, 3, 1.0);
    const ResidualReport rep = euler_residual(us, ps, 0.25, battery);
    CHECK(rep.max_abs == 0.0);
}

TEST_CASE("euler_residual: manufactured u = t ABC reproduces the forcing pairing") {
    const GridSpec g = GridSpec::torus(24);
    const VectorField abc = sample_recipe(AbcRecipe{}, g);
    const ScalarField p1 = pressure_from_velocity(abc);

    const int slices = 129;
    const double dt = 1.0 / (slices - 1);
    const double duration = 1.0;
    std::vector<VectorField> us;
    std::vector<ScalarField> ps;
    for (int n = 0; n < slices; ++n) {
        const double t = n * dt;
        us.push_back(scale(abc, t));
        ps.push_back(scale(p1, t * t)); // pressure of t*ABC is t^2 p_ABC
    }
    const TestBattery battery = make_test_battery(g, 6, 11, duration);
    const ResidualReport rep = euler_residual(us, ps, dt, battery);

    // d_t u + div(u x u) + grad p = ABC, so the weak residual per test is
    // -(int b dt) (int psi . ABC dx).
    double bint = 0.0;
    const int fine = 20001;
    for (int q = 0; q < fine; ++q) {
        const double t = duration * q / (fine - 1);
        const double w = (q == 0 || q == fine - 1) ? 0.5 : 1.0;
        bint += w * time_bump(t, duration);
    }
    bint *= duration / (fine - 1);

    for (std::size_t i = 0; i < battery.psi.size(); ++i) {
        const double oracle = -bint * integrate(dot(battery.psi[i], abc));
        const double got = rep.per_test[i] * battery.sup_norm[i];
        CHECK(std::abs(got - oracle) < 1e-8 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("euler_residual: fewer than 3 slices is an error") {
    const GridSpec g = GridSpec::torus(8);
    std::vector<VectorField> us(2, VectorField(g));
    std::vector<ScalarField> ps(2, ScalarField(g));
    const TestBattery battery = make_test_battery(g, 2, 3, 1.0);
    CHECK_THROWS_AS((void)euler_residual(us, ps, 0.5, battery), InsufficientData);
}
