#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "heli/errors.hpp"
#include "heli/field_io.hpp"
#include "heli/fields_lab.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "heli/sample.hpp"
#include "heli/spectral.hpp"
#include "test_support.hpp"

using namespace heli;
using test::cosine_mode;
using test::random_band_limited_scalar;

namespace {
std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
} // namespace

TEST_CASE("to_spectral: constant field has only the zero mode") {
    const GridSpec g = GridSpec::torus(8);
    ScalarField f(g, 3.25);
    const auto F = to_spectral(f);
    CHECK(F.at(0, 0, 0, 0).real() == doctest::Approx(3.25).epsilon(1e-15));
    double off = 0.0;
    for (std::size_t i = 1; i < F.points(); ++i) off = std::max(off, std::abs(F.component(0)[i]));
    CHECK(off < 1e-14);
}

TEST_CASE("to_spectral: cos(x1) on 16^3 puts 1/2 at k = +-e1") {
    const GridSpec g = GridSpec::torus(16);
    const auto F = to_spectral(cosine_mode(g, 1, 0, 0));
    CHECK(std::abs(F.at(0, 1, 0, 0) - std::complex<double>{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(F.at(0, -1, 0, 0) - std::complex<double>{0.5, 0.0}) < 1e-14);
    double residual = 0.0;
    const auto v = F.component(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == F.kindex(1, 0, 0) || i == F.kindex(-1, 0, 0)) continue;
        residual = std::max(residual, std::abs(v[i]));
    }
    CHECK(residual < 1e-14);
}

TEST_CASE("round trip to_physical(to_spectral(f)) = f") {
    Rng rng(11);
    for (int n : {8, 16, 32}) {
        const GridSpec g = GridSpec::torus(n);
        ScalarField f(g);
        for (auto& v : f.raw()) v = rng.normal();
        const ScalarField back = to_physical(to_spectral(f));
        CHECK(max_abs(sub(back, f)) < 1e-13);
    }
}

TEST_CASE("round trip on the spectral side") {
    Rng rng(12);
    const GridSpec g = GridSpec::torus(16);
    const ScalarField f = random_band_limited_scalar(g, 5, rng);
    const auto F = to_spectral(f);
    const auto F2 = to_spectral(to_physical(F));
    double worst = 0.0;
    for (std::size_t i = 0; i < F.points(); ++i)
        worst = std::max(worst, std::abs(F.component(0)[i] - F2.component(0)[i]));
    CHECK(worst < 1e-13);
}

TEST_CASE("to_physical: asymmetric spectrum is rejected") {
    const GridSpec g = GridSpec::torus(8);
    SpectralScalar F(g);
    F.at(0, 1, 0, 0) = {1.0, 0.0};
    F.at(0, -1, 0, 0) = {0.5, 0.0}; // not the conjugate
    CHECK_THROWS_AS((void)to_physical(F), AsymmetricSpectrum);
}

TEST_CASE("to_physical: coefficient pair reconstructs the cosine") {
    const GridSpec g = GridSpec::torus(16);
    SpectralScalar F(g);
    F.at(0, 1, 0, 0) = {0.5, 0.0};
    F.at(0, -1, 0, 0) = {0.5, 0.0};
    const ScalarField f = to_physical(F);
    CHECK(max_abs(sub(f, cosine_mode(g, 1, 0, 0))) < 1e-14);

    SpectralScalar Z(g);
    CHECK(max_abs(to_physical(Z)) == 0.0);
}

TEST_CASE("to_spectral rejects non-finite input") {
    const GridSpec g = GridSpec::torus(8);
    ScalarField f(g);
    f.raw()[5] = std::nan("");
    CHECK_THROWS_AS((void)to_spectral(f), InvalidField);
}

TEST_CASE("pointwise: ABC |u|^2 has mean 3") {
    const GridSpec g = GridSpec::torus(32);
    const VectorField u = sample_recipe(AbcRecipe{}, g);
    CHECK(mean(dot(u, u)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("pointwise: cross(v,v) = 0, outer of constants") {
    const GridSpec g = GridSpec::torus(8);
    Rng rng(3);
    const VectorField v = test::random_band_limited_vector(g, 2, rng);
    CHECK(max_abs(cross(v, v)) == 0.0);

    VectorField e1(g), e2(g);
    for (auto& x : e1.component(0)) x = 1.0;
    for (auto& x : e2.component(1)) x = 1.0;
    const TensorField t = outer(e1, e2);
    CHECK(max_abs(tensor_column(t, 1)) == 1.0);
    CHECK(t.at(tensor_index(0, 1), 2, 3, 4) == 1.0);
    CHECK(t.at(tensor_index(1, 0), 2, 3, 4) == 0.0);
}

TEST_CASE("pointwise: grid mismatch throws") {
    const VectorField a(GridSpec::torus(8, 8, 8));
    const VectorField b(GridSpec::torus(8, 8, 16));
    CHECK_THROWS_AS((void)dot(a, b), GridMismatch);
}

TEST_CASE("integrate: constants, zero-mean modes, ABC energy") {
    const GridSpec g = GridSpec::torus(32);
    ScalarField c(g, 2.5);
    const double vol = g.volume();
    CHECK(integrate(c) == doctest::Approx(2.5 * vol).epsilon(1e-14));
    CHECK(std::abs(integrate(cosine_mode(g, 1, 0, 0))) < 1e-12);

    const VectorField u = sample_recipe(AbcRecipe{}, g);
    // |ABC|^2 integrates to 3 (2 pi)^3; oracle: closed-form mean of |u|^2.
    CHECK(integrate(dot(u, u)) == doctest::Approx(3.0 * vol).epsilon(1e-12));
}

TEST_CASE("integrate is invariant under grid translation of band-limited samples") {
    Rng rng(21);
    const GridSpec g = GridSpec::torus(16);
    const ScalarField f = random_band_limited_scalar(g, 4, rng);
    // translate samples by rolling one cell in each axis
    ScalarField rolled(g);
    for (int k = 0; k < 16; ++k)
        for (int j = 0; j < 16; ++j)
            for (int i = 0; i < 16; ++i)
                rolled.at(0, i, j, k) = f.at(0, (i + 1) % 16, (j + 5) % 16, (k + 11) % 16);
    CHECK(integrate(rolled) == doctest::Approx(integrate(f)).epsilon(1e-12));
}

TEST_CASE("parseval: physical and spectral energies agree") {
    Rng rng(5);
    for (int n : {8, 16, 32}) {
        const GridSpec g = GridSpec::torus(n);
        ScalarField f(g);
        for (auto& v : f.raw()) v = rng.normal();
        const auto F = to_spectral(f);
        double phys = 0.0;
        for (double v : f.raw()) phys += v * v;
        phys *= g.cell_volume();
        double spec = 0.0;
        for (const auto& z : F.component(0)) spec += std::norm(z);
        spec *= g.volume();
        CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
    }
}

TEST_CASE("sample_at: spectral interpolation is exact for band-limited fields") {
    const GridSpec g = GridSpec::torus(16);
    const ScalarField f = cosine_mode(g, 1, 0, 0);
    const auto vals =
        sample_at(f, {{kTwoPi / 6.0, 0.0, 0.0}}, SampleMethod::Spectral);
    CHECK(vals[0][0] == doctest::Approx(0.5).epsilon(1e-13));

    ScalarField c(g, 4.0);
    const auto cv = sample_at(c, {{1.1, 2.2, 3.3}}, SampleMethod::Trilinear);
    CHECK(cv[0][0] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sample_at: ABC at random points matches the closed form") {
    const GridSpec g = GridSpec::torus(24);
    const VectorField u = sample_recipe(AbcRecipe{}, g);
    Rng rng(9);
    std::vector<Vec3> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back({rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)});
    const auto vals = sample_at(u, pts, SampleMethod::Spectral);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto [x, y, z] = pts[i];
        worst = std::max(worst, std::abs(vals[i][0] - (std::sin(z) + std::cos(y))));
        worst = std::max(worst, std::abs(vals[i][1] - (std::sin(x) + std::cos(z))));
        worst = std::max(worst, std::abs(vals[i][2] - (std::sin(y) + std::cos(x))));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("sample_at: trilinear is second order") {
    auto err_at = [](int n) {
        const GridSpec g = GridSpec::torus(n);
        const ScalarField f = cosine_mode(g, 1, 0, 0);
        const auto vals = sample_at(f, {{0.5 + g.spacing(0) / 2, 0.2, 0.3}},
                                    SampleMethod::Trilinear);
        return std::abs(vals[0][0] - std::cos(0.5 + g.spacing(0) / 2));
    };
    const double e1 = err_at(16), e2 = err_at(32);
    CHECK(e1 / e2 > 3.0); // ~4x per refinement
}

TEST_CASE("sample_at: slab rejects out-of-domain points") {
    const GridSpec g = GridSpec::slab(8, 8, 8);
    const ScalarField f(g, 1.0);
    CHECK_THROWS_AS((void)sample_at(f, {{0.0, 0.0, 1.5}}, SampleMethod::Trilinear), OutOfDomain);
}

TEST_CASE("vf3: write/read round trip is bit-exact") {
    Rng rng(31);
    const GridSpec g = GridSpec::torus(8);
    VectorField f(g);
    for (auto& v : f.raw()) v = rng.normal();
    const std::string path = temp_path("heli_roundtrip.vf3");
    write_field(f, path);
    const VectorField back = read_vector_field(path);
    CHECK(back.grid() == f.grid());
    CHECK(back.raw() == f.raw()); // exact bytes

    // write the read-back field again: identical file bytes
    const std::string path2 = temp_path("heli_roundtrip2.vf3");
    write_field(back, path2);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("vf3: corrupt magic and truncated payload are rejected") {
    const GridSpec g = GridSpec::torus(8);
    ScalarField f(g, 1.0);
    const std::string path = temp_path("heli_bad.vf3");
    write_field(f, path);

    {
        std::fstream s(path, std::ios::binary | std::ios::in | std::ios::out);
        s.seekp(0);
        s.put('X');
    }
    CHECK_THROWS_AS((void)read_field(path), FormatError);

    write_field(f, path);
    {
        // re-write the header to claim 16^3 while keeping the 8^3 payload
        std::fstream s(path, std::ios::binary | std::ios::in | std::ios::out);
        s.seekp(6);
        const std::uint32_t dims16 = 16;
        for (int a = 0; a < 3; ++a)
            for (int byte = 0; byte < 4; ++byte)
                s.put(static_cast<char>((dims16 >> (8 * byte)) & 0xff));
    }
    CHECK_THROWS_AS((void)read_field(path), TruncatedFile);
    std::remove(path.c_str());
}

TEST_CASE("vf3: version and component validation") {
    const GridSpec g = GridSpec::torus(8);
    ScalarField f(g, 1.0);
    const std::string path = temp_path("heli_ver.vf3");
    write_field(f, path);
    {
        std::fstream s(path, std::ios::binary | std::ios::in | std::ios::out);
        s.seekp(4);
        s.put(static_cast<char>(9)); // version 9
    }
    CHECK_THROWS_AS((void)read_field(path), FormatError);
    std::remove(path.c_str());
}

TEST_CASE("grid: invariants") {
    CHECK_THROWS_AS((void)GridSpec::torus(3), InvalidParams);
    CHECK_THROWS_AS((void)GridSpec::torus(8, 8, 8, -1.0), InvalidParams);
    const GridSpec a = GridSpec::torus(8);
    const GridSpec b = GridSpec::torus(8);
    CHECK(a == b);
    CHECK(a.spacing(0) == doctest::Approx(kTwoPi / 8));
    // slab nodes are interior
    const GridSpec s = GridSpec::slab(8, 8, 8);
    CHECK(s.coord(2, 0) > 0.0);
    CHECK(s.coord(2, 7) < 1.0);
}

TEST_CASE("determinism: pairwise sums do not depend on the thread cap") {
    const GridSpec g = GridSpec::torus(32);
    Rng rng(77);
    ScalarField f(g);
    for (auto& v : f.raw()) v = rng.normal();
    const double a = integrate(f);
    const double b = integrate(f);
    CHECK(a == b);
}
