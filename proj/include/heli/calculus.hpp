#ifndef HELI_CALCULUS_HPP
#define HELI_CALCULUS_HPP

#include <vector>

#include "heli/field.hpp"
#include "heli/spectral.hpp"

namespace heli {

enum class Dealias { Off, TwoThirds };

/// Spectral curl on the torus; exact on band-limited fields.
VectorField curl(const VectorField& u);
SpectralVector curl_spec(const SpectralVector& U);

ScalarField divergence(const VectorField& u);
VectorField gradient(const ScalarField& f);

/// Tensor G with G(r,c) = d u_r / d x_c.
TensorField vector_gradient(const VectorField& u);
SpectralTensor vector_gradient_spec(const SpectralVector& U);

/// (div R)_k = sum_l d_l R_{k,l}.
VectorField tensor_divergence(const TensorField& R);

ScalarField laplacian(const ScalarField& f);

/// Spectral d/dx_axis applied to every component.
template <int NC>
FieldT<NC> partial_derivative(const FieldT<NC>& f, int axis);

/// Divergence-free (Leray) projection, spectral.
VectorField leray_project(const VectorField& u);
void leray_project_spec(SpectralVector& U);

/// Physical-space product of two spectra with 2/3-rule truncation before and
/// after (alias-free for the retained band).
SpectralScalar multiply_dealiased(const SpectralScalar& A, const SpectralScalar& B);

/// Unique zero-mean solution of -lap(p) = div div (u (x) u) on the torus.
ScalarField pressure_from_velocity(const VectorField& u, Dealias dealias = Dealias::Off);

ScalarField helicity_density(const VectorField& u);
double total_helicity(const VectorField& u);

/// Divergence-free space test functions (curls of random band-limited
/// potentials) paired with a shared polynomial time bump; used by the weak
/// Euler residual.
struct TestBattery {
    std::vector<VectorField> psi;
    std::vector<TensorField> grad_psi;
    std::vector<double> sup_norm; // max over x,t of |phi| + |grad phi| + |dt phi| per test
};

TestBattery make_test_battery(const GridSpec& grid, int count, std::uint64_t seed,
                              double duration);

/// Quintic time bump b(t) = (tau (1-tau))^3 * 64, tau = t/duration, and its
/// derivative; compactly supported on [0, duration].
double time_bump(double t, double duration);
double time_bump_derivative(double t, double duration);

struct ResidualReport {
    std::vector<double> per_test; // residual per unit test-function norm
    double max_abs = 0.0;
    double rms = 0.0;
};

/// Weak-form residual of the Euler equations over a uniform-in-time series:
/// integral of [dt(phi).u + u(x)u : grad(phi) + p div(phi)] per test function.
ResidualReport euler_residual(const std::vector<VectorField>& u_series,
                              const std::vector<ScalarField>& p_series, double dt,
                              const TestBattery& battery, Dealias dealias = Dealias::TwoThirds);

} // namespace heli

#endif
