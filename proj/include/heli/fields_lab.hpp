#ifndef HELI_FIELDS_LAB_HPP
#define HELI_FIELDS_LAB_HPP

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "heli/field.hpp"
#include "heli/sample.hpp"

namespace heli {

using Mat3 = std::array<double, 9>; // row-major 3x3

inline constexpr Mat3 kIdentity3{1, 0, 0, 0, 1, 0, 0, 0, 1};

Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Vec3 mat3_vec(const Mat3& a, const Vec3& v);
double mat3_det(const Mat3& a);
Mat3 mat3_inverse(const Mat3& a);

/// u = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x); Beltrami
/// eigenfield with curl u = u.
struct AbcRecipe {
    double A = 1.0, B = 1.0, C = 1.0;
};

/// u = (sin x cos y cos z, -cos x sin y cos z, 0); mirror symmetric, H = 0.
struct TaylorGreenRecipe {};

/// z-profile as a trigonometric series sum_m a_m cos(m pi z/H) + b_m sin(m pi z/H).
struct ShearProfile {
    std::vector<double> cos_coeffs; // a_1.. (constant term in cos_coeffs[0] maps to m=0)
    std::vector<double> sin_coeffs; // b_1..
    double eval(double z, double height) const;
    double derivative(double z, double height) const;
};

/// Slab flow u = (U(z), V(z), 0): steady Euler solution with p = 0, tangent
/// to both faces, omega = (-V', U', 0).
struct RotatedShearRecipe {
    ShearProfile u_profile;
    ShearProfile v_profile;
    static RotatedShearRecipe standard(); // U = cos(pi z/H), V = sin(pi z/H)
};

/// Fourier synthesis: |u_hat(k)| = |k|^slope (slope = -(theta + 3/2) unless
/// overridden), times (log(e+|k|))^{-1} when c0_log_decay; complex-Gaussian
/// mode factors from the seed; Leray projected; unit L2 norm.
struct SyntheticBesovRecipe {
    double theta = 2.0 / 3.0;
    std::uint64_t seed = 1;
    double spectrum_slope = 0.0; // 0 = derive from theta
    bool c0_log_decay = false;
};

/// u = grad(phi) for a random band-limited potential: curl-free test field.
struct GradientRecipe {
    std::uint64_t seed = 1;
    int max_mode = 3;
};

using FieldRecipe = std::variant<AbcRecipe, TaylorGreenRecipe, RotatedShearRecipe,
                                 SyntheticBesovRecipe, GradientRecipe>;

/// Samples the recipe on the grid. Slab recipes require slab grids and torus
/// recipes torus grids (DomainMismatch otherwise).
VectorField sample_recipe(const FieldRecipe& recipe, const GridSpec& grid);

VectorField synth_besov_field(double theta, std::uint64_t seed, const GridSpec& grid,
                              bool c0_log_decay, double spectrum_slope = 0.0);

/// Particle lattice = grid nodes. positions/jacobians describe X_t; the
/// backward pass stores X_t^{-1} and its Jacobian at the grid nodes.
struct FlowMap {
    GridSpec grid;
    double time = 0.0;
    std::vector<Vec3> positions;
    std::vector<Mat3> jacobians;
    bool has_backward = false;
    std::vector<Vec3> inverse_positions;
    std::vector<Mat3> inverse_jacobians;
};

/// Velocity source for particle integration.
class VelocitySampler {
  public:
    virtual ~VelocitySampler() = default;
    virtual Vec3 velocity(const Vec3& x, double t) const = 0;
    virtual Mat3 velocity_gradient(const Vec3& x, double t) const = 0; // (r,c) = d_c u_r
    virtual double max_speed() const = 0;
};

/// Classical RK4 on dX/dt = u(X,t) and d(grad X)/dt = grad u(X,t) grad X.
/// Throws StepTooLarge when dt > h / (4 max|u|).
FlowMap flow_map_integrate(const VelocitySampler& sampler, const GridSpec& lattice,
                           double t_final, double dt, bool with_backward = true);

/// Steady field variant (trigonometric interpolant of u).
FlowMap flow_map_integrate(const VectorField& u, double t_final, double dt,
                           bool with_backward = true);

/// Uniform-in-time series variant (linear interpolation between slices).
FlowMap flow_map_integrate(const std::vector<VectorField>& u_series, double series_dt,
                           double t_final, double dt, bool with_backward = true);

/// omega(x,t) = [grad X_t omega0](X_t^{-1}(x)) evaluated per grid node.
/// Throws NeedBackwardFlow if the map lacks the backward pass.
VectorField cauchy_vorticity(const FlowMap& flow, const VectorField& omega0);

} // namespace heli

#endif
