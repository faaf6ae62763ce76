#ifndef HELI_BOUNDARY_HPP
#define HELI_BOUNDARY_HPP

#include <string>
#include <vector>

#include "heli/field.hpp"

namespace heli {

enum class Face { Bottom, Top }; // z = 0 (outer normal -e3), z = H (+e3)

/// T^2 x (0, H) slab with cell-centered z nodes; no node lies on a face.
struct SlabDomain {
    GridSpec grid;
    explicit SlabDomain(const GridSpec& g);
    double height() const { return grid.lengths[2]; }
    double face_area() const { return grid.lengths[0] * grid.lengths[1]; }
    std::vector<double> z_nodes;  // cell centers
    std::vector<double> z_weights; // uniform midpoint weights, sum to 1
};

/// dist(x) = min(z, H - z).
ScalarField distance_field(const SlabDomain& d);

struct CutoffProfile {
    double r = 0.0;
    ScalarField values;     // chi_r = min(dist/r, 1) at nodes
    VectorField gradient;   // assembled analytically: +-e3/r in the layers
};

/// Throws InvalidRadius unless r in (2 h_z, H/2).
CutoffProfile cutoff_chi_r(const SlabDomain& d, double r);

/// Slab differential operators: spectral in x,y; 4th-order centered finite
/// differences in z with one-sided closures at the two layers nearest each
/// face.
VectorField slab_gradient(const ScalarField& f);
VectorField slab_curl(const VectorField& u);
ScalarField slab_divergence(const VectorField& u);

double slab_integrate(const ScalarField& f);

/// Boundary-trace estimate on one face: per-face-point shell averages of the
/// first m in-column layers (m = 1..shells) extrapolated linearly to the
/// face. values live on the Nx x Ny face grid.
struct TraceEstimate {
    Face face = Face::Bottom;
    std::vector<double> values;      // x-fastest on the face grid
    std::vector<double> shell_radii; // representative radii used
    double residual = 0.0;           // max deviation of the shell data from the fit
    double mean() const;
};

/// Outer normal Lebesgue trace of U: shell averages of -U.grad(dist).
TraceEstimate normal_trace_estimate(const VectorField& U, const SlabDomain& d, Face face,
                                    int shells = 3);

/// Full Lebesgue trace of a scalar.
TraceEstimate full_trace_estimate(const ScalarField& f, const SlabDomain& d, Face face,
                                  int shells = 3);

struct TracePairingReport {
    std::vector<double> radii;
    std::vector<double> lhs;        // integral of phi U . grad(chi_r)
    double lhs_extrapolated = 0.0;  // linear extrapolation to r = 0
    double rhs = 0.0;               // -integral over faces of phi U_n
    std::vector<double> gaps;       // |lhs_r - rhs| per rung
    double final_gap = 0.0;         // |lhs_extrapolated - rhs|
    bool gaps_decreasing = false;
    bool pass = false;
};

/// Verifies lim_{r->0} int phi U.grad(chi_r) = -int_faces phi U_n.
TracePairingReport trace_pairing_limit(const VectorField& U, const ScalarField& phi,
                                       const SlabDomain& d, const std::vector<double>& radii,
                                       double tolerance = 5e-3);

struct FluxReport {
    double flux = 0.0;        // sum over faces of int (|u|^2/2 - p) omega_n dA
    double tangency = 0.0;    // max |u_n| trace over both faces
    bool trusted = true;      // false when trace residuals exceed the gate
    std::string note;
};

/// Impermeability gate |u_n| < 1e-6 max|u| (warning, not an error).
inline constexpr double kTangencyGate = 1e-6;

FluxReport boundary_helicity_flux(const VectorField& u, const ScalarField& p,
                                  const SlabDomain& d);

/// Slab total helicity int u . omega with the slab-aware curl.
double slab_total_helicity(const VectorField& u, const SlabDomain& d);

struct BudgetReport {
    std::vector<double> times;
    std::vector<double> helicity;      // H(t)
    std::vector<double> flux;          // boundary flux per slice
    std::vector<double> residual;      // per window |LHS - RHS| / ||alpha||
    std::vector<double> residual_raw;  // per window |LHS - RHS|
    double max_residual = 0.0;         // normalized
    bool trusted = true;
};

/// Global helicity balance: int H alpha' dt vs int alpha flux dt for a
/// battery of smooth compactly supported time windows.
BudgetReport helicity_budget(const std::vector<VectorField>& u_series,
                             const std::vector<ScalarField>& p_series, double dt,
                             const SlabDomain& d, int alpha_battery = 5);

} // namespace heli

#endif
