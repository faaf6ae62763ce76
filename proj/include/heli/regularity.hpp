#ifndef HELI_REGULARITY_HPP
#define HELI_REGULARITY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heli/field.hpp"

namespace heli {

struct BesovParams {
    double theta = 2.0 / 3.0;
    double p = 3.0;                  // sup norm when infinite
    std::vector<double> increments;  // decreasing |h| ladder, each >= grid spacing
    void validate(const GridSpec& grid) const;
};

struct SeminormReport {
    double value = 0.0;
    std::string method;
    double mc_stderr = 0.0; // 0 for deterministic methods
    std::vector<std::pair<double, double>> rung_table; // (|h| or eps, value)
};

/// Torus H^{1/2} seminorm via the Fourier side: value^2 = sum_k |kappa| |f_k|^2
/// (gamma = 1 convention).
SeminormReport h_half_seminorm_fourier(const ScalarField& f);

/// Monte Carlo estimate of the Gagliardo double sum over node pairs with
/// flat-torus distance, distance-stratified sampling, calibrated against the
/// Fourier convention on single modes. Reproducible per (seed, samples).
SeminormReport gagliardo_seminorm_mc(const ScalarField& f, std::size_t samples,
                                     std::uint64_t seed);

/// Exact pair-sum quadratic form for a pure cosine mode (calibration and
/// test oracle; cost O(N^3)).
double gagliardo_pair_sum_mode(const GridSpec& grid, const std::array<int, 3>& mode);

/// Calibration constant mapping the pair sum onto the Fourier seminorm^2.
double gagliardo_calibration(const GridSpec& grid);

/// sup over the increment ladder x 26 lattice directions of
/// ||f(.+h) - f||_p / |h|^theta.
SeminormReport besov_seminorm(const ScalarField& f, const BesovParams& params);

/// Modulus table ell(eps) = running sup restricted to |h| <= eps, evaluated at
/// the ladder magnitudes (non-decreasing in eps).
std::vector<std::pair<double, double>> besov_modulus(const ScalarField& f,
                                                     const BesovParams& params);

/// Finite-grid stand-in for c_0 membership: ell(eps_min)/ell(eps_max) below
/// the ratio gate over the resolved ladder. Reported as a proxy, never as a
/// certification. The gate is calibrated against the synthetic corpus at
/// N=128 (log-decay fields measure ~0.6, plain B-infinity fields ~0.93).
inline constexpr double kC0ProxyRatioGate = 0.75;

bool c0_modulus_proxy(const std::vector<std::pair<double, double>>& modulus_table);

struct ScalingFit {
    double theta = 0.0;
    double r2 = 0.0;
    bool poor_fit = false; // R^2 < 0.9 (value still returned)
};

/// Log-log LS fit of the p-th order structure function over the increment
/// ladder (all 26 directions enter as separate regression points).
ScalingFit scaling_exponent(const ScalarField& f, double p,
                            const std::vector<double>& increments);

/// Default dyadic ladder L/4, L/8, ..., clipped at the grid spacing.
std::vector<double> default_increments(const GridSpec& grid, int count = 6);

struct CommutatorBoundReport {
    double grad_slope = 0.0;      // d log ||grad^k f_eps||_p / d log eps
    double grad_predicted = 0.0;  // theta - k
    bool grad_pass = false;
    double quad_slope = 0.0;      // d log ||f_eps g_eps - (fg)_eps||_{p/2} / d log eps
    double quad_predicted = 0.0;  // 2 theta
    bool quad_pass = false;
    std::vector<std::pair<double, double>> grad_table; // (eps, norm)
    std::vector<std::pair<double, double>> quad_table;
};

/// Measures both mollification-commutator scaling laws; pass iff measured
/// slope >= predicted - 0.25 (the bounds are one-sided).
CommutatorBoundReport verify_commutator_bounds(const ScalarField& f, const ScalarField& g,
                                               double theta, double p,
                                               const std::vector<double>& epsilons,
                                               int k_order = 1);

struct ProductBoundReport {
    double lhs = 0.0;   // ||fg||_{L2} + [fg]
    double rhs = 0.0;   // ||f||_inf ||g||_2 + ||g||_inf [f] + ||f||_inf [g]
    double ratio = 0.0; // empirical constant
};

ProductBoundReport verify_product_h_half(const ScalarField& f, const ScalarField& g);

struct HolderEstimate {
    double sigma = 0.0;
    double r2 = 0.0;
    bool conserved = false; // constant series: sigma undefined
};

/// Max-increment log-log regression over dyadic lags; sigma capped at 1.
HolderEstimate holder_exponent_estimate(const std::vector<double>& series, double dt);

/// Box-counting dimension of {t : |dH/dt| > threshold} over dyadic box sizes.
double support_dimension_boxcount(const std::vector<double>& series, double dt,
                                  double threshold);

} // namespace heli

#endif
