#ifndef HELI_QUADRATURE_HPP
#define HELI_QUADRATURE_HPP

#include <span>

#include "heli/field.hpp"

namespace heli {

/// Deterministic pairwise (recursive halving) summation. The reduction tree
/// depends only on the element count, never on thread count.
double pairwise_sum(std::span<const double> v);

/// Integral of f over its domain. Periodic axes use the rectangle rule
/// (exact: mean x volume); the slab z-axis is cell-centered midpoint.
double integrate(const ScalarField& f);

double mean(const ScalarField& f);

/// (integral of |f|^p)^(1/p); p = infinity handled by max_abs instead.
double lp_norm(const ScalarField& f, double p);

template <int NC>
double max_abs(const FieldT<NC>& f);

/// L^p norm of the pointwise Euclidean/Frobenius magnitude of f.
template <int NC>
double lp_norm_magnitude(const FieldT<NC>& f, double p);

/// sqrt(integral of |f|^2) over all components.
template <int NC>
double l2_norm(const FieldT<NC>& f);

/// Root-mean-square of the pointwise magnitude.
template <int NC>
double rms(const FieldT<NC>& f);

} // namespace heli

#endif
