#ifndef HELI_POINTWISE_HPP
#define HELI_POINTWISE_HPP

#include "heli/field.hpp"

namespace heli {

ScalarField dot(const VectorField& a, const VectorField& b);
VectorField cross(const VectorField& a, const VectorField& b);
TensorField outer(const VectorField& a, const VectorField& b);

template <int NC>
FieldT<NC> scale(const FieldT<NC>& f, double c);

template <int NC>
FieldT<NC> add(const FieldT<NC>& a, const FieldT<NC>& b);

template <int NC>
FieldT<NC> sub(const FieldT<NC>& a, const FieldT<NC>& b);

/// Pointwise |v|^2 summed over components.
template <int NC>
ScalarField magnitude_squared(const FieldT<NC>& f);

/// Row-vector contraction (w R)_l = sum_k w_k R_{k,l}.
VectorField vector_dot_tensor(const VectorField& w, const TensorField& R);

/// Column extraction R^{.,l} as a VectorField.
VectorField tensor_column(const TensorField& R, int l);

/// Frobenius contraction A : B = sum_{k,l} A_{k,l} B_{k,l}.
ScalarField double_contract(const TensorField& a, const TensorField& b);

ScalarField multiply(const ScalarField& a, const ScalarField& b);
VectorField multiply(const ScalarField& a, const VectorField& b);

} // namespace heli

#endif
