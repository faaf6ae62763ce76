#ifndef HELI_SAMPLE_HPP
#define HELI_SAMPLE_HPP

#include <array>
#include <complex>
#include <vector>

#include "heli/field.hpp"
#include "heli/spectral.hpp"

namespace heli {

using Vec3 = std::array<double, 3>;

enum class SampleMethod { Spectral, Trilinear };

/// Trigonometric interpolant evaluator backed by the nonzero modes of a
/// spectral field; cost is O(#nonzero modes) per point, so band-limited
/// fields evaluate fast.
template <int NC>
class SpectralInterpolant {
  public:
    explicit SpectralInterpolant(const SpectralFieldT<NC>& F, double drop_tol = 0.0);

    std::array<double, NC> operator()(const Vec3& x) const;

    /// Gradient d(component c)/dx_a, index [c][a].
    std::array<std::array<double, NC>, 3> gradient(const Vec3& x) const;

    std::size_t mode_count() const { return modes_.size(); }

  private:
    struct Mode {
        Vec3 kappa;
        std::array<std::complex<double>, NC> coeff;
    };
    std::vector<Mode> modes_;
};

/// Values of each component of f at the given points. Points on periodic
/// axes are folded into the box; points beyond a non-periodic extent throw
/// OutOfDomain.
template <int NC>
std::vector<std::array<double, NC>> sample_at(const FieldT<NC>& f, const std::vector<Vec3>& points,
                                              SampleMethod method);

extern template class SpectralInterpolant<1>;
extern template class SpectralInterpolant<3>;

} // namespace heli

#endif
