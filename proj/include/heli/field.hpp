#ifndef HELI_FIELD_HPP
#define HELI_FIELD_HPP

#include <span>
#include <vector>

#include "heli/grid.hpp"

namespace heli {

/// Real-valued samples on a GridSpec. Storage is x-fastest, component-major
/// (all of component 0, then component 1, ...). Values are immutable in
/// spirit: every library operation returns a fresh field.
template <int NC>
class FieldT {
  public:
    static_assert(NC == 1 || NC == 3 || NC == 9);
    static constexpr int kComponents = NC;

    FieldT() = default;
    explicit FieldT(const GridSpec& grid, double fill = 0.0)
        : grid_(grid), values_(NC * grid.point_count(), fill) {
        grid.validate();
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t points() const { return grid_.point_count(); }

    std::span<double> component(int c) {
        return {values_.data() + static_cast<std::size_t>(c) * points(), points()};
    }
    std::span<const double> component(int c) const {
        return {values_.data() + static_cast<std::size_t>(c) * points(), points()};
    }

    double& at(int c, int i, int j, int k) {
        return values_[static_cast<std::size_t>(c) * points() + grid_.index(i, j, k)];
    }
    double at(int c, int i, int j, int k) const {
        return values_[static_cast<std::size_t>(c) * points() + grid_.index(i, j, k)];
    }

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    bool all_finite() const;

  private:
    GridSpec grid_;
    std::vector<double> values_;
};

using ScalarField = FieldT<1>;
using VectorField = FieldT<3>;
using TensorField = FieldT<9>;

/// Row-major tensor component index: entry (r, c) of the 3x3 matrix.
inline constexpr int tensor_index(int r, int c) { return 3 * r + c; }

extern template class FieldT<1>;
extern template class FieldT<3>;
extern template class FieldT<9>;

/// Throws InvalidField if any sample is NaN/Inf.
template <int NC>
void require_finite(const FieldT<NC>& f, const char* where);

} // namespace heli

#endif
