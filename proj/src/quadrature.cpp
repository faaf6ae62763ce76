#include "heli/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "heli/errors.hpp"

namespace heli {

namespace {
constexpr std::size_t kLeaf = 64;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= kLeaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f) {
    require_finite(f, "integrate");
    return pairwise_sum(f.component(0)) * f.grid().cell_volume();
}

double mean(const ScalarField& f) { return integrate(f) / f.grid().volume(); }

double lp_norm(const ScalarField& f, double p) {
    std::vector<double> tmp(f.points());
    const auto v = f.component(0);
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = std::pow(std::abs(v[i]), p);
    return std::pow(pairwise_sum(tmp) * f.grid().cell_volume(), 1.0 / p);
}

template <int NC>
double max_abs(const FieldT<NC>& f) {
    double m = 0.0;
    for (double v : f.raw()) m = std::max(m, std::abs(v));
    return m;
}

template <int NC>
double lp_norm_magnitude(const FieldT<NC>& f, double p) {
    std::vector<double> tmp(f.points(), 0.0);
    for (int c = 0; c < NC; ++c) {
        const auto v = f.component(c);
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] += v[i] * v[i];
    }
    for (double& x : tmp) x = std::pow(std::sqrt(x), p);
    return std::pow(pairwise_sum(tmp) * f.grid().cell_volume(), 1.0 / p);
}

template <int NC>
double l2_norm(const FieldT<NC>& f) {
    std::vector<double> tmp(f.points(), 0.0);
    for (int c = 0; c < NC; ++c) {
        const auto v = f.component(c);
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] += v[i] * v[i];
    }
    return std::sqrt(pairwise_sum(tmp) * f.grid().cell_volume());
}

template <int NC>
double rms(const FieldT<NC>& f) {
    return l2_norm(f) / std::sqrt(f.grid().volume());
}

template double max_abs<1>(const FieldT<1>&);
template double max_abs<3>(const FieldT<3>&);
template double max_abs<9>(const FieldT<9>&);
template double lp_norm_magnitude<1>(const FieldT<1>&, double);
template double lp_norm_magnitude<3>(const FieldT<3>&, double);
template double lp_norm_magnitude<9>(const FieldT<9>&, double);
template double l2_norm<1>(const FieldT<1>&);
template double l2_norm<3>(const FieldT<3>&);
template double l2_norm<9>(const FieldT<9>&);
template double rms<1>(const FieldT<1>&);
template double rms<3>(const FieldT<3>&);
template double rms<9>(const FieldT<9>&);

} // namespace heli
