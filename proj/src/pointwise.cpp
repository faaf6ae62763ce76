#include "heli/pointwise.hpp"

#include "heli/parallel.hpp"

namespace heli {

namespace {
template <typename F>
void loop(std::size_t n, F&& body) {
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) body(i);
    });
}
} // namespace

ScalarField dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "dot");
    ScalarField out(a.grid());
    auto o = out.component(0);
    auto a0 = a.component(0), a1 = a.component(1), a2 = a.component(2);
    auto b0 = b.component(0), b1 = b.component(1), b2 = b.component(2);
    loop(out.points(), [&](std::size_t i) { o[i] = a0[i] * b0[i] + a1[i] * b1[i] + a2[i] * b2[i]; });
    return out;
}

VectorField cross(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "cross");
    VectorField out(a.grid());
    auto o0 = out.component(0), o1 = out.component(1), o2 = out.component(2);
    auto a0 = a.component(0), a1 = a.component(1), a2 = a.component(2);
    auto b0 = b.component(0), b1 = b.component(1), b2 = b.component(2);
    loop(out.points(), [&](std::size_t i) {
        o0[i] = a1[i] * b2[i] - a2[i] * b1[i];
        o1[i] = a2[i] * b0[i] - a0[i] * b2[i];
        o2[i] = a0[i] * b1[i] - a1[i] * b0[i];
    });
    return out;
}

TensorField outer(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "outer");
    TensorField out(a.grid());
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            auto o = out.component(tensor_index(r, c));
            auto ar = a.component(r);
            auto bc = b.component(c);
            loop(out.points(), [&](std::size_t i) { o[i] = ar[i] * bc[i]; });
        }
    return out;
}

template <int NC>
FieldT<NC> scale(const FieldT<NC>& f, double c) {
    FieldT<NC> out(f.grid());
    const auto& src = f.raw();
    auto& dst = out.raw();
    loop(dst.size(), [&](std::size_t i) { dst[i] = c * src[i]; });
    return out;
}

template <int NC>
FieldT<NC> add(const FieldT<NC>& a, const FieldT<NC>& b) {
    require_same_grid(a.grid(), b.grid(), "add");
    FieldT<NC> out(a.grid());
    const auto& x = a.raw();
    const auto& y = b.raw();
    auto& dst = out.raw();
    loop(dst.size(), [&](std::size_t i) { dst[i] = x[i] + y[i]; });
    return out;
}

template <int NC>
FieldT<NC> sub(const FieldT<NC>& a, const FieldT<NC>& b) {
    require_same_grid(a.grid(), b.grid(), "sub");
    FieldT<NC> out(a.grid());
    const auto& x = a.raw();
    const auto& y = b.raw();
    auto& dst = out.raw();
    loop(dst.size(), [&](std::size_t i) { dst[i] = x[i] - y[i]; });
    return out;
}

template <int NC>
ScalarField magnitude_squared(const FieldT<NC>& f) {
    ScalarField out(f.grid());
    auto o = out.component(0);
    for (int c = 0; c < NC; ++c) {
        auto v = f.component(c);
        loop(out.points(), [&](std::size_t i) { o[i] += v[i] * v[i]; });
    }
    return out;
}

VectorField vector_dot_tensor(const VectorField& w, const TensorField& R) {
    require_same_grid(w.grid(), R.grid(), "vector_dot_tensor");
    VectorField out(w.grid());
    for (int l = 0; l < 3; ++l) {
        auto o = out.component(l);
        for (int k = 0; k < 3; ++k) {
            auto wk = w.component(k);
            auto rkl = R.component(tensor_index(k, l));
            loop(out.points(), [&](std::size_t i) { o[i] += wk[i] * rkl[i]; });
        }
    }
    return out;
}

VectorField tensor_column(const TensorField& R, int l) {
    VectorField out(R.grid());
    for (int k = 0; k < 3; ++k) {
        auto o = out.component(k);
        auto src = R.component(tensor_index(k, l));
        loop(out.points(), [&](std::size_t i) { o[i] = src[i]; });
    }
    return out;
}

ScalarField double_contract(const TensorField& a, const TensorField& b) {
    require_same_grid(a.grid(), b.grid(), "double_contract");
    ScalarField out(a.grid());
    auto o = out.component(0);
    for (int c = 0; c < 9; ++c) {
        auto x = a.component(c);
        auto y = b.component(c);
        loop(out.points(), [&](std::size_t i) { o[i] += x[i] * y[i]; });
    }
    return out;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "multiply");
    ScalarField out(a.grid());
    auto o = out.component(0);
    auto x = a.component(0), y = b.component(0);
    loop(out.points(), [&](std::size_t i) { o[i] = x[i] * y[i]; });
    return out;
}

VectorField multiply(const ScalarField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "multiply");
    VectorField out(b.grid());
    auto x = a.component(0);
    for (int c = 0; c < 3; ++c) {
        auto o = out.component(c);
        auto y = b.component(c);
        loop(out.points(), [&](std::size_t i) { o[i] = x[i] * y[i]; });
    }
    return out;
}

template FieldT<1> scale<1>(const FieldT<1>&, double);
template FieldT<3> scale<3>(const FieldT<3>&, double);
template FieldT<9> scale<9>(const FieldT<9>&, double);
template FieldT<1> add<1>(const FieldT<1>&, const FieldT<1>&);
template FieldT<3> add<3>(const FieldT<3>&, const FieldT<3>&);
template FieldT<9> add<9>(const FieldT<9>&, const FieldT<9>&);
template FieldT<1> sub<1>(const FieldT<1>&, const FieldT<1>&);
template FieldT<3> sub<3>(const FieldT<3>&, const FieldT<3>&);
template FieldT<9> sub<9>(const FieldT<9>&, const FieldT<9>&);
template ScalarField magnitude_squared<1>(const FieldT<1>&);
template ScalarField magnitude_squared<3>(const FieldT<3>&);
template ScalarField magnitude_squared<9>(const FieldT<9>&);

} // namespace heli
