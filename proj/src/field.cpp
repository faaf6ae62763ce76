#include "heli/field.hpp"

#include <cmath>

#include "heli/errors.hpp"

namespace heli {

template <int NC>
bool FieldT<NC>::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

template class FieldT<1>;
template class FieldT<3>;
template class FieldT<9>;

template <int NC>
void require_finite(const FieldT<NC>& f, const char* where) {
    if (!f.all_finite())
        throw InvalidField(std::string(where) + ": field contains non-finite values");
}

template void require_finite<1>(const FieldT<1>&, const char*);
template void require_finite<3>(const FieldT<3>&, const char*);
template void require_finite<9>(const FieldT<9>&, const char*);

} // namespace heli
