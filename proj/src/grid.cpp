#include "heli/grid.hpp"

#include <algorithm>
#include <sstream>

#include "heli/errors.hpp"

namespace heli {

GridSpec GridSpec::torus(int n, double length) { return torus(n, n, n, length, length, length); }

GridSpec GridSpec::torus(int nx, int ny, int nz, double lx, double ly, double lz) {
    GridSpec g;
    g.dims = {nx, ny, nz};
    g.lengths = {lx, ly, lz};
    g.periodic = {true, true, true};
    g.validate();
    return g;
}

GridSpec GridSpec::slab(int nx, int ny, int nz, double lx, double ly, double height) {
    GridSpec g;
    g.dims = {nx, ny, nz};
    g.lengths = {lx, ly, height};
    g.periodic = {true, true, false};
    g.validate();
    return g;
}

double GridSpec::min_spacing() const {
    return std::min({spacing(0), spacing(1), spacing(2)});
}

double GridSpec::min_length() const {
    return std::min({lengths[0], lengths[1], lengths[2]});
}

void GridSpec::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 4)
            throw InvalidParams("GridSpec: dims must be >= 4 per axis, got " + describe());
        if (!(lengths[a] > 0.0))
            throw InvalidParams("GridSpec: lengths must be positive, got " + describe());
    }
}

std::string GridSpec::describe() const {
    std::ostringstream os;
    os << dims[0] << "x" << dims[1] << "x" << dims[2] << " [" << lengths[0] << "," << lengths[1]
       << "," << lengths[2] << "]"
       << (fully_periodic() ? " torus" : " slab");
    return os.str();
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b))
        throw GridMismatch(std::string(where) + ": grid mismatch (" + a.describe() + " vs " +
                           b.describe() + ")");
}

} // namespace heli
