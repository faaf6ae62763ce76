#include "heli/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace heli::detail {

namespace {

std::mutex plan_mutex;
std::map<std::array<int, 4>, fftw_plan> plan_cache;

fftw_plan get_plan(const GridSpec& grid, fftw_complex* data, int sign) {
    const std::array<int, 4> key{grid.dims[0], grid.dims[1], grid.dims[2], sign};
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // x-fastest storage: FFTW's row-major (n0,n1,n2) has n2 fastest, so n2 = Nx.
    // FFTW_UNALIGNED lets the cached plan run on any caller buffer.
    fftw_plan p = fftw_plan_dft_3d(grid.dims[2], grid.dims[1], grid.dims[0], data, data,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, p);
    return p;
}

} // namespace

void dft3(const GridSpec& grid, std::complex<double>* data, int sign) {
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_plan p = get_plan(grid, raw, sign);
    fftw_execute_dft(p, raw, raw);
}

void dft2(int nx, int ny, std::complex<double>* data, int sign) {
    static std::mutex mutex2;
    static std::map<std::array<int, 3>, fftw_plan> cache2;
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_plan p;
    {
        const std::array<int, 3> key{nx, ny, sign};
        std::lock_guard<std::mutex> lock(mutex2);
        auto it = cache2.find(key);
        if (it == cache2.end()) {
            p = fftw_plan_dft_2d(ny, nx, raw, raw, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
            cache2.emplace(key, p);
        } else {
            p = it->second;
        }
    }
    fftw_execute_dft(p, raw, raw);
}

} // namespace heli::detail
