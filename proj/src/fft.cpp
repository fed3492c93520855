#include "kramers/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace kramers::fft {

namespace {

using Key = std::tuple<int, int, int, int, int, bool>;

struct PlanCache {
    std::mutex mu;
    std::map<Key, fftw_plan> plans;

    ~PlanCache()
    {
        for (auto& kv : plans) fftw_destroy_plan(kv.second);
    }
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

fftw_plan get_plan(int n, int howmany, int stride, int dist, Direction dir, bool inplace)
{
    auto& c = cache();
    const Key key{n, howmany, stride, dist, dir == Direction::forward ? 0 : 1, inplace};
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.plans.find(key);
    if (it != c.plans.end()) return it->second;

    const std::size_t extent = static_cast<std::size_t>(howmany - 1) * dist + static_cast<std::size_t>(n - 1) * stride + 1;
    auto* a = fftw_alloc_complex(extent);
    auto* b = inplace ? a : fftw_alloc_complex(extent);
    int dims[1] = {n};
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_many_dft(1, dims, howmany, a, nullptr, stride, dist, b, nullptr, stride, dist, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (b != a) fftw_free(b);
    fftw_free(a);
    c.plans.emplace(key, plan);
    return plan;
}

} // namespace

void many(int n, int howmany, int stride, int dist, Direction dir, const cplx* in, cplx* out)
{
    const bool inplace = in == out;
    fftw_plan plan = get_plan(n, howmany, stride, dist, dir, inplace);
    // FFTW does not write to the input of an out-of-place complex transform.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in));
    fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out));
}

} // namespace kramers::fft
