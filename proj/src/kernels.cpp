#include "pmt/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>

namespace pmt::kernels {

namespace scalar {

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double squared_l2(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

std::pair<double, double> min_max(const double* x, std::size_t n) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    return {lo, hi};
}

} // namespace scalar

namespace {

const Ops kScalarOps{scalar::sum, scalar::dot, scalar::squared_l2,
                     scalar::min_max, "scalar"};

#if defined(__x86_64__)
const Ops kAvx2Ops{avx2::sum, avx2::dot, avx2::squared_l2, avx2::min_max,
                   "avx2"};
#endif

const Ops& resolve() {
    const char* forced = std::getenv("PMT_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return kScalarOps;
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return kAvx2Ops;
#endif
    return kScalarOps;
}

} // namespace

const Ops& active() {
    static const Ops& ops = resolve();
    return ops;
}

} // namespace pmt::kernels
