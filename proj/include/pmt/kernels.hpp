#pragma once

#include <cstddef>
#include <string>
#include <utility>

// Data-parallel inner loops used by the neighbor search and the rank
// statistics. Scalar reference kernels are always available; an AVX2
// variant is selected at runtime when the CPU supports it. The variants
// are equivalence-tested against each other; accumulation order may
// differ, so results agree to rounding, not bit-for-bit.

namespace pmt::kernels {

struct Ops {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*squared_l2)(const double*, const double*, std::size_t);
    std::pair<double, double> (*min_max)(const double*, std::size_t);
    const char* name;
};

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
std::pair<double, double> min_max(const double* x, std::size_t n);
} // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
std::pair<double, double> min_max(const double* x, std::size_t n);
} // namespace avx2
#endif

// Active dispatch table. Resolved once per process: AVX2 when the CPU
// reports it, scalar otherwise. PMT_KERNELS=scalar forces the reference
// path.
const Ops& active();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline double squared_l2(const double* a, const double* b, std::size_t n) { return active().squared_l2(a, b, n); }
inline std::pair<double, double> min_max(const double* x, std::size_t n) { return active().min_max(x, n); }

} // namespace pmt::kernels
