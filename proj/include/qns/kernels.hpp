#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference implementation
// and, on x86-64 builds, an AVX2+FMA variant chosen at runtime from the CPU
// features. QNS_KERNELS=scalar in the environment forces the reference set.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qns::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

[[nodiscard]] const char *isa_name(Isa isa);
[[nodiscard]] bool isa_available(Isa isa);
[[nodiscard]] Isa best_isa();
[[nodiscard]] Isa active_isa();
/// Throws ConfigError when the CPU or the build lacks the requested set.
void set_active_isa(Isa isa);

/// Restores the previous kernel set on scope exit.
class ScopedIsa {
  public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
    ~ScopedIsa() { set_active_isa(previous_); }
    ScopedIsa(const ScopedIsa &) = delete;
    ScopedIsa &operator=(const ScopedIsa &) = delete;

  private:
    Isa previous_;
};

struct Mat2 {
    cplx m00, m01, m10, m11;
};

/// (a[i], a[i | 2^target]) ← M·(a[i], a[i | 2^target]) for every i with the
/// target bit clear and (i & ctrl_mask) == ctrl_mask.
void apply_mat2(std::span<cplx> amps, unsigned target, std::uint64_t ctrl_mask, const Mat2 &m);

/// a[i] *= table[(i >> shift) & (table.size() − 1)] for every i with
/// (i & ctrl_mask) == ctrl_mask. table.size() must be a power of two.
void multiply_phase_table(std::span<cplx> amps, std::uint64_t ctrl_mask, unsigned shift,
                          std::span<const cplx> table);

[[nodiscard]] double norm_squared(std::span<const cplx> amps);

[[nodiscard]] double dot(std::span<const double> x, std::span<const double> y);

/// y ← y + a·x
void axpy(double a, std::span<const double> x, std::span<double> y);

/**
 * Variable-coefficient 5-point stencil on a row-major nx×ny array:
 *   out(i,j) = cx[i]·(f(i+1,j) − f(i,j)) − cx[i−1]·(f(i,j) − f(i−1,j))
 *            + cy[j]·(f(i,j+1) − f(i,j)) − cy[j−1]·(f(i,j) − f(i,j−1))
 * for 1 ≤ i ≤ nx−2 and 1 ≤ j ≤ ny−2. Entries on the outer ring are not written.
 */
void laplacian5(std::span<const double> f, std::span<double> out, std::size_t nx, std::size_t ny,
                std::span<const double> cx, std::span<const double> cy);

namespace detail {

struct KernelTable {
    void (*apply_mat2)(cplx *amps, std::size_t n, unsigned target, std::uint64_t ctrl_mask, const Mat2 &m);
    void (*multiply_phase_table)(cplx *amps, std::size_t n, std::uint64_t ctrl_mask, unsigned shift,
                                 const cplx *table, std::size_t table_size);
    double (*norm_squared)(const cplx *amps, std::size_t n);
    double (*dot)(const double *x, const double *y, std::size_t n);
    void (*axpy)(double a, const double *x, double *y, std::size_t n);
    void (*laplacian5)(const double *f, double *out, std::size_t nx, std::size_t ny, const double *cx,
                       const double *cy);
};

const KernelTable &scalar_table();
#if defined(QNS_HAVE_AVX2)
const KernelTable &avx2_table();
#endif

} // namespace detail

} // namespace qns::kernels
