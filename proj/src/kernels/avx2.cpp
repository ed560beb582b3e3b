#include <immintrin.h>

#include "qns/kernels.hpp"

namespace qns::kernels::detail {

namespace {

// Two complex numbers per register: [re0, im0, re1, im1].

inline __m256d load2(const cplx *p) { return _mm256_loadu_pd(reinterpret_cast<const double *>(p)); }
inline void store2(cplx *p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double *>(p), v); }

// z · w with w given as broadcast real and imaginary parts.
inline __m256d cmul(__m256d z, __m256d w_re, __m256d w_im) {
    const __m256d z_swap = _mm256_permute_pd(z, 0b0101);
    return _mm256_fmaddsub_pd(z, w_re, _mm256_mul_pd(z_swap, w_im));
}

void apply_mat2_avx2(cplx *amps, std::size_t n, unsigned target, std::uint64_t ctrl_mask, const Mat2 &m) {
    // Pairs (i, i+1) share their control bits only when bit 0 is neither target nor control.
    if (target == 0 || (ctrl_mask & 1U) != 0) {
        scalar_table().apply_mat2(amps, n, target, ctrl_mask, m);
        return;
    }
    const __m256d r00 = _mm256_set1_pd(m.m00.real()), i00 = _mm256_set1_pd(m.m00.imag());
    const __m256d r01 = _mm256_set1_pd(m.m01.real()), i01 = _mm256_set1_pd(m.m01.imag());
    const __m256d r10 = _mm256_set1_pd(m.m10.real()), i10 = _mm256_set1_pd(m.m10.imag());
    const __m256d r11 = _mm256_set1_pd(m.m11.real()), i11 = _mm256_set1_pd(m.m11.imag());
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t blk = 0; blk < n; blk += 2 * tbit) {
        for (std::size_t off = 0; off < tbit; off += 2) {
            const std::size_t i0 = blk + off;
            if ((i0 & ctrl_mask) != ctrl_mask) {
                continue;
            }
            const __m256d a0 = load2(amps + i0);
            const __m256d a1 = load2(amps + i0 + tbit);
            store2(amps + i0, _mm256_add_pd(cmul(a0, r00, i00), cmul(a1, r01, i01)));
            store2(amps + i0 + tbit, _mm256_add_pd(cmul(a0, r10, i10), cmul(a1, r11, i11)));
        }
    }
}

void multiply_phase_table_avx2(cplx *amps, std::size_t n, std::uint64_t ctrl_mask, unsigned shift,
                               const cplx *table, std::size_t table_size) {
    if ((ctrl_mask & 1U) != 0 || n < 2) {
        scalar_table().multiply_phase_table(amps, n, ctrl_mask, shift, table, table_size);
        return;
    }
    const std::size_t mask = table_size - 1;
    for (std::size_t i = 0; i < n; i += 2) {
        if ((i & ctrl_mask) != ctrl_mask) {
            continue;
        }
        const auto *w0 = reinterpret_cast<const double *>(table + ((i >> shift) & mask));
        const auto *w1 = reinterpret_cast<const double *>(table + (((i + 1) >> shift) & mask));
        const __m256d w = _mm256_set_m128d(_mm_loadu_pd(w1), _mm_loadu_pd(w0));
        const __m256d w_re = _mm256_movedup_pd(w);
        const __m256d w_im = _mm256_permute_pd(w, 0b1111);
        store2(amps + i, cmul(load2(amps + i), w_re, w_im));
    }
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double norm_squared_avx2(const cplx *amps, std::size_t n) {
    const auto *p = reinterpret_cast<const double *>(amps);
    const std::size_t len = 2 * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= len; k += 8) {
        const __m256d a = _mm256_loadu_pd(p + k);
        const __m256d b = _mm256_loadu_pd(p + k + 4);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < len; ++k) {
        s += p[k] * p[k];
    }
    return s;
}

double dot_avx2(const double *x, const double *y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) {
        s += x[k] * y[k];
    }
    return s;
}

void axpy_avx2(double a, const double *x, double *y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
    }
    for (; k < n; ++k) {
        y[k] += a * x[k];
    }
}

void laplacian5_avx2(const double *f, double *out, std::size_t nx, std::size_t ny, const double *cx,
                     const double *cy) {
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        const double *row = f + j * nx;
        const double *south = row - nx;
        const double *north = row + nx;
        double *o = out + j * nx;
        const __m256d cn = _mm256_set1_pd(cy[j]);
        const __m256d cs = _mm256_set1_pd(cy[j - 1]);
        std::size_t i = 1;
        for (; i + 4 < nx; i += 4) {
            const __m256d c = _mm256_loadu_pd(row + i);
            const __m256d e = _mm256_loadu_pd(row + i + 1);
            const __m256d w = _mm256_loadu_pd(row + i - 1);
            const __m256d ce = _mm256_loadu_pd(cx + i);
            const __m256d cw = _mm256_loadu_pd(cx + i - 1);
            const __m256d x_term = _mm256_sub_pd(_mm256_mul_pd(ce, _mm256_sub_pd(e, c)),
                                                 _mm256_mul_pd(cw, _mm256_sub_pd(c, w)));
            const __m256d y_term =
                _mm256_sub_pd(_mm256_mul_pd(cn, _mm256_sub_pd(_mm256_loadu_pd(north + i), c)),
                              _mm256_mul_pd(cs, _mm256_sub_pd(c, _mm256_loadu_pd(south + i))));
            _mm256_storeu_pd(o + i, _mm256_add_pd(x_term, y_term));
        }
        for (; i + 1 < nx; ++i) {
            const double c = row[i];
            const double x_term = cx[i] * (row[i + 1] - c) - cx[i - 1] * (c - row[i - 1]);
            const double y_term = cy[j] * (north[i] - c) - cy[j - 1] * (c - south[i]);
            o[i] = x_term + y_term;
        }
    }
}

} // namespace

const KernelTable &avx2_table() {
    static const KernelTable table{apply_mat2_avx2, multiply_phase_table_avx2, norm_squared_avx2,
                                   dot_avx2,        axpy_avx2,                  laplacian5_avx2};
    return table;
}

} // namespace qns::kernels::detail
