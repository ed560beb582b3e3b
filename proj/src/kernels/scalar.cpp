#include "qns/kernels.hpp"

namespace qns::kernels::detail {

namespace {

// Written out instead of std::complex::operator* so the reference path never
// drops into the libgcc NaN-recovery routine and matches the SIMD operation order.
inline cplx cmul(const cplx &a, const cplx &b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.imag() * b.real() + a.real() * b.imag()};
}

void apply_mat2_scalar(cplx *amps, std::size_t n, unsigned target, std::uint64_t ctrl_mask, const Mat2 &m) {
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t blk = 0; blk < n; blk += 2 * tbit) {
        for (std::size_t off = 0; off < tbit; ++off) {
            const std::size_t i0 = blk + off;
            if ((i0 & ctrl_mask) != ctrl_mask) {
                continue;
            }
            const cplx a0 = amps[i0];
            const cplx a1 = amps[i0 + tbit];
            amps[i0] = cmul(m.m00, a0) + cmul(m.m01, a1);
            amps[i0 + tbit] = cmul(m.m10, a0) + cmul(m.m11, a1);
        }
    }
}

void multiply_phase_table_scalar(cplx *amps, std::size_t n, std::uint64_t ctrl_mask, unsigned shift,
                                 const cplx *table, std::size_t table_size) {
    const std::size_t mask = table_size - 1;
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & ctrl_mask) == ctrl_mask) {
            amps[i] = cmul(amps[i], table[(i >> shift) & mask]);
        }
    }
}

double norm_squared_scalar(const cplx *amps, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
    }
    return s;
}

double dot_scalar(const double *x, const double *y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

void axpy_scalar(double a, const double *x, double *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void laplacian5_scalar(const double *f, double *out, std::size_t nx, std::size_t ny, const double *cx,
                       const double *cy) {
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        const double *row = f + j * nx;
        const double *south = row - nx;
        const double *north = row + nx;
        double *o = out + j * nx;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double c = row[i];
            const double x_term = cx[i] * (row[i + 1] - c) - cx[i - 1] * (c - row[i - 1]);
            const double y_term = cy[j] * (north[i] - c) - cy[j - 1] * (c - south[i]);
            o[i] = x_term + y_term;
        }
    }
}

} // namespace

const KernelTable &scalar_table() {
    static const KernelTable table{apply_mat2_scalar, multiply_phase_table_scalar, norm_squared_scalar,
                                   dot_scalar,        axpy_scalar,                  laplacian5_scalar};
    return table;
}

} // namespace qns::kernels::detail
