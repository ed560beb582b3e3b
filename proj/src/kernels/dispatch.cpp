#include <atomic>
#include <cstdlib>
#include <cstring>

#include "qns/error.hpp"
#include "qns/kernels.hpp"

namespace qns::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(QNS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char *env = std::getenv("QNS_KERNELS"); env != nullptr && std::strcmp(env, "scalar") == 0) {
        return Isa::scalar;
    }
    return best_isa();
}

std::atomic<Isa> &active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

const detail::KernelTable &table() {
#if defined(QNS_HAVE_AVX2)
    if (active().load(std::memory_order_relaxed) == Isa::avx2) {
        return detail::avx2_table();
    }
#endif
    return detail::scalar_table();
}

void check_same_size(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw ContractViolation(std::string(what) + ": length mismatch");
    }
}

} // namespace

const char *isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa best_isa() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw ConfigError(std::string("kernels: instruction set not available: ") + isa_name(isa));
    }
    active().store(isa, std::memory_order_relaxed);
}

void apply_mat2(std::span<cplx> amps, unsigned target, std::uint64_t ctrl_mask, const Mat2 &m) {
    if ((std::size_t{2} << target) > amps.size()) {
        throw ContractViolation("apply_mat2: target qubit out of range");
    }
    if ((ctrl_mask >> target) & 1U) {
        throw ContractViolation("apply_mat2: target qubit is also a control");
    }
    table().apply_mat2(amps.data(), amps.size(), target, ctrl_mask, m);
}

void multiply_phase_table(std::span<cplx> amps, std::uint64_t ctrl_mask, unsigned shift,
                          std::span<const cplx> tbl) {
    if (tbl.empty() || (tbl.size() & (tbl.size() - 1)) != 0) {
        throw ContractViolation("multiply_phase_table: table size must be a power of two");
    }
    table().multiply_phase_table(amps.data(), amps.size(), ctrl_mask, shift, tbl.data(), tbl.size());
}

double norm_squared(std::span<const cplx> amps) { return table().norm_squared(amps.data(), amps.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
    check_same_size(x.size(), y.size(), "dot");
    return table().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    check_same_size(x.size(), y.size(), "axpy");
    table().axpy(a, x.data(), y.data(), x.size());
}

void laplacian5(std::span<const double> f, std::span<double> out, std::size_t nx, std::size_t ny,
                std::span<const double> cx, std::span<const double> cy) {
    check_same_size(f.size(), nx * ny, "laplacian5");
    check_same_size(out.size(), nx * ny, "laplacian5");
    if (nx < 3 || ny < 3) {
        return;
    }
    if (cx.size() + 1 < nx || cy.size() + 1 < ny) {
        throw ContractViolation("laplacian5: coefficient arrays too short");
    }
    table().laplacian5(f.data(), out.data(), nx, ny, cx.data(), cy.data());
}

} // namespace qns::kernels
