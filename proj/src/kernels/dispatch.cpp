#include <cstdlib>
#include <string_view>

#include "qdela/error.hpp"
#include "qdela/kernels.hpp"

namespace qdela::kernels {

namespace {

struct Table {
    Isa isa;
    std::size_t (*nearest_2d)(double, double, const double*, const double*, std::size_t, double*);
    void (*min_update_2d)(double, double, const double*, const double*, std::size_t, double*);
    void (*sq_distances)(const double*, std::size_t, std::size_t, const double*, double*);
};

constexpr Table scalar_table{Isa::scalar, &scalar::nearest_2d, &scalar::min_update_2d,
                             &scalar::sq_distances};
constexpr Table avx2_table{Isa::avx2, &avx2::nearest_2d, &avx2::min_update_2d, &avx2::sq_distances};

const Table* initial_table() {
    const char* env = std::getenv("QDELA_SIMD");
    if (env && std::string_view(env) == "scalar")
        return &scalar_table;
    return avx2_supported() ? &avx2_table : &scalar_table;
}

const Table*& current() {
    static const Table* table = initial_table();
    return table;
}

} // namespace

std::string_view to_string(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool avx2_supported() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

Isa active_isa() noexcept { return current()->isa; }

Isa select_isa(Isa isa) noexcept {
    current() = (isa == Isa::avx2 && avx2_supported()) ? &avx2_table : &scalar_table;
    return current()->isa;
}

std::size_t nearest_2d(double px, double py, std::span<const double> xs, std::span<const double> ys,
                       double* best_sq) {
    if (xs.empty() || xs.size() != ys.size())
        throw InvalidArgument("nearest_2d: need matching non-empty coordinate columns");
    return current()->nearest_2d(px, py, xs.data(), ys.data(), xs.size(), best_sq);
}

void min_update_2d(double cx, double cy, std::span<const double> xs, std::span<const double> ys,
                   std::span<double> dmin) {
    if (xs.size() != ys.size() || xs.size() != dmin.size())
        throw InvalidArgument("min_update_2d: column lengths differ");
    current()->min_update_2d(cx, cy, xs.data(), ys.data(), xs.size(), dmin.data());
}

void sq_distances(std::span<const double> columns, std::size_t m, std::span<const double> point,
                  std::span<double> out) {
    if (columns.size() != m * point.size() || out.size() != m)
        throw InvalidArgument("sq_distances: shape mismatch");
    current()->sq_distances(columns.data(), m, point.size(), point.data(), out.data());
}

} // namespace qdela::kernels
