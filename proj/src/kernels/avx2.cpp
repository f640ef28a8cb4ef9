// AVX2 kernels. Lanes cover four consecutive points; per-point arithmetic is
// the scalar sequence (separate mul and add, no FMA), so results match the
// reference bit for bit. Functions carry a target attribute instead of the
// whole file being built with -mavx2, which keeps inline library code in this
// translation unit free of AVX2 instructions.

#include "qdela/kernels.hpp"

#include <limits>

#if defined(__x86_64__) || defined(_M_X64)
#define QDELA_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace qdela::kernels::avx2 {

#if QDELA_HAVE_AVX2_KERNELS

__attribute__((target("avx2"))) std::size_t nearest_2d(double px, double py, const double* xs,
                                                       const double* ys, std::size_t k,
                                                       double* best_sq) {
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d vidx = _mm256_set1_pd(0.0);
    __m256d vcur = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);

    std::size_t j = 0;
    for (; j + 4 <= k; j += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), vpx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), vpy);
        const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        const __m256d lt = _mm256_cmp_pd(d, vbest, _CMP_LT_OQ);
        vbest = _mm256_blendv_pd(vbest, d, lt);
        vidx = _mm256_blendv_pd(vidx, vcur, lt);
        vcur = _mm256_add_pd(vcur, four);
    }

    alignas(32) double lane_best[4];
    alignas(32) double lane_idx[4];
    _mm256_store_pd(lane_best, vbest);
    _mm256_store_pd(lane_idx, vidx);

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (int lane = 0; lane < 4; ++lane) {
        const auto idx = static_cast<std::size_t>(lane_idx[lane]);
        if (lane_best[lane] < best || (lane_best[lane] == best && idx < best_index)) {
            best = lane_best[lane];
            best_index = idx;
        }
    }
    for (; j < k; ++j) {
        const double dx = xs[j] - px;
        const double dy = ys[j] - py;
        const double d = dx * dx + dy * dy;
        if (d < best) {
            best = d;
            best_index = j;
        }
    }
    if (best_sq)
        *best_sq = best;
    return best_index;
}

__attribute__((target("avx2"))) void min_update_2d(double cx, double cy, const double* xs,
                                                   const double* ys, std::size_t n, double* dmin) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
        const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        // min_pd(d, cur) yields d only when d < cur, like the scalar branch.
        _mm256_storeu_pd(dmin + i, _mm256_min_pd(d, _mm256_loadu_pd(dmin + i)));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - cx;
        const double dy = ys[i] - cy;
        const double d = dx * dx + dy * dy;
        if (d < dmin[i])
            dmin[i] = d;
    }
}

__attribute__((target("avx2"))) void sq_distances(const double* columns, std::size_t m,
                                                  std::size_t d, const double* point, double* out) {
    for (std::size_t i = 0; i < m; ++i)
        out[i] = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double* col = columns + j * m;
        const double p = point[j];
        const __m256d vp = _mm256_set1_pd(p);
        std::size_t i = 0;
        for (; i + 4 <= m; i += 4) {
            const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(col + i), vp);
            _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), _mm256_mul_pd(t, t)));
        }
        for (; i < m; ++i) {
            const double t = col[i] - p;
            out[i] += t * t;
        }
    }
}

#else

std::size_t nearest_2d(double px, double py, const double* xs, const double* ys, std::size_t k,
                       double* best_sq) {
    return scalar::nearest_2d(px, py, xs, ys, k, best_sq);
}

void min_update_2d(double cx, double cy, const double* xs, const double* ys, std::size_t n,
                   double* dmin) {
    scalar::min_update_2d(cx, cy, xs, ys, n, dmin);
}

void sq_distances(const double* columns, std::size_t m, std::size_t d, const double* point,
                  double* out) {
    scalar::sq_distances(columns, m, d, point, out);
}

#endif

} // namespace qdela::kernels::avx2
