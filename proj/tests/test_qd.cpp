#include "doctest.h"

#include <cmath>
#include <memory>
#include <set>

#include "oracles.hpp"
#include "qdela/error.hpp"
#include "qdela/kernels.hpp"
#include "qdela/map_elites.hpp"
#include "qdela/problems.hpp"
#include "qdela/sampling.hpp"

using namespace qdela;

namespace {

std::vector<double> random_column(Rng& r, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v)
        x = r.uniform();
    return v;
}

// Restores the dispatch choice when a test case leaves scope.
struct IsaGuard {
    kernels::Isa saved = kernels::active_isa();
    ~IsaGuard() { kernels::select_isa(saved); }
};

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("nearest_2d: scalar and avx2 agree bit for bit") {
    if (!kernels::avx2_supported()) {
        MESSAGE("avx2 not available; equivalence skipped");
        return;
    }
    Rng r(101);
    for (std::size_t k = 1; k <= 70; ++k) {
        for (int rep = 0; rep < 30; ++rep) {
            auto xs = random_column(r, k), ys = random_column(r, k);
            // Plant duplicate centroids so ties land in both the vector body and the tail.
            if (k > 2 && rep % 3 == 0) {
                const std::size_t a = r.index(k), b = r.index(k);
                xs[b] = xs[a];
                ys[b] = ys[a];
            }
            const double px = rep % 5 == 0 ? xs[r.index(k)] : r.uniform();
            const double py = rep % 5 == 0 ? ys[r.index(k)] : r.uniform();
            double ds = -1, dv = -2;
            const auto is = kernels::scalar::nearest_2d(px, py, xs.data(), ys.data(), k, &ds);
            const auto iv = kernels::avx2::nearest_2d(px, py, xs.data(), ys.data(), k, &dv);
            REQUIRE(is == iv);
            REQUIRE(ds == dv);
            REQUIRE(is == oracle::nearest(px, py, xs, ys));
        }
    }
}

TEST_CASE("nearest_2d: all-equal centroids resolve to index 0") {
    std::vector<double> xs(37, 0.25), ys(37, 0.75);
    CHECK(kernels::scalar::nearest_2d(0.1, 0.1, xs.data(), ys.data(), 37, nullptr) == 0);
    if (kernels::avx2_supported())
        CHECK(kernels::avx2::nearest_2d(0.1, 0.1, xs.data(), ys.data(), 37, nullptr) == 0);
}

TEST_CASE("min_update_2d: scalar and avx2 agree bit for bit") {
    if (!kernels::avx2_supported())
        return;
    Rng r(202);
    for (std::size_t n = 1; n <= 70; ++n) {
        auto xs = random_column(r, n), ys = random_column(r, n);
        auto d0 = random_column(r, n);
        auto d1 = d0;
        kernels::scalar::min_update_2d(0.3, 0.6, xs.data(), ys.data(), n, d0.data());
        kernels::avx2::min_update_2d(0.3, 0.6, xs.data(), ys.data(), n, d1.data());
        REQUIRE(d0 == d1);
    }
}

TEST_CASE("sq_distances: scalar and avx2 agree bit for bit") {
    if (!kernels::avx2_supported())
        return;
    Rng r(303);
    for (std::size_t m = 1; m <= 45; ++m) {
        for (std::size_t d = 1; d <= 9; d += 2) {
            auto cols = random_column(r, m * d);
            auto pt = random_column(r, d);
            std::vector<double> a(m), b(m);
            kernels::scalar::sq_distances(cols.data(), m, d, pt.data(), a.data());
            kernels::avx2::sq_distances(cols.data(), m, d, pt.data(), b.data());
            REQUIRE(a == b);
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0;
                for (std::size_t j = 0; j < d; ++j)
                    s += (cols[j * m + i] - pt[j]) * (cols[j * m + i] - pt[j]);
                REQUIRE(a[i] == doctest::Approx(s).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("dispatch honours the selected isa and validates shapes") {
    IsaGuard guard;
    CHECK(kernels::select_isa(kernels::Isa::scalar) == kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    const auto chosen = kernels::select_isa(kernels::Isa::avx2);
    CHECK(chosen == (kernels::avx2_supported() ? kernels::Isa::avx2 : kernels::Isa::scalar));
    std::vector<double> xs{0.0}, ys{0.0, 1.0};
    CHECK_THROWS_AS(kernels::nearest_2d(0, 0, xs, ys), InvalidArgument);
    CHECK_THROWS_AS(kernels::nearest_2d(0, 0, {}, {}), InvalidArgument);
}

TEST_CASE("centroids are identical under either isa") {
    if (!kernels::avx2_supported())
        return;
    IsaGuard guard;
    kernels::select_isa(kernels::Isa::scalar);
    Rng a(77);
    const auto cs = compute_centroids(100, a);
    kernels::select_isa(kernels::Isa::avx2);
    Rng b(77);
    const auto cv = compute_centroids(100, b);
    CHECK(cs.xs == cv.xs);
    CHECK(cs.ys == cv.ys);
}

}

TEST_SUITE("qd") {

TEST_CASE("cvt: single centroid sits at the mass centre") {
    Rng r(1);
    const auto c = compute_centroids(1, r);
    REQUIRE(c.size() == 1);
    CHECK(std::abs(c.xs[0] - 0.5) < 0.02);
    CHECK(std::abs(c.ys[0] - 0.5) < 0.02);
}

TEST_CASE("cvt: two centroids straddle the centre") {
    Rng r(2);
    const auto c = compute_centroids(2, r);
    CHECK(std::abs((c.xs[0] + c.xs[1]) / 2 - 0.5) < 0.05);
    CHECK(std::abs((c.ys[0] + c.ys[1]) / 2 - 0.5) < 0.05);
}

TEST_CASE("cvt: deterministic, in the unit square, pairwise distinct") {
    Rng a(3), b(3);
    const auto c1 = compute_centroids(100, a), c2 = compute_centroids(100, b);
    CHECK(c1.xs == c2.xs);
    CHECK(c1.ys == c2.ys);
    for (std::size_t i = 0; i < 100; ++i) {
        REQUIRE(c1.xs[i] >= 0.0);
        REQUIRE(c1.xs[i] <= 1.0);
        for (std::size_t j = 0; j < i; ++j)
            REQUIRE((c1.xs[i] != c1.xs[j] || c1.ys[i] != c1.ys[j]));
    }
    Rng z(0);
    CHECK_THROWS_AS(compute_centroids(0, z), InvalidArgument);
}

TEST_CASE("nearest_centroid: exact hits, ties and brute force") {
    Rng r(4);
    const auto c = compute_centroids(50, r);
    for (std::size_t j = 0; j < 50; ++j)
        CHECK(nearest_centroid(c.point(j), c) == j);
    Centroids tie{{0.0, 0.1, 0.2, 0.25, 0.5, 0.6, 0.7, 0.75}, {0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5}};
    // (0.5, 0.5) is exactly 0.25 from both cell 3 and cell 7.
    CHECK(nearest_centroid({0.5, 0.5}, tie) == 3);
    for (int t = 0; t < 5000; ++t) {
        const Behaviour b{r.uniform(), r.uniform()};
        REQUIRE(nearest_centroid(b, c) == oracle::nearest(b[0], b[1], c.xs, c.ys));
    }
}

TEST_CASE("archive: insertion rules") {
    auto c = std::make_shared<const Centroids>(Centroids{{0.25, 0.75}, {0.5, 0.5}});
    Archive a(c);
    CHECK(a.empty());
    CHECK(a.insert(Sample{{1.0}, -3.0, Behaviour{0.1, 0.5}}));
    CHECK(a.occupied() == 1);
    CHECK_FALSE(a.insert(Sample{{2.0}, -4.0, Behaviour{0.2, 0.5}}));
    CHECK_FALSE(a.insert(Sample{{3.0}, -3.0, Behaviour{0.2, 0.5}}));
    CHECK(a.cell(0)->genotype == Genotype{1.0});
    CHECK(a.insert(Sample{{4.0}, -1.0, Behaviour{0.3, 0.5}}));
    CHECK(a.cell(0)->genotype == Genotype{4.0});
    CHECK(a.occupied() == 1);
    CHECK(a.insert(Sample{{5.0}, -9.0, Behaviour{0.9, 0.5}}));
    CHECK(a.occupied_cells() == std::vector<std::size_t>{0, 1});
    CHECK_THROWS_AS(a.insert(Sample{{6.0}, 0.0, std::nullopt}), InvalidArgument);
}

TEST_CASE("archive property: matches a naive linear-scan archive") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng r(seed);
        const std::size_t k = 1 + r.index(50);
        Rng cr = derive_rng(r, "cvt");
        auto c = std::make_shared<const Centroids>(compute_centroids(k, cr));
        Archive a(c);
        oracle::NaiveArchive naive(c->xs, c->ys);
        for (int i = 0; i < 1000; ++i) {
            // Coarse fitness levels make equal-fitness rejections common.
            Sample s{{r.uniform()}, std::floor(r.uniform() * 20.0), Behaviour{r.uniform(), r.uniform()}};
            a.insert(s);
            naive.insert(s);
        }
        for (std::size_t j = 0; j < k; ++j) {
            REQUIRE(a.cell(j).has_value() == naive.cells[j].has_value());
            if (a.cell(j)) {
                REQUIRE(a.cell(j)->genotype == naive.cells[j]->genotype);
                REQUIRE(a.cell(j)->fitness == naive.cells[j]->fitness);
            }
        }
    }
}

TEST_CASE("gaussian variation") {
    const auto b = Bounds::uniform(3, -5, 5);
    Rng r(8);
    OperatorConfig zero{OperatorKind::gaussian, 0.0, 0.0, 0.0};
    const Genotype p{1, 2, 3};
    CHECK(gaussian_variation(p, zero, b, r) == p);
    OperatorConfig big{OperatorKind::gaussian, 1.0, 0.0, 0.0};
    int clipped = 0;
    for (int i = 0; i < 200; ++i) {
        const auto child = gaussian_variation(Genotype{5, 5, 5}, big, b, r);
        REQUIRE(b.contains(child));
        clipped += child[0] == 5.0;
    }
    CHECK(clipped > 50);
    OperatorConfig def{OperatorKind::gaussian};
    double s = 0, s2 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = gaussian_variation(Genotype{0, 0, 0}, def, b, r)[1];
        s += v;
        s2 += v * v;
    }
    const double sd = std::sqrt(s2 / n - (s / n) * (s / n));
    CHECK(std::abs(sd / (0.01 * 10.0) - 1.0) < 0.02);
}

TEST_CASE("isolinedd variation") {
    const auto b = Bounds::uniform(2, -5, 5);
    Rng r(9);
    const Genotype p1{-1, -1}, p2{2, 3};
    OperatorConfig zero{OperatorKind::isolinedd, 0.0, 0.0, 0.0};
    CHECK(isolinedd_variation(p1, p2, zero, b, r) == p1);
    // With only the line term active, children lie on the line through both parents.
    OperatorConfig line{OperatorKind::isolinedd, 0.0, 0.0, 0.1};
    for (int i = 0; i < 100; ++i) {
        const auto c = isolinedd_variation(p1, p2, line, b, r);
        const double cross = (c[0] - p1[0]) * (p2[1] - p1[1]) - (c[1] - p1[1]) * (p2[0] - p1[0]);
        REQUIRE(std::abs(cross) < 1e-12);
    }
    // Equal parents: the line term vanishes, leaving Gaussian noise of sigma1.
    OperatorConfig def;
    double s2 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = isolinedd_variation(Genotype{0, 0}, Genotype{0, 0}, def, b, r)[0];
        s2 += v * v;
    }
    CHECK(std::abs(std::sqrt(s2 / n) / 0.1 - 1.0) < 0.02);
    CHECK_THROWS_AS(isolinedd_variation(Genotype{0}, Genotype{0, 0}, def, b, r), InvalidArgument);
}

TEST_CASE("run_map_elites: a single batch") {
    Rng cfg(5);
    const auto prob = make_problem("sphere", "subset", 2, cfg);
    Rng r(6);
    const std::size_t cp[] = {100};
    const auto snaps = run_map_elites(prob, 100, OperatorConfig{}, 100, 100, cp, r);
    REQUIRE(snaps.size() == 1);
    CHECK(snaps[0].eval_count == 100);
    CHECK(snaps[0].archive.occupied() <= 100);
    CHECK(snaps[0].archive.occupied() > 0);
}

TEST_CASE("run_map_elites: coverage, monotonicity and cell consistency") {
    Rng cfg(5);
    const auto prob = make_problem("sphere", "subset", 2, cfg);
    Rng r(12);
    std::vector<std::size_t> cps;
    for (std::size_t e = 100; e <= 10000; e += 100)
        cps.push_back(e);
    const auto snaps = run_map_elites(prob, 100, OperatorConfig{}, 10000, 100, cps, r);
    REQUIRE(snaps.size() == cps.size());
    CHECK(snaps.back().archive.occupied() >= 90);
    for (std::size_t s = 1; s < snaps.size(); ++s) {
        const auto& prev = snaps[s - 1].archive;
        const auto& cur = snaps[s].archive;
        REQUIRE(cur.occupied() >= prev.occupied());
        for (std::size_t j = 0; j < cur.cell_count(); ++j) {
            if (prev.cell(j))
                REQUIRE(cur.cell(j)->fitness >= prev.cell(j)->fitness);
        }
    }
    const auto& last = snaps.back().archive;
    for (std::size_t j : last.occupied_cells()) {
        const auto& e = *last.cell(j);
        REQUIRE(prob.bounds().contains(e.genotype));
        REQUIRE(nearest_centroid(*e.behaviour, last.centroids()) == j);
        REQUIRE(e.fitness == prob.fitness(e.genotype));
    }
}

TEST_CASE("run_map_elites: deterministic for both operators") {
    Rng cfg(5);
    const auto prob = make_problem("rastrigin", "sine", 4, cfg);
    const std::size_t cps[] = {500, 2000};
    for (auto kind : {OperatorKind::gaussian, OperatorKind::isolinedd}) {
        OperatorConfig op{kind};
        Rng a(33), b(33);
        const auto s1 = run_map_elites(prob, 100, op, 2000, 100, cps, a);
        const auto s2 = run_map_elites(prob, 100, op, 2000, 100, cps, b);
        REQUIRE(s1.size() == 2);
        CHECK(s1[0].archive == s2[0].archive);
        CHECK(s1[1].archive == s2[1].archive);
        CHECK(a == b);
    }
}

TEST_CASE("run_map_elites: argument validation") {
    Rng cfg(5);
    const auto prob = make_problem("sphere", "subset", 2, cfg);
    Rng r(1);
    const std::size_t bad[] = {150};
    CHECK_THROWS_AS(run_map_elites(prob, 10, OperatorConfig{}, 1000, 100, bad, r), InvalidArgument);
    const std::size_t ok[] = {100};
    CHECK_THROWS_AS(run_map_elites(prob, 10, OperatorConfig{}, 1050, 100, ok, r), InvalidArgument);
}

TEST_CASE("archive_to_dataset") {
    auto c = std::make_shared<const Centroids>(Centroids{{0.25, 0.75}, {0.5, 0.5}});
    Archive a(c);
    CHECK_THROWS_AS(archive_to_dataset(a), EmptyArchive);
    a.insert(Sample{{1.0, 2.0}, -5.0, Behaviour{0.9, 0.5}});
    CHECK(archive_to_dataset(a).size() == 1);
    a.insert(Sample{{0.0, 1.0}, -1.0, Behaviour{0.1, 0.5}});
    const auto d = archive_to_dataset(a);
    REQUIRE(d.size() == 2);
    CHECK(d.dim() == 2);
    const auto ys = d.fitness();
    std::multiset<double> fit(ys.begin(), ys.end());
    CHECK(fit == std::multiset<double>{-5.0, -1.0});
}

}
