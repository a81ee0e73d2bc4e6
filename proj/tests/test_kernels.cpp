#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dga/kernels.hpp"
#include "dga/rng.hpp"

using namespace dga;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
    return v;
}

// tolerance scaled by the magnitude of the summed terms, so dot products
// with cancellation are still held to a tight bound
void check_close(double a, double b, double scale) {
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, scale));
}

} // namespace

TEST_CASE("scalar kernels match naive formulas") {
    const auto& k = kernels::scalar_ops();
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{4.0, -5.0, 6.0};
    CHECK(k.dot(a.data(), b.data(), 3) == doctest::Approx(4.0 - 10.0 + 18.0));

    std::vector<double> y{1.0, 1.0, 1.0};
    k.axpy(2.0, a.data(), y.data(), 3);
    CHECK(y == std::vector<double>{3.0, 5.0, 7.0});

    // A = [[1,0],[0,1],[2,3]], x = [5,7]
    std::vector<double> m{1, 0, 0, 1, 2, 3};
    std::vector<double> x{5, 7};
    std::vector<double> out(3, -1.0);
    k.matvec(m.data(), x.data(), out.data(), 3, 2);
    CHECK(out == std::vector<double>{5.0, 7.0, 31.0});

    k.matvec_add(m.data(), x.data(), out.data(), 3, 2);
    CHECK(out == std::vector<double>{10.0, 14.0, 62.0});

    std::vector<double> yt(2, 1.0);
    std::vector<double> xr{1.0, 1.0, 1.0};
    k.tmatvec_add(m.data(), xr.data(), yt.data(), 3, 2);
    CHECK(yt == std::vector<double>{4.0, 5.0});

    std::vector<double> acc(6, 0.0);
    std::vector<double> u{1.0, 2.0, 3.0};
    std::vector<double> v{10.0, 20.0};
    k.ger(acc.data(), u.data(), v.data(), 3, 2);
    CHECK(acc == std::vector<double>{10, 20, 20, 40, 30, 60});
}

TEST_CASE("avx2 kernels agree with scalar reference") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (simd == nullptr) {
        MESSAGE("AVX2 unavailable on this machine, equivalence test skipped");
        return;
    }
    const auto& ref = kernels::scalar_ops();
    Rng rng(42);

    // odd sizes, tails, and sizes below one vector width
    for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 64, 65, 200}) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);
        double mag = 0.0;
        for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
        check_close(simd->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), mag);

        auto y1 = random_vec(rng, n);
        auto y2 = y1;
        simd->axpy(1.7, a.data(), y1.data(), n);
        ref.axpy(1.7, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], std::abs(y1[i]));
    }

    for (auto [rows, cols] : std::vector<std::pair<std::size_t, std::size_t>>{
             {1, 1}, {3, 5}, {8, 8}, {7, 13}, {16, 33}}) {
        auto m = random_vec(rng, rows * cols);
        auto x = random_vec(rng, cols);
        std::vector<double> o1(rows), o2(rows);
        simd->matvec(m.data(), x.data(), o1.data(), rows, cols);
        ref.matvec(m.data(), x.data(), o2.data(), rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            check_close(o1[i], o2[i], static_cast<double>(cols) * 4.0);

        auto xr = random_vec(rng, rows);
        std::vector<double> t1(cols, 0.0), t2(cols, 0.0);
        simd->tmatvec_add(m.data(), xr.data(), t1.data(), rows, cols);
        ref.tmatvec_add(m.data(), xr.data(), t2.data(), rows, cols);
        for (std::size_t i = 0; i < cols; ++i)
            check_close(t1[i], t2[i], static_cast<double>(rows) * 4.0);

        auto g1 = random_vec(rng, rows * cols);
        auto g2 = g1;
        simd->ger(g1.data(), xr.data(), x.data(), rows, cols);
        ref.ger(g2.data(), xr.data(), x.data(), rows, cols);
        for (std::size_t i = 0; i < rows * cols; ++i)
            check_close(g1[i], g2[i], std::abs(g1[i]) + 1.0);
    }
}

TEST_CASE("runtime dispatch selects a working backend") {
    const auto& k = kernels::ops();
    CHECK((std::string(k.name) == "scalar" || std::string(k.name) == "avx2"));
    std::vector<double> a{1.0, 2.0};
    CHECK(k.dot(a.data(), a.data(), 2) == doctest::Approx(5.0));
}
