#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "dga/rng.hpp"
#include "dga/whitening.hpp"

using namespace dga;

namespace {

std::vector<std::vector<double>> empirical_cov(const std::vector<std::vector<double>>& rows) {
    const std::size_t d = rows.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
    for (double& m : mean) m /= static_cast<double>(rows.size());

    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (const auto& r : rows)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                cov[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]);
    for (auto& row : cov)
        for (double& x : row) x /= static_cast<double>(rows.size() - 1);
    return cov;
}

} // namespace

TEST_CASE("jacobi solves a hand-checked 2x2 system") {
    std::vector<double> a{2.0, 0.0, 0.0, 0.5};
    std::vector<double> vecs, vals;
    jacobi_eigen_symmetric(a, 2, vecs, vals);
    CHECK(vals[0] == doctest::Approx(2.0));
    CHECK(vals[1] == doctest::Approx(0.5));

    // a correlated 2x2: [[2,1],[1,2]] has eigenvalues 3 and 1
    std::vector<double> b{2.0, 1.0, 1.0, 2.0};
    jacobi_eigen_symmetric(b, 2, vecs, vals);
    CHECK(vals[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(1.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(vecs[0]) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(std::abs(vecs[1]) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("jacobi reconstructs random symmetric matrices") {
    Rng rng(19);
    const std::size_t d = 8;
    std::vector<double> a(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double v = rng.uniform(-1.0, 1.0);
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
    std::vector<double> original = a;

    std::vector<double> vecs, vals;
    jacobi_eigen_symmetric(a, d, vecs, vals);

    // rows of vecs are orthonormal
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                dot += vecs[i * d + k] * vecs[j * d + k];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
        }

    // A == sum_k lambda_k v_k v_k^T
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                sum += vals[k] * vecs[k * d + i] * vecs[k * d + j];
            CHECK(std::abs(sum - original[i * d + j]) < 1e-9);
        }

    // eigenvalues sorted descending
    for (std::size_t k = 1; k < d; ++k) CHECK(vals[k - 1] >= vals[k]);
}

TEST_CASE("whitening a hand-built diagonal fixture") {
    // covariance [[2,0],[0,0.5]] around mean (1, -1)
    Rng rng(23);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 4000; ++i) {
        rows.push_back({1.0 + std::sqrt(2.0) * rng.normal(),
                        -1.0 + std::sqrt(0.5) * rng.normal()});
    }
    WhiteningTransform t = WhiteningTransform::fit(rows, 1e-9);

    std::vector<std::vector<double>> whitened;
    whitened.reserve(rows.size());
    for (const auto& r : rows) whitened.push_back(t.apply(r));
    auto cov = empirical_cov(whitened);
    CHECK(std::abs(cov[0][0] - 1.0) < 1e-6);
    CHECK(std::abs(cov[1][1] - 1.0) < 1e-6);
    CHECK(std::abs(cov[0][1]) < 1e-6);
}

TEST_CASE("whitened training data has zero mean and identity covariance") {
    Rng rng(29);
    const std::size_t n = 500, d = 20;
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    for (auto& r : rows)
        for (double& x : r) x = 3.0 * rng.normal();

    WhiteningTransform t = WhiteningTransform::fit(rows);
    std::vector<std::vector<double>> whitened;
    whitened.reserve(n);
    for (const auto& r : rows) whitened.push_back(t.apply(r));

    std::vector<double> mean(d, 0.0);
    for (const auto& r : whitened)
        for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
    for (double m : mean) CHECK(std::abs(m / static_cast<double>(n)) < 1e-9);

    auto cov = empirical_cov(whitened);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            CHECK(std::abs(cov[i][j] - (i == j ? 1.0 : 0.0)) < 1e-6);
}

TEST_CASE("whitening contracts") {
    Rng rng(31);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 50; ++i)
        rows.push_back({rng.normal(), rng.normal(), 7.0}); // constant column

    WhiteningTransform t = WhiteningTransform::fit(rows);

    // the mean maps to the zero vector
    auto at_mean = t.apply(t.mean());
    for (double x : at_mean) CHECK(x == 0.0);

    // constant columns stay finite (epsilon regularization)
    for (const auto& r : rows)
        for (double x : t.apply(r)) CHECK(std::isfinite(x));

    // linearity: apply(a) - apply(b) depends only on a - b
    std::vector<double> a{0.3, -0.2, 7.0}, b{-1.0, 0.4, 7.0};
    std::vector<double> shift{5.0, 5.0, 5.0};
    auto a2 = a, b2 = b;
    for (int j = 0; j < 3; ++j) {
        a2[j] += shift[j];
        b2[j] += shift[j];
    }
    auto da = t.apply(a), db = t.apply(b), da2 = t.apply(a2), db2 = t.apply(b2);
    for (int j = 0; j < 3; ++j)
        CHECK(da[j] - db[j] == doctest::Approx(da2[j] - db2[j]).epsilon(1e-9));

    CHECK_THROWS_AS(WhiteningTransform::fit({{1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WhiteningTransform::fit({{1.0}, {1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(t.apply(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("whitening serialization round-trips bit-exactly") {
    Rng rng(37);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 40; ++i)
        rows.push_back({rng.normal(), 2.0 * rng.normal(), rng.uniform()});
    WhiteningTransform t = WhiteningTransform::fit(rows);

    std::stringstream ss;
    t.save(ss);
    WhiteningTransform loaded = WhiteningTransform::load(ss);
    CHECK(loaded.mean() == t.mean());
    CHECK(loaded.axes() == t.axes());
    CHECK(loaded.eigenvalues() == t.eigenvalues());
    CHECK(loaded.epsilon() == t.epsilon());

    std::vector<double> x{0.1, -0.5, 0.7};
    CHECK(t.apply(x) == loaded.apply(x));
}
