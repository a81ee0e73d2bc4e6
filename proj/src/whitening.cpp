#include "dga/whitening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dga/kernels.hpp"
#include "dga/textio.hpp"

namespace dga {

void jacobi_eigen_symmetric(std::vector<double>& a, std::size_t d,
                            std::vector<double>& vecs, std::vector<double>& vals) {
    if (a.size() != d * d) throw std::invalid_argument("jacobi: bad matrix size");

    // vecs starts as identity; rows accumulate the eigenvectors
    vecs.assign(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) vecs[i * d + i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) s += a[p * d + q] * a[p * d + q];
        return std::sqrt(2.0 * s);
    };
    double frob = 0.0;
    for (double x : a) frob += x * x;
    frob = std::sqrt(frob);
    const double tol = std::max(frob, 1.0) * 1e-14;

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double apq = a[p * d + q];
                if (apq == 0.0) continue;
                double app = a[p * d + p];
                double aqq = a[q * d + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    double akp = a[k * d + p];
                    double akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double apk = a[p * d + k];
                    double aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                // eigenvector rows rotate like the columns of A
                for (std::size_t k = 0; k < d; ++k) {
                    double vpk = vecs[p * d + k];
                    double vqk = vecs[q * d + k];
                    vecs[p * d + k] = c * vpk - s * vqk;
                    vecs[q * d + k] = s * vpk + c * vqk;
                }
            }
        }
    }

    vals.resize(d);
    for (std::size_t i = 0; i < d; ++i) vals[i] = a[i * d + i];

    // sort descending; canonical sign: largest-|entry| component positive
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return vals[i] > vals[j]; });

    std::vector<double> sorted_vecs(d * d);
    std::vector<double> sorted_vals(d);
    for (std::size_t r = 0; r < d; ++r) {
        std::size_t src = order[r];
        sorted_vals[r] = vals[src];
        const double* row = vecs.data() + src * d;
        std::size_t arg = 0;
        for (std::size_t k = 1; k < d; ++k)
            if (std::abs(row[k]) > std::abs(row[arg])) arg = k;
        double sign = row[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < d; ++k) sorted_vecs[r * d + k] = sign * row[k];
    }
    vecs = std::move(sorted_vecs);
    vals = std::move(sorted_vals);
}

WhiteningTransform WhiteningTransform::fit(const std::vector<std::vector<double>>& rows,
                                           double epsilon) {
    if (rows.size() < 2)
        throw std::invalid_argument("WhiteningTransform: need at least 2 rows");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("WhiteningTransform: epsilon must be > 0");
    const std::size_t d = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != d)
            throw std::invalid_argument("WhiteningTransform: inconsistent row width");

    WhiteningTransform t;
    t.epsilon_ = epsilon;
    t.mean_.assign(d, 0.0);
    const auto& k = kernels::ops();
    for (const auto& r : rows) k.axpy(1.0, r.data(), t.mean_.data(), d);
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (double& m : t.mean_) m *= inv_n;

    // sample covariance (n-1 denominator)
    std::vector<double> cov(d * d, 0.0);
    std::vector<double> dev(d);
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < d; ++j) dev[j] = r[j] - t.mean_[j];
        k.ger(cov.data(), dev.data(), dev.data(), d, d);
    }
    const double inv_nm1 = 1.0 / static_cast<double>(rows.size() - 1);
    for (double& x : cov) x *= inv_nm1;

    jacobi_eigen_symmetric(cov, d, t.axes_, t.eigenvalues_);
    // covariance eigenvalues are >= 0 up to rounding
    for (double& v : t.eigenvalues_) v = std::max(v, 0.0);
    return t;
}

std::vector<double> WhiteningTransform::apply(std::span<const double> x) const {
    const std::size_t d = dim();
    if (x.size() != d)
        throw std::invalid_argument("WhiteningTransform: input has wrong dimension");

    std::vector<double> dev(d);
    for (std::size_t j = 0; j < d; ++j) dev[j] = x[j] - mean_[j];

    std::vector<double> out(d);
    kernels::ops().matvec(axes_.data(), dev.data(), out.data(), d, d);
    for (std::size_t j = 0; j < d; ++j)
        out[j] /= std::sqrt(eigenvalues_[j] + epsilon_);
    return out;
}

WhiteningTransform WhiteningTransform::from_parts(std::vector<double> mean,
                                                  std::vector<double> axes,
                                                  std::vector<double> eigenvalues,
                                                  double epsilon) {
    const std::size_t d = mean.size();
    if (axes.size() != d * d || eigenvalues.size() != d)
        throw std::invalid_argument("WhiteningTransform: inconsistent parts");
    WhiteningTransform t;
    t.mean_ = std::move(mean);
    t.axes_ = std::move(axes);
    t.eigenvalues_ = std::move(eigenvalues);
    t.epsilon_ = epsilon;
    return t;
}

void WhiteningTransform::save(std::ostream& out) const {
    const std::size_t d = dim();
    out << "whitening " << d << ' ' << textio::fmt17(epsilon_) << '\n';
    textio::write_row(out, mean_.data(), d);
    textio::write_row(out, eigenvalues_.data(), d);
    for (std::size_t r = 0; r < d; ++r)
        textio::write_row(out, axes_.data() + r * d, d);
}

WhiteningTransform WhiteningTransform::load(std::istream& in) {
    std::string line = textio::read_line(in, "whitening header");
    std::size_t d = 0;
    double eps = 0.0;
    if (std::sscanf(line.c_str(), "whitening %zu %lf", &d, &eps) != 2 || d == 0)
        throw textio::FormatError("bad whitening header: " + line);

    std::vector<double> mean =
        textio::parse_row(textio::read_line(in, "whitening mean"), d, "whitening mean");
    std::vector<double> vals = textio::parse_row(
        textio::read_line(in, "whitening eigenvalues"), d, "whitening eigenvalues");
    std::vector<double> axes(d * d);
    textio::read_matrix(in, axes.data(), d, d, "whitening axes");
    return from_parts(std::move(mean), std::move(axes), std::move(vals), eps);
}

} // namespace dga
