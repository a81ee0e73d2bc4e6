#pragma once

// PCA whitening: x -> diag(1/sqrt(lambda+eps)) * A^T * (x - mean), with
// axes/eigenvalues from the sample covariance.  All components are
// retained; eps regularizes near-constant columns.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace dga {

class WhiteningTransform {
public:
    static constexpr double kDefaultEpsilon = 1e-6;

    // rows must share one dimension and there must be at least 2 of them
    static WhiteningTransform fit(const std::vector<std::vector<double>>& rows,
                                  double epsilon = kDefaultEpsilon);

    std::vector<double> apply(std::span<const double> x) const;

    std::size_t dim() const { return mean_.size(); }
    double epsilon() const { return epsilon_; }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    // row k holds the k-th principal axis (unit length)
    const std::vector<double>& axes() const { return axes_; }

    void save(std::ostream& out) const;
    static WhiteningTransform load(std::istream& in);

    static WhiteningTransform from_parts(std::vector<double> mean,
                                         std::vector<double> axes,
                                         std::vector<double> eigenvalues,
                                         double epsilon);

private:
    std::vector<double> mean_;        // d
    std::vector<double> axes_;        // d x d row-major, row = eigenvector
    std::vector<double> eigenvalues_; // d, descending
    double epsilon_ = kDefaultEpsilon;
};

// Symmetric eigendecomposition by cyclic Jacobi rotations.  a is d x d
// row-major and is destroyed; eigenvectors come back as rows of vecs.
void jacobi_eigen_symmetric(std::vector<double>& a, std::size_t d,
                            std::vector<double>& vecs, std::vector<double>& vals);

} // namespace dga
