#pragma once

#include "ellipboot/numcore.hpp"

namespace ellipboot {

// Immutable n x p data matrix (rows are observations) with eagerly cached
// mean and divisor-n covariance. Requires n >= p + 2 and finite entries.
class Sample {
public:
    explicit Sample(Matrix data);

    int n() const { return static_cast<int>(data_.rows()); }
    int p() const { return static_cast<int>(data_.cols()); }
    const Matrix& data() const { return data_; }
    const Vector& mean() const { return mean_; }
    const SymMatrix& cov() const { return cov_; }

private:
    Matrix data_;
    Vector mean_;
    SymMatrix cov_;
};

Vector sample_mean(const Sample& s);
SymMatrix sample_cov(const Sample& s);

// Multivariate cumulant summaries of a standardized sample, with
// Z_i = cov^{-1/2} (X_i - mean):
//   skew_mardia         = n^-2 sum_{i,j} (Z_i'Z_j)^3           (>= 0)
//   skew_isogai         = ||n^-1 sum_i (Z_i'Z_i) Z_i||^2       (>= 0)
//   kurt_mardia_centered = n^-1 sum_i (Z_i'Z_i)^2 - p(p+2)
// The kurtosis is centered so that all three vanish in the Gaussian limit.
struct CumulantEstimates {
    double skew_mardia = 0.0;
    double skew_isogai = 0.0;
    double kurt_mardia_centered = 0.0;
    int p = 0;
};

// Throws SingularMatrixError when the sample covariance is singular to
// tolerance. All outputs are invariant under affine maps of the data and
// under row permutation (bit-identical: reductions are order-canonicalized).
CumulantEstimates cumulants(const Sample& s);

}  // namespace ellipboot
