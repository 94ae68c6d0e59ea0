#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ellipboot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Numeric failure that is not recoverable by the caller (iteration caps,
// non-finite intermediates).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A matrix required to be positive definite was singular to tolerance.
// Signals degenerate samples or resamples; callers may catch and redraw.
class SingularMatrixError : public NumericError {
public:
    using NumericError::NumericError;
};

// Relative eigenvalue tolerance below which a symmetric matrix is treated
// as singular: lambda_min <= tol * lambda_max.
inline constexpr double kSingularRelTol = 1e-10;

// Dense symmetric matrix. Construction symmetrizes the input so that
// (i,j) == (j,i) holds exactly in storage; grossly asymmetric input is
// rejected.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(Matrix m);

    static SymMatrix identity(int p);
    static SymMatrix zero(int p);
    // Builds diag(d).
    static SymMatrix diagonal(const Vector& d);

    int dim() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& mat() const { return m_; }

    SymMatrix scaled(double c) const { return SymMatrix(Matrix(c * m_)); }
    SymMatrix plus(const SymMatrix& o) const { return SymMatrix(Matrix(m_ + o.m_)); }

private:
    Matrix m_;
};

struct SymEigen {
    Vector values;   // sorted descending
    Matrix vectors;  // orthonormal columns, aligned with values
};

// Eigendecomposition m = V diag(values) V'. Throws NumericError on solver
// failure.
SymEigen sym_eigen(const SymMatrix& m);

// Symmetric positive-definite functional calculus. All three use the
// symmetric eigendecomposition so results are themselves symmetric, and all
// throw SingularMatrixError when lambda_min <= kSingularRelTol * lambda_max.
SymMatrix sym_sqrt(const SymMatrix& m);
SymMatrix inv_sqrt(const SymMatrix& m);
SymMatrix sym_inverse(const SymMatrix& m);

// log-determinant of a positive-definite symmetric matrix (same tolerance
// rule as above).
double sym_logdet(const SymMatrix& m);

// Chi-square distribution with integer degrees of freedom p >= 1.
// chi2_cdf(p, quantile) round-trips to 1e-10; alpha outside (0,1) throws
// std::domain_error.
double chi2_pdf(int p, double x);
double chi2_cdf(int p, double x);
double chi2_quantile(int p, double alpha);

}  // namespace ellipboot
