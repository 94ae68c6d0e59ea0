#include "ellipboot/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ellipboot {

namespace {

void check_square(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument("SymMatrix: matrix must be square and non-empty");
    }
}

// Shared guard for the PSD operations: eigendecompose, apply the relative
// singularity tolerance, and rebuild V f(lambda) V'.
template <typename F>
SymMatrix spd_apply(const SymMatrix& m, F&& f, const char* what) {
    SymEigen eg = sym_eigen(m);
    const double lmax = eg.values(0);
    const double lmin = eg.values(eg.values.size() - 1);
    if (!(lmin > kSingularRelTol * lmax) || !(lmax > 0.0)) {
        throw SingularMatrixError(std::string(what) +
                                  ": matrix singular to tolerance (lambda_min=" +
                                  std::to_string(lmin) + ", lambda_max=" + std::to_string(lmax) + ")");
    }
    Vector fv(eg.values.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eg.values(i));
    Matrix r = eg.vectors * fv.asDiagonal() * eg.vectors.transpose();
    return SymMatrix(std::move(r));
}

}  // namespace

SymMatrix::SymMatrix(Matrix m) {
    check_square(m);
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * std::max(scale, 1.0)) {
        throw std::invalid_argument("SymMatrix: input is not symmetric");
    }
    m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int p) { return SymMatrix(Matrix(Matrix::Identity(p, p))); }

SymMatrix SymMatrix::zero(int p) { return SymMatrix(Matrix(Matrix::Zero(p, p))); }

SymMatrix SymMatrix::diagonal(const Vector& d) {
    Matrix m = Matrix::Zero(d.size(), d.size());
    m.diagonal() = d;
    return SymMatrix(std::move(m));
}

SymEigen sym_eigen(const SymMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        throw NumericError("sym_eigen: eigensolver failed to converge");
    }
    SymEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

SymMatrix sym_sqrt(const SymMatrix& m) {
    return spd_apply(m, [](double l) { return std::sqrt(l); }, "sym_sqrt");
}

SymMatrix inv_sqrt(const SymMatrix& m) {
    return spd_apply(m, [](double l) { return 1.0 / std::sqrt(l); }, "inv_sqrt");
}

SymMatrix sym_inverse(const SymMatrix& m) {
    return spd_apply(m, [](double l) { return 1.0 / l; }, "sym_inverse");
}

double sym_logdet(const SymMatrix& m) {
    SymEigen eg = sym_eigen(m);
    const double lmax = eg.values(0);
    const double lmin = eg.values(eg.values.size() - 1);
    if (!(lmin > kSingularRelTol * lmax) || !(lmax > 0.0)) {
        throw SingularMatrixError("sym_logdet: matrix singular to tolerance");
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < eg.values.size(); ++i) s += std::log(eg.values(i));
    return s;
}

namespace {

constexpr int kGammaMaxIter = 500;
constexpr double kGammaEps = 1e-15;

// Regularized lower incomplete gamma P(a, x) via power series, valid for
// x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < kGammaMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("gamma_p_series: no convergence");
}

// Regularized upper incomplete gamma Q(a, x) via modified Lentz continued
// fraction, valid for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kGammaEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kGammaEps) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("gamma_q_contfrac: no convergence");
}

double regularized_gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

void check_df(int p) {
    if (p < 1) throw std::domain_error("chi-square: degrees of freedom must be >= 1");
}

}  // namespace

double chi2_pdf(int p, double x) {
    check_df(p);
    if (x < 0.0) return 0.0;
    const double a = 0.5 * p;
    if (x == 0.0) {
        if (p == 1) return std::numeric_limits<double>::infinity();
        if (p == 2) return 0.5;
        return 0.0;
    }
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

double chi2_cdf(int p, double x) {
    check_df(p);
    if (x <= 0.0) return 0.0;
    return std::min(1.0, regularized_gamma_p(0.5 * p, 0.5 * x));
}

double chi2_quantile(int p, double alpha) {
    check_df(p);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("chi2_quantile: alpha must lie in (0,1)");
    }
    double lo = 0.0;
    double hi = p + 10.0 * std::sqrt(2.0 * p) + 10.0;
    while (chi2_cdf(p, hi) < alpha) {
        hi *= 2.0;
        if (hi > 1e300) throw NumericError("chi2_quantile: bracket growth failed");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = chi2_cdf(p, x) - alpha;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double dfx = chi2_pdf(p, x);
        double next = (dfx > 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(fx) < 1e-14 || hi - lo < 1e-13 * std::max(1.0, x)) {
            return x;
        }
        x = next;
    }
    return x;
}

}  // namespace ellipboot
