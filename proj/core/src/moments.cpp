#include "ellipboot/moments.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ellipboot {

namespace {

// Sum after sorting ascending, so the result is independent of the order in
// which the addends were produced (row-permutation invariance) and partial
// cancellation is kept small.
double sorted_sum(std::vector<double>& buf) {
    std::sort(buf.begin(), buf.end());
    double s = 0.0;
    for (double v : buf) s += v;
    return s;
}

}  // namespace

Sample::Sample(Matrix data) : data_(std::move(data)) {
    const Eigen::Index n = data_.rows();
    const Eigen::Index p = data_.cols();
    if (p < 1) throw std::invalid_argument("Sample: dimension must be >= 1");
    if (n < p + 2) throw std::invalid_argument("Sample: need n >= p + 2 observations");
    if (!data_.allFinite()) throw std::invalid_argument("Sample: non-finite entry");

    std::vector<double> buf(static_cast<size_t>(n));
    mean_.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = data_(i, j);
        mean_(j) = sorted_sum(buf) / static_cast<double>(n);
    }
    Matrix c(p, p);
    for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = a; b < p; ++b) {
            for (Eigen::Index i = 0; i < n; ++i) {
                buf[static_cast<size_t>(i)] = (data_(i, a) - mean_(a)) * (data_(i, b) - mean_(b));
            }
            c(a, b) = c(b, a) = sorted_sum(buf) / static_cast<double>(n);
        }
    }
    cov_ = SymMatrix(std::move(c));
}

Vector sample_mean(const Sample& s) { return s.mean(); }

SymMatrix sample_cov(const Sample& s) { return s.cov(); }

CumulantEstimates cumulants(const Sample& s) {
    const int n = s.n();
    const int p = s.p();
    const SymMatrix root = inv_sqrt(s.cov());
    const Matrix z = (s.data().rowwise() - s.mean().transpose()) * root.mat();

    std::vector<double> buf(static_cast<size_t>(n));
    const Vector sq = z.rowwise().squaredNorm();

    CumulantEstimates out;
    out.p = p;

    for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = sq(i) * sq(i);
    out.kurt_mardia_centered =
        sorted_sum(buf) / n - static_cast<double>(p) * (p + 2);

    Vector m(p);
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = sq(i) * z(i, j);
        m(j) = sorted_sum(buf) / n;
    }
    out.skew_isogai = m.squaredNorm();

    // Mardia skewness through the standardized third-moment tensor:
    // n^-2 sum_{i,j} (Z_i'Z_j)^3 == sum_{abc} (n^-1 sum_i Z_ia Z_ib Z_ic)^2,
    // which is O(n p^3) instead of O(n^2 p) and manifestly nonnegative.
    double k31 = 0.0;
    for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
            for (int c = b; c < p; ++c) {
                for (int i = 0; i < n; ++i) {
                    buf[static_cast<size_t>(i)] = z(i, a) * z(i, b) * z(i, c);
                }
                const double mabc = sorted_sum(buf) / n;
                const int mult = (a == b && b == c) ? 1 : (a == b || b == c) ? 3 : 6;
                k31 += mult * mabc * mabc;
            }
        }
    }
    out.skew_mardia = k31;
    return out;
}

}  // namespace ellipboot
