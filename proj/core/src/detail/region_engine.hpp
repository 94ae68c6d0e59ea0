#pragma once

// Internal engine behind boot_squared_norms, the region builders, and the
// smooth-function layer. One template implementation parameterized by an
// evaluator keeps the mean case and the transformed-parameter case on the
// same arithmetic, so the identity model reduces bit-exactly.
//
// Evaluator contract:
//   int out_dim(int p) const;                 parameter dimension d
//   void param(const Vector& zbar, Vector& out) const;      theta(zbar)
//   void omega(const Vector& zbar, const Matrix& psi, Matrix& out) const;
//     d x d standardizing matrix built from a p x p covariance-role matrix

#include <algorithm>
#include <cmath>
#include <vector>

#include "ellipboot/moments.hpp"
#include "ellipboot/numcore.hpp"
#include "ellipboot/resampling.hpp"

namespace ellipboot::detail {

struct MeanEvaluator {
    int out_dim(int p) const { return p; }
    void param(const Vector& zbar, Vector& out) const { out = zbar; }
    void omega(const Vector& zbar, const Matrix& psi, Matrix& out) const {
        (void)zbar;
        out = psi;
    }
};

inline long quantile_rank(long b, double alpha) {
    const auto k = static_cast<long>(std::ceil(static_cast<double>(b) * alpha - 1e-9));
    return std::clamp(k, 1L, b);
}

// Inverse through the symmetric eigendecomposition with the shared relative
// singularity tolerance; `es` must already hold a successful decomposition.
inline bool eigen_is_singular(const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    return !(lmin > kSingularRelTol * lmax) || !(lmax > 0.0);
}

// Divisor-n covariance of the rows indexed by idx, accumulated in index
// order into `psi` (lower triangle rank updates, then mirrored).
inline void resample_cov(const Matrix& x, const std::vector<int>& idx, const Vector& mb,
                         Matrix& psi, Vector& scratch) {
    psi.setZero();
    const auto n = static_cast<int>(idx.size());
    for (int i = 0; i < n; ++i) {
        scratch = x.row(idx[static_cast<size_t>(i)]).transpose() - mb;
        psi.selfadjointView<Eigen::Lower>().rankUpdate(scratch);
    }
    psi = psi.selfadjointView<Eigen::Lower>();
    psi /= static_cast<double>(n);
}

template <class Ev>
BootStats boot_param_norms(const Sample& z, const Ev& ev, int B, ResampleMode mode,
                           const Bandwidth* bandwidth, const SeedSpec& seed) {
    if (B < 100) throw std::invalid_argument("boot_squared_norms: need B >= 100");
    if (mode == ResampleMode::Smoothed && bandwidth == nullptr) {
        throw std::invalid_argument("boot_squared_norms: smoothed mode requires a bandwidth");
    }

    const int n = z.n();
    const int p = z.p();
    const int d = ev.out_dim(p);
    const Matrix& x = z.data();
    const double nd = static_cast<double>(n);

    BootStats out;
    out.b = B;
    out.mode = mode;
    out.values.reserve(static_cast<size_t>(B));
    const long max_rejections = 10L * B;

    Vector theta(d);
    ev.param(z.mean(), theta);

    // Fixed standardizing inverse for the non-studentized modes plus the
    // noise root for smoothed expanding resampling.
    Matrix fixed_inv;
    Matrix root_h;
    Matrix om(d, d);
    bool expanding = false;
    if (mode == ResampleMode::Plain) {
        ev.omega(z.mean(), z.cov().mat(), om);
        fixed_inv = sym_inverse(SymMatrix(om)).mat();
    } else if (mode == ResampleMode::Smoothed) {
        expanding = bandwidth->scale > 0.0;
        if (expanding) {
            ev.omega(z.mean(), z.cov().plus(bandwidth->matrix).mat(), om);
            fixed_inv = sym_inverse(SymMatrix(om)).mat();
            root_h = sym_sqrt(bandwidth->matrix).mat();
        } else {
            ev.omega(z.mean(), z.cov().scaled(1.0 - std::abs(bandwidth->scale)).mat(), om);
            fixed_inv = sym_inverse(SymMatrix(om)).mat();
        }
    }

    std::vector<int> idx(static_cast<size_t>(n));
    Vector msum(p), zbar(p), ybar(p), navg(p), scratch(p);
    Vector thetab(d), dvec(d), tmp(d);
    Matrix psi(p, p), omb(d, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(d);

    for (int b = 0; b < B; ++b) {
        RngStream idx_rng = RngStream::derive(seed, static_cast<std::uint64_t>(b), 0,
                                              StreamPurpose::Indices);
        double stat = 0.0;
        for (;;) {
            for (int i = 0; i < n; ++i) {
                idx[static_cast<size_t>(i)] =
                    static_cast<int>(idx_rng.uniform_index(static_cast<std::uint32_t>(n)));
            }
            msum.setZero();
            for (int i = 0; i < n; ++i) msum += x.row(idx[static_cast<size_t>(i)]).transpose();
            zbar = msum / nd;

            if (mode == ResampleMode::Studentized) {
                resample_cov(x, idx, zbar, psi, scratch);
                ev.omega(zbar, psi, omb);
                es.compute(omb);
                if (es.info() != Eigen::Success) {
                    throw NumericError("boot_squared_norms: resample eigensolver failed");
                }
                if (eigen_is_singular(es)) {
                    if (++out.rejections > max_rejections) {
                        throw NumericError(
                            "boot_squared_norms: studentized rejection cap exceeded");
                    }
                    continue;
                }
                ev.param(zbar, thetab);
                dvec = thetab - theta;
                tmp.noalias() = es.eigenvectors().transpose() * dvec;
                stat = 0.0;
                for (int k = 0; k < d; ++k) stat += tmp(k) * tmp(k) / es.eigenvalues()(k);
                stat *= nd;
                break;
            }

            if (mode == ResampleMode::Smoothed && expanding) {
                RngStream noise_rng = RngStream::derive(seed, static_cast<std::uint64_t>(b), 0,
                                                        StreamPurpose::SmoothNoise);
                navg.setZero();
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < p; ++j) navg(j) += noise_rng.next_normal();
                }
                navg /= nd;
                ybar = zbar;
                ybar.noalias() += root_h * navg;
                ev.param(ybar, thetab);
            } else {
                ev.param(zbar, thetab);
            }
            dvec = thetab - theta;
            tmp.noalias() = fixed_inv * dvec;
            stat = nd * dvec.dot(tmp);
            break;
        }
        if (!std::isfinite(stat)) throw NumericError("boot_squared_norms: non-finite statistic");
        out.values.push_back(stat);
    }

    std::sort(out.values.begin(), out.values.end());
    return out;
}

struct RbpCalibration {
    double gamma = 0.0;      // calibrated level
    double sq_radius = 0.0;  // plain-statistic order statistic at gamma
    long rejections = 0;
};

// Double bootstrap calibration. Outer resample b carries a plain statistic
// (against the full-sample standardizer), its own studentized threshold t_b,
// and an inner resampling level lambda_b = C^-1 #{w_{b,c} <= t_b}; the
// calibrated level is the ceil(B alpha) order statistic of the lambdas and
// the squared radius is the plain-statistic order statistic at that level.
template <class Ev>
RbpCalibration rbp_calibrate(const Sample& z, const Ev& ev, double alpha, int B, int C,
                             const SeedSpec& seed) {
    if (B < 100 || C < 100) throw std::invalid_argument("rbp: need B >= 100 and C >= 100");

    const int n = z.n();
    const int p = z.p();
    const int d = ev.out_dim(p);
    const Matrix& x = z.data();
    const double nd = static_cast<double>(n);
    const long max_rejections = 10L * B;

    Vector theta(d);
    ev.param(z.mean(), theta);
    Matrix om(d, d);
    ev.omega(z.mean(), z.cov().mat(), om);
    const Matrix fixed_inv = sym_inverse(SymMatrix(om)).mat();

    std::vector<double> plain_stats;
    plain_stats.reserve(static_cast<size_t>(B));
    std::vector<double> lambdas;
    lambdas.reserve(static_cast<size_t>(B));

    std::vector<int> idx(static_cast<size_t>(n));
    Matrix zb(n, p);
    Vector msum(p), zbar(p), scratch(p), zbar2(p);
    Vector thetab(d), dvec(d), tmp(d), theta2(d), d2(d);
    Matrix psi(p, p), omb(d, d), ominv(d, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(d);
    RbpCalibration out;

    for (int b = 0; b < B; ++b) {
        RngStream idx_rng = RngStream::derive(seed, static_cast<std::uint64_t>(b), 0,
                                              StreamPurpose::Indices);
        for (;;) {
            for (int i = 0; i < n; ++i) {
                idx[static_cast<size_t>(i)] =
                    static_cast<int>(idx_rng.uniform_index(static_cast<std::uint32_t>(n)));
            }
            msum.setZero();
            for (int i = 0; i < n; ++i) msum += x.row(idx[static_cast<size_t>(i)]).transpose();
            zbar = msum / nd;
            resample_cov(x, idx, zbar, psi, scratch);
            ev.omega(zbar, psi, omb);
            es.compute(omb);
            if (es.info() != Eigen::Success) {
                throw NumericError("rbp: resample eigensolver failed");
            }
            if (eigen_is_singular(es)) {
                if (++out.rejections > max_rejections) {
                    throw NumericError("rbp: outer resample rejection cap exceeded");
                }
                continue;
            }
            break;
        }
        for (int i = 0; i < n; ++i) zb.row(i) = x.row(idx[static_cast<size_t>(i)]);
        ominv.noalias() = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                          es.eigenvectors().transpose();

        ev.param(zbar, thetab);
        dvec = thetab - theta;
        tmp.noalias() = fixed_inv * dvec;
        plain_stats.push_back(nd * dvec.dot(tmp));
        tmp.noalias() = ominv * dvec;
        const double t_b = nd * dvec.dot(tmp);

        long count = 0;
        for (int c = 0; c < C; ++c) {
            RngStream in_rng = RngStream::derive(seed, static_cast<std::uint64_t>(b),
                                                 static_cast<std::uint64_t>(c),
                                                 StreamPurpose::InnerIndices);
            msum.setZero();
            for (int i = 0; i < n; ++i) {
                msum += zb.row(static_cast<int>(in_rng.uniform_index(
                                   static_cast<std::uint32_t>(n))))
                            .transpose();
            }
            zbar2 = msum / nd;
            ev.param(zbar2, theta2);
            d2 = theta2 - thetab;
            tmp.noalias() = ominv * d2;
            const double w = nd * d2.dot(tmp);
            if (w <= t_b) ++count;
        }
        lambdas.push_back(static_cast<double>(count) / static_cast<double>(C));
    }

    std::sort(lambdas.begin(), lambdas.end());
    std::sort(plain_stats.begin(), plain_stats.end());
    out.gamma = lambdas[static_cast<size_t>(quantile_rank(B, alpha) - 1)];
    out.sq_radius = plain_stats[static_cast<size_t>(quantile_rank(B, out.gamma) - 1)];
    return out;
}

}  // namespace ellipboot::detail
