#pragma once

#include "ellipboot/moments.hpp"
#include "ellipboot/numcore.hpp"

namespace ellipboot {

// Coefficients of the two cubic correction polynomials in the chi-square
// quantile. The a-row drives the standardized statistic (S'S), the b-row the
// studentized one (U'U).
struct QPolyCoeffs {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    int p = 0;

    static QPolyCoeffs from_cumulants(const CumulantEstimates& c);
};

// q_k(x) = (2/p) [ c1 x + c2 x^2/(p+2) + c3 x^3/((p+2)(p+4)) ] with the a-
// (k=1) or b- (k=2) coefficient row.
double q1(double x, const CumulantEstimates& c);
double q2(double x, const CumulantEstimates& c);

// First-order expansions of P(S'S <= x) and P(U'U <= x):
// chi2_cdf(p,x) - n^-1 chi2_pdf(p,x) q_k(x), clamped to [0,1].
double cdf_ss(double x, const CumulantEstimates& c, int n);
double cdf_uu(double x, const CumulantEstimates& c, int n);

// Squared-radius expansions chi2_quantile(p,alpha) + n^-1 q_k(...). A
// negative correction at tiny n is clamped to 0 and flagged.
struct Radius {
    double value = 0.0;
    bool clamped = false;
};
Radius radius_s(double alpha, const CumulantEstimates& c, int n);
Radius radius_u(double alpha, const CumulantEstimates& c, int n);

// Kernel bandwidth for the smoothed bootstrap:
//   scale = (n chi2_{p,alpha})^-1 (q2 - q1) at the sample cumulants,
//   matrix = |scale| * sample covariance, expanding = (scale > 0).
// A non-expanding bandwidth means the resampling distribution must shrink
// instead (handled by the smoothed-shrinking resampling mode).
struct Bandwidth {
    double scale = 0.0;
    SymMatrix matrix;
    bool expanding = false;
};
Bandwidth bandwidth_matrix(const Sample& s, double alpha);

// Closed-form level adjustment replacing the inner bootstrap:
//   u_tilde = n^-1 (q2 - q1) chi2_pdf(p, chi2_{p,alpha}),
//   alpha_prime = max{alpha, min{1, alpha + u_tilde}}.
struct LevelAdjustment {
    double u_tilde = 0.0;
    double alpha_prime = 0.0;
};
LevelAdjustment analytic_level_adjustment(const Sample& s, double alpha);

}  // namespace ellipboot
