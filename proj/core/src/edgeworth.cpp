#include "ellipboot/edgeworth.hpp"

#include <algorithm>
#include <cmath>

namespace ellipboot {

namespace {

double q_poly(double x, double c1, double c2, double c3, int p) {
    const double pd = static_cast<double>(p);
    const double t = x * (c1 + x * (c2 / (pd + 2.0) + x * c3 / ((pd + 2.0) * (pd + 4.0))));
    return 2.0 / pd * t;
}

double cdf_expansion(double x, double q, int p, int n) {
    const double raw = chi2_cdf(p, x) - chi2_pdf(p, x) * q / static_cast<double>(n);
    return std::clamp(raw, 0.0, 1.0);
}

Radius radius_expansion(double q_at_quantile, double quantile, int n) {
    Radius r;
    r.value = quantile + q_at_quantile / static_cast<double>(n);
    if (r.value < 0.0) {
        r.value = 0.0;
        r.clamped = true;
    }
    return r;
}

}  // namespace

QPolyCoeffs QPolyCoeffs::from_cumulants(const CumulantEstimates& c) {
    const double k31 = c.skew_mardia;
    const double k32 = c.skew_isogai;
    const double k41 = c.kurt_mardia_centered;
    const double lead = static_cast<double>(c.p) * (c.p + 2) / 4.0;
    QPolyCoeffs q;
    q.p = c.p;
    q.a1 = k32 / 8.0 + k31 / 12.0 - k41 / 8.0;
    q.a2 = k41 / 8.0 - k32 / 4.0 - k31 / 6.0;
    q.a3 = k32 / 8.0 + k31 / 12.0;
    q.b1 = lead + k41 / 2.0 - k31 / 6.0;
    q.b2 = lead + k31 / 3.0 - k41 / 4.0;
    q.b3 = k31 / 3.0 + k32 / 2.0;
    return q;
}

double q1(double x, const CumulantEstimates& c) {
    const QPolyCoeffs q = QPolyCoeffs::from_cumulants(c);
    return q_poly(x, q.a1, q.a2, q.a3, q.p);
}

double q2(double x, const CumulantEstimates& c) {
    const QPolyCoeffs q = QPolyCoeffs::from_cumulants(c);
    return q_poly(x, q.b1, q.b2, q.b3, q.p);
}

double cdf_ss(double x, const CumulantEstimates& c, int n) {
    return cdf_expansion(x, q1(x, c), c.p, n);
}

double cdf_uu(double x, const CumulantEstimates& c, int n) {
    return cdf_expansion(x, q2(x, c), c.p, n);
}

Radius radius_s(double alpha, const CumulantEstimates& c, int n) {
    const double x = chi2_quantile(c.p, alpha);
    return radius_expansion(q1(x, c), x, n);
}

Radius radius_u(double alpha, const CumulantEstimates& c, int n) {
    const double x = chi2_quantile(c.p, alpha);
    return radius_expansion(q2(x, c), x, n);
}

Bandwidth bandwidth_matrix(const Sample& s, double alpha) {
    const CumulantEstimates c = cumulants(s);
    const double x = chi2_quantile(s.p(), alpha);
    const double dq = q2(x, c) - q1(x, c);
    Bandwidth b;
    b.scale = dq / (static_cast<double>(s.n()) * x);
    b.matrix = s.cov().scaled(std::abs(b.scale));
    b.expanding = b.scale > 0.0;
    return b;
}

LevelAdjustment analytic_level_adjustment(const Sample& s, double alpha) {
    const CumulantEstimates c = cumulants(s);
    const double x = chi2_quantile(s.p(), alpha);
    const double dq = q2(x, c) - q1(x, c);
    LevelAdjustment adj;
    adj.u_tilde = dq * chi2_pdf(s.p(), x) / static_cast<double>(s.n());
    adj.alpha_prime = std::max(alpha, std::min(1.0, alpha + adj.u_tilde));
    return adj;
}

}  // namespace ellipboot
