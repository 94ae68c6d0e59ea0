#include "ellipboot/smoothfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ellipboot/edgeworth.hpp"
#include "ellipboot/numcore.hpp"
#include "ellipboot/resampling.hpp"
#include "detail/region_engine.hpp"

namespace ellipboot {

namespace {

void check_model(const SmoothModel& m) {
    if (!m.g || !m.A) throw std::invalid_argument("SmoothModel: g and A must be set");
    if (m.d < 1 || m.d1 < 1) throw std::invalid_argument("SmoothModel: d and d1 must be positive");
}

Matrix model_grad(const SmoothModel& m, const Vector& eta) {
    if (m.grad_A) {
        Matrix c = m.grad_A(eta);
        if (c.rows() != m.d || c.cols() != m.d1) {
            throw std::invalid_argument("SmoothModel: grad_A must return a d x d1 matrix");
        }
        return c;
    }
    Matrix c(m.d, m.d1);
    Vector pt = eta;
    for (int j = 0; j < m.d1; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(eta(j)));
        pt(j) = eta(j) + h;
        const Vector fp = m.A(pt);
        pt(j) = eta(j) - h;
        const Vector fm = m.A(pt);
        pt(j) = eta(j);
        if (fp.size() != m.d || fm.size() != m.d) {
            throw std::invalid_argument("SmoothModel: A must return a d-vector");
        }
        if (!fp.allFinite() || !fm.allFinite()) {
            throw NumericError("smooth model: finite-difference gradient hit a non-finite value");
        }
        c.col(j) = (fp - fm) / (2.0 * h);
    }
    return c;
}

// Evaluator plugging a SmoothModel into the shared bootstrap engine.
struct FunctionEvaluator {
    const SmoothModel* model;

    int out_dim(int) const { return model->d; }

    void param(const Vector& zbar, Vector& out) const {
        out = model->A(zbar);
        if (out.size() != model->d) {
            throw std::invalid_argument("SmoothModel: A must return a d-vector");
        }
    }

    void omega(const Vector& zbar, const Matrix& psi, Matrix& out) const {
        const Matrix c = model_grad(*model, zbar);
        Matrix raw = c * psi * c.transpose();
        out = 0.5 * (raw + raw.transpose());
    }
};

}  // namespace

SmoothModel SmoothModel::identity(int p) {
    if (p < 1) throw std::invalid_argument("SmoothModel::identity: p must be positive");
    SmoothModel m;
    m.d = p;
    m.d1 = p;
    m.g = [](const Vector& x) { return x; };
    m.A = [](const Vector& eta) { return eta; };
    m.grad_A = [p](const Vector&) { return Matrix(Matrix::Identity(p, p)); };
    return m;
}

Sample transform_sample(const Sample& s, const SmoothModel& m) {
    check_model(m);
    Matrix z(s.n(), m.d1);
    for (int i = 0; i < s.n(); ++i) {
        const Vector zi = m.g(s.data().row(i).transpose());
        if (zi.size() != m.d1) {
            throw std::invalid_argument("SmoothModel: g must return a d1-vector");
        }
        if (!zi.allFinite()) {
            throw std::domain_error("transform_sample: non-finite transform at row " +
                                    std::to_string(i));
        }
        z.row(i) = zi.transpose();
    }
    return Sample(std::move(z));
}

ParamEstimate estimate(const Sample& s, const SmoothModel& m) {
    const Sample z = transform_sample(s, m);
    const FunctionEvaluator ev{&m};
    ParamEstimate out;
    ev.param(z.mean(), out.theta_hat);
    if (!out.theta_hat.allFinite()) {
        throw NumericError("estimate: parameter estimate is non-finite");
    }
    Matrix om(m.d, m.d);
    ev.omega(z.mean(), z.cov().mat(), om);
    out.omega_hat = SymMatrix(om);
    sym_inverse(out.omega_hat);  // rejects a singular scatter estimate
    return out;
}

Ellipsoid build_region_sf(const Sample& s, const SmoothModel& m, Method method,
                          double alpha, int B, int C, const SeedSpec& seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("build_region_sf: alpha must lie in (0, 1)");
    }
    const Sample z = transform_sample(s, m);
    const FunctionEvaluator ev{&m};

    Ellipsoid e;
    e.n = z.n();
    e.method = method;
    e.nominal_level = alpha;
    e.effective_level = alpha;
    ev.param(z.mean(), e.center);
    if (!e.center.allFinite()) {
        throw NumericError("build_region_sf: parameter estimate is non-finite");
    }
    Matrix om(m.d, m.d);
    ev.omega(z.mean(), z.cov().mat(), om);
    e.shape = SymMatrix(om);

    switch (method) {
        case Method::BP: {
            const BootStats st =
                detail::boot_param_norms(z, ev, B, ResampleMode::Plain, nullptr, seed);
            e.sq_radius = boot_quantile(st, alpha);
            return e;
        }
        case Method::BT: {
            const BootStats st =
                detail::boot_param_norms(z, ev, B, ResampleMode::Studentized, nullptr, seed);
            e.sq_radius = boot_quantile(st, alpha);
            e.diag.rejections = st.rejections;
            return e;
        }
        case Method::RBP: {
            const detail::RbpCalibration cal = detail::rbp_calibrate(z, ev, alpha, B, C, seed);
            e.sq_radius = cal.sq_radius;
            e.effective_level = cal.gamma;
            e.diag.rejections = cal.rejections;
            return e;
        }
        case Method::SBP:
        case Method::AN:
            break;
    }

    // SBP and AN share a data-driven stand-in for the quantile correction:
    // the spread between the studentized and plain bootstrap radii plays the
    // role the polynomial difference plays for the mean vector.
    const BootStats plain =
        detail::boot_param_norms(z, ev, B, ResampleMode::Plain, nullptr, seed);
    const BootStats stud =
        detail::boot_param_norms(z, ev, B, ResampleMode::Studentized, nullptr, seed);
    const double r2_bp = boot_quantile(plain, alpha);
    const double r2_bt = boot_quantile(stud, alpha);
    const double dr = r2_bt - r2_bp;
    if (!std::isfinite(dr)) throw NumericError("build_region_sf: radius spread is non-finite");
    const double xq = chi2_quantile(m.d, alpha);

    if (method == Method::AN) {
        const double u = dr * chi2_pdf(m.d, xq);
        const double alpha_prime = std::max(alpha, std::min(1.0, alpha + u));
        e.effective_level = alpha_prime;
        if (alpha_prime >= 1.0) {
            e.sq_radius = plain.values.back();
            e.diag.at_max_level = true;
        } else {
            e.sq_radius = boot_quantile(plain, alpha_prime);
        }
        return e;
    }

    Bandwidth bw;
    bw.scale = dr / xq;
    bw.expanding = bw.scale > 0.0;
    bw.matrix = z.cov().scaled(std::abs(bw.scale));
    if (!bw.expanding && std::abs(bw.scale) >= 1.0) {
        e.sq_radius = r2_bp;
        e.diag.bp_fallback = true;
        return e;
    }
    const BootStats st =
        detail::boot_param_norms(z, ev, B, ResampleMode::Smoothed, &bw, seed);
    e.sq_radius = boot_quantile(st, alpha);
    const Matrix psi_adj = bw.expanding
                               ? z.cov().plus(bw.matrix).mat()
                               : z.cov().scaled(1.0 - std::abs(bw.scale)).mat();
    Matrix om_adj(m.d, m.d);
    ev.omega(z.mean(), psi_adj, om_adj);
    e.shape = SymMatrix(om_adj);
    return e;
}

}  // namespace ellipboot
