#include "ellipboot/regions.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "ellipboot/edgeworth.hpp"
#include "detail/region_engine.hpp"

namespace ellipboot {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("build region: alpha must lie in (0,1)");
    }
}

Ellipsoid base_region(const Sample& s, Method m, double alpha) {
    Ellipsoid e;
    e.center = s.mean();
    e.shape = s.cov();
    e.n = s.n();
    e.method = m;
    e.nominal_level = alpha;
    e.effective_level = alpha;
    return e;
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::BP: return "BP";
        case Method::BT: return "BT";
        case Method::SBP: return "SBP";
        case Method::AN: return "AN";
        case Method::RBP: return "RBP";
    }
    throw std::invalid_argument("method_name: unknown method");
}

Method method_from_name(std::string_view name) {
    std::string up;
    up.reserve(name.size());
    for (char ch : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (up == "BP") return Method::BP;
    if (up == "BT") return Method::BT;
    if (up == "SBP") return Method::SBP;
    if (up == "AN") return Method::AN;
    if (up == "RBP") return Method::RBP;
    throw std::invalid_argument("unknown method name: " + std::string(name) +
                                " (expected one of bp, bt, sbp, an, rbp)");
}

bool contains(const Ellipsoid& e, const Vector& theta) {
    if (theta.size() != e.center.size()) {
        throw std::invalid_argument("contains: dimension mismatch");
    }
    const Vector d = e.center - theta;
    const Matrix inv = sym_inverse(e.shape).mat();
    const double stat = static_cast<double>(e.n) * d.dot(inv * d);
    return stat <= e.sq_radius;
}

double volume(const Ellipsoid& e) {
    const int p = static_cast<int>(e.center.size());
    const double half_p = 0.5 * p;
    const double unit_ball = std::exp(half_p * std::log(M_PI) - std::lgamma(half_p + 1.0));
    const double scale = std::pow(e.sq_radius / static_cast<double>(e.n), half_p);
    return unit_ball * scale * std::exp(0.5 * sym_logdet(e.shape));
}

Ellipsoid build_bp(const Sample& s, double alpha, int B, const SeedSpec& seed) {
    check_alpha(alpha);
    const BootStats stats = boot_squared_norms(s, B, ResampleMode::Plain, nullptr, seed);
    Ellipsoid e = base_region(s, Method::BP, alpha);
    e.sq_radius = boot_quantile(stats, alpha);
    return e;
}

Ellipsoid build_bt(const Sample& s, double alpha, int B, const SeedSpec& seed) {
    check_alpha(alpha);
    const BootStats stats = boot_squared_norms(s, B, ResampleMode::Studentized, nullptr, seed);
    Ellipsoid e = base_region(s, Method::BT, alpha);
    e.sq_radius = boot_quantile(stats, alpha);
    e.diag.rejections = stats.rejections;
    return e;
}

Ellipsoid build_sbp(const Sample& s, double alpha, int B, const SeedSpec& seed) {
    check_alpha(alpha);
    const Bandwidth bw = bandwidth_matrix(s, alpha);
    Ellipsoid e = base_region(s, Method::SBP, alpha);
    if (!bw.expanding && std::abs(bw.scale) >= 1.0) {
        const BootStats stats = boot_squared_norms(s, B, ResampleMode::Plain, nullptr, seed);
        e.sq_radius = boot_quantile(stats, alpha);
        e.diag.bp_fallback = true;
        return e;
    }
    const BootStats stats = boot_squared_norms(s, B, ResampleMode::Smoothed, &bw, seed);
    e.shape = bw.expanding ? s.cov().plus(bw.matrix)
                           : s.cov().scaled(1.0 - std::abs(bw.scale));
    e.sq_radius = boot_quantile(stats, alpha);
    return e;
}

Ellipsoid build_an(const Sample& s, double alpha, int B, const SeedSpec& seed) {
    check_alpha(alpha);
    const LevelAdjustment adj = analytic_level_adjustment(s, alpha);
    const BootStats stats = boot_squared_norms(s, B, ResampleMode::Plain, nullptr, seed);
    Ellipsoid e = base_region(s, Method::AN, alpha);
    e.effective_level = adj.alpha_prime;
    if (adj.alpha_prime >= 1.0) {
        e.sq_radius = stats.values.back();
        e.diag.at_max_level = true;
    } else {
        e.sq_radius = boot_quantile(stats, adj.alpha_prime);
    }
    return e;
}

Ellipsoid build_rbp(const Sample& s, double alpha, int B, int C, const SeedSpec& seed) {
    check_alpha(alpha);
    const detail::RbpCalibration cal =
        detail::rbp_calibrate(s, detail::MeanEvaluator{}, alpha, B, C, seed);
    Ellipsoid e = base_region(s, Method::RBP, alpha);
    e.sq_radius = cal.sq_radius;
    e.effective_level = cal.gamma;
    e.diag.rejections = cal.rejections;
    return e;
}

}  // namespace ellipboot
