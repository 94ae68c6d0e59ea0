#pragma once

#include <functional>

#include "ellipboot/moments.hpp"
#include "ellipboot/regions.hpp"

namespace ellipboot {

// Parameter theta = A(E g(X)) with delta-method covariance C Psi C', where
// C = grad A. g maps one observation to its d1 moment coordinates; A maps
// the moment mean to the d-dimensional parameter. When grad_A is absent,
// central finite differences with step 1e-6 (1 + |eta_j|) are used; the
// supplied callables must be safe to evaluate concurrently.
struct SmoothModel {
    std::function<Vector(const Vector&)> g;
    std::function<Vector(const Vector&)> A;
    std::function<Matrix(const Vector&)> grad_A;  // optional, d x d1
    int d = 0;
    int d1 = 0;

    // The mean model: g, A identity with analytic identity gradient.
    static SmoothModel identity(int p);
};

// Applies g row by row; throws std::domain_error naming the first row whose
// transform is non-finite.
Sample transform_sample(const Sample& s, const SmoothModel& m);

struct ParamEstimate {
    Vector theta_hat;
    SymMatrix omega_hat;
};

// theta_hat = A(mean of transformed rows); omega_hat = C Psi C' with the
// divisor-n covariance Psi of the transformed rows. Throws
// SingularMatrixError when omega_hat is singular to tolerance.
ParamEstimate estimate(const Sample& s, const SmoothModel& m);

// Region construction for the transformed parameter. BP, BT, and RBP mirror
// the mean-vector constructions applied to the transformed rows (the
// identity model reproduces them bit-exactly under the same seed). SBP and
// AN estimate the correction scale from the bootstrap radius spread
// r2_bt - r2_bp, since closed-form polynomial coefficients are not available
// for general models; smoothing noise is applied to the transformed rows.
// C is consumed by RBP only.
Ellipsoid build_region_sf(const Sample& s, const SmoothModel& m, Method method,
                          double alpha, int B, int C, const SeedSpec& seed);

}  // namespace ellipboot
