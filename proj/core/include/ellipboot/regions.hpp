#pragma once

#include <string_view>

#include "ellipboot/moments.hpp"
#include "ellipboot/numcore.hpp"
#include "ellipboot/resampling.hpp"

namespace ellipboot {

enum class Method { BP, BT, SBP, AN, RBP };

std::string_view method_name(Method m);
// Parses "bp"/"BP" style names; throws std::invalid_argument on unknown input.
Method method_from_name(std::string_view name);

struct RegionDiagnostics {
    // AN only: the adjusted level reached 1, radius is the max statistic.
    bool at_max_level = false;
    // SBP only: shrinkage would have destroyed positive definiteness
    // (|scale| >= 1), so the plain construction was used instead.
    bool bp_fallback = false;
    // Studentized/outer resamples rejected as singular and redrawn.
    long rejections = 0;
};

// Confidence region {theta : n (center - theta)' shape^-1 (center - theta)
// <= sq_radius}.
struct Ellipsoid {
    Vector center;
    SymMatrix shape;
    double sq_radius = 0.0;
    int n = 0;
    Method method = Method::BP;
    double nominal_level = 0.0;
    double effective_level = 0.0;
    RegionDiagnostics diag;
};

// Membership test; throws std::invalid_argument on dimension mismatch.
bool contains(const Ellipsoid& e, const Vector& theta);

// Lebesgue volume: V_p (sq_radius / n)^{p/2} det(shape)^{1/2} with V_p the
// unit-ball volume.
double volume(const Ellipsoid& e);

// The five region constructions. All take the confidence level alpha in
// (0,1), the resample count B >= 100, and a seed; identical inputs give
// bit-identical regions. Shapes: the sample covariance everywhere except
// SBP, whose shape is the smoothed (or shrunk) covariance.
Ellipsoid build_bp(const Sample& s, double alpha, int B, const SeedSpec& seed);
Ellipsoid build_bt(const Sample& s, double alpha, int B, const SeedSpec& seed);
Ellipsoid build_sbp(const Sample& s, double alpha, int B, const SeedSpec& seed);
Ellipsoid build_an(const Sample& s, double alpha, int B, const SeedSpec& seed);
// Double-bootstrap calibrated region; C >= 100 inner resamples per outer
// resample. effective_level reports the calibrated level.
Ellipsoid build_rbp(const Sample& s, double alpha, int B, int C, const SeedSpec& seed);

}  // namespace ellipboot
