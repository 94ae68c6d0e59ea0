#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ellipboot/moments.hpp"
#include "ellipboot/numcore.hpp"
#include "ellipboot/resampling.hpp"

namespace ellipboot {

struct MixtureComponent {
    double weight = 0.0;
    Vector mean;
    SymMatrix cov;
};

// Finite Gaussian mixture in dimension p.
struct MixtureSpec {
    std::vector<MixtureComponent> components;
    int p = 0;
    std::string name;
};

// Throws std::invalid_argument unless every weight lies in (0, 1] and the
// weights sum to 1 within 1e-12, every mean is a p-vector, and every cov is
// p x p and positive definite to tolerance.
void validate(const MixtureSpec& m);

// Sum of weight_k * mean_k.
Vector true_mean(const MixtureSpec& m);

// n rows, each drawn by picking a component by weight and returning
// mean + cov^{1/2} z with z standard normal. Deterministic under seed.
// Requires n >= p + 2 so the rows form a valid Sample.
Sample draw(const MixtureSpec& m, int n, const SeedSpec& seed);

// Catalog of the simulation test-bed distributions, named
// {biv,tri}-{normal-indep, normal-dep, skewed, kurtotic, bimodal, trimodal}.
// "normal-indep" zeroes the off-diagonal covariances of the dependent
// normal. Unknown names raise std::invalid_argument listing the catalog.
MixtureSpec builtin(std::string_view name);
const std::vector<std::string>& builtin_names();

}  // namespace ellipboot
