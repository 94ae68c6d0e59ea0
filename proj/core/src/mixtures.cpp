#include "ellipboot/mixtures.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace ellipboot {

namespace {

MixtureComponent biv(double w, double m1, double m2, double v1, double v2, double c12) {
    MixtureComponent c;
    c.weight = w;
    c.mean = Vector(2);
    c.mean << m1, m2;
    Matrix s(2, 2);
    s << v1, c12, c12, v2;
    c.cov = SymMatrix(s);
    return c;
}

MixtureComponent tri(double w, double m1, double m2, double m3, double v1, double v2,
                     double v3, double c12, double c13, double c23) {
    MixtureComponent c;
    c.weight = w;
    c.mean = Vector(3);
    c.mean << m1, m2, m3;
    Matrix s(3, 3);
    s << v1, c12, c13, c12, v2, c23, c13, c23, v3;
    c.cov = SymMatrix(s);
    return c;
}

MixtureSpec make_spec(std::string name, int p, std::vector<MixtureComponent> comps) {
    MixtureSpec m;
    m.name = std::move(name);
    m.p = p;
    m.components = std::move(comps);
    validate(m);
    return m;
}

MixtureSpec catalog_entry(std::string_view name) {
    if (name == "biv-normal-indep") {
        return make_spec("biv-normal-indep", 2, {biv(1.0, 0, 0, 1, 1, 0)});
    }
    if (name == "biv-normal-dep") {
        return make_spec("biv-normal-dep", 2, {biv(1.0, 0, 0, 1, 1, 1.0 / 2)});
    }
    if (name == "biv-skewed") {
        return make_spec("biv-skewed", 2,
                         {biv(1.0 / 5, 0, 0, 1, 1, 0),
                          biv(1.0 / 5, 1.0 / 2, 1.0 / 2, 4.0 / 9, 4.0 / 9, 0),
                          biv(3.0 / 5, 13.0 / 12, 13.0 / 12, 25.0 / 81, 25.0 / 81, 0)});
    }
    if (name == "biv-kurtotic") {
        return make_spec("biv-kurtotic", 2,
                         {biv(2.0 / 3, 0, 0, 1, 4, 1),
                          biv(1.0 / 3, 0, 0, 4.0 / 9, 1.0 / 9, -1.0 / 9)});
    }
    if (name == "biv-bimodal") {
        return make_spec("biv-bimodal", 2,
                         {biv(1.0 / 2, -1, 0, 4.0 / 9, 4.0 / 9, 0),
                          biv(1.0 / 2, 1, 0, 4.0 / 9, 4.0 / 9, 0)});
    }
    if (name == "biv-trimodal") {
        return make_spec("biv-trimodal", 2,
                         {biv(1.0 / 3, -6.0 / 5, 0, 9.0 / 25, 9.0 / 25, 63.0 / 250),
                          biv(1.0 / 3, 6.0 / 5, 0, 9.0 / 25, 9.0 / 25, 63.0 / 250),
                          biv(1.0 / 3, 0, 0, 9.0 / 25, 9.0 / 25, -63.0 / 250)});
    }
    if (name == "tri-normal-indep") {
        return make_spec("tri-normal-indep", 3, {tri(1.0, 0, 0, 0, 1, 1, 1, 0, 0, 0)});
    }
    if (name == "tri-normal-dep") {
        return make_spec("tri-normal-dep", 3,
                         {tri(1.0, 0, 0, 0, 1, 1, 1, 3.0 / 10, 2.0 / 5, 1.0 / 2)});
    }
    if (name == "tri-skewed") {
        // The source rows list two cross terms; the third defaults to 0.
        return make_spec(
            "tri-skewed", 3,
            {tri(1.0 / 5, 0, 0, 0, 1, 1, 1, 0, 0, 0),
             tri(1.0 / 5, 1.0 / 2, 1.0 / 2, 1.0 / 2, 4.0 / 9, 4.0 / 9, 4.0 / 9, 0, 0, 0),
             tri(3.0 / 5, 13.0 / 12, 13.0 / 12, 13.0 / 12, 25.0 / 81, 25.0 / 81, 25.0 / 81,
                 0, 0, 0)});
    }
    if (name == "tri-kurtotic") {
        return make_spec("tri-kurtotic", 3,
                         {tri(2.0 / 3, 0, 0, 0, 1, 4, 6, 1, 1, 2),
                          tri(1.0 / 3, 0, 0, 0, 4.0 / 9, 1.0 / 9, 1.0 / 16, -1.0 / 9, 0, 0)});
    }
    if (name == "tri-bimodal") {
        // Listed weights 1/3 and 1/2 renormalized to 2/5 and 3/5.
        return make_spec("tri-bimodal", 3,
                         {tri(2.0 / 5, -1, -1, -1, 4.0 / 9, 4.0 / 9, 4.0 / 9, 0, 0, 0),
                          tri(3.0 / 5, 1, 0, 0, 4.0 / 9, 4.0 / 9, 4.0 / 9, 0, 0, 0)});
    }
    if (name == "tri-trimodal") {
        return make_spec(
            "tri-trimodal", 3,
            {tri(1.0 / 3, -3, 0, 0, 9.0 / 25, 9.0 / 25, 9.0 / 25, 63.0 / 250, 0, 0),
             tri(1.0 / 3, 3, 0, 0, 9.0 / 25, 9.0 / 25, 9.0 / 25, 63.0 / 250, 63.0 / 250,
                 63.0 / 250),
             tri(1.0 / 3, 0, 0, 0, 9.0 / 25, 9.0 / 25, 9.0 / 25, -63.0 / 250, 0, 0)});
    }
    std::string msg = "unknown distribution '";
    msg += name;
    msg += "'; valid names:";
    for (const std::string& k : builtin_names()) {
        msg += ' ';
        msg += k;
    }
    throw std::invalid_argument(msg);
}

}  // namespace

void validate(const MixtureSpec& m) {
    if (m.p < 1) throw std::invalid_argument("MixtureSpec: p must be positive");
    if (m.components.empty()) {
        throw std::invalid_argument("MixtureSpec: needs at least one component");
    }
    double total = 0.0;
    for (const MixtureComponent& c : m.components) {
        if (!(c.weight > 0.0) || c.weight > 1.0) {
            throw std::invalid_argument("MixtureSpec: weights must lie in (0, 1]");
        }
        if (c.mean.size() != m.p) {
            throw std::invalid_argument("MixtureSpec: component mean must be a p-vector");
        }
        if (c.cov.dim() != m.p) {
            throw std::invalid_argument("MixtureSpec: component cov must be p x p");
        }
        try {
            sym_sqrt(c.cov);
        } catch (const NumericError&) {
            throw std::invalid_argument(
                "MixtureSpec: component cov must be positive definite");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("MixtureSpec: weights must sum to 1");
    }
}

Vector true_mean(const MixtureSpec& m) {
    validate(m);
    Vector out = Vector::Zero(m.p);
    for (const MixtureComponent& c : m.components) out += c.weight * c.mean;
    return out;
}

Sample draw(const MixtureSpec& m, int n, const SeedSpec& seed) {
    validate(m);
    if (n < m.p + 2) {
        throw std::invalid_argument("draw: n must be at least p + 2 to form a Sample");
    }
    const std::size_t k = m.components.size();
    std::vector<Matrix> roots;
    std::vector<double> cum;
    roots.reserve(k);
    cum.reserve(k);
    double total = 0.0;
    for (const MixtureComponent& c : m.components) {
        roots.push_back(sym_sqrt(c.cov).mat());
        total += c.weight;
        cum.push_back(total);
    }

    RngStream rng = RngStream::derive(seed, 0, 0, StreamPurpose::SampleDraw);
    Matrix x(n, m.p);
    Vector z(m.p);
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_double();
        std::size_t c = 0;
        while (c + 1 < k && u >= cum[c]) ++c;
        for (int j = 0; j < m.p; ++j) z(j) = rng.next_normal();
        x.row(i) = (m.components[c].mean + roots[c] * z).transpose();
    }
    return Sample(std::move(x));
}

MixtureSpec builtin(std::string_view name) { return catalog_entry(name); }

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "biv-normal-indep", "biv-normal-dep", "biv-skewed",   "biv-kurtotic",
        "biv-bimodal",      "biv-trimodal",   "tri-normal-indep", "tri-normal-dep",
        "tri-skewed",       "tri-kurtotic",   "tri-bimodal",  "tri-trimodal"};
    return names;
}

}  // namespace ellipboot
