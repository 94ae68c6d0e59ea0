#include <cmath>
#include <random>

#include "doctest.h"
#include "ellipboot/numcore.hpp"

using namespace ellipboot;

namespace {

Matrix random_spd(int p, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Matrix a(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) = nd(gen);
    Matrix m = a * a.transpose() + 0.5 * Matrix::Identity(p, p);
    return m;
}

}  // namespace

TEST_CASE("chi-square quantiles match reference values") {
    // Reference values computed with an independent implementation of the
    // inverse regularized gamma function.
    CHECK(chi2_quantile(2, 0.9) == doctest::Approx(4.605170185988092).epsilon(1e-12));
    CHECK(chi2_quantile(3, 0.9) == doctest::Approx(6.251388631170325).epsilon(1e-12));
    CHECK(chi2_quantile(1, 0.9) == doctest::Approx(2.705543454095404).epsilon(1e-12));
    CHECK(chi2_quantile(5, 0.9) == doctest::Approx(9.236356899781123).epsilon(1e-12));
    CHECK(chi2_quantile(2, 0.95) == doctest::Approx(5.991464547107979).epsilon(1e-12));
    CHECK(chi2_quantile(2, 0.99) == doctest::Approx(9.21034037197618).epsilon(1e-12));
    CHECK(chi2_quantile(3, 0.5) == doctest::Approx(2.3659738843753377).epsilon(1e-12));
}

TEST_CASE("chi-square cdf matches reference values") {
    CHECK(chi2_cdf(3, 2.5) == doctest::Approx(0.5247089166569795).epsilon(1e-12));
    CHECK(chi2_cdf(7, 12.017) == doctest::Approx(0.8999988015734658).epsilon(1e-12));
    CHECK(chi2_cdf(2, 0.0) == 0.0);
    CHECK(chi2_cdf(4, -3.0) == 0.0);
    CHECK(chi2_cdf(2, 1e6) == doctest::Approx(1.0));
}

TEST_CASE("chi-square pdf matches closed forms") {
    // p = 2 is exponential(1/2): f(x) = exp(-x/2)/2.
    const double q = chi2_quantile(2, 0.9);
    CHECK(chi2_pdf(2, q) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(chi2_pdf(2, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi2_pdf(3, chi2_quantile(3, 0.9)) ==
          doctest::Approx(0.04379520078326953).epsilon(1e-12));
    CHECK(chi2_pdf(3, 0.0) == 0.0);
    CHECK(chi2_pdf(5, -1.0) == 0.0);
}

TEST_CASE("chi-square cdf and quantile round-trip") {
    for (int p : {1, 2, 3, 5, 7, 10}) {
        for (double alpha : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) {
            const double x = chi2_quantile(p, alpha);
            CHECK(chi2_cdf(p, x) == doctest::Approx(alpha).epsilon(1e-10));
        }
    }
}

TEST_CASE("chi-square quantile rejects levels outside (0,1)") {
    CHECK_THROWS_AS(chi2_quantile(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(chi2_quantile(2, 1.0), std::domain_error);
    CHECK_THROWS_AS(chi2_quantile(2, -0.5), std::domain_error);
    CHECK_THROWS_AS(chi2_quantile(0, 0.5), std::domain_error);
}

TEST_CASE("SymMatrix storage is exactly symmetric") {
    Matrix m(2, 2);
    m << 1.0, 0.3 + 1e-13, 0.3, 2.0;
    SymMatrix s(m);
    CHECK(s(0, 1) == s(1, 0));
    CHECK(s.dim() == 2);

    Matrix bad(2, 2);
    bad << 1.0, 0.5, -0.5, 2.0;
    CHECK_THROWS_AS(SymMatrix{bad}, std::invalid_argument);

    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(SymMatrix{rect}, std::invalid_argument);
}

TEST_CASE("SymMatrix factories and arithmetic") {
    SymMatrix id = SymMatrix::identity(3);
    CHECK(id(0, 0) == 1.0);
    CHECK(id(0, 1) == 0.0);

    Vector d(2);
    d << 2.0, 5.0;
    SymMatrix dg = SymMatrix::diagonal(d);
    CHECK(dg(1, 1) == 5.0);

    SymMatrix sc = dg.scaled(3.0);
    CHECK(sc(0, 0) == 6.0);

    SymMatrix su = dg.plus(SymMatrix::identity(2));
    CHECK(su(0, 0) == 3.0);
    CHECK(su(1, 1) == 6.0);

    CHECK(SymMatrix::zero(2)(0, 0) == 0.0);
}

TEST_CASE("sym_eigen sorts descending and reconstructs") {
    SymMatrix m(random_spd(5, 7));
    SymEigen es = sym_eigen(m);
    for (int i = 0; i + 1 < 5; ++i) CHECK(es.values(i) >= es.values(i + 1));
    Matrix rec = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
    CHECK((rec - m.mat()).cwiseAbs().maxCoeff() < 1e-10);
    Matrix vtv = es.vectors.transpose() * es.vectors;
    CHECK((vtv - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix functions satisfy their defining identities") {
    SymMatrix m(random_spd(4, 11));
    SymMatrix r = sym_sqrt(m);
    CHECK((r.mat() * r.mat() - m.mat()).cwiseAbs().maxCoeff() < 1e-10);

    SymMatrix ir = inv_sqrt(m);
    Matrix w = ir.mat() * m.mat() * ir.mat();
    CHECK((w - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

    SymMatrix inv = sym_inverse(m);
    CHECK((inv.mat() * m.mat() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

    Matrix d(2, 2);
    d << 2.0, 0.0, 0.0, 3.0;
    CHECK(sym_logdet(SymMatrix(d)) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("known 2x2 square root") {
    Matrix m(2, 2);
    m << 5.0, 4.0, 4.0, 5.0;  // eigenvalues 9 and 1, sqrt has eigenvalues 3 and 1
    SymMatrix r = sym_sqrt(SymMatrix(m));
    CHECK(r(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singular matrices are rejected with the dedicated error") {
    Matrix m(2, 2);
    m << 1.0, 1.0, 1.0, 1.0;
    SymMatrix s(m);
    CHECK_THROWS_AS(sym_sqrt(s), SingularMatrixError);
    CHECK_THROWS_AS(inv_sqrt(s), SingularMatrixError);
    CHECK_THROWS_AS(sym_inverse(s), SingularMatrixError);
    CHECK_THROWS_AS(sym_logdet(s), SingularMatrixError);

    // SingularMatrixError is a NumericError, which is a runtime_error.
    CHECK_THROWS_AS(sym_inverse(s), NumericError);
    CHECK_THROWS_AS(sym_inverse(s), std::runtime_error);
}

TEST_CASE("singularity tolerance is relative to the largest eigenvalue") {
    Vector d(2);
    d << 1.0, 1e-11;  // below 1e-10 * lambda_max
    CHECK_THROWS_AS(sym_inverse(SymMatrix::diagonal(d)), SingularMatrixError);

    d << 1.0, 1e-9;  // above the tolerance: fine
    SymMatrix inv = sym_inverse(SymMatrix::diagonal(d));
    CHECK(inv(1, 1) == doctest::Approx(1e9).epsilon(1e-10));

    // Same matrix scaled up must behave identically (relative rule).
    d << 1e8, 1e-3;
    CHECK_THROWS_AS(sym_inverse(SymMatrix::diagonal(d)), SingularMatrixError);
}

TEST_CASE("negative eigenvalues are rejected") {
    Vector d(2);
    d << 2.0, -1.0;
    CHECK_THROWS_AS(sym_sqrt(SymMatrix::diagonal(d)), SingularMatrixError);
    CHECK_THROWS_AS(sym_logdet(SymMatrix::diagonal(d)), SingularMatrixError);
}
