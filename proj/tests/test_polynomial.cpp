#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ufdn/designs.hpp"
#include "ufdn/polynomial.hpp"

using namespace ufdn;

TEST_CASE("principal minors") {
    std::mt19937_64 rng(3);
    const Matrix a = oracle::random_matrix(4, 4, rng);
    CHECK(principal_minor(a, std::vector<int>{}) == 1.0);
    CHECK(principal_minor(a, std::vector<int>{2}) == a(2, 2));
    CHECK(principal_minor(a, std::vector<int>{0, 1, 2, 3}) == doctest::Approx(a.determinant()));
    CHECK_THROWS_AS(principal_minor(a, std::vector<int>{4}), DomainError);
    CHECK_THROWS_AS(principal_minor(a, std::vector<int>{1, 1}), DomainError);
}

TEST_CASE("subsets are ordered by cardinality then lexicographically") {
    const auto s = ordered_subsets(3);
    const std::vector<std::vector<int>> expected{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    CHECK(s == expected);
    CHECK(ordered_subsets(5).size() == 32);
}

TEST_CASE("Jacobi identity for inverse minors") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = oracle::random_matrix(4, 4, rng);
        const Matrix inv = a.inverse();
        const double det = a.determinant();
        for (const auto& subset : ordered_subsets(4)) {
            std::vector<int> complement;
            for (int i = 0; i < 4; ++i) {
                if (std::find(subset.begin(), subset.end(), i) == subset.end()) complement.push_back(i);
            }
            const double lhs = principal_minor(inv, subset);
            const double rhs = oracle::minor_det(a, complement) / det;
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("printed minor lists of the counterexample") {
    const FdnSystem f = counterexample_refined();
    const Matrix inv = f.a().inverse();
    const Matrix schur = f.a() - f.b() * f.c() / f.d()(0, 0);
    const auto mi = principal_minors(inv);
    const auto ms = principal_minors(schur);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(std::abs(mi[k] - fixture::kInvMinors[k]) < 5e-3);
        CHECK(std::abs(ms[k] - fixture::kSchurMinors[k]) < 5e-3);
    }
}

TEST_CASE("gcp matches the Leibniz expansion") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 1 + trial % 5;
        const Matrix a = oracle::random_matrix(n, n, rng);
        const auto m = oracle::random_delays(n, 1, 12 / static_cast<int>(n), rng);
        const GcpPolynomial g = gcp(a, DelayVector(m));
        const auto ref = oracle::leibniz_gcp(a, m);
        REQUIRE(static_cast<Index>(ref.size()) == g.degree() + 1);
        for (Index k = 0; k <= g.degree(); ++k) CHECK(std::abs(g.c(k) - ref[static_cast<std::size_t>(k)]) < 1e-9);
        CHECK(g.coeffs()(0) == 1.0);
    }
}

TEST_CASE("gcp for unit delays is the characteristic polynomial") {
    std::mt19937_64 rng(29);
    const Matrix a = oracle::random_matrix(5, 5, rng);
    const GcpPolynomial g = gcp(a, DelayVector::ones(5));
    const auto eig = Eigen::EigenSolver<Matrix>(a).eigenvalues();
    for (Index k = 0; k < 5; ++k) {
        // det(zI - A) vanishes at every eigenvalue
        CHECK(std::abs(g(eig(k))) < 1e-9);
    }
    // c_{N-1} = -trace(A), c_0 = (-1)^N det A
    CHECK(g.c(4) == doctest::Approx(-a.trace()));
    CHECK(g.c(0) == doctest::Approx(-a.determinant()));
}

TEST_CASE("sampled and expanded gcp agree") {
    std::mt19937_64 rng(31);
    Matrix a = oracle::random_matrix(6, 6, rng);
    a *= 0.8 / Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    const DelayVector m({3, 1, 4, 1, 5, 2});
    const Vector x = gcp_from_minors(a, m).coeffs();
    const Vector y = gcp_from_samples(a, m).coeffs();
    CHECK((x - y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("counterexample denominators and numerators against the printed lists") {
    struct Case {
        std::vector<int> m;
        const std::vector<double>* num;
        const std::vector<double>* den;
    };
    const Case cases[] = {{{1, 1, 1}, &fixture::kNum111, &fixture::kDen111},
                          {{2, 1, 1}, &fixture::kNum211, &fixture::kDen211},
                          {{2, 2, 1}, &fixture::kNum221, &fixture::kDen221}};
    for (const auto& c : cases) {
        const FdnSystem f = counterexample_refined(DelayVector(c.m));
        const Vector den = denominator_poly(f).coeffs();
        const CircleFit num = fit_on_circle(
            [&](Complex w) { return transfer_function(f, 1.0 / w).h(0, 0) * evaluate_ascending(den, w); },
            den.size() - 1);
        REQUIRE(den.size() == static_cast<Index>(c.den->size()));
        for (Index j = 0; j < den.size(); ++j) {
            CHECK(std::abs(den(j) - (*c.den)[static_cast<std::size_t>(j)]) < 5e-3);
            CHECK(std::abs(num.coeffs(j) - (*c.num)[static_cast<std::size_t>(j)]) < 5e-3);
        }
    }
}

TEST_CASE("Schroeder section numerator and denominator") {
    const FdnSystem f = FdnSystem::siso(Matrix::Constant(1, 1, -0.5), Vector::Ones(1), Vector::Constant(1, 0.75),
                                        0.5, DelayVector({3}));
    const NumeratorPolys num = numerator_poly(f);
    const Vector den = denominator_poly(f).coeffs();
    Vector en(4), ed(4);
    en << 0.5, 0, 0, 1;
    ed << 1, 0, 0, 0.5;
    CHECK((num.at(0, 0) - en).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((den - ed).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(num.residual < 1e-12);
}

TEST_CASE("numerator over denominator reproduces the transfer function") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 1 + trial % 4;
        Matrix a = oracle::random_matrix(n, n, rng);
        a *= 0.9 / Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
        const Index p = trial % 2 ? 2 : 1;
        const FdnSystem f(a, oracle::random_matrix(n, p, rng), oracle::random_matrix(p, n, rng),
                          oracle::random_matrix(p, p, rng), DelayVector(oracle::random_delays(n, 1, 4, rng)));
        const NumeratorPolys num = numerator_poly(f);
        const GcpPolynomial den = denominator_poly(f);
        for (int k = 0; k < 5; ++k) {
            const Complex z = oracle::random_unit(rng) * 1.1;
            const CMatrix h = transfer_function(f, z).h;
            for (Index i = 0; i < p; ++i) {
                for (Index j = 0; j < p; ++j) {
                    const Complex r = evaluate_ascending(num.at(i, j), 1.0 / z) / den(z);
                    CHECK(std::abs(r - h(i, j)) < 1e-8 * std::max(1.0, std::abs(h(i, j))));
                }
            }
        }
    }
}

TEST_CASE("poles equal the eigenvalues of the shift-register embedding") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 1 + trial % 4;
        const Matrix a = oracle::random_matrix(n, n, rng) * 0.5;
        const auto m = oracle::random_delays(n, 1, 12 / static_cast<int>(n), rng);
        const FdnSystem f = FdnSystem::siso(a, Vector::Ones(n), Vector::Ones(n), 0.0, DelayVector(m));
        const auto ev = Eigen::EigenSolver<Matrix>(oracle::shift_register_embedding(a, m)).eigenvalues();
        const std::vector<Complex> ref(ev.data(), ev.data() + ev.size());
        CHECK(oracle::multiset_distance(poles(f), ref) < 1e-6);
    }
}

TEST_CASE("Schroeder section poles and degenerate polynomials") {
    const FdnSystem f = FdnSystem::siso(Matrix::Constant(1, 1, -0.5), Vector::Ones(1), Vector::Constant(1, 0.75),
                                        0.5, DelayVector({3}));
    const auto p = poles(f);
    REQUIRE(p.size() == 3);
    for (Complex z : p) CHECK(std::abs(z) == doctest::Approx(std::pow(0.5, 1.0 / 3.0)));
    CHECK(is_stable(p));

    Vector bad(3);
    bad << 0.0, 1.0, 2.0;
    CHECK_THROWS_AS(polynomial_roots(bad), DomainError);
    Vector lin(2);
    lin << 2.0, -1.0;
    CHECK(std::abs(polynomial_roots(lin)[0] - 0.5) < 1e-15);
}
