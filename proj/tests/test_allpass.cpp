#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ufdn/allpass.hpp"
#include "ufdn/complete.hpp"
#include "ufdn/designs.hpp"

using namespace ufdn;

TEST_CASE("counterexample is allpass for some delay vectors only") {
    CHECK(is_allpass(counterexample_refined(DelayVector({1, 1, 1}))).verdict);
    CHECK(is_allpass(counterexample_refined(DelayVector({2, 2, 1}))).verdict);
    // [2,1,1] has poles outside the unit circle
    CHECK_THROWS_AS(is_allpass(counterexample_refined(DelayVector({2, 1, 1}))), UnstableError);
    CHECK_THROWS_AS(is_allpass(counterexample(DelayVector({2, 1, 1}))), UnstableError);
}

TEST_CASE("the printed counterexample is allpass only to its printing precision") {
    const AllpassReport r = is_allpass(counterexample(DelayVector({1, 1, 1})));
    CHECK_FALSE(r.verdict);
    CHECK(r.grid_deviation < 0.05);
    const AllpassReport loose = is_allpass(counterexample(DelayVector({1, 1, 1})), {.tol = 0.05});
    CHECK(loose.verdict);
}

TEST_CASE("reversal sign and grid size") {
    const FdnSystem f = random_uniallpass(3, 1, 9, false, DelayVector({2, 3, 5}));
    const AllpassReport r = is_allpass(f);
    CHECK(r.verdict);
    CHECK(r.grid_points == 4 * 10 + 8);
    CHECK(r.reversal_deviation < 1e-10);
    CHECK((r.sign == 1 || r.sign == -1));
    CHECK(r.max_pole_radius < 1.0);
}

TEST_CASE("MIMO allpass check uses the full matrix") {
    const FdnSystem f = random_uniallpass(4, 4, 2, true, DelayVector({1, 2, 3, 4}));
    CHECK(is_allpass(f).verdict);
    // Output scaling by diag(2, 1/2, 1, 1) keeps |det H| = 1 but breaks H H^* = I.
    Matrix c = f.c();
    Matrix d = f.d();
    c.row(0) *= 2.0;
    c.row(1) *= 0.5;
    d.row(0) *= 2.0;
    d.row(1) *= 0.5;
    const FdnSystem g(f.a(), f.b(), c, d, f.delays());
    CHECK_FALSE(is_allpass(g).verdict);
}

TEST_CASE("perturbed allpass systems fail") {
    const FdnSystem f = random_uniallpass(3, 1, 21, false);
    Matrix b = f.b();
    b(0, 0) += 1e-3;
    CHECK_FALSE(is_allpass(FdnSystem(f.a(), b, f.c(), f.d(), f.delays())).verdict);
}

TEST_CASE("stability certificate") {
    CHECK(stability_certificate(0.5 * Matrix::Identity(3, 3), Vector::Ones(3)));
    Matrix big = Matrix::Identity(2, 2) * 1.2;
    big(0, 1) = 3.0;
    CHECK_FALSE(stability_certificate(big, Vector::Ones(2)));
    Vector t(2);
    t << 1.0, 1e-3;
    CHECK_FALSE(stability_certificate(big, t));
    CHECK_THROWS_AS(stability_certificate(big, Vector::Zero(2)), DomainError);

    // Diagonal scaling can certify a matrix whose plain norm exceeds one.
    Matrix tri(2, 2);
    tri << 0.5, 10.0, 0.0, 0.5;
    CHECK_FALSE(stability_certificate(tri, Vector::Ones(2)));
    Vector s(2);
    s << 1.0, 0.01;
    CHECK(stability_certificate(tri, s));
}
