#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ufdn/allpass.hpp"
#include "ufdn/complete.hpp"
#include "ufdn/designs.hpp"
#include "ufdn/homogeneous.hpp"

using namespace ufdn;

TEST_CASE("corners of orthogonal matrices have N-P unit singular values") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Index n = 2 + static_cast<Index>(seed % 4);
        const Index p = 1 + static_cast<Index>(seed % 2);
        const Matrix q = random_orthogonal(n + p, seed);
        CHECK((q * q.transpose() - Matrix::Identity(n + p, n + p)).cwiseAbs().maxCoeff() < 1e-13);
        const AdmissibilityReport r = admissibility(q.topLeftCorner(n, n), p);
        CHECK(r.ones == n - p);
        CHECK(r.below_one == p);
        CHECK(r.above_one == 0);
        CHECK(r.admissible);
        REQUIRE(r.admissible_for_p);
        CHECK(*r.admissible_for_p == p);
    }
}

TEST_CASE("admissibility rejects the wrong P and expanding matrices") {
    const Matrix q = random_orthogonal(5, 3);
    const Matrix a = q.topLeftCorner(4, 4);
    CHECK_FALSE(admissibility(a, 2).admissible);
    CHECK_FALSE(admissibility(2.0 * Matrix::Identity(2, 2), 1).admissible);
    CHECK_THROWS_AS(admissibility(a, 0), DomainError);
    CHECK_THROWS_AS(admissibility(a, 5), DomainError);
}

TEST_CASE("orthogonal completion") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Index n = 3 + static_cast<Index>(seed % 3);
        const Index p = seed % 2 ? n : 1;
        const Matrix a = random_orthogonal(n + p, seed + 100).topLeftCorner(n, n);
        const FdnSystem f = orthogonal_completion(a, p, DelayVector::ones(n));
        const Matrix s = f.system_matrix();
        CHECK((s * s.transpose() - Matrix::Identity(n + p, n + p)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(f.a() == a);
        CHECK(check_theorem3(f, DiagonalSimilarity::ones(n)).verdict);
    }
    CHECK_THROWS_AS(orthogonal_completion(0.5 * Matrix::Identity(3, 3), 1, DelayVector::ones(3)), InadmissibleError);
}

TEST_CASE("rank-one root selection on a constructed field") {
    // X = u v^T with quadratics (x - X_ij)(x - r_ij) = 0 for decoy roots r_ij.
    std::mt19937_64 rng(8);
    const Vector u = oracle::random_matrix(4, 1, rng).col(0);
    const Vector v = oracle::random_matrix(4, 1, rng).col(0);
    const Matrix x = u * v.transpose();
    const Matrix decoy = oracle::random_matrix(4, 4, rng);
    QuadraticField f;
    f.a = Matrix::Ones(4, 4);
    f.b = -(x + decoy);
    f.c = x.cwiseProduct(decoy);
    f.diagonal = x.diagonal();
    const Matrix got = select_rank1_roots(f);
    CHECK((got - x).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("rank-one root selection handles linear entries") {
    Matrix x(2, 2);
    x << 2.0, 3.0, 4.0, 6.0;
    QuadraticField f;
    f.a = Matrix::Zero(2, 2);
    f.b = Matrix::Ones(2, 2);
    f.c = -x;
    f.diagonal = x.diagonal();
    CHECK((select_rank1_roots(f) - x).cwiseAbs().maxCoeff() < 1e-12);

    QuadraticField none = f;
    none.diagonal = Vector::Zero(2);
    CHECK_THROWS_AS(select_rank1_roots(none), StructureError);
}

TEST_CASE("SISO completion of a scaled random uniallpass matrix") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const FdnSystem ref = random_uniallpass(4, 1, seed, true);
        const SisoCompletion c = siso_completion(ref.a(), DelayVector({3, 1, 4, 2}));
        CHECK(c.trace.certificate_residual < 1e-8);
        CHECK(c.trace.dsim.d(0) == doctest::Approx(1.0));
        // The completion is unique up to the sign of H.
        std::mt19937_64 rng(seed);
        const FdnSystem again = ref.with_delays(DelayVector({3, 1, 4, 2}));
        for (int k = 0; k < 4; ++k) {
            const Complex z = oracle::random_unit(rng);
            const Complex h1 = transfer_function(c.system, z).h(0, 0);
            const Complex h0 = transfer_function(again, z).h(0, 0);
            CHECK(std::min(std::abs(h1 - h0), std::abs(h1 + h0)) < 1e-8);
        }
        CHECK(is_allpass(c.system).verdict);
    }
}

TEST_CASE("SISO completion of the Schroeder feedback matrix") {
    const Design s = schroeder_series(GainVector(fixture::kDesignGains), DelayVector({5, 3, 7, 2, 4, 6}));
    const SisoCompletion c = siso_completion(s.system.a(), s.system.delays());
    CHECK(c.trace.certificate_residual < 1e-8);
    CHECK(is_allpass(c.system).verdict);
}

TEST_CASE("SISO completion refuses matrices with two contracting directions") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix q1 = random_orthogonal(4, 10 + trial);
        const Matrix q2 = random_orthogonal(4, 20 + trial);
        Vector s(4);
        s << 1.0, 1.0, 0.8, 0.6;
        const Matrix a = q1 * s.asDiagonal() * q2;
        CHECK_THROWS_AS(siso_completion(a, DelayVector::ones(4)), InadmissibleError);
    }
}

TEST_CASE("random uniallpass systems") {
    const FdnSystem f = random_uniallpass(3, 2, 77, true);
    REQUIRE(f.dsim());
    CHECK(check_theorem3(f, *f.dsim()).verdict);
    const FdnSystem g = random_uniallpass(3, 2, 77, true);
    CHECK(f.a() == g.a());
    CHECK(f.b() == g.b());
    CHECK_THROWS_AS(random_uniallpass(0, 1, 1, false), DomainError);
}
