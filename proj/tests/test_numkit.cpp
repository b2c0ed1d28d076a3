#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lassodf/numkit.hpp"
#include "lassodf/rng.hpp"

using namespace lassodf;
using testutil::random_matrix;
using testutil::random_spd;
using testutil::random_symmetric;

TEST_CASE("cholesky_solve identity and diagonal") {
    Vector rhs(3);
    rhs << 1, 2, 3;
    const Vector x = numkit::cholesky_solve(Matrix::Identity(3, 3), rhs);
    CHECK(x.isApprox(rhs, 1e-14));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 4;
    Vector r2(2);
    r2 << 2, 4;
    const Vector x2 = numkit::cholesky_solve(d, r2);
    CHECK(x2[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x2[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cholesky_solve residual bound on random SPD systems") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_uniform() * 7);
        const Matrix g = random_spd(rng, n);
        const Vector rhs = random_matrix(rng, n, 1).col(0);
        const Vector x = numkit::cholesky_solve(g, rhs);
        const double res = (g * x - rhs).cwiseAbs().maxCoeff();
        CHECK(res <= 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("cholesky_solve rejects non-positive matrices") {
    Matrix bad = Matrix::Identity(2, 2);
    bad(1, 1) = -1.0;
    Vector rhs = Vector::Ones(2);
    CHECK_THROWS_AS(numkit::cholesky_solve(bad, rhs), NotPositiveDefinite);
    Matrix asym(2, 2);
    asym << 1, 0.5, -0.5, 1;
    CHECK_THROWS(numkit::cholesky_solve(asym, rhs));
}

TEST_CASE("qr_least_squares basics") {
    const Vector b1 = numkit::qr_least_squares(Matrix::Identity(2, 2),
                                               (Vector(2) << 3, -1).finished());
    CHECK(b1[0] == doctest::Approx(3.0));
    CHECK(b1[1] == doctest::Approx(-1.0));

    Matrix ones(2, 1);
    ones << 1, 1;
    const Vector b2 = numkit::qr_least_squares(ones, (Vector(2) << 1, 3).finished());
    CHECK(b2[0] == doctest::Approx(2.0));
}

TEST_CASE("qr_least_squares exact recovery and residual bound") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 30;
        const int p = 6;
        const Matrix x = random_matrix(rng, n, p);
        const Vector beta = random_matrix(rng, p, 1).col(0);
        const Vector b = numkit::qr_least_squares(x, x * beta);
        CHECK((b - beta).cwiseAbs().maxCoeff() <= 1e-9);
        const Vector noisy = x * beta + random_matrix(rng, n, 1).col(0);
        const Vector bhat = numkit::qr_least_squares(x, noisy);
        CHECK((x.transpose() * (noisy - x * bhat)).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("qr_least_squares detects rank deficiency") {
    Matrix x(4, 2);
    x.col(0) << 1, 2, 3, 4;
    x.col(1) = 2.0 * x.col(0);
    CHECK_THROWS_AS(numkit::qr_least_squares(x, Vector::Ones(4)), RankDeficient);
}

TEST_CASE("sym_eig small exact cases") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 1;
    auto eig = numkit::sym_eig(d);
    CHECK(eig.values[0] == doctest::Approx(3.0));
    CHECK(eig.values[1] == doctest::Approx(1.0));

    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    eig = numkit::sym_eig(swap);
    CHECK(eig.values[0] == doctest::Approx(1.0));
    CHECK(eig.values[1] == doctest::Approx(-1.0));
}

TEST_CASE("sym_eig reconstruction, orthonormality, trace identity") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix s = random_symmetric(rng, 6);
        const auto eig = numkit::sym_eig(s);
        const double scale = s.cwiseAbs().maxCoeff();
        const Matrix rebuilt =
            eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
        CHECK((rebuilt - s).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, scale));
        const Matrix gram = eig.vectors.transpose() * eig.vectors;
        CHECK((gram - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(eig.values.sum() ==
              doctest::Approx(s.trace()).epsilon(1e-9 * std::max(1.0, scale)));
        for (int i = 0; i + 1 < 6; ++i) CHECK(eig.values[i] >= eig.values[i + 1]);
    }
}

TEST_CASE("trace_of_solve basics") {
    Rng rng(17);
    const Matrix n4 = random_matrix(rng, 4, 4);
    CHECK(numkit::trace_of_solve(Matrix::Identity(4, 4), n4) ==
          doctest::Approx(n4.trace()).epsilon(1e-12));
    CHECK(numkit::trace_of_solve(2.0 * Matrix::Identity(4, 4),
                                 Matrix::Identity(4, 4)) == doctest::Approx(2.0));
}

TEST_CASE("trace_of_solve matches explicit inverse and columnwise solves") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix m = random_spd(rng, 10);
        const Matrix n = random_matrix(rng, 10, 10);
        const double direct = (m.inverse() * n).trace();
        const double value = numkit::trace_of_solve(m, n);
        CHECK(value == doctest::Approx(direct).epsilon(1e-10));
        double columnwise = 0.0;
        for (int j = 0; j < 10; ++j) {
            columnwise += numkit::cholesky_solve(m, Vector(n.col(j)))[j];
        }
        CHECK(value == doctest::Approx(columnwise).epsilon(1e-10));
    }
}

TEST_CASE("trace_of_solve rejects singular operators") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1;
    m(1, 1) = 1;
    CHECK_THROWS_AS(numkit::trace_of_solve(m, Matrix::Identity(3, 3)), Singular);
}
