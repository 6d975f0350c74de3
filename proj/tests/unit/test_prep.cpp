#include <doctest.h>

#include <sstream>

#include "gridqls/error.hpp"
#include "gridqls/prep/matrix_market.hpp"
#include "gridqls/prep/prep.hpp"
#include "test_util.hpp"

using namespace gridqls;
using namespace gridqls::prep;

namespace {

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

CMatrix random_nonsingular(std::size_t n, std::mt19937_64 &rng) {
    return test::random_complex(n, n, rng) + 2.0 * std::sqrt(static_cast<double>(n)) * CMatrix::Identity(n, n);
}

} // namespace

TEST_CASE("normalize_rhs") {
    CVector b(2);
    b << 3.0, 4.0;
    auto [u, n] = normalize_rhs(b);
    CHECK(n == doctest::Approx(5.0));
    CHECK(std::abs(u(0) - 0.6) < 1e-15);
    CHECK(std::abs(u(1) - 0.8) < 1e-15);
    CVector e(2);
    e << 1.0, 0.0;
    CHECK(normalize_rhs(e).second == 1.0);
    CHECK(normalize_rhs(e).first == e);
    CHECK_THROWS_AS(normalize_rhs(CVector::Zero(2)), std::invalid_argument);
}

TEST_CASE("condition number") {
    CHECK(condition_number(CMatrix::Identity(3, 3)) == doctest::Approx(1.0));
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 10.0;
    d(1, 1) = 1.0;
    CHECK(condition_number(d) == doctest::Approx(10.0));
    CHECK_THROWS_AS(condition_number(CMatrix::Ones(2, 2)), SingularMatrixError);
}

TEST_CASE("power-of-two expansion") {
    std::mt19937_64 rng(1);
    const CMatrix a = random_nonsingular(13, rng);
    const CVector b = test::random_complex(13, 1, rng);
    const auto e = expand_to_power_of_2(a, b);
    CHECK(e.matrix.rows() == 16);
    CHECK(e.padding == 3);
    CHECK(e.matrix.bottomRightCorner(3, 3) == CMatrix::Identity(3, 3));
    CHECK(e.b.tail(3).isZero());
    // identity padding leaves the solution untouched
    const CVector x = solve_dense(a, b);
    CHECK(max_abs(solve_dense(e.matrix, e.b).head(13) - x) < 1e-12);

    const auto f = expand_to_power_of_2(random_nonsingular(4, rng), test::random_complex(4, 1, rng));
    CHECK(f.padding == 0);
    CHECK(f.matrix.rows() == 4);
    CHECK(expand_to_power_of_2(random_nonsingular(29, rng), test::random_complex(29, 1, rng)).matrix.rows() == 32);
}

TEST_CASE("hermitization") {
    CMatrix s(2, 2);
    s << 2, 1, 1, 3;
    const CVector b = CVector::Ones(2);
    const auto same = hermitize(s, b);
    CHECK_FALSE(same.hermitized);
    CHECK(same.matrix == s);

    CMatrix a(2, 2);
    a << 1, 1, 0, 1;
    const auto h = hermitize(a, b);
    CHECK(h.hermitized);
    CHECK(h.matrix.rows() == 4);
    CHECK(h.matrix.topRightCorner(2, 2) == a);
    CHECK(h.matrix.bottomLeftCorner(2, 2) == a.adjoint());
    CHECK(h.matrix.topLeftCorner(2, 2).isZero());
    CHECK(h.b.head(2) == b);
    CHECK(h.b.tail(2).isZero());

    std::mt19937_64 rng(3);
    const CMatrix r = random_nonsingular(4, rng);
    const CVector rb = test::random_complex(4, 1, rng);
    const auto rh = hermitize(r, rb);
    CHECK(is_hermitian(rh.matrix));
    CHECK(max_abs(solve_dense(rh.matrix, rh.b).tail(4) - solve_dense(r, rb)) < 1e-10);
}

TEST_CASE("Gauss-Seidel preconditioning") {
    CMatrix d = CMatrix::Zero(3, 3);
    d.diagonal() << 2.0, 5.0, -4.0;
    CVector b(3);
    b << 1.0, 2.0, 3.0;
    const auto p = gauss_seidel_precondition(d, b);
    CHECK(max_abs(p.matrix - CMatrix::Identity(3, 3)) < 1e-15);
    CHECK(max_abs(p.b - d.diagonal().cwiseInverse().cwiseProduct(b)) < 1e-15);
    CHECK(condition_number(p.matrix) == doctest::Approx(1.0));

    // SPD tridiagonal
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> off(-1.0, -0.2);
    RMatrix t = RMatrix::Zero(8, 8);
    for (int i = 0; i < 7; ++i) {
        t(i, i + 1) = t(i + 1, i) = off(rng);
    }
    for (int i = 0; i < 8; ++i) {
        t(i, i) = 2.05;
    }
    const CMatrix tc = t.cast<cplx>();
    const CVector tb = test::random_complex(8, 1, rng);
    const auto tp = gauss_seidel_precondition(tc, tb);
    CHECK(condition_number(tp.matrix) < condition_number(tc));
    const CVector x0 = solve_dense(tc, tb);
    CHECK((solve_dense(tp.matrix, tp.b) - x0).norm() / x0.norm() < 1e-9);

    CMatrix zero_diag = CMatrix::Identity(2, 2);
    zero_diag(1, 1) = 0.0;
    zero_diag(0, 1) = 1.0;
    CHECK_THROWS_AS(gauss_seidel_precondition(zero_diag, CVector::Ones(2)), SingularMatrixError);
}

TEST_CASE("prepare: well-conditioned Hermitian power-of-two") {
    CMatrix a(2, 2);
    a << 2, 1, 1, 2;
    CVector b(2);
    b << 3, 4;
    const auto ps = prepare(a, b);
    CHECK_FALSE(ps.hermitized);
    CHECK_FALSE(ps.preconditioned);
    CHECK(ps.padding == 0);
    CHECK(ps.matrix == a);
    CHECK(ps.b_norm == doctest::Approx(5.0));
    CHECK(ps.b_normalized.norm() == doctest::Approx(1.0));
}

TEST_CASE("prepare: shapes and flags") {
    std::mt19937_64 rng(7);
    RMatrix s = RMatrix::Random(29, 29);
    s = s * s.transpose() + 29 * RMatrix::Identity(29, 29);
    const CMatrix a = s.cast<cplx>();
    const CVector b = test::random_complex(29, 1, rng);
    const auto plain = prepare(a, b);
    CHECK(plain.dimension() == 32);
    CHECK(plain.padding == 3);
    CHECK_FALSE(plain.hermitized);

    PrepareOptions o;
    o.use_preconditioner = true;
    const auto pre = prepare(a, b, o);
    CHECK(pre.preconditioned);
    CHECK(pre.hermitized);
    CHECK(pre.dimension() == 64);
    CHECK(is_hermitian(pre.matrix));

    CHECK_THROWS_AS(prepare(a, CVector::Ones(5)), std::invalid_argument);
    CHECK_THROWS_AS(prepare(CMatrix::Ones(2, 3), CVector::Ones(2)), std::invalid_argument);
}

TEST_CASE("prepare applies the preconditioner above the threshold") {
    CMatrix d = CMatrix::Zero(2, 2);
    d.diagonal() << 1.0, 1000.0;
    const auto ps = prepare(d, CVector::Ones(2));
    CHECK(ps.preconditioned);
    CHECK(ps.condition_number == doctest::Approx(1.0));
    PrepareOptions off;
    off.kappa_threshold = std::numeric_limits<double>::infinity();
    CHECK_FALSE(prepare(d, CVector::Ones(2), off).preconditioned);
}

TEST_CASE("classical round trip through preparation") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t n = 1 + seed % 16;
        const CMatrix a = random_nonsingular(n, rng);
        const CVector b = test::random_complex(n, 1, rng);
        PrepareOptions o;
        o.use_preconditioner = seed % 2 == 1;
        const auto ps = prepare(a, b, o);
        CAPTURE(seed);
        CHECK(is_hermitian(ps.matrix));
        const CVector x = solve_dense(a, b);
        CHECK((solve_prepared_classically(ps) - x).norm() / x.norm() < 1e-9);
    }
}

TEST_CASE("recovery bookkeeping") {
    const auto id = prepare(CMatrix::Identity(2, 2), (CVector(2) << 3.0, 4.0).finished());
    // x = b for the identity; state is b normalised, with P = C^2 for C = 1
    const auto rec = recover_solution(id, id.b_normalized, 1.0, 1.0);
    CHECK(std::abs(rec.x(0) - 3.0) < 1e-12);
    CHECK(std::abs(rec.x(1) - 4.0) < 1e-12);
    CHECK(rec.x_norm == doctest::Approx(1.0));

    CMatrix d = CMatrix::Zero(2, 2);
    d.diagonal() << 2.0, 4.0;
    const auto ps = prepare(d, (CVector(2) << 2.0, 4.0).finished());
    const CVector state = (CVector(2) << 1.0, 1.0).finished() / std::sqrt(2.0);
    const CVector x = recover_from_state(ps, state, std::sqrt(2.0) / ps.b_norm);
    CHECK(std::abs(x(0) - 1.0) < 1e-12);
    CHECK(std::abs(x(1) - 1.0) < 1e-12);
}

TEST_CASE("MatrixMarket reading") {
    std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n% c\n3 3 4\n1 1 2\n2 1 -1\n2 2 2\n3 3 1\n");
    const CMatrix m = read_matrix_market(sym);
    CHECK(m(0, 1) == cplx(-1.0));
    CHECK(m(1, 0) == cplx(-1.0));
    CHECK(m(2, 2) == cplx(1.0));

    std::istringstream herm("%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 1 0\n2 1 0 1\n");
    const CMatrix h = read_matrix_market(herm);
    CHECK(h(1, 0) == cplx(0, 1));
    CHECK(h(0, 1) == cplx(0, -1));

    std::istringstream arr("%%MatrixMarket matrix array integer general\n2 2\n1\n2\n3\n4\n");
    const CMatrix a = read_matrix_market(arr);
    CHECK(a(1, 0) == cplx(2.0)); // column-major
    CHECK(a(0, 1) == cplx(3.0));

    std::istringstream bad("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    try {
        read_matrix_market(bad);
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream banner("MatrixMarket nope\n");
    CHECK_THROWS_AS(read_matrix_market(banner), ParseError);
    CHECK_THROWS(read_matrix_market(std::filesystem::path("/nonexistent/a.mtx")));
}

TEST_CASE("MatrixMarket writing round-trips") {
    std::mt19937_64 rng(9);
    const CMatrix c = test::random_complex(5, 4, rng);
    for (bool dense : {false, true}) {
        std::stringstream s;
        write_matrix_market(s, c, dense);
        CHECK(read_matrix_market(s) == c);
    }
    const CMatrix r = test::random_complex(3, 3, rng).real().cast<cplx>();
    std::stringstream s;
    write_matrix_market(s, r);
    CHECK(s.str().find("real") != std::string::npos);
    CHECK(read_matrix_market(s) == r);
}
