#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cpmean/errors.hpp"
#include "cpmean/hermlinalg.hpp"
#include "support/generators.hpp"

using namespace cpmean;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

Matrix reconstruct(const Spectrum& s) {
  return s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

}  // namespace

TEST_CASE("hermitian matrix construction") {
  SUBCASE("symmetrizes silently") {
    Matrix m(2, 2);
    m << 1.0, Complex(2.0, 1.0), Complex(2.0, -1.0 + 1e-14), 3.0;
    const HermitianMatrix h(m);
    CHECK(max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);
  }
  SUBCASE("rejects empty and non-square") {
    CHECK_THROWS_AS(HermitianMatrix{Matrix(0, 0)}, ShapeError);
    CHECK_THROWS_AS(HermitianMatrix{Matrix::Zero(2, 3)}, ShapeError);
  }
  SUBCASE("rejects non-finite entries") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianMatrix{m}, InvalidInput);
    m(0, 1) = Complex(0.0, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(HermitianMatrix{m}, InvalidInput);
  }
  SUBCASE("checked rejects visibly non-Hermitian input") {
    Matrix m(2, 2);
    m << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(HermitianMatrix::checked(m), InvalidInput);
    m(1, 0) = 1.0 + 1e-13;
    CHECK_NOTHROW(HermitianMatrix::checked(m));
  }
}

TEST_CASE("eigh") {
  SUBCASE("diagonal input") {
    const Spectrum s = eigh(HermitianMatrix(diag({3.0, 1.0})));
    CHECK(s.values(0) == doctest::Approx(1.0));
    CHECK(s.values(1) == doctest::Approx(3.0));
    CHECK(std::abs(s.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.vectors(0, 1)) == doctest::Approx(1.0));
  }
  SUBCASE("Pauli X") {
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const Spectrum s = eigh(HermitianMatrix(x));
    CHECK(s.values(0) == doctest::Approx(-1.0));
    CHECK(s.values(1) == doctest::Approx(1.0));
  }
  SUBCASE("random Hermitian reconstruction and ordering") {
    testgen::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const Index n = testgen::uniform_int(rng, 1, 8);
      const Matrix g = testgen::ginibre(rng, n, n);
      const HermitianMatrix h(g + g.adjoint());
      const Spectrum s = eigh(h);
      CHECK(max_abs(reconstruct(s) - h.matrix()) <= scaled(1e-8, spectral_norm(h.matrix())));
      for (Index i = 1; i < n; ++i) CHECK(s.values(i - 1) <= s.values(i));
      CHECK(max_abs(s.vectors.adjoint() * s.vectors - Matrix::Identity(n, n)) < 1e-12);
    }
  }
  SUBCASE("deterministic bits") {
    testgen::Rng rng(3);
    const Matrix g = testgen::ginibre(rng, 5, 5);
    const HermitianMatrix h(g + g.adjoint());
    const Spectrum a = eigh(h), b = eigh(h);
    CHECK((a.values.array() == b.values.array()).all());
    CHECK((a.vectors.array() == b.vectors.array()).all());
  }
}

TEST_CASE("is_psd") {
  CHECK(is_psd(HermitianMatrix(diag({1.0, 0.0}))));
  CHECK_FALSE(is_psd(HermitianMatrix(diag({1.0, -1e-3})), 1e-9));
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;  // eigenvalues -1, 3
  CHECK_FALSE(is_psd(HermitianMatrix(m)));
  // Tolerance scales with the norm.
  CHECK(is_psd(HermitianMatrix(diag({1e6, -1e-4})), 1e-9));
  CHECK_FALSE(is_psd(HermitianMatrix(diag({1e6, -1e-2})), 1e-9));
}

TEST_CASE("PsdMatrix validation and cache") {
  CHECK_THROWS_AS(PsdMatrix(diag({1.0, -0.5})), DomainError);
  CHECK_NOTHROW(PsdMatrix(diag({1.0, -1e-12})));
  const PsdMatrix a(diag({2.0, 5.0, 0.0}));
  CHECK(a.dim() == 3);
  CHECK(a.norm() == doctest::Approx(5.0));
  CHECK(a.min_eigenvalue() == doctest::Approx(0.0));
  CHECK(a.max_eigenvalue() == doctest::Approx(5.0));
  const PsdMatrix copy = a;
  CHECK(&copy.spectrum() == &a.spectrum());  // copies share the cached spectrum
  CHECK(PsdMatrix::zero(3).norm() == 0.0);
  CHECK(max_abs(PsdMatrix::identity(2).matrix() - Matrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("psd_sqrt") {
  CHECK(max_abs(psd_sqrt(PsdMatrix(diag({4.0, 9.0}))).matrix() - diag({2.0, 3.0})) < 1e-14);
  CHECK(max_abs(psd_sqrt(PsdMatrix::zero(3)).matrix()) == 0.0);
  testgen::Rng rng(5);
  const Matrix v = testgen::ginibre(rng, 4, 1);
  const Matrix p = v * v.adjoint() / v.squaredNorm();
  CHECK(max_abs(psd_sqrt(PsdMatrix(p)).matrix() - p) < 1e-12);
  // Rounding-level negative eigenvalues are clamped, not propagated.
  CHECK(max_abs(psd_sqrt(PsdMatrix::trusted(diag({1.0, -1e-13}))).matrix() - diag({1.0, 0.0})) < 1e-14);
  CHECK_THROWS_AS(psd_sqrt(PsdMatrix::trusted(diag({1.0, -0.1}))), NumericalError);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = testgen::uniform_int(rng, 1, 6);
    const PsdMatrix a = testgen::psd_any_rank(rng, n);
    const Matrix r = psd_sqrt(a).matrix();
    CHECK(max_abs(r * r - a.matrix()) <= scaled(1e-8, a.norm()));
  }
}

TEST_CASE("pinv_psd") {
  CHECK(max_abs(pinv_psd(PsdMatrix(diag({2.0, 0.0}))).matrix() - diag({0.5, 0.0})) < 1e-15);
  CHECK(max_abs(pinv_psd(PsdMatrix::identity(3)).matrix() - Matrix::Identity(3, 3)) < 1e-15);
  testgen::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = testgen::uniform_int(rng, 1, 6);
    const Index r = testgen::uniform_int(rng, 0, n);
    const PsdMatrix a = testgen::psd(rng, n, r);
    const Matrix ap = pinv_psd(a).matrix();
    const Matrix& m = a.matrix();
    CHECK(max_abs(m * ap * m - m) <= 1e-8);
    CHECK(max_abs(ap * m * ap - ap) <= scaled(1e-8, spectral_norm(ap)));
    CHECK(max_abs(m * ap - support_projection(a).matrix()) <= 1e-8);
  }
}

TEST_CASE("support_projection") {
  const Projection p = support_projection(PsdMatrix(diag({1.0, 0.0, 2.0})));
  CHECK(p.rank() == 2);
  CHECK(max_abs(p.matrix() - diag({1.0, 0.0, 1.0})) < 1e-15);
  CHECK(support_projection(PsdMatrix::zero(3)).rank() == 0);
  CHECK(max_abs(support_projection(PsdMatrix::zero(3)).matrix()) == 0.0);

  testgen::Rng rng(13);
  const Matrix v = testgen::ginibre(rng, 3, 1);
  const Projection q = support_projection(PsdMatrix(Matrix(5.0 * v * v.adjoint())));
  CHECK(q.rank() == 1);
  CHECK(max_abs(q.matrix() - v * v.adjoint() / v.squaredNorm()) < 1e-12);

  for (int trial = 0; trial < 30; ++trial) {
    const Index n = testgen::uniform_int(rng, 1, 6);
    const Index r = testgen::uniform_int(rng, 0, n);
    const PsdMatrix a = testgen::psd(rng, n, r);
    const Projection s = support_projection(a);
    CHECK(s.rank() == r);
    CHECK(max_abs(s.matrix() * a.matrix() - a.matrix()) <= 1e-8);
  }
}

TEST_CASE("frac_power_psd") {
  CHECK(max_abs(frac_power_psd(PsdMatrix(diag({4.0, 0.0})), 0.5).matrix() - diag({2.0, 0.0})) < 1e-15);
  for (double p : {-1.0, -0.5, 0.0, 0.3, 1.0})
    CHECK(max_abs(frac_power_psd(PsdMatrix::identity(3), p).matrix() - Matrix::Identity(3, 3)) < 1e-14);
  const Matrix expected = diag({1.0 / std::sqrt(2.0), 1.0 / (2.0 * std::sqrt(2.0))});
  CHECK(max_abs(frac_power_psd(PsdMatrix(diag({2.0, 8.0})), -0.5).matrix() - expected) < 1e-15);
  // Pseudo-power: zero stays zero for negative exponents.
  CHECK(max_abs(frac_power_psd(PsdMatrix(diag({4.0, 0.0})), -1.0).matrix() - diag({0.25, 0.0})) < 1e-15);
  CHECK_THROWS_AS(frac_power_psd(PsdMatrix::identity(2), 1.5), DomainError);
  CHECK_THROWS_AS(frac_power_psd(PsdMatrix::identity(2), std::nan("")), DomainError);
}

TEST_CASE("projections and intersections") {
  const Projection p = Projection::checked(diag({1.0, 1.0, 0.0}));
  const Projection q = Projection::checked(diag({0.0, 1.0, 1.0}));
  CHECK(max_abs(proj_intersection(p, q).matrix() - diag({0.0, 1.0, 0.0})) < 1e-12);
  CHECK(max_abs(proj_intersection(p, p).matrix() - p.matrix()) < 1e-12);

  const Projection e0 = Projection::checked(diag({1.0, 0.0}));
  const Projection e1 = Projection::checked(diag({0.0, 1.0}));
  CHECK(proj_intersection(e0, e1).rank() == 0);

  CHECK_THROWS_AS(Projection::checked(diag({1.0, 0.5})), DomainError);
  CHECK_THROWS_AS(proj_intersection(e0, p), ShapeError);

  testgen::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = testgen::uniform_int(rng, 2, 6);
    // Planted common subspace plus independent extra directions.
    const Matrix u = testgen::unitary(rng, n);
    const Index k = testgen::uniform_int(rng, 0, n / 2);
    const Index extra = (n - k) / 2;
    Matrix wp(n, k + extra), wq(n, k + extra);
    wp << u.leftCols(k), u.middleCols(k, extra);
    wq << u.leftCols(k), u.middleCols(k + extra, extra);
    const Projection a = Projection::from_basis(wp, n), b = Projection::from_basis(wq, n);
    const Projection ab = proj_intersection(a, b), ba = proj_intersection(b, a);
    CHECK(ab.rank() == k);
    CHECK(max_abs(ab.matrix() - ba.matrix()) < 1e-10);
    CHECK(max_abs(a.matrix() * ab.matrix() - ab.matrix()) < 1e-10);  // ran(P∧Q) ⊆ ran P
    const Matrix planted = u.leftCols(k) * u.leftCols(k).adjoint();
    CHECK(max_abs(ab.matrix() - planted) < 1e-10);
  }
}

TEST_CASE("complement basis") {
  testgen::Rng rng(19);
  const Matrix w = testgen::subspace(rng, 5, 2);
  const Projection p = Projection::from_basis(w, 5);
  const Matrix c = p.complement_basis();
  CHECK(c.cols() == 3);
  CHECK(max_abs(w.adjoint() * c) < 1e-12);
  CHECK(max_abs(c.adjoint() * c - Matrix::Identity(3, 3)) < 1e-12);
  CHECK(Projection::zero(4).complement_basis().cols() == 4);
  CHECK(Projection::identity(4).complement_basis().cols() == 0);
}

TEST_CASE("shorted operator") {
  // Classical 2x2 case: shorting onto e0 gives the Schur complement.
  Matrix a(2, 2);
  a << 2.0, 1.0, 1.0, 1.0;
  const Projection e0 = Projection::checked(diag({1.0, 0.0}));
  CHECK(max_abs(shorted(PsdMatrix(a), e0).matrix() - diag({1.0, 0.0})) < 1e-14);

  testgen::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = testgen::uniform_int(rng, 2, 5);
    const PsdMatrix b = testgen::psd_any_rank(rng, n);
    const Projection s = Projection::from_basis(testgen::subspace(rng, n, testgen::uniform_int(rng, 1, n)), n);
    const Matrix sh = shorted(b, s).matrix();
    // 0 <= [S]B <= B, range inside S.
    CHECK(eigh(HermitianMatrix(sh)).values(0) >= -1e-9);
    CHECK(eigh(HermitianMatrix(b.matrix() - sh)).values(0) >= -1e-9);
    CHECK(max_abs(s.matrix() * sh - sh) < 1e-9);
    // Maximality: any PSD X = S Y S with X <= B is below [S]B. Take X = t·(SBS)
    // scaled down until X <= B.
    const Matrix sbs = s.matrix() * b.matrix() * s.matrix();
    double t = 1.0;
    while (eigh(HermitianMatrix(b.matrix() - t * sbs)).values(0) < -1e-12) t *= 0.5;
    CHECK(eigh(HermitianMatrix(sh - t * sbs)).values(0) >= -1e-9);
  }
}

TEST_CASE("kron") {
  Matrix a(2, 2), b(2, 1);
  a << 1.0, 2.0, 3.0, 4.0;
  b << 1.0, Complex(0.0, 1.0);
  const Matrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k.cols() == 2);
  CHECK(k(1, 0) == Complex(0.0, 1.0));
  CHECK(k(3, 1) == Complex(0.0, 4.0));
  CHECK(k(2, 0) == Complex(3.0, 0.0));
}
