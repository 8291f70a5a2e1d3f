#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpmean/connection.hpp"
#include "cpmean/errors.hpp"
#include "cpmean/nnls.hpp"

using namespace cpmean;

namespace {

double max_error_on_grid(const ConnectionRep& rep, double (*f)(double)) {
  double err = 0.0;
  for (double t : transform_test_grid()) err = std::max(err, std::abs(rep.evaluate(t) - f(t)));
  return err;
}

double arith_fn(double t) { return 0.5 * (1.0 + t); }
double harm_fn(double t) { return 2.0 * t / (1.0 + t); }
double sqrt_fn(double t) { return std::sqrt(t); }

}  // namespace

TEST_CASE("ConnectionRep validation") {
  CHECK_THROWS_AS(ConnectionRep(-0.1, 0.0, {}), DomainError);
  CHECK_THROWS_AS(ConnectionRep(0.0, std::nan(""), {}), DomainError);
  CHECK_THROWS_AS(ConnectionRep(0.0, 0.0, {{0.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(ConnectionRep(0.0, 0.0, {{1.0, -1.0}}), DomainError);
  CHECK_THROWS_AS(ConnectionRep(0.0, 0.0, {{INFINITY, 1.0}}), DomainError);
  CHECK_NOTHROW(ConnectionRep(0.0, 0.0, {}));
}

TEST_CASE("basic representing functions") {
  CHECK(max_error_on_grid(arithmetic_rep(), arith_fn) < 1e-15);
  CHECK(max_error_on_grid(harmonic_rep(), harm_fn) < 1e-15);
  CHECK(arithmetic_rep().evaluate(1.0) == 1.0);
  CHECK(harmonic_rep().evaluate(1.0) == 1.0);
}

TEST_CASE("power_rep reproduces t^alpha") {
  for (int k = 1; k <= 9; ++k) {
    const double alpha = 0.1 * k;
    const ConnectionRep rep = power_rep(alpha, 64);
    CHECK(rep.atoms().size() == 64);
    CHECK(rep.a() == 0.0);
    CHECK(rep.b() == 0.0);
    for (double t : transform_test_grid()) {
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(std::abs(rep.evaluate(t) - std::pow(t, alpha)) <= 1e-6);
    }
  }
  CHECK(std::abs(power_rep(0.5, 64).evaluate(1.0) - 1.0) <= 1e-6);
  CHECK(std::abs(power_rep(0.5, 64).evaluate(4.0) - 2.0) <= 1e-6);
  CHECK(std::abs(power_rep(0.25, 64).evaluate(16.0) - 2.0) <= 1e-6);
  CHECK_THROWS_AS(power_rep(0.0, 64), DomainError);
  CHECK_THROWS_AS(power_rep(1.0, 64), DomainError);
  CHECK_THROWS_AS(power_rep(0.5, 3), DomainError);
}

TEST_CASE("transpose") {
  const ConnectionRep t = transpose_rep(arithmetic_rep());
  CHECK(max_error_on_grid(t, arith_fn) < 1e-15);
  // t f(1/t) for f = t^α is t^{1-α}.
  const ConnectionRep p = transpose_rep(power_rep(0.3, 64));
  for (double x : transform_test_grid()) CHECK(std::abs(p.evaluate(x) - std::pow(x, 0.7)) <= 1e-6);
  const ConnectionRep g = transpose_rep(power_rep(0.5, 64));
  CHECK(max_error_on_grid(g, sqrt_fn) <= 1e-6);
}

TEST_CASE("adjoint and dual by refit") {
  SUBCASE("arithmetic and harmonic are mutually adjoint and dual") {
    CHECK(max_error_on_grid(adjoint_rep(arithmetic_rep()), harm_fn) <= 1e-5);
    CHECK(max_error_on_grid(adjoint_rep(harmonic_rep()), arith_fn) <= 1e-5);
    CHECK(max_error_on_grid(dual_rep(arithmetic_rep()), harm_fn) <= 1e-5);
  }
  SUBCASE("geometric is self-adjoint and self-dual") {
    const ConnectionRep g = power_rep(0.5, 64);
    CHECK(max_error_on_grid(adjoint_rep(g), sqrt_fn) <= 1e-5);
    CHECK(max_error_on_grid(dual_rep(g), sqrt_fn) <= 1e-5);
    CHECK(max_error_on_grid(transpose_rep(g), sqrt_fn) <= 1e-5);
  }
  SUBCASE("dual of the α-power is the (1-α)-power") {
    const ConnectionRep d = dual_rep(power_rep(0.3, 64));
    for (double t : transform_test_grid()) CHECK(std::abs(d.evaluate(t) - std::pow(t, 0.7)) <= 1e-5);
  }
  SUBCASE("refit atoms stay valid") {
    const ConnectionRep a = adjoint_rep(power_rep(0.2, 64));
    CHECK(a.a() >= 0.0);
    CHECK(a.b() >= 0.0);
    for (const Atom& at : a.atoms()) {
      CHECK(at.lambda > 0.0);
      CHECK(at.weight > 0.0);
    }
  }
  SUBCASE("vanishing function is rejected") {
    CHECK_THROWS_AS(adjoint_rep(ConnectionRep(0.0, 0.0, {})), DomainError);
  }
  SUBCASE("unreachable accuracy is reported") {
    RefitOptions coarse;
    coarse.lambdas_per_decade = 1;
    coarse.lambda_log10_min = 3.0;
    coarse.lambda_log10_max = 4.0;
    coarse.tol = 1e-12;
    CHECK_THROWS_AS(adjoint_rep(power_rep(0.5, 64), coarse), NumericalError);
  }
}

TEST_CASE("nnls") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  const NnlsResult r = nnls(a, b);
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.x(1) == doctest::Approx(2.0));
  // Unconstrained optimum has a negative coordinate; NNLS clamps it.
  b << -1, 2, 1;
  const NnlsResult c = nnls(a, b);
  CHECK(c.x(0) == doctest::Approx(0.0));
  CHECK(c.x(1) == doctest::Approx(1.5));
  CHECK((c.x.array() >= 0.0).all());
}
