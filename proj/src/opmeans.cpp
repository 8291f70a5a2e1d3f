#include "cpmean/opmeans.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "cpmean/errors.hpp"
#include "cpmean/quadrature.hpp"

namespace cpmean {

namespace {

void require_same_dim(const PsdMatrix& a, const PsdMatrix& b, const char* what) {
  if (a.dim() != b.dim())
    throw ShapeError(std::string(what) + ": operands have dimensions " + std::to_string(a.dim()) +
                     " and " + std::to_string(b.dim()));
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("mean weight alpha must lie in [0, 1], got " + std::to_string(alpha));
}

bool numerically_invertible(const PsdMatrix& a, double rank_rtol) {
  return a.min_eigenvalue() > rank_cutoff(a, rank_rtol) && a.max_eigenvalue() > 0.0;
}

// A^{1/2} (A^{-1/2} B A^{-1/2})^α A^{1/2} for invertible A.
Matrix closed_form_power(const PsdMatrix& a, const PsdMatrix& b, double alpha) {
  const Spectrum& sa = a.spectrum();
  const RealVector root = sa.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix a_half = sa.vectors * root.asDiagonal() * sa.vectors.adjoint();
  const Matrix a_inv_half = sa.vectors * root.cwiseInverse().asDiagonal() * sa.vectors.adjoint();
  const Spectrum inner = eigh(HermitianMatrix(a_inv_half * b.matrix() * a_inv_half));
  RealVector powered(inner.values.size());
  for (Index i = 0; i < powered.size(); ++i) powered(i) = std::pow(std::max(inner.values(i), 0.0), alpha);
  const Matrix middle = inner.vectors * powered.asDiagonal() * inner.vectors.adjoint();
  return hermitian_part(a_half * middle * a_half);
}

PsdMatrix clamp_psd(const Matrix& m) {
  const Spectrum s = eigh(HermitianMatrix(m));
  const RealVector v = s.values.cwiseMax(0.0);
  return PsdMatrix::trusted(s.vectors * v.asDiagonal() * s.vectors.adjoint());
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// MeanKind

MeanKind MeanKind::power(double alpha) {
  require_alpha(alpha);
  MeanKind k = of(MeanTag::power);
  k.alpha = alpha;
  return k;
}

MeanKind MeanKind::custom(ConnectionRep rep) {
  MeanKind k = of(MeanTag::custom);
  k.rep = std::make_shared<const ConnectionRep>(std::move(rep));
  return k;
}

MeanKind MeanKind::parse(const std::string& text) {
  if (text == "geo") return geo();
  if (text == "arith") return arith();
  if (text == "harm") return harm();
  if (text == "parallel") return parallel();
  if (text == "log") return log();
  const std::string prefix = "power:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    double alpha = 0.0;
    const auto res = std::from_chars(num.data(), num.data() + num.size(), alpha);
    if (num.empty() || res.ec != std::errc() || res.ptr != num.data() + num.size())
      throw InvalidInput("cannot parse power mean weight '" + num + "'");
    return power(alpha);
  }
  throw InvalidInput("unknown mean kind '" + text +
                     "' (expected geo, arith, harm, parallel, log or power:<alpha>)");
}

std::string MeanKind::name() const {
  switch (tag) {
    case MeanTag::arith: return "arith";
    case MeanTag::geo: return "geo";
    case MeanTag::harm: return "harm";
    case MeanTag::parallel: return "parallel";
    case MeanTag::power: return "power:" + format_real(alpha);
    case MeanTag::log: return "log";
    case MeanTag::custom: return rep ? "custom:" + rep->label() : "custom";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Means

double mean_tolerance(const PsdMatrix& a, const PsdMatrix& b, const Tolerances& tol) {
  return tol.mean * std::max({1.0, a.norm(), b.norm()});
}

PsdMatrix parallel_sum(const PsdMatrix& a, const PsdMatrix& b, const Tolerances& tol) {
  require_same_dim(a, b, "parallel sum");
  const PsdMatrix sum = PsdMatrix::trusted(a.matrix() + b.matrix());
  const PsdMatrix sum_pinv = pinv_psd(sum, tol.rank_rtol);
  return PsdMatrix::trusted(a.matrix() * sum_pinv.matrix() * b.matrix());
}

PsdMatrix harmonic_mean(const PsdMatrix& a, const PsdMatrix& b, const Tolerances& tol) {
  return PsdMatrix::trusted(2.0 * parallel_sum(a, b, tol).matrix());
}

PsdMatrix arithmetic_mean(const PsdMatrix& a, const PsdMatrix& b) {
  require_same_dim(a, b, "arithmetic mean");
  return PsdMatrix::trusted(0.5 * (a.matrix() + b.matrix()));
}

PsdMatrix power_mean(const PsdMatrix& a, const PsdMatrix& b, double alpha, const Tolerances& tol) {
  require_same_dim(a, b, "power mean");
  require_alpha(alpha);
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return b;
  if (numerically_invertible(a, tol.rank_rtol) && numerically_invertible(b, tol.rank_rtol))
    return PsdMatrix::trusted(closed_form_power(a, b, alpha));

  const Projection common =
      proj_intersection(support_projection(a, tol.rank_rtol), support_projection(b, tol.rank_rtol));
  const Index k = common.rank();
  if (k == 0) return PsdMatrix::zero(a.dim());
  // The shorted blocks have full rank on the common range in exact
  // arithmetic; recursing handles the case where rounding says otherwise,
  // and each level strictly lowers the dimension.
  const PsdMatrix a_short = PsdMatrix::trusted(shorted_in_basis(a, common, tol.rank_rtol));
  const PsdMatrix b_short = PsdMatrix::trusted(shorted_in_basis(b, common, tol.rank_rtol));
  const Matrix inner = k < a.dim() ? power_mean(a_short, b_short, alpha, tol).matrix()
                                   : closed_form_power(a_short, b_short, alpha);
  const Matrix& w = common.basis();
  return PsdMatrix::trusted(w * inner * w.adjoint());
}

PsdMatrix geometric_mean(const PsdMatrix& a, const PsdMatrix& b, const Tolerances& tol) {
  return power_mean(a, b, 0.5, tol);
}

PsdMatrix log_mean(const PsdMatrix& a, const PsdMatrix& b, const MeanOptions& opts) {
  require_same_dim(a, b, "logarithmic mean");
  if (opts.log_nodes < 1) throw DomainError("logarithmic mean needs at least one node");
  const QuadratureRule rule = gauss_legendre_unit(opts.log_nodes);
  const Index n = a.dim();
  return PsdMatrix::trusted(
      ordered_sum(opts.exec, static_cast<Index>(rule.nodes.size()), n, n, [&](Index k) -> Matrix {
        const auto i = static_cast<std::size_t>(k);
        return rule.weights[i] * power_mean(a, b, rule.nodes[i], opts.tol).matrix();
      }));
}

PsdMatrix connection_apply(const ConnectionRep& rep, const PsdMatrix& a, const PsdMatrix& b,
                           Exec exec, const Tolerances& tol) {
  require_same_dim(a, b, "connection");
  const Index n = a.dim();
  const auto& atoms = rep.atoms();
  const Matrix integral =
      ordered_sum(exec, static_cast<Index>(atoms.size()), n, n, [&](Index k) -> Matrix {
        const Atom& at = atoms[static_cast<std::size_t>(k)];
        const PsdMatrix scaled_a = PsdMatrix::trusted(at.lambda * a.matrix());
        return (at.weight * (1.0 + at.lambda) / at.lambda) * parallel_sum(scaled_a, b, tol).matrix();
      });
  return PsdMatrix::trusted(rep.a() * a.matrix() + rep.b() * b.matrix() + integral);
}

PsdMatrix regularized_limit_mean(const PsdMatrix& a, const PsdMatrix& b, double alpha,
                                 const Tolerances& tol) {
  require_same_dim(a, b, "regularized mean");
  require_alpha(alpha);
  const Index n = a.dim();
  const double s = std::max({1.0, a.norm(), b.norm()});
  const double accept = tol.mean * s;
  const Matrix id = Matrix::Identity(n, n);
  Matrix previous;
  for (int k = 6; k <= 16; ++k) {
    const double eps = s * std::ldexp(1.0, -2 * k);
    const Matrix g = closed_form_power(PsdMatrix::trusted(a.matrix() + eps * id),
                                       PsdMatrix::trusted(b.matrix() + eps * id), alpha);
    if (k > 6 && spectral_norm(g - previous) <= accept) {
      const Matrix pi = proj_intersection(support_projection(a, tol.rank_rtol),
                                          support_projection(b, tol.rank_rtol))
                            .matrix();
      return clamp_psd(pi * g * pi);
    }
    previous = g;
  }
  throw NonConvergence("regularized mean did not settle within the epsilon schedule");
}

PsdMatrix mean(const MeanKind& kind, const PsdMatrix& a, const PsdMatrix& b,
               const MeanOptions& opts) {
  switch (kind.tag) {
    case MeanTag::arith: return arithmetic_mean(a, b);
    case MeanTag::geo: return geometric_mean(a, b, opts.tol);
    case MeanTag::harm: return harmonic_mean(a, b, opts.tol);
    case MeanTag::parallel: return parallel_sum(a, b, opts.tol);
    case MeanTag::power: return power_mean(a, b, kind.alpha, opts.tol);
    case MeanTag::log: return log_mean(a, b, opts);
    case MeanTag::custom:
      if (!kind.rep) throw DomainError("custom mean without a connection");
      return connection_apply(*kind.rep, a, b, opts.exec, opts.tol);
  }
  throw DomainError("unknown mean kind");
}

std::vector<PsdMatrix> batch_mean(const MeanKind& kind, const std::vector<PsdMatrix>& as,
                                  const std::vector<PsdMatrix>& bs, const MeanOptions& opts) {
  if (as.size() != bs.size()) throw ShapeError("batch mean: operand lists differ in length");
  MeanOptions inner = opts;
  inner.exec = Exec::serial;  // parallelism lives at the batch level
  return map_indexed<PsdMatrix>(opts.exec, static_cast<Index>(as.size()), [&](Index k) {
    const auto i = static_cast<std::size_t>(k);
    return mean(kind, as[i], bs[i], inner);
  });
}

}  // namespace cpmean
