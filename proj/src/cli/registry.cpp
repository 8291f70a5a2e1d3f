#include "cpmean/cli/registry.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <regex>

#include "cpmean/cpmaps.hpp"
#include "cpmean/errors.hpp"
#include "cpmean/lebesgue.hpp"
#include "cpmean/opmeans.hpp"
#include "cpmean/zoo.hpp"

namespace cpmean::cli {

namespace {

double parse_real(const std::string& text, const std::string& key) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (!text.empty() && res.ec == std::errc() && res.ptr == text.data() + text.size() &&
      std::isfinite(x))
    return x;
  // Also accept multiples of pi: "pi", "pi/4", "2*pi/3", "π/6".
  static const std::regex angle(R"(^([0-9]*\.?[0-9]*)\*?(pi|π)(/([0-9]*\.?[0-9]+))?$)");
  std::smatch m;
  if (std::regex_match(text, m, angle)) {
    const double num = m[1].length() ? std::stod(m[1].str()) : 1.0;
    const double den = m[4].length() ? std::stod(m[4].str()) : 1.0;
    if (den != 0.0) return num * std::numbers::pi / den;
  }
  throw InvalidInput("parameter '" + key + "' expects a real number, got '" + text + "'");
}

Matrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

Matrix from_real_diag(const std::vector<double>& v) {
  Matrix m = Matrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = v[i];
  return m;
}

double choi_scale(const CpMap& m) { return std::max(1.0, m.choi().norm()); }

// c with C ≈ c·C_id, taken from the maximally entangled vector.
double identity_multiple(const CpMap& m) {
  const Index n = m.dim_in();
  double s = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) s += m.choi().matrix()(i * n + i, j * n + j).real();
  return s / static_cast<double>(n * n);
}

MeanOptions mean_options(const Settings& s) { return MeanOptions{s.tol, s.nodes, Exec::serial}; }

// -------------------------------------------------------------------------

void run_non_unital(const Params&, const Settings& s, Report& r) {
  const CpMap phi = identity_map(2);
  const CpMap psi = unitary_conj(diag({1.0, -1.0}));
  const CpMap g = mean_cp(MeanKind::geo(), phi, psi, mean_options(s));
  const ChannelFlags fp = channel_flags(phi), fq = channel_flags(psi), fg = channel_flags(g);
  r.check_flag("inputs_unital", fp.is_unital && fq.is_unital);
  r.check("geo_mean_is_zero", max_abs(g.choi().matrix()), 1e-8);
  r.check_flag("geo_mean_not_unital", !fg.is_unital);
  r.outputs["geo_mean_choi"] = matrix_json(g.choi().matrix());
  r.outputs["geo_mean_at_identity"] = matrix_json(apply_map(g, Matrix::Identity(2, 2)));
}

void run_states(const Params&, const Settings& s, Report& r) {
  Matrix rho(2, 2), sigma(2, 2);
  rho << 0.6, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.4;
  sigma << 0.3, Complex(0.0, -0.05), Complex(0.0, 0.05), 0.7;
  const DensityFunctional f_rho{PsdMatrix(rho)}, f_sigma{PsdMatrix(sigma)};
  const CpMap phi = functional(f_rho), psi = functional(f_sigma);
  r.check("choi_is_transpose", max_abs(phi.choi().matrix() - rho.transpose()), 0.0);

  const MeanOptions opts = mean_options(s);
  const CpMap g = mean_cp(MeanKind::geo(), phi, psi, opts);
  const Matrix expected = geometric_mean(f_rho.rho, f_sigma.rho, s.tol).matrix().transpose();
  r.check("geo_mean_matches_density_mean", max_abs(g.choi().matrix() - expected), 1e-10);
  const CpMap h = mean_cp(MeanKind::harm(), phi, psi, opts);
  const Matrix expected_h = harmonic_mean(f_rho.rho, f_sigma.rho, s.tol).matrix().transpose();
  r.check("harm_mean_matches_density_mean", max_abs(h.choi().matrix() - expected_h), 1e-10);

  // (φ#ψ)(x) = Tr((ρ#σ) x)
  Matrix x(2, 2);
  x << 1.0, Complex(0.5, 2.0), Complex(-1.0, 0.25), -3.0;
  const Complex value = apply_map(g, x)(0, 0);
  const Complex direct = (expected.transpose() * x).trace();
  r.check("functional_value", std::abs(value - direct), 1e-10);
  r.outputs["geo_mean_density"] = matrix_json(expected.transpose());
}

void run_quantum_channels(const Params& p, const Settings& s, Report& r) {
  const long d = p.integer("d");
  if (d < 1 || d > 8) throw DomainError("quantum-channels: d must lie in [1, 8]");
  const double dd = static_cast<double>(d);
  const CpMap id = identity_map(d), dep = depolarizing(d);
  const MeanOptions opts = mean_options(s);
  const CpMap g = mean_cp(MeanKind::geo(), id, dep, opts);
  const CpMap h = mean_cp(MeanKind::harm(), id, dep, opts);
  const Matrix cid = id.choi().matrix();
  r.check("geo_equals_id_over_d", max_abs(g.choi().matrix() - cid / dd), 1e-8);
  r.check("harm_equals_2_over_d2_plus_1_id",
          max_abs(h.choi().matrix() - (2.0 / (dd * dd + 1.0)) * cid), 1e-8);
  r.check_flag("inputs_unital_cp", channel_flags(id).is_unital && channel_flags(dep).is_unital);
  r.check("geo_at_identity_le_1",
          std::max(0.0, PsdMatrix::trusted(apply_map(g, Matrix::Identity(d, d))).max_eigenvalue() - 1.0),
          1e-12);
  const ExtendedReal ind_id = index_cp(id, s.tol), ind_dep = index_cp(dep, s.tol);
  r.check("index_identity_is_1", ind_id.is_finite() ? std::abs(ind_id.value() - 1.0) : INFINITY, 1e-8);
  r.check("index_depolarizing_is_d2",
          ind_dep.is_finite() ? std::abs(ind_dep.value() - dd * dd) / (dd * dd) : INFINITY, 1e-8);
  r.outputs["geo_identity_multiple"] = identity_multiple(g);
  r.outputs["harm_identity_multiple"] = identity_multiple(h);
}

void run_schur(const Params&, const Settings& s, Report& r) {
  Matrix a(3, 3), b(3, 3);
  a << 2.0, 1.0, 0.0, 1.0, 2.0, Complex(0.0, 1.0), 0.0, Complex(0.0, -1.0), 2.0;
  b << 1.0, Complex(0.5, 0.5), 0.0, Complex(0.5, -0.5), 1.5, 0.25, 0.0, 0.25, 3.0;
  const PsdMatrix pa(a), pb(b);
  const MeanOptions opts = mean_options(s);
  const CpMap g = mean_cp(MeanKind::geo(), schur(a), schur(b), opts);
  const CpMap expected = schur(geometric_mean(pa, pb, s.tol).matrix());
  r.check("schur_geo_commutes", max_abs(g.choi().matrix() - expected.choi().matrix()),
          1e-7 * choi_scale(expected));
  const CpMap h = mean_cp(MeanKind::harm(), schur(a), schur(b), opts);
  const CpMap expected_h = schur(harmonic_mean(pa, pb, s.tol).matrix());
  r.check("schur_harm_commutes", max_abs(h.choi().matrix() - expected_h.choi().matrix()),
          1e-7 * choi_scale(expected_h));
  Matrix x = Matrix::Ones(3, 3);
  x(0, 2) = Complex(0.0, 2.0);
  r.check("schur_acts_entrywise", max_abs(apply_map(schur(a), x) - a.cwiseProduct(x)), 1e-14);
}

void run_adjoint_maps(const Params& p, const Settings& s, Report& r) {
  const std::vector<double> av = p.reals("a"), bv = p.reals("b");
  if (av.size() != 2 || bv.size() != 2) throw DomainError("adjoint-maps: a and b take two entries");
  for (double x : av)
    if (!(x > 0.0)) throw DomainError("adjoint-maps: entries must be positive");
  for (double x : bv)
    if (!(x > 0.0)) throw DomainError("adjoint-maps: entries must be positive");
  const Matrix a = from_real_diag(av), b = from_real_diag(bv);
  const Matrix ab = geometric_mean(PsdMatrix(a), PsdMatrix(b), s.tol).matrix();
  const Matrix root = from_real_diag({std::sqrt(av[0] * bv[0]), std::sqrt(av[1] * bv[1])});
  r.check("operator_geo_mean", max_abs(ab - root), 1e-12);

  const CpMap g = mean_cp(MeanKind::geo(), conjugation(a), conjugation(b), mean_options(s));
  // vec(A) and vec(B) are parallel only when A ∝ B.
  const bool proportional = std::abs(av[0] * bv[1] - av[1] * bv[0]) <= 1e-12 * av[0] * bv[1];
  const Matrix expected = proportional ? conjugation(root).choi().matrix()
                                       : Matrix::Zero(4, 4);
  r.check(proportional ? "geo_equals_conjugation_by_mean" : "geo_mean_is_zero",
          max_abs(g.choi().matrix() - expected), 1e-8);
  r.outputs["operator_geo_mean"] = matrix_json(ab);
  r.outputs["map_geo_mean_choi"] = matrix_json(g.choi().matrix());
}

void run_ce_tensor(const Params& p, const Settings& s, Report& r) {
  const std::vector<double> rho = p.reals("rho"), sigma = p.reals("sigma");
  if (rho.size() != sigma.size() || rho.size() < 1 || rho.size() > 3)
    throw DomainError("ce-tensor: rho and sigma need the same length n in [1, 3]");
  const Index n = static_cast<Index>(rho.size());
  const CpMap e1 = cond_exp_tensor(1, sigma);
  const CpMap e2 = cond_exp_tensor(2, rho);

  const Matrix cid = identity_map(n).choi().matrix();
  const Matrix id_n = Matrix::Identity(n, n);
  const Matrix bold_sigma = kron(from_real_diag(sigma), id_n);
  const Matrix bold_rho = kron(from_real_diag(rho), id_n);
  r.check("choi_e1_closed_form",
          max_abs(e1.choi().matrix() - permute_tensor_legs(kron(cid, bold_sigma), n, n, n, n)), 1e-14);
  r.check("choi_e2_closed_form",
          max_abs(e2.choi().matrix() - permute_tensor_legs(kron(bold_rho, cid), n, n, n, n)), 1e-14);

  double inv_rho = 0.0, inv_sigma = 0.0;
  for (double x : rho) inv_rho += 1.0 / x;
  for (double x : sigma) inv_sigma += 1.0 / x;
  const double lambda_rho = 1.0 / inv_rho, lambda_sigma = 1.0 / inv_sigma;
  const double c = std::sqrt(lambda_rho * lambda_sigma);

  auto rel = [](const ExtendedReal& v, double want) {
    return v.is_finite() ? std::abs(v.value() - want) / want : INFINITY;
  };
  const ExtendedReal ind1 = index_cp(e1, s.tol), ind2 = index_cp(e2, s.tol);
  r.check("index_e1", rel(ind1, inv_sigma), 1e-7);
  r.check("index_e2", rel(ind2, inv_rho), 1e-7);

  const CpMap g = mean_cp(MeanKind::geo(), e1, e2, mean_options(s));
  const Matrix cid_m = identity_map(n * n).choi().matrix();
  r.check("geo_equals_sqrt_lambda_id", max_abs(g.choi().matrix() - c * cid_m) / c, 1e-7);
  const ExtendedReal ind_g = index_cp(g, s.tol);
  r.check("index_geo_mean", rel(ind_g, std::sqrt(inv_rho * inv_sigma)), 1e-7);
  if (ind1.is_finite() && ind2.is_finite() && ind_g.is_finite())
    r.check("index_gm_bound",
            std::max(0.0, ind_g.value() - std::sqrt(ind1.value() * ind2.value())), 1e-7);
  r.outputs["lambda_rho"] = lambda_rho;
  r.outputs["lambda_sigma"] = lambda_sigma;
  r.outputs["geo_identity_multiple"] = identity_multiple(g);
  r.outputs["index_geo_mean"] = ind_g.as_double();
}

void run_rotation(const Params& p, const Settings& s, Report& r) {
  const double theta = p.real("theta");
  const double s2 = std::sin(2.0 * theta);
  const bool generic = std::abs(s2) > 1e-3;
  if (!generic && std::abs(s2) > 1e-8)
    throw DomainError("rotation: |sin 2θ| in (1e-8, 1e-3] is too close to the degenerate case");
  const CpMap e1 = cond_exp_diag(2), e2 = cond_exp_rotated(theta);
  const CpMap g = mean_cp(MeanKind::geo(), e1, e2, mean_options(s));
  if (generic) {
    r.check("geo_equals_half_id",
            max_abs(g.choi().matrix() - 0.5 * identity_map(2).choi().matrix()), 1e-7);
  } else {
    r.check("geo_equals_e1", max_abs(g.choi().matrix() - e1.choi().matrix()), 1e-8);
  }
  // Θ(a x b) = a Θ(x) b over the intersection algebra: scalars in the
  // generic case, diagonal matrices in the degenerate one.
  const Matrix a = generic ? Matrix(Complex(2.0, 0.0) * Matrix::Identity(2, 2)) : diag({2.0, -1.0});
  const Matrix b = generic ? Matrix(Complex(0.0, 1.0) * Matrix::Identity(2, 2)) : diag({0.5, 3.0});
  Matrix x(2, 2);
  x << 1.0, Complex(2.0, -1.0), 0.5, -2.0;
  r.check("bimodule_property",
          max_abs(apply_map(g, a * x * b) - a * apply_map(g, x) * b), 1e-10);
  r.outputs["sin_2theta"] = s2;
  r.outputs["geo_mean_choi"] = matrix_json(g.choi().matrix());
}

void run_kosaki_fidelity(const Params& p, const Settings& s, Report& r) {
  Matrix rho(2, 2), sigma(2, 2);
  rho << 0.7, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.3;
  sigma << 0.4, -0.1, -0.1, 0.6;
  const StateMeanQuantities q = state_mean_quantities({PsdMatrix(rho)}, {PsdMatrix(sigma)}, s.tol);
  r.check("gm_trace_le_sqrt_trace", std::max(0.0, q.gm_trace - q.sqrt_trace), 1e-9);
  r.check("sqrt_trace_le_fidelity", std::max(0.0, q.sqrt_trace - q.fidelity), 1e-9);
  r.check_flag("chain_strict_for_noncommuting", q.sqrt_trace - q.gm_trace > 1e-6 &&
                                                    q.fidelity - q.sqrt_trace > 1e-6);
  r.outputs["gm_trace"] = q.gm_trace;
  r.outputs["sqrt_trace"] = q.sqrt_trace;
  r.outputs["fidelity"] = q.fidelity;

  const StateMeanQuantities c =
      state_mean_quantities({PsdMatrix(diag({0.5, 0.5}))}, {PsdMatrix(diag({0.9, 0.1}))}, s.tol);
  const double want = std::sqrt(0.45) + std::sqrt(0.05);
  r.check("commuting_pair_all_equal",
          std::max({std::abs(c.gm_trace - want), std::abs(c.sqrt_trace - want),
                    std::abs(c.fidelity - want)}),
          1e-8);

  // rP # sQ = √(rs) (P ∧ Q) and rP ! sQ = 2rs/(r+s) (P ∧ Q).
  const double rr = p.real("r"), ss = p.real("s");
  if (!(rr > 0.0) || !(ss > 0.0)) throw DomainError("kosaki-fidelity: r and s must be positive");
  Matrix wp(3, 2), wq(3, 2);
  const double h = 1.0 / std::sqrt(2.0);
  wp << 1, 0, 0, 1, 0, 0;
  wq << 1, 0, 0, h, 0, h;
  const Projection pp = Projection::from_basis(wp, 3), pq = Projection::from_basis(wq, 3);
  const Matrix meet = proj_intersection(pp, pq).matrix();
  const PsdMatrix a = PsdMatrix::trusted(rr * pp.matrix()), b = PsdMatrix::trusted(ss * pq.matrix());
  r.check("projection_geo_mean",
          max_abs(geometric_mean(a, b, s.tol).matrix() - std::sqrt(rr * ss) * meet), 1e-8);
  r.check("projection_harm_mean",
          max_abs(harmonic_mean(a, b, s.tol).matrix() - (2.0 * rr * ss / (rr + ss)) * meet), 1e-8);
}

void run_ando_recovery(const Params&, const Settings& s, Report& r) {
  // Invertible pair: (Φ_A : Φ_B)(1) = (A^{-1} + B^{-1})^{-1}.
  Matrix a(3, 3), b(3, 3);
  a << 2.0, 1.0, 0.0, 1.0, 2.0, 0.5, 0.0, 0.5, 1.0;
  b << 1.0, Complex(0.0, 0.3), 0.0, Complex(0.0, -0.3), 2.0, 0.0, 0.0, 0.0, 0.5;
  const CpMap pa = scalar_embedding(a, s.tol), pb = scalar_embedding(b, s.tol);
  const CpMap par = mean_cp(MeanKind::parallel(), pa, pb, mean_options(s));
  const Matrix classical = (a.inverse() + b.inverse()).inverse();
  r.check("parallel_sum_classical", max_abs(apply_map(par, Matrix::Identity(1, 1)) - classical), 1e-9);

  // Singular A: [Φ_A]Φ_B(1) = [A]B, the shorted operator of B to ran A.
  Matrix a_sing(3, 3), b2(3, 3);
  a_sing << 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0;
  b2 << 2.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0;
  const CpMap phi = scalar_embedding(a_sing, s.tol), psi = scalar_embedding(b2, s.tol);
  const CpMap ac = ac_part(phi, psi, s.tol);
  const PsdMatrix pa_sing(a_sing), pb2(b2);
  const Matrix ando = shorted(pb2, support_projection(pa_sing, s.tol.rank_rtol), s.tol.rank_rtol).matrix();
  r.check("ac_part_is_shorted_operator", max_abs(ac.choi().matrix() - ando), 1e-8);
  const CpMap oracle = ac_part_oracle(phi, psi, std::ldexp(1.0, 20), INFINITY, s.tol);
  r.check("ac_part_matches_limit", max_abs(oracle.choi().matrix() - ac.choi().matrix()), 1e-5);
  r.outputs["ac_part"] = matrix_json(ac.choi().matrix());
}

}  // namespace

// ---------------------------------------------------------------------------

Params::Params(std::map<std::string, std::string> defaults, const std::vector<std::string>& overrides)
    : values_(std::move(defaults)) {
  for (const std::string& tok : overrides) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidInput("example parameters take the form key=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq);
    if (key == "θ") key = "theta";
    if (!values_.count(key)) throw InvalidInput("unknown example parameter '" + key + "'");
    values_[key] = tok.substr(eq + 1);
  }
}

const std::string& Params::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidInput("missing example parameter '" + key + "'");
  return it->second;
}

double Params::real(const std::string& key) const { return parse_real(raw(key), key); }

long Params::integer(const std::string& key) const {
  const std::string& text = raw(key);
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InvalidInput("parameter '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

std::vector<double> Params::reals(const std::string& key) const {
  const std::string& text = raw(key);
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_real(text.substr(start, comma - start), key));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::vector<Example>& example_registry() {
  static const std::vector<Example> registry = {
      {"non-unital", "identity # conjugation by diag(1,-1) on M_2 vanishes", {}, run_non_unital},
      {"states", "means of positive functionals follow their density matrices", {}, run_states},
      {"quantum-channels", "identity vs completely depolarizing channel on M_d", {{"d", "3"}},
       run_quantum_channels},
      {"schur-multiplier", "Schur multipliers: S_A # S_B = S_{A#B}", {}, run_schur},
      {"adjoint-maps", "conjugation maps x -> AxA* with commuting diagonal A, B",
       {{"a", "2,1"}, {"b", "1,2"}}, run_adjoint_maps},
      {"ce-tensor", "conditional expectations onto the factors of M_n ⊗ M_n",
       {{"rho", "0.75,0.25"}, {"sigma", "0.5,0.5"}}, run_ce_tensor},
      {"rotation", "diagonal conditional expectation vs its rotation by theta",
       {{"theta", "pi/4"}}, run_rotation},
      {"kosaki-fidelity", "trace chain Tr(ρ#σ) <= Tr(ρ^½σ^½) <= fidelity; projection means",
       {{"r", "2"}, {"s", "8"}}, run_kosaki_fidelity},
      {"ando-recovery", "maps C -> M_n recover the parallel sum and shorted operator", {},
       run_ando_recovery},
  };
  return registry;
}

const Example& find_example(const std::string& key) {
  for (const Example& ex : example_registry())
    if (ex.key == key) return ex;
  std::string known;
  for (const Example& ex : example_registry()) known += (known.empty() ? "" : ", ") + ex.key;
  throw UnknownExample("unknown example '" + key + "' (known: " + known + ")");
}

Report run_example(const Example& ex, const std::vector<std::string>& overrides, const Settings& s) {
  const Params params(ex.defaults, overrides);
  Report r;
  r.command = "example";
  r.inputs["name"] = ex.key;
  Json pj = Json::object();
  for (const auto& [k, v] : params.values()) pj[k] = v;
  r.inputs["params"] = pj;
  r.outputs["summary"] = ex.summary;
  ex.run(params, s, r);
  return r;
}

}  // namespace cpmean::cli
