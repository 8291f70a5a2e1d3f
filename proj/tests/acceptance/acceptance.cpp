// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cpmean/cli/channel_doc.hpp"
#include "cpmean/cpmaps.hpp"
#include "cpmean/errors.hpp"
#include "cpmean/lebesgue.hpp"
#include "cpmean/opmeans.hpp"
#include "cpmean/zoo.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cpmean;
namespace fs = std::filesystem;

namespace {

// Collects the worst observed value against a bound and any hard failures.
struct Tally {
  std::ostringstream notes;
  bool pass = true;
  double worst = 0.0;

  void within(const std::string& what, double value, double bound) {
    worst = std::max(worst, value / bound);
    if (!(value <= bound)) {
      pass = false;
      if (notes.tellp() < 400) notes << what << ": " << value << " > " << bound << "; ";
    }
  }
  void require(const std::string& what, bool ok) {
    if (!ok) {
      pass = false;
      if (notes.tellp() < 400) notes << what << "; ";
    }
  }
};

double negativity(const Matrix& m) { return std::max(0.0, -oracle::min_eig(m)); }

double choi_scale(const CpMap& a, const CpMap& b) { return std::max({1.0, a.choi().norm(), b.choi().norm()}); }

Matrix diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

CpMap geo(const CpMap& a, const CpMap& b) { return mean_cp(MeanKind::geo(), a, b); }

int run_shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

void quantum_channels(Tally& t) {
  for (Index d = 2; d <= 4; ++d) {
    const double dd = static_cast<double>(d);
    const Matrix cid = identity_map(d).choi().matrix();
    t.within("id#Δ d=" + std::to_string(d), max_abs(geo(identity_map(d), depolarizing(d)).choi().matrix() - cid / dd), 1e-8);
    const CpMap h = mean_cp(MeanKind::harm(), identity_map(d), depolarizing(d));
    t.within("id!Δ d=" + std::to_string(d), max_abs(h.choi().matrix() - (2.0 / (dd * dd + 1.0)) * cid), 1e-8);
  }
}

void schur_multiplier(Tally& t) {
  testgen::Rng rng(1002);
  for (int k = 0; k < 20; ++k) {
    const Matrix a = testgen::psd_of_rank(rng, 3, testgen::uniform_int(rng, 1, 3));
    const Matrix b = testgen::psd_of_rank(rng, 3, testgen::uniform_int(rng, 1, 3));
    const Matrix ab = geometric_mean(PsdMatrix::trusted(a), PsdMatrix::trusted(b)).matrix();
    const Matrix lhs = geo(schur(a), schur(b)).choi().matrix();
    t.within("S_A#S_B vs S_{A#B}", oracle::norm2(lhs - schur(hermitian_part(ab)).choi().matrix()), 1e-7);
  }
}

void vanishing_means(Tally& t) {
  const CpMap psi_a = conjugation(diag({2.0, 1.0})), psi_b = conjugation(diag({1.0, 2.0}));
  t.within("Ψ_A#Ψ_B", oracle::norm2(geo(psi_a, psi_b).choi().matrix()), 1e-8);
  const CpMap flip = conjugation(diag({1.0, -1.0}));
  t.within("id#conj(diag(1,-1))", oracle::norm2(geo(identity_map(2), flip).choi().matrix()), 1e-8);
}

void ce_tensor(Tally& t) {
  const CpMap e1 = cond_exp_tensor(1, {0.75, 0.25});
  const CpMap e2 = cond_exp_tensor(2, {0.5, 0.5});
  const double lambda_rho = 1.0 / (4.0 / 3.0 + 4.0), lambda_sigma = 0.25;
  t.require("λ_ρ = 3/16", std::abs(lambda_rho - 3.0 / 16.0) < 1e-15);
  const CpMap g = geo(e1, e2);
  t.within("Ẽ₁#Ẽ₂ = √(λ_ρλ_σ) id",
           max_abs(g.choi().matrix() - std::sqrt(lambda_rho * lambda_sigma) * identity_map(4).choi().matrix()), 1e-7);
  const ExtendedReal ind = index_cp(g);
  const double expected = std::sqrt((16.0 / 3.0) * 4.0);
  t.require("index finite", ind.is_finite());
  if (ind.is_finite()) t.within("Ind_cp relative error", std::abs(ind.value() - expected) / expected, 1e-7);
}

void rotation(Tally& t) {
  const CpMap e1 = cond_exp_diag(2);
  const Matrix half_id = identity_map(2).choi().matrix() / 2.0;
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, 1.0})
    t.within("θ=" + std::to_string(theta), max_abs(geo(e1, cond_exp_rotated(theta)).choi().matrix() - half_id), 1e-7);
  for (double theta : {0.0, std::numbers::pi / 2})
    t.within("θ=" + std::to_string(theta), max_abs(geo(e1, cond_exp_rotated(theta)).choi().matrix() - e1.choi().matrix()), 1e-8);
}

void am_gm_hm(Tally& t) {
  testgen::Rng rng(1006);
  auto check_pair = [&t](const CpMap& phi, const CpMap& psi) {
    const double s = choi_scale(phi, psi);
    const Matrix h = mean_cp(MeanKind::harm(), phi, psi).choi().matrix();
    const Matrix g = geo(phi, psi).choi().matrix();
    const Matrix a = mean_cp(MeanKind::arith(), phi, psi).choi().matrix();
    t.within("G - H min eig", negativity(g - h), 1e-7 * s);
    t.within("A - G min eig", negativity(a - g), 1e-7 * s);
    const bool triggered = oracle::norm2(a - g) <= 1e-7 * s;
    const double gap = oracle::norm2(phi.choi().matrix() - psi.choi().matrix());
    if (triggered) t.within("equality diagnostic", gap, 1e-6);
    return triggered;
  };
  for (int k = 0; k < 200; ++k) {
    const Index m = testgen::uniform_int(rng, 1, 3), n = testgen::uniform_int(rng, 1, 3);
    check_pair(testgen::cp_map_any(rng, m, n), testgen::cp_map_any(rng, m, n));
  }
  // The diagnostic must fire on equal pairs.
  for (int k = 0; k < 10; ++k) {
    const CpMap phi = testgen::cp_map_any(rng, 2, 2);
    t.require("diagnostic fires for Φ = Ψ", check_pair(phi, phi));
  }
}

void kubo_ando(Tally& t) {
  testgen::Rng rng(1007);
  for (const MeanKind& kind : {MeanKind::geo(), MeanKind::parallel()}) {
    const std::string tag = kind.name() + " ";
    auto m = [&kind](const CpMap& a, const CpMap& b) { return mean_cp(kind, a, b); };
    for (int k = 0; k < 100; ++k) {
      const Index d_in = testgen::uniform_int(rng, 1, 2), d_out = testgen::uniform_int(rng, 1, 2);
      const CpMap phi1 = testgen::cp_map_any(rng, d_in, d_out), psi1 = testgen::cp_map_any(rng, d_in, d_out);
      const CpMap phi2 = add(phi1, testgen::cp_map_any(rng, d_in, d_out));
      const CpMap psi2 = add(psi1, testgen::cp_map_any(rng, d_in, d_out));
      const double s = choi_scale(phi2, psi2);
      const CpMap m1 = m(phi1, psi1);

      // Monotonicity.
      t.within(tag + "monotone", negativity(m(phi2, psi2).choi().matrix() - m1.choi().matrix()), 1e-7 * s);
      // Concavity.
      const CpMap phi3 = testgen::cp_map_any(rng, d_in, d_out), psi3 = testgen::cp_map_any(rng, d_in, d_out);
      const Matrix sum_of_means = m1.choi().matrix() + m(phi3, psi3).choi().matrix();
      t.within(tag + "concave", negativity(m(add(phi1, phi3), add(psi1, psi3)).choi().matrix() - sum_of_means), 1e-7 * s);
      // Composition on either side.
      const CpMap xi = testgen::cp_map_any(rng, d_out, testgen::uniform_int(rng, 1, 2));
      const CpMap zeta = testgen::cp_map_any(rng, testgen::uniform_int(rng, 1, 2), d_in);
      const double sx = std::max(s, 1.0) * std::max(1.0, xi.choi().norm()) * std::max(1.0, zeta.choi().norm());
      t.within(tag + "Ξ∘m", negativity(m(compose(xi, phi1), compose(xi, psi1)).choi().matrix() - compose(xi, m1).choi().matrix()), 1e-7 * sx);
      t.within(tag + "m∘Ξ", negativity(m(compose(phi1, zeta), compose(psi1, zeta)).choi().matrix() - compose(m1, zeta).choi().matrix()), 1e-7 * sx);
      // Automorphisms.
      const CpMap u = unitary_conj(testgen::unitary(rng, d_out)), v = unitary_conj(testgen::unitary(rng, d_in));
      const Matrix lhs = compose(u, compose(m1, v)).choi().matrix();
      const Matrix rhs = m(compose(u, compose(phi1, v)), compose(u, compose(psi1, v))).choi().matrix();
      t.within(tag + "automorphism", oracle::norm2(lhs - rhs), 1e-7 * s);
    }
  }
}

void connection_engine(Tally& t) {
  testgen::Rng rng(1008);
  for (int i = 1; i <= 9; ++i) {
    const double alpha = 0.1 * i;
    const ConnectionRep rep = power_rep(alpha, 64);
    for (int k = 0; k < 10; ++k) {
      const double a = std::exp(testgen::uniform(rng, -2.0, 2.0)), b = std::exp(testgen::uniform(rng, -2.0, 2.0));
      const PsdMatrix pa = PsdMatrix::trusted(Matrix::Constant(1, 1, a)), pb = PsdMatrix::trusted(Matrix::Constant(1, 1, b));
      const double closed = std::pow(a, 1.0 - alpha) * std::pow(b, alpha);
      t.within("scalar α=" + std::to_string(alpha), std::abs(connection_apply(rep, pa, pb).matrix()(0, 0).real() - closed), 1e-5 * std::max(1.0, closed));
      const PsdMatrix ma = testgen::psd_invertible(rng, 3), mb = testgen::psd_invertible(rng, 3);
      t.within("M3 α=" + std::to_string(alpha),
               max_abs(connection_apply(rep, ma, mb).matrix() - power_mean(ma, mb, alpha).matrix()), 1e-5);
    }
  }
  const ConnectionRep arith_adj = adjoint_rep(arithmetic_rep());
  const ConnectionRep geo_rep = power_rep(0.5, 64);
  const ConnectionRep geo_adj = adjoint_rep(geo_rep), geo_dual = dual_rep(geo_rep);
  for (double x : transform_test_grid()) {
    t.within("∇* = !", std::abs(arith_adj.evaluate(x) - 2.0 * x / (1.0 + x)), 1e-5);
    t.within("#* = #", std::abs(geo_adj.evaluate(x) - std::sqrt(x)), 1e-5);
    t.within("#⊥ = #", std::abs(geo_dual.evaluate(x) - std::sqrt(x)), 1e-5);
  }
  for (int k = 0; k < 20; ++k) {
    const double alpha = testgen::uniform(rng, 0.05, 0.95);
    const PsdMatrix a1 = testgen::psd_any_rank(rng, 2), b1 = testgen::psd_any_rank(rng, 2);
    const PsdMatrix a2 = testgen::psd_any_rank(rng, 2), b2 = testgen::psd_any_rank(rng, 2);
    const Matrix lhs = power_mean(PsdMatrix::trusted(kron(a1.matrix(), a2.matrix())),
                                  PsdMatrix::trusted(kron(b1.matrix(), b2.matrix())), alpha).matrix();
    const Matrix rhs = kron(power_mean(a1, b1, alpha).matrix(), power_mean(a2, b2, alpha).matrix());
    t.within("tensor multiplicativity", max_abs(lhs - rhs), 1e-6);
  }
}

void lebesgue_suite(Tally& t) {
  testgen::Rng rng(1009);
  for (int k = 0; k < 100; ++k) {
    const oracle::PlantedPair p = oracle::planted_pair(rng);
    const LebesgueSplit s = decompose(p.phi, p.psi);
    const Matrix& c_phi = p.phi.choi().matrix();
    const Matrix& c_ac = s.ac.choi().matrix();
    const double sp = std::max(1.0, p.psi.choi().norm());

    t.within("additivity", max_abs(c_ac + s.sing.choi().matrix() - p.psi.choi().matrix()), 1e-9 * sp);
    const CpMap lim = ac_part_oracle(p.phi, p.psi, std::ldexp(1.0, 20), INFINITY);
    t.within("oracle 2^20", oracle::norm2(lim.choi().matrix() - c_ac), 1e-5 * sp);
    t.within("sing ⊥ Φ", parallel_sum(p.phi.choi(), s.sing.choi()).norm(), 1e-8);
    if (p.ac) t.within("planted ac", max_abs(c_ac - *p.ac), 1e-8);

    // Competitors: the largest part of C_Ψ on a random subspace of ran C_Φ,
    // or a random fraction of a dominated piece.
    const Projection range = support_projection(p.phi.choi());
    for (int c = 0; c < 20; ++c) {
      const Index r = testgen::uniform_int(rng, 1, range.rank());
      const Matrix basis = range.basis() * testgen::subspace(rng, range.rank(), r);
      Matrix theta = shorted(p.psi.choi(), Projection::from_basis(basis, c_phi.rows())).matrix();
      if (c % 2) theta *= testgen::uniform(rng, 0.2, 1.0);
      t.require("competitor dominated by Ψ", negativity(p.psi.choi().matrix() - theta) <= 1e-9 * sp);
      t.within("maximality", negativity(c_ac - theta), 1e-8 * sp);
    }

    t.require("alpha_min finite", s.alpha_min.is_finite());
    if (!s.alpha_min.is_finite()) continue;
    const double alpha = s.alpha_min.value();
    t.within("C_ac <= α C_Φ", negativity(alpha * c_phi - c_ac), 1e-9 * sp);
    if (alpha > 1e-8) t.require("α minimal", oracle::min_eig(alpha * (1.0 - 1e-6) * c_phi - c_ac) < 0.0);
  }
}

void ando_recovery(Tally& t) {
  testgen::Rng rng(1010);
  for (int k = 0; k < 50; ++k) {
    const Matrix a = testgen::psd_of_rank(rng, 4, testgen::uniform_int(rng, 1, 4));
    const Matrix b = testgen::psd_of_rank(rng, 4, testgen::uniform_int(rng, 1, 4));
    const CpMap pa = scalar_embedding(a), pb = scalar_embedding(b);
    t.within("ac vs RN compression", max_abs(ac_part(pa, pb).choi().matrix() - oracle::rn_compression(a, b)), 1e-6);
    t.within("parallel sum vs A(A+B)^+B", max_abs(parallel_sum(pa.choi(), pb.choi()).matrix() - oracle::parallel_sum(a, b)), 1e-9);
  }
}

void fidelity_chain(Tally& t) {
  testgen::Rng rng(1011);
  for (int k = 0; k < 100; ++k) {
    const Index n = testgen::uniform_int(rng, 2, 3);
    const Matrix rho = testgen::density(rng, n, testgen::uniform_int(rng, 1, n));
    const Matrix sigma = testgen::density(rng, n, testgen::uniform_int(rng, 1, n));
    const StateMeanQuantities q = state_mean_quantities({PsdMatrix(rho)}, {PsdMatrix(sigma)});
    t.within("gm <= sqrt", std::max(0.0, q.gm_trace - q.sqrt_trace), 1e-9);
    t.within("sqrt <= fidelity", std::max(0.0, q.sqrt_trace - q.fidelity), 1e-9);
  }
  for (int k = 0; k < 20; ++k) {
    const Index n = testgen::uniform_int(rng, 2, 3);
    const Matrix u = testgen::unitary(rng, n);
    auto spectrum_state = [&] {
      Eigen::VectorXd d(n);
      for (Index i = 0; i < n; ++i) d(i) = testgen::uniform(rng, 0.0, 1.0);
      d /= d.sum();
      return Matrix(u * d.cast<Complex>().asDiagonal() * u.adjoint());
    };
    const Matrix rho = hermitian_part(spectrum_state()), sigma = hermitian_part(spectrum_state());
    const StateMeanQuantities q = state_mean_quantities({PsdMatrix(rho)}, {PsdMatrix(sigma)});
    t.within("commuting gm = sqrt", std::abs(q.gm_trace - q.sqrt_trace), 1e-8);
    t.within("commuting sqrt = fidelity", std::abs(q.sqrt_trace - q.fidelity), 1e-8);
  }
}

void cli_contract(Tally& t) {
  const std::string bin = std::string("'") + CPMEAN_BINARY + "'";
  t.require("example --all exits 0", run_shell(bin + " example --all") == 0);

  const fs::path dir = fs::temp_directory_path() / ("cpmean_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  testgen::Rng rng(1012);
  for (int k = 0; k < 20; ++k) {
    const CpMap map = testgen::cp_map_any(rng, testgen::uniform_int(rng, 1, 3), testgen::uniform_int(rng, 1, 3));
    const std::string path = (dir / ("m" + std::to_string(k) + ".json")).string();
    cli::save_channel(map, path);
    const Matrix back = cli::load_channel(path).choi().matrix();
    bool same = back.rows() == map.choi().dim();
    for (Index i = 0; same && i < back.size(); ++i) {
      const Complex x = back.data()[i], y = map.choi().matrix().data()[i];
      same = std::bit_cast<std::uint64_t>(x.real()) == std::bit_cast<std::uint64_t>(y.real()) &&
             std::bit_cast<std::uint64_t>(x.imag()) == std::bit_cast<std::uint64_t>(y.imag());
    }
    t.require("bit-exact round trip " + std::to_string(k), same);
  }
  // -o from the binary goes through the same writer.
  const std::string id2 = std::string(CPMEAN_FIXTURE_DIR) + "/valid/id2.json";
  const std::string out = (dir / "mean.json").string();
  t.require("mean -o", run_shell(bin + " mean --kind geo '" + id2 + "' '" + id2 + "' -o '" + out + "'") == 0);
  t.require("mean -o reloads", max_abs(cli::load_channel(out).choi().matrix() - identity_map(2).choi().matrix()) <= 1e-12);
  fs::remove_all(dir);

  int malformed = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(CPMEAN_FIXTURE_DIR) / "malformed")) {
    ++malformed;
    const int code = run_shell(bin + " verify '" + entry.path().string() + "'");
    t.require(entry.path().filename().string() + " exits 2 (got " + std::to_string(code) + ")", code == 2);
  }
  t.require("malformed fixtures present", malformed > 0);
}

struct Criterion {
  int id;
  std::string title;
  std::function<void(Tally&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "quantum channels: id#Δ and id!Δ", quantum_channels},
      {2, "Schur multipliers: S_A#S_B = S_{A#B}", schur_multiplier},
      {3, "vanishing means: adjoint maps and non-unital pair", vanishing_means},
      {4, "tensor conditional expectations: mean and index", ce_tensor},
      {5, "rotated conditional expectations", rotation},
      {6, "AM-GM-HM chain and equality diagnostic (200 pairs)", am_gm_hm},
      {7, "Kubo-Ando structure: monotone, concave, composition, automorphisms", kubo_ando},
      {8, "connection engine: power reps, transforms, tensor multiplicativity", connection_engine},
      {9, "Lebesgue decomposition suite (100 planted pairs)", lebesgue_suite},
      {10, "Ando recovery for maps C -> M_4", ando_recovery},
      {11, "fidelity chain", fidelity_chain},
      {12, "CLI contract: --all, round trip, malformed fixtures", cli_contract},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      t.pass = false;
      t.notes << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 5.0) {
      t.pass = false;
      t.notes << "took " << secs << " s (budget 5 s)";
    }
    std::printf("%s criterion %2d: %s [%.2fs, worst %.2g of bound]%s%s\n", t.pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), secs, t.worst, t.pass ? "" : " -- ", t.notes.str().c_str());
    if (!t.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
