#include "cpmean/cli/commands.hpp"

#include <cmath>

#include "cpmean/cli/channel_doc.hpp"
#include "cpmean/cli/registry.hpp"
#include "cpmean/cpmaps.hpp"
#include "cpmean/errors.hpp"
#include "cpmean/lebesgue.hpp"
#include "cpmean/opmeans.hpp"

namespace cpmean::cli {

namespace {

double min_eig(const Matrix& m) { return eigh(HermitianMatrix(m)).values(0); }

// Shortfall below zero of the smallest eigenvalue.
double negativity(const Matrix& m) { return std::max(0.0, -min_eig(m)); }

Json index_json(const ExtendedReal& v) {
  return v.is_finite() ? Json(v.value()) : Json("infinite");
}

void add_identity_multiple(const CpMap& m, Json& out) {
  if (m.dim_in() != m.dim_out()) return;
  const CpMap id = CpMap::from_kraus(m.dim_in(), m.dim_in(), {Matrix::Identity(m.dim_in(), m.dim_in())});
  const Matrix& cid = id.choi().matrix();
  const Complex c = (cid.adjoint() * m.choi().matrix()).trace() / (cid.adjoint() * cid).trace();
  if (max_abs(m.choi().matrix() - c * cid) <= 1e-9 * std::max(1.0, m.choi().norm()))
    out["identity_multiple"] = c.real();
}

}  // namespace

Report cmd_mean(const std::string& kind_text, const std::string& path_a, const std::string& path_b,
                const std::optional<std::string>& out_path, const Settings& s) {
  const MeanKind kind = MeanKind::parse(kind_text);
  const CpMap a = load_channel(path_a, s.tol);
  const CpMap b = load_channel(path_b, s.tol);
  const MeanOptions opts{s.tol, s.nodes, s.exec};
  const CpMap m = mean_cp(kind, a, b, opts);

  Report r;
  r.command = "mean";
  r.inputs["kind"] = kind.name();
  r.inputs["a"] = path_a;
  r.inputs["b"] = path_b;
  r.outputs["dim_in"] = m.dim_in();
  r.outputs["dim_out"] = m.dim_out();
  r.outputs["choi"] = matrix_json(m.choi().matrix());
  add_identity_multiple(m, r.outputs);

  const double scale = std::max({1.0, a.choi().norm(), b.choi().norm()});
  r.check("result_psd", negativity(m.choi().matrix()), s.tol.psd * scale);
  if (kind.tag == MeanTag::geo) {
    const Index n = m.choi().dim();
    Matrix block(2 * n, 2 * n);
    block << a.choi().matrix(), m.choi().matrix(), m.choi().matrix(), b.choi().matrix();
    r.check("block_certificate", negativity(block), s.tol.psd * scale);
  }
  const PsdMatrix h = harmonic_mean(a.choi(), b.choi(), s.tol);
  const PsdMatrix g = geometric_mean(a.choi(), b.choi(), s.tol);
  const PsdMatrix ar = arithmetic_mean(a.choi(), b.choi());
  const double chain_tol = s.tol.mean * scale;
  r.check("harm_le_geo", negativity(g.matrix() - h.matrix()), chain_tol);
  r.check("geo_le_arith", negativity(ar.matrix() - g.matrix()), chain_tol);

  if (out_path) {
    save_channel(m, *out_path, kind.name() + " mean");
    r.outputs["written"] = *out_path;
  }
  return r;
}

Report cmd_order(const std::string& path_a, const std::string& path_b, const Settings& s) {
  const CpMap a = load_channel(path_a, s.tol);
  const CpMap b = load_channel(path_b, s.tol);
  const CpOrder order = compare_cp(a, b, s.tol.psd);
  Report r;
  r.command = "order";
  r.inputs["a"] = path_a;
  r.inputs["b"] = path_b;
  r.inputs["tol_psd"] = s.tol.psd;
  r.outputs["relation"] = to_string(order);
  r.outputs["min_eig_b_minus_a"] = min_eig(b.choi().matrix() - a.choi().matrix());
  r.outputs["min_eig_a_minus_b"] = min_eig(a.choi().matrix() - b.choi().matrix());
  return r;
}

Report cmd_index(const std::string& path, const Settings& s) {
  const CpMap a = load_channel(path, s.tol);
  Report r;
  r.command = "index";
  r.inputs["map"] = path;
  r.outputs["index"] = index_json(index_cp(a, s.tol));
  return r;
}

Report cmd_verify(const std::string& path, const Settings& s) {
  const CpMap a = load_channel(path, s.tol);
  const ChannelFlags f = channel_flags(a, 1e-8, s.tol.psd);
  Report r;
  r.command = "verify";
  r.inputs["map"] = path;
  r.outputs["dim_in"] = a.dim_in();
  r.outputs["dim_out"] = a.dim_out();
  r.outputs["completely_positive"] = f.is_cp;
  r.outputs["unital"] = f.is_unital;
  r.outputs["trace_preserving"] = f.is_trace_preserving;
  r.outputs["min_choi_eigenvalue"] = f.min_choi_eigenvalue;
  r.outputs["unital_residual"] = f.unital_residual;
  r.outputs["trace_residual"] = f.trace_residual;
  r.outputs["flag_tolerance"] = f.tolerance;
  r.check("completely_positive", std::max(0.0, -f.min_choi_eigenvalue),
          scaled(s.tol.psd, a.choi().norm()));
  return r;
}

Report cmd_lebesgue(const std::string& path_phi, const std::string& path_psi,
                    const std::optional<std::string>& out_prefix, const Settings& s) {
  const CpMap phi = load_channel(path_phi, s.tol);
  const CpMap psi = load_channel(path_psi, s.tol);
  const LebesgueSplit split = decompose(phi, psi, s.tol);

  Report r;
  r.command = "lebesgue";
  r.inputs["phi"] = path_phi;
  r.inputs["psi"] = path_psi;
  r.outputs["alpha_min"] = index_json(split.alpha_min);
  r.outputs["ac_choi"] = matrix_json(split.ac.choi().matrix());
  r.outputs["sing_choi"] = matrix_json(split.sing.choi().matrix());

  const double scale = std::max(1.0, psi.choi().norm());
  r.check("additivity",
          max_abs(split.ac.choi().matrix() + split.sing.choi().matrix() - psi.choi().matrix()),
          1e-9 * scale);
  const double sing_overlap = parallel_sum(phi.choi(), split.sing.choi(), s.tol).norm();
  r.check("sing_singular_to_phi", sing_overlap, 1e-8 * std::max(scale, phi.choi().norm()));
  r.check_flag("ac_abs_continuous_to_phi", is_abs_continuous_rn(split.ac, phi, 1e-6, s.tol));
  const CpMap oracle = ac_part_oracle(phi, psi, std::ldexp(1.0, 20), INFINITY, s.tol);
  r.check("oracle_residual", spectral_norm(oracle.choi().matrix() - split.ac.choi().matrix()),
          1e-5 * scale);

  if (out_prefix) {
    save_channel(split.ac, *out_prefix + "_ac.json", "absolutely continuous part");
    save_channel(split.sing, *out_prefix + "_sing.json", "singular part");
    r.outputs["written"] = Json::array({*out_prefix + "_ac.json", *out_prefix + "_sing.json"});
  }
  return r;
}

Report cmd_example(const std::vector<std::string>& args, const Settings& s) {
  if (args.empty()) throw InvalidInput("example needs a name or --all");
  const Example& ex = find_example(args.front());
  return run_example(ex, std::vector<std::string>(args.begin() + 1, args.end()), s);
}

Report cmd_example_all(const Settings& s) {
  const auto& registry = example_registry();
  Settings inner = s;
  inner.exec = Exec::serial;
  std::vector<Report> reports = map_indexed<Report>(
      s.exec, static_cast<Index>(registry.size()), [&](Index k) {
        const Example& ex = registry[static_cast<std::size_t>(k)];
        try {
          return run_example(ex, {}, inner);
        } catch (const std::exception& e) {
          Report failed;
          failed.command = "example";
          failed.inputs["name"] = ex.key;
          failed.outputs["error"] = e.what();
          failed.check_flag("completed", false);
          return failed;
        }
      });

  Report all;
  all.command = "example";
  all.inputs["name"] = "--all";
  Json names = Json::array();
  for (std::size_t k = 0; k < registry.size(); ++k) {
    const std::string& key = registry[k].key;
    names.push_back(key);
    all.outputs[key] = reports[k].outputs;
    for (const Check& c : reports[k].checks) all.checks.push_back({key + "/" + c.name, c.pass, c.residual, c.tolerance});
  }
  all.inputs["examples"] = names;
  return all;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  return 3;
}

}  // namespace cpmean::cli
