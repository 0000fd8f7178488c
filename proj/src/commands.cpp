#include "commands.hpp"

#include <algorithm>
#include <sstream>

#include "identity.hpp"

namespace crdeg {

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::invalid_input:
    case Errc::context_mismatch:
    case Errc::order_mismatch:
      return exit_input;
    case Errc::hypothesis:
    case Errc::order_exhausted:
    case Errc::precision:
    case Errc::singular:
      return exit_hypothesis;
    case Errc::internal:
      break;
  }
  return exit_internal;
}

namespace {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::context_mismatch: return "context_mismatch";
    case Errc::order_mismatch: return "order_mismatch";
    case Errc::order_exhausted: return "order_exhausted";
    case Errc::precision: return "precision";
    case Errc::singular: return "singular";
    case Errc::hypothesis: return "hypothesis";
    case Errc::invalid_input: return "invalid_input";
    case Errc::internal: return "internal";
  }
  return "internal";
}

json mat_json(const Mat& m) {
  json a = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& x : r) row.push_back(gq_json(x));
    a.push_back(row);
  }
  return a;
}

json vec_json(const std::vector<GQ>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(gq_json(x));
  return a;
}

json series_list(const std::vector<Series>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(series_json(s));
  return a;
}

bool all_zero(const std::vector<Series>& v) {
  return std::all_of(v.begin(), v.end(), [](const Series& s) { return s.is_zero(); });
}

const FormalMap& need_map(const ProblemFile& p, const std::string& cmd) {
  if (!p.map) throw Error(Errc::invalid_input, "map required: command '" + cmd + "' needs a \"map\" block");
  return *p.map;
}

const char* verdict_name(Constancy::Verdict v) {
  switch (v) {
    case Constancy::constant: return "constant";
    case Constancy::non_constant: return "non_constant";
    case Constancy::inconclusive: break;
  }
  return "inconclusive";
}

json manifold_json(const Manifold& M) {
  json j;
  j["n"] = M.n();
  j["d"] = M.d();
  j["N"] = M.N();
  j["order"] = M.order();
  j["polynomial"] = M.polynomial();
  j["real"] = M.real() ? json(*M.real()) : json("undetermined");
  LeviData L = levi_data(M);
  json B = json::array();
  for (const auto& b : L.B) B.push_back(mat_json(b));
  j["levi"] = {{"matrices", B}, {"nondegenerate", L.nondegenerate}, {"epsilon_normalized", L.epsilon_normalized}};
  if (L.epsilon_normalized) j["levi"]["eps"] = L.eps;
  return j;
}

json constancy_json(const Constancy& c, int order) {
  json j;
  j["verdict"] = verdict_name(c.verdict);
  j["order"] = order;
  j["symbolic"] = {{"checked", c.symbolic_checked}, {"constant", c.symbolic_constant}, {"minors", c.minors_checked},
                   {"pivots", c.pivots}};
  if (c.witness)
    j["symbolic"]["witness"] = {{"alpha", c.witness->row.alpha}, {"l", c.witness->row.l},
                                {"column", c.witness->column}, {"minor", series_json(c.witness->reduced)}};
  if (c.sampled) {
    json pts = json::array();
    for (size_t i = 0; i < c.points.size(); ++i) pts.push_back({{"point", vec_json(c.points[i])}, {"s", c.s_at_points[i]}});
    j["sampled"] = {{"points", pts}, {"probe", "seeded rational points; a probe, not a proof"}};
    if (c.point_witness) j["sampled"]["witness"] = *c.point_witness;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json report_json(const DegeneracyReport& r) {
  json j;
  j["dims"] = r.dims;
  j["k0"] = r.k0;
  j["s"] = r.s;
  j["k_max"] = r.k_max;
  j["certified"] = r.certified;
  j["certificate"] = r.certificate;
  json rows = json::array();
  for (const auto& b : r.basis) rows.push_back({{"alpha", b.alpha}, {"l", b.l}});
  j["basis"] = rows;
  return j;
}

json holvf_json(const HolVF& h, int s) {
  json vals = json::array();
  for (const auto& v : h.values_at_0) vals.push_back(vec_json(v));
  return {{"jet_order", h.jet_order}, {"unknowns", h.unknowns}, {"equations", h.equations}, {"dim", h.dim},
          {"dim0", h.dim0}, {"values_at_0", vals}, {"dim0_le_s", h.dim0 <= s}, {"dim0_eq_s", h.dim0 == s}};
}

json bounds_json(const std::vector<Diagnostic>& d) {
  json a = json::array();
  for (const auto& x : d) a.push_back({{"name", x.name}, {"status", x.status}, {"detail", x.detail}});
  return a;
}

AnalysisOptions analysis_options(const ProblemFile& p) {
  AnalysisOptions o;
  if (p.options.k_max) o.k_max = *p.options.k_max;
  if (p.options.jet_order) o.jet_order = *p.options.jet_order;
  o.sampling.count = p.options.samples;
  o.sampling.seed = p.options.seed;
  o.sampling.points = p.options.points;
  return o;
}

std::string summary_line(const std::string& cmd, const std::string& s) { return cmd + ": " + s; }

json cmd_check(const ProblemFile& p) {
  json j;
  j["source"] = manifold_json(*p.source);
  j["target"] = manifold_json(*p.target);
  std::string summary = "manifolds valid";
  if (p.map) {
    const FormalMap& H = *p.map;
    json m;
    m["order"] = H.order();
    m["polynomial"] = H.polynomial();
    MapsIntoResult mi = check_maps_into(H);
    m["maps_into"] = {{"ok", mi.ok}, {"order", mi.order}, {"residuals", series_list(mi.residuals)}};
    Transversality tr = transversality_check(H);
    m["transversality"] = {{"gw", mat_json(tr.gw)}, {"rank", tr.rank}, {"transversal", tr.transversal}};
    m["jacobian_at_0"] = mat_json(jacobian_at_0(H));
    if (H.source().d() == 1 && H.target().d() == 1) {
      LeviPullback lp = levi_pullback_check(H);
      json l = {{"holds", lp.holds}, {"lhs", mat_json(lp.lhs)}, {"rhs", mat_json(lp.rhs)},
                {"jacobian_rank", lp.jacobian_rank}};
      if (lp.immersive) l["immersive"] = *lp.immersive;
      if (!lp.note.empty()) l["note"] = lp.note;
      m["levi_pullback"] = l;
    }
    j["map"] = m;
    summary = std::string("map ") + (mi.ok ? "maps into the target" : "does NOT map into the target") + ", " +
              (tr.transversal ? "transversal" : "not transversal");
  }
  j["summary"] = summary_line("check", summary);
  return j;
}

json cmd_degeneracy(const ProblemFile& p, bool sample) {
  const FormalMap& H = need_map(p, "degeneracy");
  AnalysisOptions o = analysis_options(p);
  o.sample = sample;
  DegeneracyAnalysis A = analyze_degeneracy(H, o);
  const DegeneracyReport& r = A.report;
  json j = report_json(r);
  j["constancy"] = constancy_json(r.constancy, r.order);
  if (A.holvf) j["holvf"] = holvf_json(*A.holvf, r.s);
  j["bounds"] = bounds_json(A.bounds);
  std::ostringstream s;
  s << "k0=" << r.k0 << " s=" << r.s << " " << verdict_name(r.constancy.verdict)
    << (r.certified ? " (certified)" : " (valid up to k_max = " + std::to_string(r.k_max) + ")");
  j["summary"] = summary_line("degeneracy", s.str());
  return j;
}

json cmd_constancy(const ProblemFile& p) {
  const FormalMap& H = need_map(p, "constancy");
  AnalysisOptions o = analysis_options(p);
  o.holvf = false;
  o.sample = H.polynomial() && H.source().polynomial() && H.target().polynomial();
  DegeneracyAnalysis A = analyze_degeneracy(H, o);
  const DegeneracyReport& r = A.report;
  json j;
  j["k0"] = r.k0;
  j["s"] = r.s;
  j["constancy"] = constancy_json(r.constancy, r.order);
  if (!o.sample) j["constancy"]["sampling"] = "skipped: sampling needs polynomial source, target and map";
  if (r.constancy.verdict == Constancy::constant && r.s > 0) {
    int km = o.k_max >= 0 ? o.k_max : default_kmax(H);
    try {
      DeltaSystem D = delta_system(H, degeneracy_rows(H, km), r);
      json dm = json::array();
      for (const auto& row : D.Delta_mk0) dm.push_back(vec_json(row));
      j["delta"] = {{"pivots", D.pivots}, {"others", D.others}, {"Delta", series_json(D.Delta)},
                    {"Delta0", gq_json(D.Delta0)}, {"Delta_mk0", dm}, {"relations_hold", D.relations_hold},
                    {"relations_checked", D.relations_checked}, {"order", D.order}};
    } catch (const Error& e) {
      if (e.code() != Errc::hypothesis) throw;
      j["delta"] = {{"inconsistent", e.what()}};
    }
  }
  j["summary"] = summary_line("constancy", std::string(verdict_name(r.constancy.verdict)) + " (s=" +
                                               std::to_string(r.s) + ", to order " + std::to_string(r.order) + ")");
  return j;
}

json cmd_holvf(const ProblemFile& p) {
  const FormalMap& H = need_map(p, "holvf");
  AnalysisOptions o = analysis_options(p);
  o.probe = false;
  DegeneracyAnalysis A = analyze_degeneracy(H, o);
  json j = holvf_json(*A.holvf, A.report.s);
  j["s"] = A.report.s;
  j["summary"] = summary_line("holvf", "dim X(0) = " + std::to_string(A.holvf->dim0) + ", s = " + std::to_string(A.report.s));
  return j;
}

json cmd_segre(const ProblemFile& p) {
  const Manifold& M = *p.source;
  json levels = json::array();
  bool ok = true;
  for (int k = 0; k <= p.options.levels; ++k) {
    SegreVanishing v = segre_vanishing(M, k);
    ok = ok && v.ok;
    json l = {{"k", k}, {"vanishes", v.ok}, {"order", v.order}};
    if (!v.ok) l["residuals"] = series_list(v.residuals);
    if (k >= 1) {
      SegreMap s = segre_map(M, k);
      json W = json::array();
      for (int j = M.n(); j < M.N(); ++j) W.push_back(s.v[j].str());
      l["w_part"] = W;
    }
    levels.push_back(l);
  }
  return {{"levels", levels}, {"all_vanish", ok},
          {"summary", summary_line("segre", std::string(ok ? "residuals vanish" : "NONZERO residual") + " for k <= " +
                                                 std::to_string(p.options.levels) + " to order " + std::to_string(M.order()))}};
}

json zero_point_json(const ZeroPoint& z) {
  return {{"level", z.level}, {"point", vec_json(z.point)}, {"jacobian", mat_json(z.jacobian)}, {"rank", z.rank}};
}

json cmd_finite_type(const ProblemFile& p) {
  FiniteTypeOptions o;
  o.levels = p.options.levels;
  o.trials = p.options.trials;
  o.seed = p.options.seed;
  FiniteType f = finite_type_test(*p.source, o);
  static const char* names[] = {"FINITE_TYPE", "NOT_FINITE_TYPE", "INCONCLUSIVE"};
  json j;
  j["verdict"] = names[f.verdict];
  j["k"] = f.k;
  j["order"] = f.order;
  j["levels_zero"] = f.levels_zero;
  if (f.verdict == FiniteType::finite_type) {
    j["columns"] = f.columns;
    j["minor"] = series_json(f.minor);
    if (f.point) j["point"] = vec_json(*f.point);
    if (f.coefficient) {
      json e = json::array();
      for (int v = 0; v < f.coefficient->nvars(); ++v) e.push_back((*f.coefficient)[v]);
      j["coefficient"] = e;
    }
    j["value"] = gq_json(f.value);
  }
  if (f.zero_point) j["zero_point"] = zero_point_json(*f.zero_point);
  j["note"] = f.note;
  std::string s = names[f.verdict];
  if (f.verdict != FiniteType::inconclusive) s += " (k=" + std::to_string(f.k) + ")";
  j["summary"] = summary_line("finite-type", s);
  return j;
}

json residuals_json(BasicIdentity& bi, const FormalMap& H, int max_abs, bool& all_ok) {
  json a = json::array();
  for (const auto& alpha : multiindices(H.source().N(), max_abs)) {
    auto r = bi.residual(H, alpha);
    bool z = all_zero(r);
    all_ok = all_ok && z;
    json e = {{"alpha", alpha}, {"zero", z}, {"order", min_order(r)}};
    if (!z) e["residual"] = series_list(r);
    a.push_back(e);
  }
  return a;
}

json cmd_basic_identity(const ProblemFile& p) {
  const FormalMap& H = need_map(p, "basic-identity");
  AnalysisOptions o = analysis_options(p);
  o.probe = o.holvf = false;
  DegeneracyAnalysis A = analyze_degeneracy(H, o);
  BasicIdentity bi = basic_identity(H, A.report, 1);
  json j;
  j["certificate"] = bi.certificate();
  bool ok = true;
  j["residuals"] = residuals_json(bi, H, 1, ok);
  j["tangency"] = all_zero(bi.s_field_tangency());
  UpsilonRecursion ur(bi);
  json ups = json::array();
  for (int k = 0; k <= 1; ++k)
    for (const auto& alpha : multiindices(H.source().N(), 1)) {
      if (UpsilonRecursion::kmax_needed(bi.k0(), k, multi_abs(alpha)) > bi.kmax()) continue;
      UpsilonCheck u = upsilon_check(ur, H, k, alpha);
      ok = ok && u.ok;
      ups.push_back({{"k", k}, {"alpha", alpha}, {"ok", u.ok}, {"order", u.order}});
    }
  j["upsilon"] = ups;
  j["summary"] = summary_line("basic-identity", std::string(ok ? "residuals zero" : "NONZERO residual") + " (k0=" +
                                                    std::to_string(bi.k0()) + ", det " + bi.det().str() + ")");
  return j;
}

json cmd_basic_identity_1deg(const ProblemFile& p) {
  const FormalMap& H = need_map(p, "basic-identity-1deg");
  BasicIdentity bi = basic_identity_1deg(H, 0);
  const OneDegData& od = *bi.one_deg_data();
  json j;
  j["certificate"] = bi.certificate();
  j["determinants"] = {{"D", gq_json(od.D)},
                       {"gw", gq_json(od.gw)},
                       {"cauchy_binet", gq_json(od.cauchy_binet)},
                       {"levi_det", gq_json(od.levi_det)},
                       {"cauchy_binet_matches_levi", od.cb_matches_levi},
                       {"D_is_pm_cauchy_binet", od.D_is_pm_cb},
                       {"last_variable_absent", od.xlast_absent},
                       {"upsilon_last_coefficient_zero", od.upsilon_xlast_zero}};
  j["Upsilon"] = series_json(od.Upsilon);
  bool ok = true;
  j["residuals"] = residuals_json(bi, H, 0, ok);
  j["summary"] = summary_line("basic-identity-1deg", std::string(ok ? "residual zero" : "NONZERO residual") + " (D = " +
                                                         od.D.str() + ", g_w(0) = " + od.gw.str() + ")");
  return j;
}

json cmd_jets(const ProblemFile& p, const ProblemFile* p2) {
  if (!p2) throw Error(Errc::invalid_input, "jets needs two problem files");
  const FormalMap& H1 = need_map(p, "jets");
  const FormalMap& H2 = need_map(*p2, "jets");
  JetDetermination::Mode mode = JetDetermination::nondeg;
  if (p.options.mode) {
    mode = *p.options.mode == "one_deg" ? JetDetermination::one_deg : JetDetermination::nondeg;
  } else {
    int km = std::min(default_kmax(H1), max_kmax(H1));
    if (degeneracy_at_origin(degeneracy_rows(H1, km)).s != 0) mode = JetDetermination::one_deg;
  }
  FiniteTypeOptions ft;
  ft.levels = p.options.levels;
  ft.trials = p.options.trials;
  ft.seed = p.options.seed;
  JetDetermination r = jet_determination_check(H1, H2, mode, ft);
  json j;
  j["mode"] = mode == JetDetermination::nondeg ? "nondeg" : "one_deg";
  j["maps_into"] = {r.maps_into_1, r.maps_into_2};
  j["k0"] = r.k0;
  j["k1"] = r.k1;
  j["threshold"] = r.threshold;
  j["jets_agree"] = r.jets_agree;
  std::string s;
  if (r.beta) {
    j["first_difference"] = {{"beta", *r.beta}, {"component", r.component}, {"order", r.first_order},
                             {"value1", gq_json(r.value1)}, {"value2", gq_json(r.value2)}};
    s = "jets differ at order " + std::to_string(r.first_order);
  } else if (r.jets_agree) {
    j["determined"] = r.determined;
    j["order"] = r.order;
    j["equal_through"] = r.equal_through;
    s = r.determined ? "determined; zero discrepancy through order " + std::to_string(r.equal_through)
                     : "jets agree but Segre images differ";
  } else {
    s = "not compared";
  }
  if (!r.note.empty()) j["note"] = r.note;
  j["summary"] = summary_line("jets", s);
  return j;
}

// text form: one line per scalar, series and numbers printed inline
void render_text(std::ostream& os, const std::string& key, const json& v, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  auto scalar = [](const json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_object() && x.size() == 2 && x.contains("c") && x.contains("ci"))
      return GQ::parse(x["c"].get<std::string>(), x["ci"].get<std::string>()).str();
    if (x.is_object() && x.contains("text")) return x["text"].get<std::string>() + "  [order " + x["order"].dump() + "]";
    return x.dump();
  };
  auto inline_ok = [&](const json& x) {
    return !x.is_structured() || (x.is_object() && ((x.size() == 2 && x.contains("c") && x.contains("ci")) || x.contains("text")));
  };
  if (inline_ok(v)) {
    os << pad << key << ": " << scalar(v) << "\n";
    return;
  }
  if (v.is_array()) {
    bool flat = std::all_of(v.begin(), v.end(), inline_ok);
    if (flat) {
      os << pad << key << ": [";
      for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
      os << "]\n";
      return;
    }
    os << pad << key << ":\n";
    for (size_t i = 0; i < v.size(); ++i) render_text(os, "- " + std::to_string(i), v[i], indent + 1);
    return;
  }
  os << pad << key << ":\n";
  for (const auto& [k, x] : v.items()) render_text(os, k, x, indent + 1);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"check",          "degeneracy",          "constancy",
                                                 "holvf",          "segre",               "finite-type",
                                                 "basic-identity", "basic-identity-1deg", "jets"};
  return names;
}

bool known_command(const std::string& cmd) {
  const auto& n = command_names();
  return std::find(n.begin(), n.end(), cmd) != n.end();
}

std::string Report::render(bool as_json) const {
  if (as_json) return body.dump(2) + "\n";
  std::ostringstream os;
  if (body.contains("error")) {
    os << "crdeg " << command << ": error (" << body["error"]["code"].get<std::string>()
       << "): " << body["error"]["message"].get<std::string>() << "\n";
    return os.str();
  }
  const json& r = body["result"];
  os << r["summary"].get<std::string>() << "\n";
  os << "order: " << body["order"] << "  seed: " << body["seed"] << "  version: " << body["version"].get<std::string>()
     << "\n";
  for (const auto& in : body["inputs"]) os << "input sha256: " << in.get<std::string>() << "\n";
  for (const auto& [k, v] : r.items())
    if (k != "summary") render_text(os, k, v, 0);
  return os.str();
}

namespace {

json header(const std::string& cmd, const json& inputs) {
  json j;
  j["schema"] = "crdeg/1";
  j["version"] = CRDEG_VERSION;
  j["command"] = cmd;
  j["inputs"] = inputs;
  return j;
}

}  // namespace

Report error_report(const std::string& cmd, int code, const std::string& message, const json& inputs) {
  Report r;
  r.command = cmd;
  r.exit_code = code;
  r.body = header(cmd, inputs);
  static const char* names[] = {"ok", "usage", "input", "hypothesis", "internal"};
  r.body["error"] = {{"code", names[code]}, {"message", message}};
  return r;
}

Report run_command(const std::string& cmd, const ProblemFile& p, const ProblemFile* p2) {
  json inputs = json::array({p.digest});
  if (p2) inputs.push_back(p2->digest);
  if (!known_command(cmd)) return error_report(cmd, exit_usage, "unknown command '" + cmd + "'", inputs);
  if (p2 && cmd != "jets") return error_report(cmd, exit_usage, "only 'jets' takes a second file", inputs);
  Report r;
  r.command = cmd;
  r.body = header(cmd, inputs);
  r.body["order"] = p.order;
  r.body["seed"] = p.options.seed;
  try {
    json res;
    if (cmd == "check") res = cmd_check(p);
    else if (cmd == "degeneracy") res = cmd_degeneracy(p, false);
    else if (cmd == "constancy") res = cmd_constancy(p);
    else if (cmd == "holvf") res = cmd_holvf(p);
    else if (cmd == "segre") res = cmd_segre(p);
    else if (cmd == "finite-type") res = cmd_finite_type(p);
    else if (cmd == "basic-identity") res = cmd_basic_identity(p);
    else if (cmd == "basic-identity-1deg") res = cmd_basic_identity_1deg(p);
    else res = cmd_jets(p, p2);
    r.body["result"] = res;
  } catch (const Error& e) {
    Report er = error_report(cmd, exit_code_for(e.code()), std::string(errc_name(e.code())) + ": " + e.what(), inputs);
    er.body["order"] = p.order;
    er.body["seed"] = p.options.seed;
    return er;
  } catch (const std::exception& e) {
    return error_report(cmd, exit_internal, e.what(), inputs);
  }
  return r;
}

Report run_files(const std::string& cmd, const std::vector<std::string>& paths, const Overrides& ov) {
  if (!known_command(cmd)) return error_report(cmd, exit_usage, "unknown command '" + cmd + "'");
  const size_t want = cmd == "jets" ? 2 : 1;
  if (paths.size() != want)
    return error_report(cmd, exit_usage, "'" + cmd + "' takes " + std::to_string(want) + " problem file(s)");
  std::vector<ProblemFile> ps;
  for (const auto& path : paths) {
    try {
      ps.push_back(parse_problem(path, ov));
    } catch (const Error& e) {
      return error_report(cmd, exit_code_for(e.code()), path + ": " + std::string(errc_name(e.code())) + ": " + e.what());
    } catch (const std::exception& e) {
      return error_report(cmd, exit_internal, path + ": " + e.what());
    }
  }
  return run_command(cmd, ps[0], ps.size() > 1 ? &ps[1] : nullptr);
}

}  // namespace crdeg
