#include "sbtheta/cli_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sbtheta/error.hpp"

namespace sbtheta {

namespace {

constexpr const char* kToolVersion = "sbtheta 1.0.0";

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, path + ": " + msg);
}

const json* find(const json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_error(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t seed_value(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    config_error(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) config_error(path, "must be positive");
  return v;
}

void dump_value(std::ostream& os, const json& j, int indent, int level) {
  const std::string pad(indent > 0 ? indent * (level + 1) : 0, ' ');
  const std::string close_pad(indent > 0 ? indent * level : 0, ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_value(os, it.value(), indent, level + 1);
      }
      os << nl << close_pad << "}";
      return;
    }
    case json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_primitive(); });
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump_value(os, j[i], indent, level + 1);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << "," << nl;
        os << pad;
        dump_value(os, j[i], indent, level + 1);
      }
      os << nl << close_pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

CurveSpec make_spec(const RunConfig& cfg) {
  CurveSpec spec = validate_spec(cfg.branch_points, cfg.g_sign);
  if (cfg.pairing) spec = spec.with_cuts(build_cuts(spec, &*cfg.pairing));
  return spec;
}

QuadOptions quad_options(const RunConfig& cfg) {
  QuadOptions q;
  q.rel_tol = cfg.tol_quadrature;
  return q;
}

json matrix_json(const CMat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json vector_json(const CVec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json curve_json(const CurveSpec& spec) {
  json j;
  j["genus"] = spec.genus();
  j["g_sign"] = spec.g_sign();
  j["g_top"] = to_json(spec.g_top());
  j["branch_points"] = json::array();
  for (const cplx& e : spec.branch_points()) j["branch_points"].push_back(to_json(e));
  j["cuts"] = json::array();
  for (const Cut& c : spec.cuts()) j["cuts"].push_back({c.first, c.second});
  return j;
}

void emit(const json& doc, const std::string& human, const CommandOptions& opt,
          const RunConfig* cfg, std::ostream& out) {
  std::string path = opt.out_path;
  if (path.empty() && cfg) path = cfg->output_path;
  if (path.empty()) {
    out << dump_json(doc) << "\n";
    std::cerr << human;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ConfigError, "output.path: cannot open " + path);
  f << dump_json(doc) << "\n";
  out << human;
}

std::string format_of(const RunConfig& cfg, const CommandOptions& opt) {
  const std::string f = opt.format.empty() ? cfg.format : opt.format;
  if (f != "json" && f != "csv") throw Error(ErrorCode::ConfigError, "output.format: expected json or csv");
  return f;
}

Tolerances tolerances_of(const RunConfig& cfg, const CommandOptions& opt) {
  Tolerances t = cfg.acceptance;
  if (opt.tol_acceptance) override_acceptance(t, *opt.tol_acceptance);
  return t;
}

std::string summary_line(const VerificationReport& rep) {
  std::ostringstream os;
  for (const auto& r : rep.residuals) {
    os << (r.skipped ? "SKIP " : r.passed() ? "PASS " : "FAIL ") << r.name;
    if (!r.skipped) os << "  max=" << r.max << "  tol=" << r.tol;
    os << "\n";
  }
  return os.str();
}

int write_solution(const LatticeSolution& sol, const VerificationReport& rep, json doc,
                   const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const std::string fmt = format_of(cfg, opt);
  json sites = json::array();
  for (int n = sol.n_min; n <= sol.n_max; ++n)
    sites.push_back({{"n", n}, {"alpha", to_json(sol.alpha[n - sol.n_min])}, {"beta", to_json(sol.beta[n - sol.n_min])}});
  doc["sites"] = sites;
  doc["report"] = report_to_json(rep);
  const std::string human = summary_line(rep) + (rep.all_passed() ? "all checks passed\n" : "verification failed\n");
  if (fmt == "csv") {
    std::string path = opt.out_path.empty() ? cfg.output_path : opt.out_path;
    if (path.empty()) {
      write_sequences_csv(out, sol);
      std::cerr << human;
    } else {
      std::ofstream f(path);
      if (!f) throw Error(ErrorCode::ConfigError, "output.path: cannot open " + path);
      write_sequences_csv(f, sol);
      std::ofstream meta(path + ".report.json");
      json m = doc;
      m.erase("sites");
      meta << dump_json(m) << "\n";
      out << human;
    }
  } else {
    emit(doc, human, opt, &cfg, out);
  }
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------- json --

json to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    config_error(path, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  dump_value(os, j, indent, 0);
  return os.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

void override_acceptance(Tolerances& t, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::ConfigError, "tolerances.acceptance: must be positive");
  for (double* v : {&t.riccati, &t.transfer, &t.eigenrelation, &t.zero_curvature, &t.sb, &t.trace,
                    &t.divisor_flow, &t.ba_product, &t.growth})
    *v = x;
  for (double* v : {&t.r_match, &t.r_drift, &t.h_constant, &t.product}) *v = std::min(*v, x);
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("(root)", "expected an object");
  RunConfig cfg;
  cfg.raw = doc;
  const json* curve = find(doc, "curve");
  if (!curve || !curve->is_object()) config_error("curve", "required object");
  const json* bp = find(*curve, "branch_points");
  if (!bp || !bp->is_array()) config_error("curve.branch_points", "required array of [re, im]");
  for (std::size_t i = 0; i < bp->size(); ++i)
    cfg.branch_points.push_back(complex_from_json((*bp)[i], "curve.branch_points[" + std::to_string(i) + "]"));
  if (const json* g = find(*curve, "g_sign")) {
    cfg.g_sign = integer(*g, "curve.g_sign");
    if (cfg.g_sign != 1 && cfg.g_sign != -1) config_error("curve.g_sign", "must be +1 or -1");
  }
  if (const json* pr = find(*curve, "pairing")) {
    if (!pr->is_array()) config_error("curve.pairing", "expected array of index pairs");
    std::vector<Cut> cuts;
    for (std::size_t i = 0; i < pr->size(); ++i) {
      const std::string path = "curve.pairing[" + std::to_string(i) + "]";
      const json& c = (*pr)[i];
      if (!c.is_array() || c.size() != 2) config_error(path, "expected [i, j]");
      cuts.push_back({integer(c[0], path + "[0]"), integer(c[1], path + "[1]")});
    }
    cfg.pairing = cuts;
  }
  if (const json* ini = find(doc, "initial")) {
    if (const json* v = find(*ini, "n0")) cfg.n0 = integer(*v, "initial.n0");
    if (const json* v = find(*ini, "alpha0")) cfg.alpha0 = complex_from_json(*v, "initial.alpha0");
    if (const json* mu = find(*ini, "mu_hat")) {
      if (!mu->is_array()) config_error("initial.mu_hat", "expected an array");
      for (std::size_t i = 0; i < mu->size(); ++i) {
        const std::string path = "initial.mu_hat[" + std::to_string(i) + "]";
        const json& m = (*mu)[i];
        const json* z = find(m, "z");
        if (!z) config_error(path + ".z", "required");
        MuPointConfig p;
        p.z = complex_from_json(*z, path + ".z");
        if (const json* s = find(m, "sheet")) {
          p.sheet = integer(*s, path + ".sheet");
          if (p.sheet != 1 && p.sheet != -1) config_error(path + ".sheet", "must be +1 or -1");
        }
        cfg.mu_hat.push_back(p);
      }
    }
  }
  if (const json* w = find(doc, "window")) {
    if (const json* v = find(*w, "n_min")) cfg.n_min = integer(*v, "window.n_min");
    if (const json* v = find(*w, "n_max")) cfg.n_max = integer(*v, "window.n_max");
  }
  if (cfg.n_min > cfg.n_max) config_error("window", "n_min exceeds n_max");
  if (cfg.n0 < cfg.n_min || cfg.n0 > cfg.n_max) config_error("window", "must contain initial.n0");
  if (const json* t = find(doc, "tolerances")) {
    if (const json* v = find(*t, "quadrature")) cfg.tol_quadrature = positive(*v, "tolerances.quadrature");
    if (const json* v = find(*t, "theta")) cfg.tol_theta = positive(*v, "tolerances.theta");
    if (const json* v = find(*t, "acceptance")) {
      if (v->is_number()) {
        override_acceptance(cfg.acceptance, positive(*v, "tolerances.acceptance"));
      } else if (v->is_object()) {
        Tolerances& a = cfg.acceptance;
        const std::vector<std::pair<const char*, double*>> named = {
            {"riccati", &a.riccati},       {"transfer", &a.transfer},   {"eigenrelation", &a.eigenrelation},
            {"zero_curvature", &a.zero_curvature}, {"R_match", &a.r_match}, {"R_drift", &a.r_drift},
            {"H_constant", &a.h_constant}, {"sb", &a.sb},               {"trace", &a.trace},
            {"product", &a.product},       {"divisor_flow", &a.divisor_flow}, {"ba_product", &a.ba_product},
            {"growth_factor", &a.growth},  {"alpha_modulus_ratio", &a.modulus_ratio}};
        for (auto it = v->begin(); it != v->end(); ++it) {
          const auto hit = std::find_if(named.begin(), named.end(), [&](const auto& p) { return it.key() == p.first; });
          if (hit == named.end()) config_error("tolerances.acceptance." + it.key(), "unknown residual name");
          *hit->second = positive(it.value(), "tolerances.acceptance." + it.key());
        }
      } else {
        config_error("tolerances.acceptance", "expected a number or an object");
      }
    }
  }
  if (const json* s = find(doc, "seeds")) {
    if (const json* v = find(*s, "riemann")) cfg.seed_riemann = seed_value(*v, "seeds.riemann");
    if (const json* v = find(*s, "verify")) cfg.seed_verify = seed_value(*v, "seeds.verify");
  }
  if (const json* o = find(doc, "output")) {
    if (const json* v = find(*o, "format")) {
      if (!v->is_string() || (*v != "json" && *v != "csv")) config_error("output.format", "expected \"json\" or \"csv\"");
      cfg.format = v->get<std::string>();
    }
    if (const json* v = find(*o, "path")) {
      if (!v->is_string()) config_error("output.path", "expected a string");
      cfg.output_path = v->get<std::string>();
    }
  }
  if (const json* t = find(doc, "theta")) cfg.theta = *t;
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

json report_to_json(const VerificationReport& r) {
  json res = json::array();
  for (const auto& x : r.residuals) {
    json e = {{"name", x.name}, {"passed", x.passed()}, {"skipped", x.skipped}, {"tol", x.tol}};
    if (!x.skipped) {
      e["max"] = x.max;
      e["mean"] = x.mean;
      e["samples"] = x.samples;
    }
    res.push_back(e);
  }
  return {{"passed", r.all_passed()}, {"residuals", res}};
}

json provenance(const RunConfig& cfg, const CurveSpec& spec) {
  const json curve = cfg.raw.contains("curve") ? cfg.raw["curve"] : json::object();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(curve.dump())));
  json cuts = json::array();
  for (const Cut& c : spec.cuts()) cuts.push_back({c.first, c.second});
  return {{"spec_hash", std::string("fnv1a64:") + hash},
          {"tool_version", kToolVersion},
          {"conventions",
           {{"Q0", "(E_0, 0) with E_0 the first branch point in (Re, Im) order"},
            {"cut_pairing", cuts},
            {"homology", "a_j encircles cut j; b_j completes a symplectic basis from loops around "
                         "consecutive branch points and is oriented so that Im tau > 0"},
            {"g_sign", spec.g_sign()},
            {"sheet", "sheet +1 has y / z^(p+1) -> -1 at infinity and contains Pinf+"},
            {"tau_convention", "branch points {1,2,3,4} give tau = i K(sqrt(3)/2) / K(1/2)"}}}};
}

void write_sequences_csv(std::ostream& os, const LatticeSolution& sol) {
  os << "n,alpha_re,alpha_im,beta_re,beta_im\n";
  char buf[256];
  for (int n = sol.n_min; n <= sol.n_max; ++n) {
    const cplx a = sol.alpha[n - sol.n_min], b = sol.beta[n - sol.n_min];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", n, a.real(), a.imag(), b.real(), b.imag());
    os << buf;
  }
}

SequenceInput load_sequences(const std::string& path) {
  SequenceInput in;
  std::vector<std::pair<int, std::pair<cplx, cplx>>> rows;
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::ParseError, path + ": cannot open file");
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (lineno == 1 || line.empty()) continue;
      int n;
      double ar, ai, br, bi;
      if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &n, &ar, &ai, &br, &bi) != 5)
        throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": expected n,alpha_re,alpha_im,beta_re,beta_im");
      rows.push_back({n, {{ar, ai}, {br, bi}}});
    }
  } else {
    const json doc = read_json_file(path);
    if (const json* sites = find(doc, "sites")) {
      for (std::size_t i = 0; i < sites->size(); ++i) {
        const std::string p = "sites[" + std::to_string(i) + "]";
        const json& s = (*sites)[i];
        if (!find(s, "n") || !find(s, "alpha") || !find(s, "beta")) config_error(p, "expected n, alpha, beta");
        rows.push_back({integer(s["n"], p + ".n"),
                        {complex_from_json(s["alpha"], p + ".alpha"), complex_from_json(s["beta"], p + ".beta")}});
      }
    } else {
      const json* a = find(doc, "alpha");
      const json* b = find(doc, "beta");
      if (!a || !b || !a->is_array() || !b->is_array() || a->size() != b->size())
        config_error("(root)", "expected sites or equal-length alpha and beta arrays");
      const int n_min = find(doc, "n_min") ? integer(doc["n_min"], "n_min") : 0;
      for (std::size_t i = 0; i < a->size(); ++i)
        rows.push_back({n_min + static_cast<int>(i),
                        {complex_from_json((*a)[i], "alpha[" + std::to_string(i) + "]"),
                         complex_from_json((*b)[i], "beta[" + std::to_string(i) + "]")}});
    }
    if (const json* p = find(doc, "p")) in.p = integer(*p, "p");
    else if (const json* g = find(doc, "genus")) in.p = integer(*g, "genus");
    if (const json* c = find(doc, "constants"))
      for (std::size_t i = 0; i < c->size(); ++i)
        in.constants.push_back(complex_from_json((*c)[i], "constants[" + std::to_string(i) + "]"));
    if (const json* g = find(doc, "g")) in.g_top = complex_from_json(*g, "g");
    else if (const json* g2 = find(doc, "g_top")) in.g_top = complex_from_json(*g2, "g_top");
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, path + ": no sequence values");
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  in.seq.n_min = rows.front().first;
  in.seq.n_max = rows.back().first;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != in.seq.n_min + static_cast<int>(i))
      throw Error(ErrorCode::ParseError, path + ": sites must be consecutive");
    in.seq.alpha.push_back(rows[i].second.first);
    in.seq.beta.push_back(rows[i].second.second);
  }
  return in;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfCheckFailed:
    case ErrorCode::ExtrapolationDivergence:
    case ErrorCode::NonconvergentTau:
    case ErrorCode::SingularC:
    case ErrorCode::SingularNormalizationSystem:
    case ErrorCode::ToleranceNotReached:
    case ErrorCode::ThetaNearZero:
    case ErrorCode::IllConditionedInterpolation:
      return 3;
    default:
      return 2;
  }
}

// ------------------------------------------------------------ commands --

int cmd_curve_info(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const CurveSpec spec = make_spec(cfg);
  json doc = curve_json(spec);
  std::ostringstream h;
  h << "genus " << spec.genus() << "\n" << "g_{p+1} = " << spec.g_top() << "\n" << "cuts:";
  for (const Cut& c : spec.cuts()) h << " [" << spec.branch_points()[c.first] << ", " << spec.branch_points()[c.second] << "]";
  h << "\n";
  doc["tau"] = json::array();
  if (spec.genus() >= 1) {
    const PeriodData pd = compute_periods(spec, build_homology(spec, quad_options(cfg)));
    doc["tau"] = matrix_json(pd.tau);
    doc["min_eig_im_tau"] = pd.min_eig_im_tau;
    h << "tau =\n" << pd.tau << "\nmin eig Im tau = " << pd.min_eig_im_tau << "\n";
  }
  doc["provenance"] = provenance(cfg, spec);
  emit(doc, h.str(), opt, &cfg, out);
  return 0;
}

int cmd_periods(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const CurveSpec spec = make_spec(cfg);
  json doc = curve_json(spec);
  std::ostringstream h;
  if (spec.genus() == 0) {
    doc["tau"] = json::array();
    h << "genus 0: no periods\n";
  } else {
    const PeriodData pd = compute_periods(spec, build_homology(spec, quad_options(cfg)));
    doc["a_periods"] = matrix_json(pd.C);
    doc["normalization"] = matrix_json(pd.c);
    doc["tau"] = matrix_json(pd.tau);
    doc["min_eig_im_tau"] = pd.min_eig_im_tau;
    doc["b_flipped"] = pd.b_flipped;
    h << "tau =\n" << pd.tau << "\n";
  }
  doc["provenance"] = provenance(cfg, spec);
  emit(doc, h.str(), opt, &cfg, out);
  return 0;
}

int cmd_theta_eval(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  ThetaParams params;
  params.tol = cfg.tol_theta;
  const json* tau = find(cfg.theta, "tau");
  if (tau) {
    if (!tau->is_array() || tau->empty()) config_error("theta.tau", "expected a square matrix of [re, im]");
    const int g = static_cast<int>(tau->size());
    params.tau.resize(g, g);
    for (int i = 0; i < g; ++i) {
      const json& row = (*tau)[i];
      if (!row.is_array() || static_cast<int>(row.size()) != g) config_error("theta.tau", "matrix must be square");
      for (int j = 0; j < g; ++j)
        params.tau(i, j) = complex_from_json(row[j], "theta.tau[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (params.tau.imag() + params.tau.imag().transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) config_error("theta.tau", "Im tau must be positive definite");
  } else {
    const CurveSpec spec = make_spec(cfg);
    if (spec.genus() == 0) config_error("theta.tau", "required for genus-0 curves");
    params.tau = compute_periods(spec, build_homology(spec, quad_options(cfg))).tau;
  }
  const int g = static_cast<int>(params.tau.rows());
  const json* zs = find(cfg.theta, "z");
  if (!zs || !zs->is_array()) config_error("theta.z", "required array of vectors");
  json values = json::array();
  std::ostringstream h;
  for (std::size_t k = 0; k < zs->size(); ++k) {
    const std::string path = "theta.z[" + std::to_string(k) + "]";
    const json& zj = (*zs)[k];
    if (!zj.is_array() || static_cast<int>(zj.size()) != g) config_error(path, "expected " + std::to_string(g) + " components");
    CVec z(g);
    for (int i = 0; i < g; ++i) z(i) = complex_from_json(zj[i], path + "[" + std::to_string(i) + "]");
    const ThetaValue v = theta_reduced(z, params);
    values.push_back({{"z", vector_json(z)}, {"theta", to_json(v.full())}, {"log_factor", to_json(v.log_factor)},
                      {"reduced_value", to_json(v.value)}});
    h << "theta(z[" << k << "]) = " << v.full() << "\n";
  }
  emit({{"tau", matrix_json(params.tau)}, {"values", values}}, h.str(), opt, &cfg, out);
  return 0;
}

int cmd_genus0(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  if (cfg.branch_points.size() != 2) config_error("curve.branch_points", "genus0 needs exactly two branch points");
  const CurveSpec spec = make_spec(cfg);
  const cplx E0 = cfg.branch_points[0], E1 = cfg.branch_points[1];
  const LatticeSolution sol = genus0_solution(E0, E1, cfg.g_sign, cfg.alpha0, cfg.n0, cfg.n_min, cfg.n_max);
  const VerificationReport rep = genus0_report(E0, E1, cfg.g_sign, sol, tolerances_of(cfg, opt));
  const Genus0Constants k = genus0_constants(E0, E1, cfg.g_sign);
  json doc;
  doc["provenance"] = provenance(cfg, spec);
  doc["genus"] = 0;
  doc["g_top"] = to_json(k.g1);
  doc["constants"] = json::array({to_json(k.c1)});
  doc["diagnostics"] = {{"alpha_beta", to_json(k.alpha_beta)}, {"c1", to_json(k.c1)}, {"g1", to_json(k.g1)}};
  return write_solution(sol, rep, doc, cfg, opt, out);
}

int cmd_solve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const CurveSpec spec = make_spec(cfg);
  if (spec.genus() == 0) return cmd_genus0(cfg, opt, out);
  Divisor mu;
  for (const auto& m : cfg.mu_hat) mu.points.push_back(make_point(spec, m.z, m.sheet));
  SolutionOptions so;
  so.quad = quad_options(cfg);
  so.theta_tol = cfg.tol_theta;
  so.seed = opt.seed.value_or(cfg.seed_riemann);
  const SolutionState st = init_solution(spec, mu, cfg.alpha0, cfg.n0, so);
  const LatticeSolution sol = solve_window(st, cfg.n_min, cfg.n_max);
  VerifyConfig vc;
  vc.n_min = cfg.n_min;
  vc.n_max = cfg.n_max;
  vc.seed = opt.seed.value_or(cfg.seed_verify);
  vc.tol = tolerances_of(cfg, opt);
  const VerificationReport rep = full_report(st, vc);

  json doc;
  doc["provenance"] = provenance(cfg, spec);
  doc["genus"] = spec.genus();
  doc["g_top"] = to_json(spec.g_top());
  json c = json::array();
  for (const cplx& v : summation_constants(spec, spec.genus() + 1)) c.push_back(to_json(v));
  doc["constants"] = c;
  doc["diagnostics"] = {
      {"tau", matrix_json(st.periods.tau)},
      {"min_eig_im_tau", st.periods.min_eig_im_tau},
      {"beta0", to_json(st.beta0)},
      {"b_period_residual", st.abelian.b_period_residual},
      {"omega0_identity_residual", st.abelian.identity_residual},
      {"omega0_ladder_deviation", std::max(st.abelian.minus.ladder_deviation, st.abelian.plus.ladder_deviation)},
      {"riemann_constants", vector_json(st.riemann.xi)},
      {"riemann_constants_from_formula", st.riemann.from_formula},
      {"vanishing_ratio", st.riemann.vanishing_ratio},
      {"flow_vector", vector_json(st.delta)},
      {"growth_factor", growth_factor(st)},
      {"p0_plus_sheet", p0_plus(spec).sheet}};
  return write_solution(sol, rep, doc, cfg, opt, out);
}

int cmd_verify(const std::optional<RunConfig>& cfg, const CommandOptions& opt, std::ostream& out) {
  if (opt.sequences_path.empty()) throw Error(ErrorCode::ConfigError, "--sequences: required");
  SequenceInput in = load_sequences(opt.sequences_path);
  std::optional<CurveSpec> spec;
  if (cfg) spec = make_spec(*cfg);
  int p = 0;
  if (in.p) p = *in.p;
  else if (spec) p = spec->genus();
  else throw Error(ErrorCode::ConfigError, "p: give it in the sequences file or pass --config");
  if (in.constants.empty() && spec) in.constants = summation_constants(*spec, p + 1);
  if (!in.g_top && spec) in.g_top = spec->g_top();

  const LatticeSeq& seq = in.seq;
  const int n_ref = (seq.n_min + seq.n_max) / 2;
  const HierarchyCoefficients co = run_recursion(seq, in.constants, p, n_ref);
  Tolerances tol = cfg ? cfg->acceptance : Tolerances{};
  if (opt.tol_acceptance) override_acceptance(tol, *opt.tol_acceptance);

  auto scale_at = [&](int n) {
    double s = 1.0;
    for (int l = 0; l <= p + 1; ++l)
      for (cplx v : {co.f(l, n), co.g(l, n), co.h(l, n)})
        if (std::isfinite(v.real())) s = std::max(s, std::abs(v));
    return s;
  };
  VerificationReport rep;
  Residual dual;
  dual.name = "dual_identity";
  dual.tol = 1e-10;
  for (int l = 0; l <= p; ++l)
    for (int n = seq.n_min; n <= seq.n_max; ++n) {
      const cplx r = co.g(l + 1, n) - co.g(l + 1, n - 1) - seq.a(n) * co.h(l + 1, n) - seq.b(n) * co.f(l + 1, n - 1);
      if (std::isfinite(r.real())) dual.add(std::abs(r) / (scale_at(n) * scale_at(n)));
    }
  Residual low;
  low.name = "invariant_low_order";
  low.tol = 1e-10;
  for (int k = 0; k <= p + 1; ++k) {
    const cplx ref = r_coefficient(co, k, n_ref);
    for (int n = seq.n_min; n <= seq.n_max; ++n) {
      const cplx v = r_coefficient(co, k, n);
      if (std::isfinite(v.real())) low.add(std::abs(v - ref) / (scale_at(n) * scale_at(n)));
    }
  }
  rep.residuals.push_back(dual);
  rep.residuals.push_back(low);

  json extra;
  extra["p"] = p;
  extra["g1_at_n_ref"] = to_json(co.g(1, n_ref));
  extra["n_ref"] = n_ref;
  Residual sb;
  sb.name = "sb";
  sb.tol = 1e-10;
  Residual drift;
  drift.name = "R_drift";
  drift.tol = 1e-10;
  const bool g_given = in.g_top.has_value();
  const cplx g_top = g_given ? *in.g_top : co.g(p + 1, n_ref);
  extra["g_top"] = to_json(g_top);
  extra["g_top_source"] = g_given ? "input" : "recursion at n_ref";
  std::vector<LaurentPolyTriple> triples;
  for (int n = seq.n_min; n <= seq.n_max; ++n) {
    const LaurentPolyTriple t = assemble(co, n);
    if (t.F.allFinite() && t.G.allFinite() && t.H.allFinite()) triples.push_back(t);
    const auto r = sb_residual(co, seq, g_top, n);
    if (!std::isfinite(r.first.real()) || !std::isfinite(r.second.real())) continue;
    const double sa = std::max(std::abs(seq.a(n)), std::abs(seq.a(n + 1)));
    const double sbeta = std::max(std::abs(seq.b(n)), std::abs(seq.b(n - 1)));
    const double g = std::max(1.0, std::abs(g_top));
    sb.add(std::max(std::abs(r.first) / (sa * g), std::abs(r.second) / (sbeta * g)));
  }
  if (triples.size() >= 2) {
    const LatticeInvariant inv = lattice_invariant(triples);
    drift.add(inv.drift / std::max(1.0, inv.mean.cwiseAbs().maxCoeff()));
    json roots = json::array();
    for (const cplx& r : inv.roots) roots.push_back(to_json(r));
    extra["invariant_roots"] = roots;
  } else {
    drift.skipped = true;
  }
  rep.residuals.push_back(sb);
  rep.residuals.push_back(drift);
  json doc = {{"report", report_to_json(rep)}, {"hierarchy", extra}};
  if (spec && cfg) doc["provenance"] = provenance(*cfg, *spec);
  const std::string human = summary_line(rep) + (rep.all_passed() ? "all checks passed\n" : "verification failed\n");
  emit(doc, human, opt, cfg ? &*cfg : nullptr, out);
  return rep.all_passed() ? 0 : 1;
}

}  // namespace sbtheta
