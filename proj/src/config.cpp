#include "pmult/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "pmult/local.hpp"
#include "pmult/singularity.hpp"
#include "pmult/visibility.hpp"

namespace pmult {

namespace {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const Json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError(where + ": unknown key \"" + k + "\"");
    }
  }
}

Complex parse_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ConfigError(where + ": complex values are two-element arrays "
                              "[re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> parse_complex_list(const Json& j,
                                        const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_complex(e, where));
  return out;
}

Vector parse_vector(const Json& j, const std::string& where) {
  const auto list = parse_complex_list(j, where);
  Vector v(static_cast<Eigen::Index>(list.size()));
  for (size_t i = 0; i < list.size(); ++i) v(static_cast<Eigen::Index>(i)) = list[i];
  return v;
}

void validate_space(const Json& s, const std::string& where) {
  require_object(s, where);
  if (!s.contains("kind") || !s["kind"].is_string()) {
    throw ConfigError(where + ": needs a string \"kind\"");
  }
  const std::string kind = s["kind"].get<std::string>();
  if (kind == "coefficient") {
    check_keys(s, {"kind", "degree", "weights", "min_degree"}, where);
    if (!s.contains("degree") || !s["degree"].is_number_integer()) {
      throw ConfigError(where + ": coefficient models need an integer "
                                "\"degree\"");
    }
  } else if (kind == "kernel_sample") {
    check_keys(s, {"kind", "kernel", "points", "derivs"}, where);
    if (!s.contains("kernel")) {
      throw ConfigError(where + ": kernel_sample models need \"kernel\"");
    }
    const Json& k = s["kernel"];
    if (k.is_string()) {
      const std::string name = k.get<std::string>();
      if (name != "szego" && name != "zh2" && name != "sobolev" &&
          name != "sobolev_second_order") {
        throw ConfigError(where + ": unknown kernel \"" + name + "\"");
      }
    } else if (k.is_object()) {
      check_keys(k, {"table"}, where + ".kernel");
      if (!k.contains("table") || !k["table"].is_string()) {
        throw ConfigError(where + ".kernel: table kernels need a file path");
      }
    } else {
      throw ConfigError(where + ".kernel: expected a name or {\"table\": path}");
    }
    if (!s.contains("points") || !s["points"].is_array()) {
      throw ConfigError(where + ": kernel_sample models need \"points\"");
    }
    parse_complex_list(s["points"], where + ".points");
    if (s.contains("derivs")) {
      if (!s["derivs"].is_array() || s["derivs"].size() != s["points"].size()) {
        throw ConfigError(where + ".derivs: must parallel \"points\"");
      }
    }
  } else if (kind == "composed") {
    check_keys(s, {"kind", "mode", "parts", "constraints"}, where);
    if (!s.contains("mode") || !s["mode"].is_string() ||
        (s["mode"] != "direct_sum" && s["mode"] != "glued")) {
      throw ConfigError(where + ": mode must be direct_sum or glued");
    }
    if (!s.contains("parts") || !s["parts"].is_array() ||
        s["parts"].size() != 2) {
      throw ConfigError(where + ": composed models need exactly two parts");
    }
    validate_space(s["parts"][0], where + ".parts[0]");
    validate_space(s["parts"][1], where + ".parts[1]");
    if (s.contains("constraints")) {
      if (!s["constraints"].is_array()) {
        throw ConfigError(where + ".constraints: expected an array");
      }
      for (size_t i = 0; i < s["constraints"].size(); ++i) {
        parse_vector(s["constraints"][i], where + ".constraints");
      }
    }
  } else {
    throw ConfigError(where + ": unknown space kind \"" + kind + "\"");
  }
}

void validate_symbol(const Json& p, const std::string& where) {
  require_object(p, where);
  check_keys(p,
             {"numerator", "denominator", "symbol", "overrides", "exclusions",
              "declared_constraints", "forced_zero_functionals",
              "probe_points", "parts", "label"},
             where);
  if (p.contains("numerator") != p.contains("denominator")) {
    throw ConfigError(where + ": numerator and denominator come together");
  }
  if (p.contains("numerator")) {
    parse_vector(p["numerator"], where + ".numerator");
    parse_vector(p["denominator"], where + ".denominator");
  }
  if (p.contains("symbol")) {
    if (!p["symbol"].is_string() || p["symbol"] != "sqrt_re") {
      throw ConfigError(where + ".symbol: the only named symbol is "
                                "\"sqrt_re\"");
    }
  }
  if (p.contains("overrides")) {
    for (const auto& o : p["overrides"]) {
      require_object(o, where + ".overrides[]");
      check_keys(o, {"point", "value"}, where + ".overrides[]");
      parse_complex(o.at("point"), where + ".overrides[].point");
      parse_complex(o.at("value"), where + ".overrides[].value");
    }
  }
  if (p.contains("exclusions")) {
    parse_complex_list(p["exclusions"], where + ".exclusions");
  }
  if (p.contains("declared_constraints")) {
    for (const auto& c : p["declared_constraints"]) {
      if (c.is_array()) {
        parse_vector(c, where + ".declared_constraints[]");
      } else if (c.is_object()) {
        check_keys(c, {"kernel_at", "deriv", "component"},
                   where + ".declared_constraints[]");
        parse_complex(c.at("kernel_at"),
                      where + ".declared_constraints[].kernel_at");
      } else {
        throw ConfigError(where + ".declared_constraints[]: expected a "
                                  "vector or a kernel descriptor");
      }
    }
  }
  if (p.contains("forced_zero_functionals")) {
    for (const auto& c : p["forced_zero_functionals"]) {
      parse_vector(c, where + ".forced_zero_functionals[]");
    }
  }
  if (p.contains("probe_points")) {
    for (const auto& q : p["probe_points"]) {
      require_object(q, where + ".probe_points[]");
      check_keys(q, {"point", "component"}, where + ".probe_points[]");
      parse_complex(q.at("point"), where + ".probe_points[].point");
    }
  }
  if (p.contains("parts")) {
    for (size_t i = 0; i < p["parts"].size(); ++i) {
      validate_symbol(p["parts"][i], where + ".parts[" + std::to_string(i) + "]");
    }
  }
  if (p.contains("label") && !p["label"].is_string()) {
    throw ConfigError(where + ".label: expected a string");
  }
}

void validate_query(const Json& q, const std::string& where) {
  require_object(q, where);
  if (!q.contains("type") || !q["type"].is_string()) {
    throw ConfigError(where + ": needs a string \"type\"");
  }
  const std::string type = q["type"].get<std::string>();
  if (type == "decompose") {
    check_keys(q, {"type"}, where);
  } else if (type == "see_vector") {
    check_keys(q, {"type", "vector", "kernel_at"}, where);
    if (q.contains("vector") == q.contains("kernel_at")) {
      throw ConfigError(where + ": give exactly one of vector / kernel_at");
    }
  } else if (type == "see_subspace") {
    check_keys(q, {"type", "vectors", "kernel_points"}, where);
    if (q.contains("vectors") == q.contains("kernel_points")) {
      throw ConfigError(where + ": give exactly one of vectors / "
                                "kernel_points");
    }
  } else if (type == "classify_point") {
    check_keys(q, {"type", "point"}, where);
    parse_complex(q.at("point"), where + ".point");
  } else if (type == "polar_witness") {
    check_keys(q, {"type", "vector", "basis_index", "schedule"}, where);
    if (q.contains("vector") == q.contains("basis_index")) {
      throw ConfigError(where + ": give exactly one of vector / basis_index");
    }
    if (!q.contains("schedule") || !q["schedule"].is_array()) {
      throw ConfigError(where + ": needs a real \"schedule\" array");
    }
  } else if (type == "local_search") {
    check_keys(q, {"type", "vectors", "kernel_points", "grid", "budget"},
               where);
    if (q.contains("vectors") == q.contains("kernel_points")) {
      throw ConfigError(where + ": give exactly one of vectors / "
                                "kernel_points");
    }
    if (q.contains("grid") && q["grid"].is_object()) {
      check_keys(q["grid"], {"radii", "angles"}, where + ".grid");
    }
  } else if (type == "metrics") {
    check_keys(q, {"type", "pairs", "variant"}, where);
    if (!q.contains("pairs") || !q["pairs"].is_array()) {
      throw ConfigError(where + ": needs \"pairs\"");
    }
    if (q.contains("variant") && q["variant"] != "standard" &&
        q["variant"] != "opnorm") {
      throw ConfigError(where + ".variant: standard or opnorm");
    }
  } else if (type == "distance_formula") {
    check_keys(q, {"type", "alpha", "points"}, where);
    parse_complex(q.at("alpha"), where + ".alpha");
    if (!q.contains("points")) throw ConfigError(where + ": needs \"points\"");
  } else {
    throw ConfigError(where + ": unknown query type \"" + type + "\"");
  }
}

ModelSpace build_space(const Json& s) {
  const std::string kind = s["kind"].get<std::string>();
  if (kind == "coefficient") {
    std::vector<double> weights;
    if (s.contains("weights")) {
      for (const auto& w : s["weights"]) weights.push_back(w.get<double>());
    }
    return build_coefficient_model(s["degree"].get<int>(), weights,
                                   s.value("min_degree", 0));
  }
  if (kind == "kernel_sample") {
    KernelFormula formula = KernelFormula::szego();
    const Json& k = s["kernel"];
    if (k.is_string()) {
      const std::string name = k.get<std::string>();
      if (name == "zh2") formula = KernelFormula::zh2();
      else if (name == "sobolev") formula = KernelFormula::sobolev();
      else if (name == "sobolev_second_order") {
        formula = KernelFormula::sobolev_second_order();
      }
    } else {
      const std::string path = k["table"].get<std::string>();
      std::ifstream probe(path);
      if (!probe.good()) {
        throw IoError("cannot open kernel table file: " + path);
      }
      formula = KernelFormula::load_table(path);
    }
    std::vector<SamplePoint> pts;
    for (size_t i = 0; i < s["points"].size(); ++i) {
      SamplePoint p;
      p.z = parse_complex(s["points"][i], "space.points");
      p.deriv = s.contains("derivs") ? s["derivs"][i].get<int>() : 0;
      pts.push_back(p);
    }
    return build_kernel_sample_model(std::move(pts), formula);
  }
  // composed
  ModelSpace a = build_space(s["parts"][0]);
  ModelSpace b = build_space(s["parts"][1]);
  const ComposeMode mode = s["mode"] == "glued" ? ComposeMode::glued
                                                : ComposeMode::direct_sum;
  std::vector<Vector> constraints;
  if (s.contains("constraints")) {
    for (const auto& c : s["constraints"]) {
      constraints.push_back(parse_vector(c, "space.constraints"));
    }
  }
  return compose_models(a, b, mode, constraints);
}

PseudomultiplierSpec build_symbol(const Json& p, const ModelSpace& model) {
  PseudomultiplierSpec spec;
  if (p.contains("numerator")) {
    spec.rational = {parse_vector(p["numerator"], "numerator"),
                     parse_vector(p["denominator"], "denominator")};
  }
  if (p.contains("symbol")) {
    spec.pointwise = [](Complex z) { return Complex(std::sqrt(z.real())); };
  }
  if (p.contains("overrides")) {
    for (const auto& o : p["overrides"]) {
      spec.overrides.emplace_back(parse_complex(o["point"], "overrides"),
                                  parse_complex(o["value"], "overrides"));
    }
  }
  if (p.contains("exclusions")) {
    spec.exclusions = parse_complex_list(p["exclusions"], "exclusions");
  }
  if (p.contains("declared_constraints")) {
    for (const auto& c : p["declared_constraints"]) {
      if (c.is_array()) {
        spec.declared_constraints.push_back(
            parse_vector(c, "declared_constraints"));
      } else {
        spec.declared_constraints.push_back(model.kernel_vector(
            parse_complex(c["kernel_at"], "declared_constraints"),
            c.value("deriv", 0), c.value("component", -1)));
      }
    }
  }
  if (p.contains("forced_zero_functionals")) {
    for (const auto& c : p["forced_zero_functionals"]) {
      spec.forced_zero_functionals.push_back(
          parse_vector(c, "forced_zero_functionals"));
    }
  }
  if (p.contains("probe_points")) {
    for (const auto& q : p["probe_points"]) {
      ProbePoint pp;
      pp.z = parse_complex(q["point"], "probe_points");
      pp.component = q.value("component", -1);
      spec.probe_points.push_back(pp);
    }
  }
  if (p.contains("parts")) {
    for (const auto& part : p["parts"]) {
      spec.parts.push_back(build_symbol(part, model));
    }
  }
  spec.label = p.value("label", "");
  return spec;
}

const char* visibility_name(VisibilityStatus s) {
  switch (s) {
    case VisibilityStatus::not_visible: return "not_visible";
    case VisibilityStatus::visible: return "visible";
    case VisibilityStatus::ambiguous: return "ambiguous";
  }
  return "?";
}

const char* point_kind_name(PointKind k) {
  switch (k) {
    case PointKind::unambiguous: return "unambiguous";
    case PointKind::removable: return "removable";
    case PointKind::essential: return "essential";
  }
  return "?";
}

const char* local_status_name(LocalStatus s) {
  switch (s) {
    case LocalStatus::decomposed: return "decomposed";
    case LocalStatus::non_kernel_limit: return "non_kernel_limit";
    case LocalStatus::not_local_evidence: return "not_local_evidence";
  }
  return "?";
}

const char* path_name(RegularSpacePath p) {
  switch (p) {
    case RegularSpacePath::exact: return "exact";
    case RegularSpacePath::declared: return "declared";
    case RegularSpacePath::finite_model: return "finite_model";
  }
  return "?";
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_to_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Frame frame_from_query(const Json& q, const ModelSpace& model,
                       const ToleranceConfig& tol) {
  if (q.contains("kernel_points")) {
    return span_kernels(model,
                        parse_complex_list(q["kernel_points"], "kernel_points"),
                        tol);
  }
  std::vector<Vector> vecs;
  for (const auto& v : q["vectors"]) vecs.push_back(parse_vector(v, "vectors"));
  return orthonormalize(vecs, model.space(), tol);
}

Json run_query(const Json& q, const ModelSpace& model,
               const PseudomultiplierSpec* spec,
               const PseudomultiplierAnalysis* an,
               const ToleranceConfig& tol) {
  const std::string type = q["type"].get<std::string>();
  Json out;
  out["type"] = type;
  const auto need_analysis = [&]() {
    if (an == nullptr) {
      throw ConfigError("query \"" + type +
                        "\" needs a pseudomultiplier section");
    }
  };
  if (type == "decompose") {
    need_analysis();
    auto [S, A, P] = decompose_singular_space(*an, tol);
    out["order"] = an->order;
    out["dim_E"] = an->E.rank();
    out["dim_S"] = S.rank();
    out["dim_A"] = A.rank();
    out["dim_P"] = P.rank();
    out["path"] = path_name(an->path);
    out["x_norm"] = round_significant(an->x_norm);
    out["S"] = frame_descriptor(S);
    out["A"] = frame_descriptor(A);
    out["P"] = frame_descriptor(P);
  } else if (type == "see_vector") {
    need_analysis();
    const Vector v = q.contains("vector")
                         ? parse_vector(q["vector"], "vector")
                         : model.kernel_vector(
                               parse_complex(q["kernel_at"], "kernel_at"));
    const auto verdict = sees_vector(*an, v, tol);
    out["status"] = visibility_name(verdict.status);
    out["value"] = complex_to_json(verdict.value);
    out["residual"] = round_significant(verdict.residual);
  } else if (type == "see_subspace") {
    need_analysis();
    const Frame V = frame_from_query(q, model, tol);
    const auto verdict = sees_subspace(*an, V, tol);
    out["sees"] = verdict.sees;
    out["regular"] = verdict.regular;
    out["residual"] = round_significant(verdict.residual);
    if (verdict.value_operator) {
      out["value_operator"] = matrix_to_json(*verdict.value_operator);
    }
  } else if (type == "classify_point") {
    need_analysis();
    const auto pc = classify_point(model, *spec, *an,
                                   parse_complex(q["point"], "point"), tol);
    out["kind"] = point_kind_name(pc.kind);
    out["gamma"] = complex_to_json(pc.gamma);
    out["residual"] = round_significant(pc.residual);
  } else if (type == "polar_witness") {
    need_analysis();
    Vector p;
    if (q.contains("vector")) {
      p = parse_vector(q["vector"], "vector");
    } else {
      auto [S, A, P] = decompose_singular_space(*an, tol);
      const int idx = q["basis_index"].get<int>();
      if (idx < 0 || idx >= P.rank()) {
        throw ConfigError("polar_witness: basis_index out of range");
      }
      p = P.column(idx);
    }
    std::vector<Complex> schedule;
    for (const auto& c : q["schedule"]) schedule.push_back(c.get<double>());
    const auto witnesses = polar_witness(*an, p, schedule, tol);
    Json arr = Json::array();
    for (const auto& [w, value] : witnesses) {
      Json e;
      e["value"] = complex_to_json(value);
      e["distance_to_p"] =
          round_significant(model.space()->norm(w - p));
      arr.push_back(std::move(e));
    }
    out["witnesses"] = std::move(arr);
  } else if (type == "local_search") {
    const Frame M = frame_from_query(q, model, tol);
    std::vector<Complex> grid;
    if (q.contains("grid") && q["grid"].is_array()) {
      grid = parse_complex_list(q["grid"], "grid");
    } else {
      const int radii = q.contains("grid") ? q["grid"].value("radii", 9) : 9;
      const int angles = q.contains("grid") ? q["grid"].value("angles", 16) : 16;
      grid.push_back(0.0);
      for (int r = 1; r <= radii; ++r) {
        for (int a = 0; a < angles; ++a) {
          grid.push_back(std::polar(r / (radii + 1.0),
                                    2.0 * M_PI * a / angles));
        }
      }
    }
    const auto rep =
        local_search(M, grid, model, q.value("budget", 20000), tol);
    out["status"] = local_status_name(rep.status);
    out["best_gap"] = round_significant(rep.best_gap);
    Json curve = Json::array();
    for (double g : rep.gap_curve) curve.push_back(round_significant(g));
    out["gap_curve"] = std::move(curve);
    Json clusters = Json::array();
    for (const auto& c : rep.support_clusters) {
      Json e;
      e["center"] = complex_to_json(c.center);
      e["radius"] = round_significant(c.radius);
      clusters.push_back(std::move(e));
    }
    out["support_clusters"] = std::move(clusters);
    out["decomposition_residual"] =
        round_significant(rep.decomposition_residual);
    if (!rep.diagnostics.empty()) out["diagnostics"] = rep.diagnostics;
  } else if (type == "metrics") {
    const auto variant = q.value("variant", "standard") == std::string("opnorm")
                             ? ProjectiveMetricVariant::opnorm
                             : ProjectiveMetricVariant::standard;
    Json arr = Json::array();
    for (const auto& pair : q["pairs"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ConfigError("metrics.pairs: each entry is [alpha, beta]");
      }
      const Complex a = parse_complex(pair[0], "metrics.pairs");
      const Complex b = parse_complex(pair[1], "metrics.pairs");
      Json e;
      e["pair"] = Json::array({complex_to_json(a), complex_to_json(b)});
      e["d"] = round_significant(metric_d(model, a, b));
      e["p"] = round_significant(metric_p(model, a, b, variant));
      arr.push_back(std::move(e));
    }
    out["pairs"] = std::move(arr);
  } else if (type == "distance_formula") {
    const auto [numeric, closed] = kernel_distance_formula(
        model, parse_complex(q["alpha"], "alpha"),
        parse_complex_list(q["points"], "points"));
    out["numeric"] = round_significant(numeric);
    out["closed_form"] = round_significant(closed);
  }
  out["ok"] = true;
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(doc, "config");
  check_keys(doc, {"space", "pseudomultiplier", "queries", "tolerances",
                   "output"},
             "config");
  if (!doc.contains("space")) throw ConfigError("config: needs a space section");
  validate_space(doc["space"], "space");

  RunConfig cfg;
  cfg.space = doc["space"];
  cfg.config_hash = fnv1a_hex(text);
  if (doc.contains("pseudomultiplier")) {
    validate_symbol(doc["pseudomultiplier"], "pseudomultiplier");
    cfg.pseudomultiplier = doc["pseudomultiplier"];
  }
  if (doc.contains("queries")) {
    if (!doc["queries"].is_array()) {
      throw ConfigError("queries: expected an array");
    }
    for (size_t i = 0; i < doc["queries"].size(); ++i) {
      validate_query(doc["queries"][i], "queries[" + std::to_string(i) + "]");
      cfg.queries.push_back(doc["queries"][i]);
    }
  }
  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    require_object(t, "tolerances");
    check_keys(t, {"rank_tol", "residual_tol", "ortho_tol"}, "tolerances");
    cfg.tolerances.rank_tol = t.value("rank_tol", cfg.tolerances.rank_tol);
    cfg.tolerances.residual_tol =
        t.value("residual_tol", cfg.tolerances.residual_tol);
    cfg.tolerances.ortho_tol = t.value("ortho_tol", cfg.tolerances.ortho_tol);
    try {
      cfg.tolerances.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("tolerances: ") + e.what());
    }
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    require_object(o, "output");
    check_keys(o, {"format", "path"}, "output");
    cfg.output.format = o.value("format", "json");
    if (cfg.output.format != "json" && cfg.output.format != "text") {
      throw ConfigError("output.format: json or text");
    }
    cfg.output.path = o.value("path", "");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file: " + path);
  return parse_config_text(buf.str());
}

ModelSpace build_model_from_config(const RunConfig& cfg) {
  return build_space(cfg.space);
}

PseudomultiplierSpec build_spec_from_config(const RunConfig& cfg,
                                            const ModelSpace& model) {
  if (!cfg.pseudomultiplier) {
    throw ConfigError("config has no pseudomultiplier section");
  }
  return build_symbol(*cfg.pseudomultiplier, model);
}

Report run_config(const RunConfig& cfg) {
  Report rep;
  const ModelSpace model = build_model_from_config(cfg);

  Json prov;
  prov["config_hash"] = cfg.config_hash;
  prov["tolerances"] = {{"rank_tol", cfg.tolerances.rank_tol},
                        {"residual_tol", cfg.tolerances.residual_tol},
                        {"ortho_tol", cfg.tolerances.ortho_tol}};
  prov["model"] = {{"label", model.label()},
                   {"dim", model.dim()},
                   {"kind", cfg.space["kind"].get<std::string>()}};
  rep.doc["provenance"] = std::move(prov);

  std::optional<PseudomultiplierSpec> spec;
  std::optional<PseudomultiplierAnalysis> an;
  if (cfg.pseudomultiplier) {
    spec = build_spec_from_config(cfg, model);
    try {
      an = analyze(model, *spec, cfg.tolerances);
      rep.doc["analysis"] = {{"ok", true},
                             {"order", an->order},
                             {"dim_E", an->E.rank()},
                             {"path", path_name(an->path)}};
    } catch (const NumericError& e) {
      rep.doc["analysis"] = {{"ok", false}, {"error", e.what()}};
      rep.ok = false;
    }
  }

  Json queries = Json::array();
  for (const Json& q : cfg.queries) {
    Json result;
    try {
      result = run_query(q, model, spec ? &*spec : nullptr,
                         an ? &*an : nullptr, cfg.tolerances);
    } catch (const ConfigError&) {
      throw;  // malformed query content is a schema problem, not numeric
    } catch (const std::exception& e) {
      result["type"] = q["type"];
      result["ok"] = false;
      result["error"] = e.what();
      rep.ok = false;
    }
    queries.push_back(std::move(result));
  }
  rep.doc["queries"] = std::move(queries);
  rep.doc["ok"] = rep.ok;
  return rep;
}

}  // namespace pmult
