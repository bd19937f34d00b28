#include "vvlift/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <iomanip>
#include <sstream>

namespace vvlift {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw InputError("expected a decimal string");
  const std::string s = j.get<std::string>();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("bad decimal '" + s + "'");
  }
  if (used != s.size()) throw InputError("bad decimal '" + s + "'");
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

json exponent_json(const UnitaryExponent& e) {
  return e.exact ? json(to_string(*e.exact)) : json(g17(e.value));
}

std::map<long, long> eta_exponents_from_json(const json& j) {
  std::map<long, long> r;
  for (auto it = j.begin(); it != j.end(); ++it) r[std::stol(it.key())] = it.value().get<long>();
  return r;
}

json eta_exponents_json(const std::map<long, long>& r) {
  json o = json::object();
  for (const auto& [d, e] : r) o[std::to_string(d)] = e;
  return o;
}

}  // namespace

json to_json(const Rational& r) { return to_string(r); }

json to_json(cplx z) { return json::array({g17(z.real()), g17(z.imag())}); }

json to_json(const ExactMatrix2& g) {
  return json::array({to_string(g.a()), to_string(g.b()), to_string(g.c()), to_string(g.d())});
}

json to_json(const ExtendedPoint& p) {
  if (!p.is_cusp_point()) throw InputError("only cusps serialize as points");
  return to_string(p);
}

json to_json(const CMat& M) {
  json data = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c) data.push_back(to_json(M(r, c)));
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

json to_json(const LogQSeries& s) {
  json chans = json::array();
  for (const auto& [key, ch] : s.channels) {
    json coeffs = json::array();
    for (const auto& v : ch.coeffs) {
      json vec = json::array();
      for (Eigen::Index t = 0; t < v.size(); ++t) vec.push_back(to_json(v(t)));
      coeffs.push_back(vec);
    }
    chans.push_back({{"mu", to_string(key.mu)}, {"logpow", key.logpow}, {"nmin", ch.nmin}, {"coeffs", coeffs}});
  }
  return {{"dim", s.dim},
          {"period", to_string(s.period)},
          {"valid_through", to_string(s.valid_through)},
          {"channels", chans}};
}

json to_json(const Subgroup& H) {
  json o{{"label", H.label()}};
  if (H.family() == Subgroup::Family::Table) {
    o["table"] = {{"S", H.table()->sigma_S}, {"T", H.table()->sigma_T}};
  }
  return o;
}

json to_json(const CuspData& c) {
  return {{"cusp", to_json(c.cusp)},
          {"width", to_string(c.width)},
          {"scaling", to_json(c.scaling)},
          {"stabilizer", to_json(c.stabilizer)},
          {"standard_width", to_string(c.standard_width)}};
}

json to_json(const LiftPlan& plan) {
  json entries = json::array();
  long sum_h = 0;
  for (const auto& e : plan.entries) {
    json gs = json::array();
    for (const auto& g : e.g) gs.push_back(to_json(g));
    entries.push_back({{"cusp", to_json(e.cusp)},
                       {"h", e.h},
                       {"A", to_json(e.A)},
                       {"B", to_json(e.B)},
                       {"t", to_json(e.t)},
                       {"a2", to_string(e.a2)},
                       {"alpha_a", to_string(e.alpha_a)},
                       {"g", gs}});
    sum_h += e.h;
  }
  return {{"subgroup", to_json(*plan.H)},
          {"ambient", to_json(plan.ambient)},
          {"index", plan.d},
          {"sum_h", sum_h},
          {"entries", entries}};
}

json to_json(const Representation& rho) {
  if (auto* a = dynamic_cast<const AmbientRep*>(&rho))
    return {{"kind", "ambient"}, {"S", to_json(a->image_S())}, {"T", to_json(a->image_T())}};
  if (auto* e = dynamic_cast<const EtaCharacter*>(&rho))
    return {{"kind", "eta_character"}, {"level", e->level()}, {"r", eta_exponents_json(e->exponents())}};
  if (auto* t = dynamic_cast<const TensorRep*>(&rho))
    return {{"kind", "tensor"}, {"left", to_json(*t->left())}, {"right", to_json(*t->right())}};
  if (auto* s = dynamic_cast<const DirectSumRep*>(&rho))
    return {{"kind", "direct_sum"}, {"left", to_json(*s->left())}, {"right", to_json(*s->right())}};
  if (auto* r = dynamic_cast<const RestrictedRep*>(&rho))
    return {{"kind", "restriction"}, {"base", to_json(*r->base())}, {"subgroup", to_json(*r->group())}};
  if (auto* c = dynamic_cast<const CosetTableRep*>(&rho)) {
    json gens = json::array();
    for (const auto& [key, M] : c->generator_images())
      gens.push_back({{"coset", key.first}, {"gen", std::string(1, key.second)}, {"matrix", to_json(M)}});
    return {{"kind", "coset_table_rep"}, {"subgroup", to_json(*c->group())}, {"dim", c->dim()}, {"generators", gens}};
  }
  if (auto* ind = dynamic_cast<const InducedRep*>(&rho))
    return {{"kind", "induced"},
            {"base", to_json(*ind->base())},
            {"subgroup", to_json(*ind->plan().H)},
            {"cusp", to_json(ind->plan().ambient.cusp)}};
  throw InputError("representation kind '" + rho.kind() + "' has no schema");
}

json to_json(const VVAF& X) {
  json cusps = json::array();
  for (const auto& c : X.cusps)
    cusps.push_back({{"cusp", to_json(c.cusp)}, {"scaling", to_json(c.scaling)}, {"series", to_json(c.series)}});
  return {{"kind", "explicit"},
          {"weight", X.weight},
          {"label", X.label},
          {"subgroup", to_json(*X.H)},
          {"rho", to_json(*X.rho)},
          {"cusps", cusps}};
}

json to_json(const JordanSpec& js) {
  json eig = json::array();
  for (const auto& e : js.eigen)
    eig.push_back({{"lambda", to_json(e.lambda)}, {"mu", exponent_json(e.mu)}, {"sizes", e.sizes}});
  return {{"eigen", eig}, {"diagonalizable", js.diagonalizable()}};
}

json to_json(const SpectrumReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"exponent", exponent_json(r.exponent)},
                    {"predicted_sizes", r.predicted_sizes},
                    {"observed_sizes", r.observed_sizes},
                    {"eigenvalue_gap", g17(r.eigenvalue_gap)},
                    {"match", r.match}});
  return {{"pass", rep.pass},
          {"rows", rows},
          {"max_eigenvector_residual", g17(rep.max_eigenvector_residual)},
          {"observed_diagonalizable", rep.observed_diagonalizable},
          {"observed", to_json(rep.observed)}};
}

json to_json(const CheckReport& rep) {
  return {{"name", rep.name},
          {"pass", rep.pass},
          {"residual", g17(rep.residual)},
          {"tolerance", g17(rep.tolerance)},
          {"samples", rep.samples},
          {"notes", rep.notes}};
}

json to_json(const LiftedVVAF& L) {
  json comps = json::array();
  for (const auto& c : L.components) comps.push_back({{"i", c.i}, {"j", c.j}});
  return {{"plan", to_json(*L.plan)},
          {"weight", L.weight},
          {"source", L.source->label},
          {"lifted_rep", to_json(*L.lifted_rep)},
          {"components", comps},
          {"series", to_json(L.series)}};
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError("rational must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("complex must be [re, im]");
  return {parse_double(j[0]), parse_double(j[1])};
}

ExactMatrix2 matrix2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("matrix must be a 4-element array");
  try {
    return ExactMatrix2(rational_from_json(j[0]), rational_from_json(j[1]), rational_from_json(j[2]),
                        rational_from_json(j[3]));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("bad matrix: ") + e.what());
  }
}

ExtendedPoint cusp_from_json(const json& j) {
  if (!j.is_string()) throw InputError("cusp must be \"oo\" or \"p/q\"");
  return parse_cusp(j.get<std::string>());
}

CMat cmat_from_json(const json& j) {
  const long rows = field(j, "rows").get<long>(), cols = field(j, "cols").get<long>();
  const json& data = field(j, "data");
  if (rows < 0 || cols < 0 || static_cast<long>(data.size()) != rows * cols)
    throw InputError("matrix data size does not match rows x cols");
  CMat M(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) M(r, c) = complex_from_json(data[r * cols + c]);
  return M;
}

LogQSeries series_from_json(const json& j) {
  LogQSeries s(field(j, "dim").get<int>(), rational_from_json(field(j, "period")),
               rational_from_json(field(j, "valid_through")));
  for (const auto& ch : field(j, "channels")) {
    const Rational mu = rational_from_json(field(ch, "mu"));
    const int logpow = field(ch, "logpow").get<int>();
    const long nmin = field(ch, "nmin").get<long>();
    const json& coeffs = field(ch, "coeffs");
    // Zero runs are stored explicitly so that the channel layout survives.
    Channel stored;
    stored.nmin = nmin;
    for (const auto& vec : coeffs) {
      if (static_cast<int>(vec.size()) != s.dim) throw InputError("coefficient vector has wrong length");
      CVec v(s.dim);
      for (int t = 0; t < s.dim; ++t) v(t) = complex_from_json(vec[t]);
      stored.coeffs.push_back(v);
    }
    if (mu < 0 || mu >= 1) throw InputError("channel mu must lie in [0, 1)");
    if (!stored.coeffs.empty() && mu + Rational(stored.nend() - 1) >= s.valid_through)
      throw InputError("channel runs past valid_through");
    s.channels[{mu, logpow}] = std::move(stored);
  }
  return s;
}

std::shared_ptr<const Subgroup> subgroup_from_json(const json& j) {
  if (j.is_string()) return std::make_shared<const Subgroup>(Subgroup::parse(j.get<std::string>()));
  const std::string label = field(j, "label").get<std::string>();
  if (j.contains("table")) {
    CosetTable t;
    t.sigma_S = field(j["table"], "S").get<std::vector<int>>();
    t.sigma_T = field(j["table"], "T").get<std::vector<int>>();
    return std::make_shared<const Subgroup>(Subgroup::from_table(std::move(t), label));
  }
  return std::make_shared<const Subgroup>(Subgroup::parse(label));
}

LiftPlan plan_from_json(const json& j) {
  auto H = subgroup_from_json(field(j, "subgroup"));
  const ExtendedPoint c = cusp_from_json(field(field(j, "ambient"), "cusp"));
  LiftPlan plan = cusp_orbits(*H, c);
  const json& entries = field(j, "entries");
  if (entries.size() != plan.entries.size()) throw ConsistencyError("plan has the wrong number of cusp classes");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = plan.entries[i];
    if (field(entries[i], "h").get<long>() != e.h || matrix2_from_json(field(entries[i], "A")) != e.A ||
        matrix2_from_json(field(entries[i], "B")) != e.B ||
        !(cusp_from_json(field(field(entries[i], "cusp"), "cusp")) == e.cusp.cusp))
      throw ConsistencyError("stored plan entry " + std::to_string(i) + " disagrees with recomputation");
  }
  return plan;
}

RepPtr rep_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "ambient") return std::make_shared<AmbientRep>(cmat_from_json(field(j, "S")), cmat_from_json(field(j, "T")));
  if (kind == "identity") return identity_rep();
  if (kind == "trivial") return trivial_rep(j.value("dim", 1));
  if (kind == "nu_power") return nu_power(field(j, "k").get<long>());
  if (kind == "eta_character")
    return std::make_shared<EtaCharacter>(field(j, "level").get<long>(), eta_exponents_from_json(field(j, "r")));
  if (kind == "tensor") return std::make_shared<TensorRep>(rep_from_json(field(j, "left")), rep_from_json(field(j, "right")));
  if (kind == "direct_sum")
    return std::make_shared<DirectSumRep>(rep_from_json(field(j, "left")), rep_from_json(field(j, "right")));
  if (kind == "restriction")
    return std::make_shared<RestrictedRep>(rep_from_json(field(j, "base")), subgroup_from_json(field(j, "subgroup")));
  if (kind == "coset_table_rep") {
    std::map<std::pair<int, char>, CMat> images;
    for (const auto& g : field(j, "generators")) {
      const std::string gen = field(g, "gen").get<std::string>();
      if (gen != "S" && gen != "T") throw InputError("generator must be \"S\" or \"T\"");
      images[{field(g, "coset").get<int>(), gen[0]}] = cmat_from_json(field(g, "matrix"));
    }
    return std::make_shared<CosetTableRep>(subgroup_from_json(field(j, "subgroup")), field(j, "dim").get<int>(),
                                           std::move(images));
  }
  if (kind == "induced") {
    auto H = subgroup_from_json(field(j, "subgroup"));
    return std::make_shared<InducedRep>(rep_from_json(field(j, "base")),
                                        cusp_orbits(*H, cusp_from_json(field(j, "cusp"))));
  }
  throw InputError("unknown representation kind '" + kind + "'");
}

CheckReport check_from_json(const json& j) {
  CheckReport r;
  r.name = field(j, "name").get<std::string>();
  r.pass = field(j, "pass").get<bool>();
  r.residual = parse_double(field(j, "residual"));
  r.tolerance = parse_double(field(j, "tolerance"));
  r.samples = field(j, "samples").get<long>();
  r.notes = field(j, "notes").get<std::vector<std::string>>();
  return r;
}

VVAF form_from_json(const json& j) {
  const std::string kind = j.value("kind", std::string("explicit"));
  if (kind == "eta_quotient") {
    return eta_quotient_form(field(j, "level").get<long>(), eta_exponents_from_json(field(j, "r")),
                             j.value("trunc", 50L));
  }
  if (kind == "tau_one") {
    const long trunc = j.value("trunc", 50L);
    VVAF base = tau_one(j.value("k", 0), trunc);
    if (!j.contains("subgroup")) return base;
    return restrict_ambient(base.weight, base.rho, base.cusps.front().series, subgroup_from_json(j["subgroup"]),
                            base.closed_form, base.label);
  }
  if (kind != "explicit") throw InputError("unknown form kind '" + kind + "'");
  VVAF X;
  X.weight = field(j, "weight").get<int>();
  X.label = j.value("label", std::string());
  X.H = subgroup_from_json(field(j, "subgroup"));
  X.rho = rep_from_json(field(j, "rho"));
  for (const auto& c : field(j, "cusps"))
    X.cusps.push_back({cusp_from_json(field(c, "cusp")), matrix2_from_json(field(c, "scaling")),
                       series_from_json(field(c, "series"))});
  if (X.cusps.empty()) throw InputError("form needs at least one cusp expansion");
  attach_charts(X);
  return X;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

json environment_fingerprint() {
  return {{"compiler", __VERSION__},
          {"cplusplus", static_cast<long>(__cplusplus)},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"gmp", gmp_version},
          {"openmp", static_cast<long>(_OPENMP)}};
}

bool VerdictReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json to_json(const VerdictReport& v) {
  json checks = json::object();
  for (const auto& c : v.checks) checks[c.name] = to_json(c);
  return {{"checks", checks},
          {"pass", v.pass()},
          {"fingerprint", environment_fingerprint()},
          {"inputs", v.input_hashes},
          {"warnings", v.warnings},
          {"seed", v.seed},
          {"truncation", v.truncation}};
}

VerdictReport verdict_from_json(const json& j) {
  VerdictReport v;
  for (const auto& [name, c] : field(j, "checks").items()) v.checks.push_back(check_from_json(c));
  v.input_hashes = field(j, "inputs").get<std::map<std::string, std::string>>();
  v.warnings = field(j, "warnings").get<std::vector<std::string>>();
  v.seed = field(j, "seed").get<unsigned>();
  v.truncation = field(j, "truncation").get<long>();
  return v;
}

std::string emit(const json& j) { return j.dump(2) + "\n"; }

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace vvlift
