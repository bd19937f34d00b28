// Command-line driver. Exit codes: 0 pass, 1 input error, 2 consistency
// failure (including failed hard checks), 3 truncation too short.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vvlift/io.hpp"
#include "vvlift/kernels.hpp"

namespace fs = std::filesystem;
using namespace vvlift;

namespace {

struct JobConfig {
  std::string subgroup = "SL2Z";
  std::string rep, form, cusp = "oo", out, kind = "tau_one";
  int weight = 0;
  long trunc = 50;
  unsigned seed = 1;
  int threads = 0;
  bool assert_holomorphic = false;
  std::vector<std::string> tol;
  std::map<std::string, double> tolerances{{"vanishing", 1e-9},    {"roundtrip", 1e-10},
                                           {"interleaving", 1e-12}, {"oracle", 1e-8},
                                           {"functional_equation", 1e-7}};
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Inline JSON when the argument starts with '{', otherwise a file path.
std::string document_text(const std::string& arg) {
  return !arg.empty() && arg.front() == '{' ? arg : slurp(arg);
}

void write_out(const JobConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(cfg.out);
  std::ofstream f(fs::path(cfg.out) / name, std::ios::binary);
  if (!f) throw InputError("cannot write to '" + cfg.out + "'");
  f << text;
}

void finish_config(JobConfig& cfg) {
  if (cfg.trunc < 8) throw InputError("--trunc must be at least 8");
  for (const auto& kv : cfg.tol) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--tol expects name=value");
    const std::string name = kv.substr(0, eq);
    if (!cfg.tolerances.count(name)) throw InputError("unknown tolerance '" + name + "'");
    double v = 0;
    try {
      v = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("bad tolerance value in '" + kv + "'");
    }
    if (!(v > 0)) throw InputError("tolerances must be positive");
    cfg.tolerances[name] = v;
  }
  set_thread_cap(cfg.threads);
}

// Plans are memoized as JSON under VVAF_LIFT_CACHE, keyed by subgroup and cusp.
json cached_plan(const Subgroup& H, const ExtendedPoint& c) {
  const char* dir = std::getenv("VVAF_LIFT_CACHE");
  const std::string key = sha256_hex(emit(to_json(H)) + to_string(c));
  if (dir && *dir) {
    const fs::path p = fs::path(dir) / (key + ".json");
    if (fs::exists(p)) {
      json j = parse_document(slurp(p.string()));
      // plan_from_json recomputes and throws on a stale or edited entry.
      if (j.value("key", std::string()) == key) return to_json(plan_from_json(j.at("plan")));
    }
  }
  json plan = to_json(cusp_orbits(H, c));
  if (dir && *dir) {
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / (key + ".json"), std::ios::binary);
    f << emit({{"key", key}, {"plan", plan}});
  }
  return plan;
}

std::shared_ptr<const Subgroup> job_subgroup(const JobConfig& cfg) {
  if (!cfg.subgroup.empty() && cfg.subgroup.front() == '{')
    return subgroup_from_json(parse_document(cfg.subgroup));
  if (fs::exists(cfg.subgroup)) return subgroup_from_json(parse_document(slurp(cfg.subgroup)));
  return std::make_shared<const Subgroup>(Subgroup::parse(cfg.subgroup));
}

int cmd_cusp_data(const JobConfig& cfg) {
  auto H = job_subgroup(cfg);
  write_out(cfg, "cusp_data.json", emit(cached_plan(*H, parse_cusp(cfg.cusp))));
  return 0;
}

int cmd_induce(const JobConfig& cfg) {
  if (cfg.rep.empty()) throw InputError("--rep is required");
  auto H = job_subgroup(cfg);
  RepPtr rho = rep_from_json(parse_document(document_text(cfg.rep)));
  InducedRep ind(rho, cusp_orbits(*H, parse_cusp(cfg.cusp)));
  const CMat S = ind.evaluate(ExactMatrix2::S()), T = ind.evaluate(ExactMatrix2::T());
  const CMat ST = S * T;
  const double rel = std::max((S * S * S * S - CMat::Identity(S.rows(), S.cols())).norm(),
                              (ST * ST * ST - S * S).norm());
  json out{{"rep", to_json(ind)}, {"S", to_json(S)}, {"T", to_json(T)}, {"relator_residual", rel}};
  write_out(cfg, "induced.json", emit(out));
  return rel <= 1e-9 ? 0 : 2;
}

int cmd_spectrum(const JobConfig& cfg) {
  if (cfg.rep.empty()) throw InputError("--rep is required");
  auto H = job_subgroup(cfg);
  RepPtr rho = rep_from_json(parse_document(document_text(cfg.rep)));
  LiftPlan plan = cusp_orbits(*H, parse_cusp(cfg.cusp));
  SpectrumPrediction pred = predict_spectrum(*rho, plan);
  SpectrumReport rep = verify_spectrum(pred, companion_block_at_cusp(*rho, plan));
  json base = json::array();
  for (const auto& b : pred.base) base.push_back(to_json(b));
  write_out(cfg, "spectrum.json", emit({{"plan", to_json(plan)}, {"base", base}, {"report", to_json(rep)}}));
  return rep.pass ? 0 : 2;
}

VVAF load_form(const JobConfig& cfg) {
  if (cfg.form.empty()) throw InputError("--form is required");
  json j = parse_document(document_text(cfg.form));
  if (j.value("kind", std::string("explicit")) != "explicit" && !j.contains("trunc")) j["trunc"] = cfg.trunc;
  return form_from_json(j);
}

VerdictReport run_checks(const JobConfig& cfg, const LiftedVVAF& L) {
  VerdictReport v;
  v.seed = cfg.seed;
  v.truncation = cfg.trunc;
  v.input_hashes["form"] = sha256_hex(cfg.form.empty() ? std::string() : document_text(cfg.form));
  v.input_hashes["cusp"] = sha256_hex(cfg.cusp);
  const auto& t = cfg.tolerances;
  v.checks.push_back(vanishing_check(L, t.at("vanishing")));
  v.checks.push_back(cuspidal_check(L));
  v.checks.push_back(roundtrip_check(L, t.at("roundtrip")));
  v.checks.push_back(interleaving_check(L, 20, t.at("interleaving")));
  v.checks.push_back(verify_functional_equation(L, functional_equation_samples(cfg.seed, 20),
                                                t.at("functional_equation")));
  if (L.source->closed_form || L.source->charts) {
    std::vector<cplx> pts;
    for (int p = 0; p < 10; ++p) pts.emplace_back(-0.45 + 0.1 * p, 2.0 + 0.1 * p);
    v.checks.push_back(oracle_check(L, pts, t.at("oracle")));
  }
  if (cfg.trunc <= 10) v.warnings.push_back("truncation N = " + std::to_string(cfg.trunc) + " limits precision");
  if (cfg.assert_holomorphic && L.weight != 0)
    v.warnings.push_back("holomorphy transfer is only asserted for weight 0; this job has weight " +
                         std::to_string(L.weight));
  return v;
}

int cmd_lift(const JobConfig& cfg) {
  auto X = std::make_shared<const VVAF>(load_form(cfg));
  LiftedVVAF L = assemble_lift(X, parse_cusp(cfg.cusp));
  VerdictReport v = run_checks(cfg, L);
  for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
  if (cfg.out.empty()) {
    std::cout << emit({{"lift", to_json(L)}, {"report", to_json(v)}});
  } else {
    write_out(cfg, "lift.json", emit(to_json(L)));
    write_out(cfg, "report.json", emit(to_json(v)));
  }
  return v.pass() ? 0 : 2;
}

int cmd_verify(const JobConfig& cfg) {
  VVAF X = load_form(cfg);
  VerdictReport v;
  v.seed = cfg.seed;
  v.truncation = cfg.trunc;
  v.input_hashes["form"] = sha256_hex(document_text(cfg.form));
  v.checks.push_back(verify_functional_equation(X, functional_equation_samples(cfg.seed, 20),
                                                cfg.tolerances.at("functional_equation")));
  write_out(cfg, "verify.json", emit(to_json(v)));
  return v.pass() ? 0 : 2;
}

int cmd_construct(const JobConfig& cfg) {
  if (cfg.kind != "tau_one") throw InputError("unknown construction '" + cfg.kind + "'");
  auto H = job_subgroup(cfg);
  if (H->family() != Subgroup::Family::Gamma0) throw InputError("tau_one construction needs Gamma0(N)");
  InducedTauOne r = induced_tau_one(H->level(), cfg.weight, cfg.trunc);
  json out{{"lift", to_json(r.lift)},
           {"f_power", r.f_power},
           {"eta_exponent", r.r},
           {"rank", r.independence.rank},
           {"size", r.independence.size},
           {"min_singular_ratio", r.independence.min_singular_ratio}};
  write_out(cfg, "construct.json", emit(out));
  return r.independence.rank == r.independence.size ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifts vector-valued automorphic forms from a finite-index subgroup to SL2(Z)."};
  app.require_subcommand(1);
  JobConfig cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--subgroup", cfg.subgroup, "label, coset-table JSON or path");
    sub->add_option("--rep", cfg.rep, "representation JSON or path");
    sub->add_option("--form", cfg.form, "form JSON or path");
    sub->add_option("--cusp", cfg.cusp, "ambient cusp, oo or p/q");
    sub->add_option("--weight", cfg.weight);
    sub->add_option("--trunc", cfg.trunc, "number of q-terms, at least 8");
    sub->add_option("--tol", cfg.tol, "name=value overrides");
    sub->add_option("--seed", cfg.seed);
    sub->add_option("--out", cfg.out, "output directory; stdout when absent");
    sub->add_option("--threads", cfg.threads);
  };
  std::map<std::string, std::function<int(const JobConfig&)>> handlers{
      {"cusp-data", cmd_cusp_data}, {"induce", cmd_induce}, {"spectrum", cmd_spectrum},
      {"lift", cmd_lift},           {"verify", cmd_verify}, {"construct", cmd_construct}};
  for (const auto& [name, fn] : handlers) {
    auto* sub = app.add_subcommand(name);
    common(sub);
    if (name == "lift") sub->add_flag("--assert-holomorphic", cfg.assert_holomorphic);
    if (name == "construct") sub->add_option("--kind", cfg.kind);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    finish_config(cfg);
    for (auto* sub : app.get_subcommands()) return handlers.at(sub->get_name())(cfg);
  } catch (const TruncationError& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return 3;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
