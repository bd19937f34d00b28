#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "vvlift/forms.hpp"
#include "vvlift/induction.hpp"
#include "vvlift/lift.hpp"

namespace vvlift {

using json = nlohmann::json;

// Rationals as "p/q"; complex numbers as ["re", "im"] with 17 significant
// digits; cusps as "oo" or "p/q"; 2x2 matrices as [a, b, c, d].
json to_json(const Rational& r);
json to_json(cplx z);
json to_json(const ExactMatrix2& g);
json to_json(const ExtendedPoint& p);
json to_json(const CMat& M);
json to_json(const LogQSeries& s);
json to_json(const Subgroup& H);
json to_json(const CuspData& c);
json to_json(const LiftPlan& plan);
json to_json(const Representation& rho);
json to_json(const VVAF& X);
json to_json(const JordanSpec& js);
json to_json(const SpectrumReport& rep);
json to_json(const CheckReport& rep);
json to_json(const LiftedVVAF& L);

Rational rational_from_json(const json& j);
cplx complex_from_json(const json& j);
ExactMatrix2 matrix2_from_json(const json& j);
ExtendedPoint cusp_from_json(const json& j);
CMat cmat_from_json(const json& j);
LogQSeries series_from_json(const json& j);
std::shared_ptr<const Subgroup> subgroup_from_json(const json& j);
// Recomputes the plan from its subgroup and ambient cusp and checks that
// every stored entry agrees.
LiftPlan plan_from_json(const json& j);
RepPtr rep_from_json(const json& j);
CheckReport check_from_json(const json& j);
// Explicit forms carry their cusp expansions; {"kind": "eta_quotient"} and
// {"kind": "tau_one"} build the form and its closed form.
VVAF form_from_json(const json& j);

std::string sha256_hex(const std::string& bytes);
// Compiler and library versions; no clocks or host names.
json environment_fingerprint();

struct VerdictReport {
  std::vector<CheckReport> checks;
  std::map<std::string, std::string> input_hashes;
  std::vector<std::string> warnings;
  unsigned seed = 0;
  long truncation = 0;

  bool pass() const;
};
json to_json(const VerdictReport& v);
VerdictReport verdict_from_json(const json& j);

// Two-space indented, keys sorted, trailing newline.
std::string emit(const json& j);
json parse_document(const std::string& text);

}  // namespace vvlift
