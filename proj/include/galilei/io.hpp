#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "json.hpp"

#include "galilei/common.hpp"
#include "galilei/group.hpp"
#include "galilei/orbits.hpp"
#include "galilei/twobody.hpp"
#include "galilei/verify.hpp"

// Scenario files, trajectory tables and report serialization. Scenarios are
// JSON documents whose keys are the library's own field names; every number
// is printed back with 17 significant digits so emitted tables round-trip.

namespace galilei {

// A structurally broken scenario document: not JSON, wrong shape, missing,
// unknown or mistyped fields. Value-level constraint violations (m <= 0,
// zero spacetime force, n_steps < 1, non-finite numbers) surface as
// std::invalid_argument from the domain types instead.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForcedScenario {
  ForcedMassiveOrbit orbit;
  PQState state;
};

struct FreeScenario {
  FreeMassiveOrbit orbit;
  PQState state;
};

struct SpacetimeScenario {
  SpacetimeOrbit orbit;
  TauQState state;
};

struct TwoBodyScenario {
  TwoBodySystem system;
  ProductState state;
};

struct Scenario {
  std::variant<ForcedScenario, FreeScenario, SpacetimeScenario,
               TwoBodyScenario>
      body;
  double t_end = 0.0;
  int n_steps = 1;
};

namespace detail {

inline void reject_unknown_fields(const nlohmann::json& obj,
                                  const std::string& prefix,
                                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ScenarioError("unknown field: " + prefix + it.key());
    }
  }
}

inline const nlohmann::json& require_field(const nlohmann::json& obj,
                                           const std::string& prefix,
                                           const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ScenarioError("missing field: " + prefix + key);
  }
  return *it;
}

inline double require_number(const nlohmann::json& obj,
                             const std::string& prefix, const char* key) {
  const nlohmann::json& value = require_field(obj, prefix, key);
  if (!value.is_number()) {
    throw ScenarioError("field must be a number: " + prefix + key);
  }
  const double v = value.get<double>();
  require_finite(v, key);
  return v;
}

inline double optional_number(const nlohmann::json& obj,
                              const std::string& prefix, const char* key,
                              double fallback) {
  if (obj.find(key) == obj.end()) return fallback;
  return require_number(obj, prefix, key);
}

inline int require_steps(const nlohmann::json& obj, const char* key) {
  const nlohmann::json& value = require_field(obj, "", key);
  if (!value.is_number_integer()) {
    throw ScenarioError(std::string("field must be an integer: ") + key);
  }
  const long long v = value.get<long long>();
  if (v < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (v > 10'000'000) {
    throw std::invalid_argument("n_steps is unreasonably large");
  }
  return static_cast<int>(v);
}

inline const nlohmann::json& require_state_object(const nlohmann::json& obj) {
  const nlohmann::json& state = require_field(obj, "", "state");
  if (!state.is_object()) {
    throw ScenarioError("field must be an object: state");
  }
  return state;
}

inline std::string require_kind(const nlohmann::json& obj) {
  const nlohmann::json& value = require_field(obj, "", "kind");
  if (!value.is_string()) {
    throw ScenarioError("field must be a string: kind");
  }
  return value.get<std::string>();
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    // Covers syntax errors and lexer-level number overflow alike.
    throw ScenarioError(std::string("scenario is not valid JSON: ") +
                        e.what());
  }
  if (!doc.is_object()) {
    throw ScenarioError("scenario must be a JSON object");
  }

  const std::string kind = detail::require_kind(doc);
  const auto finish = [&](auto body) {
    const double t_end = detail::require_number(doc, "", "t_end");
    const int n_steps = detail::require_steps(doc, "n_steps");
    return Scenario{std::move(body), t_end, n_steps};
  };

  if (kind == "single_forced") {
    detail::reject_unknown_fields(
        doc, "", {"kind", "m", "f", "U", "state", "t_end", "n_steps"});
    const nlohmann::json& state = detail::require_state_object(doc);
    detail::reject_unknown_fields(state, "state.", {"p", "q"});
    return finish(ForcedScenario{
        ForcedMassiveOrbit{detail::require_number(doc, "", "m"),
                           detail::require_number(doc, "", "f"),
                           detail::optional_number(doc, "", "U", 0.0)},
        PQState{detail::require_number(state, "state.", "p"),
                detail::require_number(state, "state.", "q")}});
  }
  if (kind == "single_free") {
    detail::reject_unknown_fields(
        doc, "", {"kind", "m", "U", "state", "t_end", "n_steps"});
    const nlohmann::json& state = detail::require_state_object(doc);
    detail::reject_unknown_fields(state, "state.", {"p", "q"});
    return finish(FreeScenario{
        FreeMassiveOrbit{detail::require_number(doc, "", "m"),
                         detail::optional_number(doc, "", "U", 0.0)},
        PQState{detail::require_number(state, "state.", "p"),
                detail::require_number(state, "state.", "q")}});
  }
  if (kind == "single_spacetime") {
    detail::reject_unknown_fields(
        doc, "", {"kind", "f", "K", "state", "t_end", "n_steps"});
    const nlohmann::json& state = detail::require_state_object(doc);
    detail::reject_unknown_fields(state, "state.", {"tau", "q"});
    return finish(SpacetimeScenario{
        SpacetimeOrbit{detail::require_number(doc, "", "f"),
                       detail::optional_number(doc, "", "K", 0.0)},
        TauQState{detail::require_number(state, "state.", "tau"),
                  detail::require_number(state, "state.", "q")}});
  }
  if (kind == "two_body") {
    detail::reject_unknown_fields(doc, "",
                                  {"kind", "m1", "m2", "f1", "f2", "state",
                                   "t_end", "n_steps"});
    const nlohmann::json& state = detail::require_state_object(doc);
    detail::reject_unknown_fields(state, "state.", {"p1", "q1", "p2", "q2"});
    return finish(TwoBodyScenario{
        TwoBodySystem{detail::require_number(doc, "", "m1"),
                      detail::require_number(doc, "", "m2"),
                      detail::require_number(doc, "", "f1"),
                      detail::require_number(doc, "", "f2")},
        ProductState{detail::require_number(state, "state.", "p1"),
                     detail::require_number(state, "state.", "q1"),
                     detail::require_number(state, "state.", "p2"),
                     detail::require_number(state, "state.", "q2")}});
  }
  throw ScenarioError("unknown scenario kind: " + kind);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot read scenario file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

namespace detail {

inline void append_csv_row(std::string& out,
                           std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  out += '\n';
}

inline double sample_time(double t_end, int n_steps, int i) {
  return (i == n_steps) ? t_end
                        : t_end * (static_cast<double>(i) / n_steps);
}

// Massive single-particle table; the trailing column is the recovered
// internal energy, constant along the flow.
template <typename Orbit>
std::string massive_trajectory_csv(const Orbit& orbit, const PQState& s0,
                                   double t_end, int n_steps) {
  std::string out = "t,p,q,jK,jP,jE,U\n";
  for (int i = 0; i <= n_steps; ++i) {
    const double t = sample_time(t_end, n_steps, i);
    const PQState s = act(orbit, GroupElement{0.0, t, 0.0}, s0);
    const Momentum j = momentum(orbit, s);
    append_csv_row(out, {t, s.p, s.q, j.jK, j.jP, j.jE, casimir(orbit, j)});
  }
  return out;
}

inline std::string trajectory_csv_body(const ForcedScenario& sc, double t_end,
                                       int n_steps) {
  return massive_trajectory_csv(sc.orbit, sc.state, t_end, n_steps);
}

inline std::string trajectory_csv_body(const FreeScenario& sc, double t_end,
                                       int n_steps) {
  return massive_trajectory_csv(sc.orbit, sc.state, t_end, n_steps);
}

inline std::string trajectory_csv_body(const SpacetimeScenario& sc,
                                       double t_end, int n_steps) {
  std::string out = "t,tau,q,jK,jP,jE,K\n";
  for (int i = 0; i <= n_steps; ++i) {
    const double t = sample_time(t_end, n_steps, i);
    const TauQState s = act(sc.orbit, GroupElement{0.0, t, 0.0}, sc.state);
    const Momentum j = momentum(sc.orbit, s);
    append_csv_row(out,
                   {t, s.tau, s.q, j.jK, j.jP, j.jE, casimir(sc.orbit, j)});
  }
  return out;
}

inline std::string trajectory_csv_body(const TwoBodyScenario& sc,
                                       double t_end, int n_steps) {
  const BarycenterState b0 = to_barycenter(sc.system, sc.state);
  std::string out = "t,p,q,pi,rho,jP_cm,jK_cm,jP_int,jK_int,jE\n";
  for (const TrajectorySample& row :
       trajectory(sc.system, b0, t_end, n_steps)) {
    append_csv_row(out, {row.t, row.state.p, row.state.q, row.state.pi,
                         row.state.rho, row.momentum.jP_cm,
                         row.momentum.jK_cm, row.momentum.jP_int,
                         row.momentum.jK_int, row.momentum.jE});
  }
  return out;
}

inline void append_kv(std::string& out, const char* key, double value) {
  out += key;
  out += " = ";
  out += format_double(value);
  out += '\n';
}

}  // namespace detail

inline std::string trajectory_csv(const Scenario& sc) {
  return std::visit(
      [&](const auto& body) {
        return detail::trajectory_csv_body(body, sc.t_end, sc.n_steps);
      },
      sc.body);
}

// Barycenter decomposition of a two-body scenario's initial state, with the
// derived parameters and the isolation classification.
inline std::string decompose_text(const TwoBodyScenario& sc) {
  const DerivedParams d = derive_params(sc.system);
  const BarycenterState b = to_barycenter(sc.system, sc.state);
  std::string out;
  detail::append_kv(out, "p", b.p);
  detail::append_kv(out, "q", b.q);
  detail::append_kv(out, "pi", b.pi);
  detail::append_kv(out, "rho", b.rho);
  detail::append_kv(out, "m", d.m);
  detail::append_kv(out, "mu", d.mu);
  detail::append_kv(out, "f", d.f);
  detail::append_kv(out, "phi", d.phi);
  out += "isolated = ";
  out += is_isolated(d, default_isolation_tolerance(sc.system)) ? "true"
                                                                : "false";
  out += '\n';
  return out;
}

namespace detail {

inline std::string momentum_text_body(const ForcedScenario& sc) {
  const Momentum j = momentum(sc.orbit, sc.state);
  std::string out;
  append_kv(out, "jK", j.jK);
  append_kv(out, "jP", j.jP);
  append_kv(out, "jE", j.jE);
  append_kv(out, "U", casimir(sc.orbit, j));
  return out;
}

inline std::string momentum_text_body(const FreeScenario& sc) {
  const Momentum j = momentum(sc.orbit, sc.state);
  std::string out;
  append_kv(out, "jK", j.jK);
  append_kv(out, "jP", j.jP);
  append_kv(out, "jE", j.jE);
  append_kv(out, "U", casimir(sc.orbit, j));
  return out;
}

inline std::string momentum_text_body(const SpacetimeScenario& sc) {
  const Momentum j = momentum(sc.orbit, sc.state);
  std::string out;
  append_kv(out, "jK", j.jK);
  append_kv(out, "jP", j.jP);
  append_kv(out, "jE", j.jE);
  append_kv(out, "K", casimir(sc.orbit, j));
  return out;
}

inline std::string momentum_text_body(const TwoBodyScenario& sc) {
  const TwoBodyMomentum j =
      momenta(sc.system, to_barycenter(sc.system, sc.state));
  std::string out;
  append_kv(out, "jP_cm", j.jP_cm);
  append_kv(out, "jK_cm", j.jK_cm);
  append_kv(out, "jP_int", j.jP_int);
  append_kv(out, "jK_int", j.jK_int);
  append_kv(out, "jE", j.jE);
  return out;
}

}  // namespace detail

// Momentum components (and Casimir, where the orbit has one) of a
// scenario's initial state.
inline std::string momentum_text(const Scenario& sc) {
  return std::visit(
      [](const auto& body) { return detail::momentum_text_body(body); },
      sc.body);
}

// One line per check, "name, trials, max_residual, PASS|FAIL", then an
// overall line with the record count and the worst residual. Byte-stable
// for a fixed (seed, trials).
inline std::string format_report(const VerificationReport& report) {
  std::string out;
  for (const CheckRecord& r : report.records) {
    out += r.name;
    out += ", ";
    out += std::to_string(r.trials);
    out += ", ";
    out += format_double(r.max_residual);
    out += ", ";
    out += r.passed ? "PASS" : "FAIL";
    out += '\n';
  }
  out += "overall, ";
  out += std::to_string(report.records.size());
  out += ", ";
  out += format_double(report.max_residual());
  out += ", ";
  out += report.overall_pass() ? "PASS" : "FAIL";
  out += '\n';
  return out;
}

inline std::string info_text() {
  std::string out = "galilei ";
  out += kVersion;
  out += '\n';
  out += "default_seed = " + std::to_string(kDefaultSeed) + '\n';
  out += "default_trials = " + std::to_string(kDefaultTrials) + '\n';
  const auto tolerance_line = [&](const char* key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s = %g\n", key, value);
    out += buf;
  };
  tolerance_line("exact_tolerance", kExactTol);
  tolerance_line("action_tolerance", kActionTol);
  tolerance_line("finite_diff_tolerance", kFiniteDiffTol);
  tolerance_line("fd_step", kFdStep);
  tolerance_line("fd_second_step", kFdSecondStep);
  return out;
}

}  // namespace galilei
