#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relcoh/abelian.hpp"
#include "relcoh/cochain.hpp"
#include "relcoh/dimlim.hpp"
#include "relcoh/groups.hpp"
#include "relcoh/io.hpp"
#include "relcoh/toeplitz.hpp"

namespace relcoh::cli {

using nlohmann::json;

enum ExitCode : int { ok = 0, refused = 1, usage = 2, check_failed = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline FiniteGroup resolve_group(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') return io::finite_group_from_json(io::read_json_file(spec.substr(1)), "group");
  try {
    return builtin::by_name(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--group: ") + e.what());
  }
}

inline Element resolve_subgroup_token(const FiniteGroup& g, const std::string& token, const std::string& field) {
  if (token.find(',') != std::string::npos) {
    Permutation p;
    std::stringstream ss(token);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        p.push_back(static_cast<std::uint32_t>(std::stoul(item)));
      } catch (const std::exception&) {
        throw UsageError(field + ": cannot parse permutation '" + token + "'");
      }
    }
    auto e = g.find_permutation(p);
    if (!e) throw UsageError(field + ": permutation '" + token + "' is not an element of the group");
    return *e;
  }
  try {
    std::size_t pos = 0;
    unsigned long v = std::stoul(token, &pos);
    if (pos == token.size() && v < g.order()) return static_cast<Element>(v);
  } catch (const std::exception&) {
  }
  throw UsageError(field + ": '" + token + "' is neither a permutation nor an element index");
}

/// "perm;perm" with comma-separated images, bare element indices, or @file
/// holding {"generators": [[...]]} or {"elements": [...]}.
inline std::vector<Element> resolve_subgroup(const FiniteGroup& g, const std::string& spec, json& echo) {
  std::vector<Element> out;
  if (spec.empty()) return out;
  if (spec[0] == '@') {
    json j = io::read_json_file(spec.substr(1));
    echo = j;
    if (j.contains("generators") && j["generators"].is_array()) {
      for (std::size_t i = 0; i < j["generators"].size(); ++i) {
        const json& p = j["generators"][i];
        std::string field = "subgroup.generators[" + std::to_string(i) + "]";
        if (!p.is_array()) throw io::FormatError(field, "expected an array");
        Permutation perm;
        for (const auto& x : p) {
          if (!x.is_number_unsigned()) throw io::FormatError(field, "expected non-negative integers");
          perm.push_back(x.get<std::uint32_t>());
        }
        auto e = g.find_permutation(perm);
        if (!e) throw io::FormatError(field, "not an element of the group");
        out.push_back(*e);
      }
      return out;
    }
    if (j.contains("elements") && j["elements"].is_array()) {
      for (std::size_t i = 0; i < j["elements"].size(); ++i) {
        const json& x = j["elements"][i];
        std::string field = "subgroup.elements[" + std::to_string(i) + "]";
        if (!x.is_number_unsigned() || x.get<std::size_t>() >= g.order()) throw io::FormatError(field, "expected an element index");
        out.push_back(x.get<Element>());
      }
      return out;
    }
    throw io::FormatError("subgroup", "expected generators or elements");
  }
  echo = json::array();
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ';')) {
    if (token.empty()) continue;
    out.push_back(resolve_subgroup_token(g, token, "--subgroup"));
    echo.push_back(token);
  }
  return out;
}

/// Group literal: printed form, inline JSON, or @file.
inline FgAbGroup resolve_abelian(const std::string& spec, const std::string& field) {
  if (!spec.empty() && spec[0] == '@') return io::group_from_json(io::read_json_file(spec.substr(1)), field);
  if (!spec.empty() && spec[0] == '{') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::parse_error& e) {
      throw io::FormatError(field, std::string("invalid JSON: ") + e.what());
    }
    return io::group_from_json(j, field);
  }
  try {
    return io::group_from_text(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(field + ": " + e.what());
  }
}

inline StationaryLimit limit_from_json(const json& j, const std::string& path) {
  auto m = io::matrix_from_json(io::detail::member(j, "matrix", path), path + ".matrix");
  auto e = io::vector_from_json(io::detail::member(j, "unit", path), path + ".unit");
  try {
    return StationaryLimit(m, e);
  } catch (const std::invalid_argument& ex) {
    throw io::FormatError(path, ex.what());
  }
}

inline json outcome_to_json(const LimitOutcome& o) {
  if (o.finitely_generated()) return {{"finitely_generated", true}, {"group", io::group_to_json(o.group)}};
  json basis = json::array();
  for (const auto& v : o.witness_basis) basis.push_back(io::vector_to_json(v));
  return {{"finitely_generated", false}, {"witness_basis", basis}, {"witness_action", io::matrix_to_json(o.witness_action)}};
}

struct Options {
  std::string group;
  std::string subgroup;
  std::size_t n = 0;
  std::size_t depth = 0;
  std::size_t max_tuples = default_tuple_cap;
  std::int64_t seed = -1;
  bool json_output = false;
  bool full_basis = false;
  std::vector<std::string> positional;
};

inline void emit_cohomology(const Options& o, bool relative, std::ostream& out) {
  FiniteGroup g = resolve_group(o.group);
  json echo = nullptr;
  std::vector<Element> h = relative ? resolve_subgroup(g, o.subgroup, echo) : std::vector<Element>{};
  ChainBasis basis = o.full_basis ? ChainBasis::full : ChainBasis::normalized;
  std::size_t level = relative ? o.n + 3 : o.n + 1;
  InvariantChain chain(relative ? coset_space(g, h) : regular_space(g), level, basis, o.max_tuples);
  io::CohomologyReport report{o.group, echo, o.n, homology_at(chain, level), {}};
  for (std::size_t m = 1; m <= level + 1; ++m) report.orbit_counts.push_back(chain.basis(m).size());
  if (o.json_output) {
    out << io::report_to_json(report).dump(2) << "\n";
  } else {
    out << report.result.to_string() << "\n";
  }
}

inline int emit_morse(const Options& o, std::ostream& out) {
  auto rep = morse_report();
  if (o.json_output) {
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"value", c.value}, {"pass", c.pass}});
    out << json{{"checks", checks},
                {"quotient_xz", rep.quotient_xz},
                {"quotient_zy", rep.quotient_zy},
                {"quotient_xy", rep.quotient_xy},
                {"h0_xz", rep.h0_xz},
                {"h0_xy", rep.h0_xy},
                {"all_pass", rep.all_pass()}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& c : rep.checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << (c.value.empty() ? "" : " = " + c.value) << "\n";
  }
  return rep.all_pass() ? ok : check_failed;
}

inline void emit_dimquot(const Options& o, std::ostream& out) {
  std::vector<std::pair<std::string, Intertwiner>> cases;
  if (o.positional.empty()) {
    cases = {{"K0(X)/r*K0(Z)", morse::r_star()}, {"K0(Z)/q*K0(Y)", morse::q_star()}, {"K0(X)/p*K0(Y)", morse::p_star()}};
  } else {
    const std::string& spec = o.positional.front();
    if (spec.empty() || spec[0] != '@') throw UsageError("dimquot: expected @file");
    json j = io::read_json_file(spec.substr(1));
    auto src = limit_from_json(io::detail::member(j, "source", "dimquot"), "dimquot.source");
    auto dst = limit_from_json(io::detail::member(j, "target", "dimquot"), "dimquot.target");
    auto r = io::matrix_from_json(io::detail::member(j, "map", "dimquot"), "dimquot.map");
    try {
      cases.push_back({spec.substr(1), Intertwiner(src, dst, r)});
    } catch (const std::invalid_argument& e) {
      throw io::FormatError("dimquot.map", e.what());
    }
  }
  json all = json::array();
  for (const auto& [name, t] : cases) {
    auto outcome = quotient_by_intertwiner(t);
    if (o.json_output) {
      all.push_back({{"name", name}, {"result", outcome_to_json(outcome)}});
    } else {
      out << name << " = " << outcome_string(outcome) << "\n";
    }
  }
  if (o.json_output) out << all.dump(2) << "\n";
}

inline int emit_toeplitz(const Options& o, std::ostream& out) {
  FiniteGroup g = resolve_group(o.group);
  if (o.depth < 2 || o.depth > 24) throw UsageError("--depth: expected an integer in [2, 24]");
  auto u = o.seed >= 0 ? scrambled_enumeration(g, static_cast<std::uint64_t>(o.seed)) : default_enumeration(g);
  auto w = generate_window(g, u, o.depth);
  if (!o.json_output) {
    for (std::size_t i = 0; i < w.values.size(); ++i) out << (i ? " " : "") << w.values[i];
    out << "\n";
    return ok;
  }
  bool periodic = true, identity = true, regular = true;
  for (std::size_t i = 0; i < w.values.size(); ++i) periodic = periodic && w.values[i] == w.stage_value[w.stage_of[i]];
  auto back = construction_identity(g, w);
  for (std::size_t k = 0; k < back.size(); ++k) identity = identity && back[k] == u[k % g.order()];
  auto profile = regularity_profile(w);
  for (std::size_t k = 0; k < w.depth; ++k) regular = regular && profile[k] == Rational(1) - Rational(1, 2ul << k);
  auto ev = essential_values_check(g, u, o.depth, 1);
  json prof = json::array();
  for (const auto& r : profile) prof.push_back(r.get_str());
  out << json{{"group", o.group},
              {"depth", o.depth},
              {"enumeration", u},
              {"window", w.values},
              {"stage_values", w.stage_value},
              {"checks",
               {{"periodic", periodic},
                {"construction_identity", identity},
                {"regularity", regular},
                {"regularity_profile", prof},
                {"essential_values", std::vector<Element>(ev.begin(), ev.end())},
                {"essential_full", ev.size() == g.order()}}}}
             .dump(2)
      << "\n";
  return ok;
}

}  // namespace detail

/// Runs one command line (args excludes the program name). Exit codes: 0 ok,
/// 1 refusal (a cap was hit), 2 usage or malformed input, 3 a check failed.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact invariants of finite group extensions: cohomology, dimension groups, Toeplitz windows"};
  app.name("relcoh");
  app.require_subcommand(1);
  detail::Options o;

  auto json_flag = [&](CLI::App* s) { s->add_flag("--json", o.json_output, "Emit JSON"); };
  auto* hn = app.add_subcommand("hn-group", "H^n(G) with integer coefficients");
  hn->add_option("--group", o.group, "Builtin name or @file")->required();
  hn->add_option("--n", o.n, "Degree")->required();
  hn->add_option("--max-tuples", o.max_tuples, "Refuse above this many top-level tuples");
  hn->add_flag("--full", o.full_basis, "Use the full orbit basis instead of the normalized one");
  json_flag(hn);
  auto* ext_rel = app.add_subcommand("hn-ext", "H^n(X|Y) for an isometric extension with fiber G/H");
  ext_rel->add_option("--group", o.group, "Builtin name or @file")->required();
  ext_rel->add_option("--subgroup", o.subgroup, "\"perm;perm\" or @file; default trivial");
  ext_rel->add_option("--n", o.n, "Degree")->required();
  ext_rel->add_option("--max-tuples", o.max_tuples, "Refuse above this many top-level tuples");
  ext_rel->add_flag("--full", o.full_basis, "Use the full orbit basis instead of the normalized one");
  json_flag(ext_rel);
  auto* tor_cmd = app.add_subcommand("tor", "Tor(M, G) for f.g. M and finite G");
  tor_cmd->add_option("groups", o.positional, "M G")->expected(2)->required();
  json_flag(tor_cmd);
  auto* ext_cmd = app.add_subcommand("ext", "Ext(G, Z) for finite G");
  ext_cmd->add_option("group", o.positional, "G")->expected(1)->required();
  json_flag(ext_cmd);
  auto* morse_cmd = app.add_subcommand("morse", "Recompute the Morse example");
  json_flag(morse_cmd);
  auto* dq = app.add_subcommand("dimquot", "Quotient of stationary dimension groups by an intertwiner");
  dq->add_option("spec", o.positional, "@file; default: the three Morse quotients")->expected(0, 1);
  json_flag(dq);
  auto* tp = app.add_subcommand("toeplitz", "Toeplitz window over a finite group");
  tp->add_option("--group", o.group, "Builtin name or @file")->required();
  tp->add_option("--depth", o.depth, "Window covers positions [0, 2^depth)")->required();
  tp->add_option("--seed", o.seed, "Scramble the enumeration with this seed");
  json_flag(tp);

  std::vector<std::string> argv_store{"relcoh"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (hn->parsed()) detail::emit_cohomology(o, false, out);
    if (ext_rel->parsed()) detail::emit_cohomology(o, true, out);
    if (tor_cmd->parsed()) {
      auto m = detail::resolve_abelian(o.positional[0], "M");
      auto g = detail::resolve_abelian(o.positional[1], "G");
      auto r = tor(m, g);
      if (o.json_output) {
        out << json{{"m", io::group_to_json(m)}, {"g", io::group_to_json(g)}, {"result", io::group_to_json(r)}}.dump(2) << "\n";
      } else {
        out << r.to_string() << "\n";
      }
    }
    if (ext_cmd->parsed()) {
      auto g = detail::resolve_abelian(o.positional[0], "G");
      auto r = ext_z(g);
      if (o.json_output) {
        out << json{{"g", io::group_to_json(g)}, {"result", io::group_to_json(r)}}.dump(2) << "\n";
      } else {
        out << r.to_string() << "\n";
      }
    }
    if (morse_cmd->parsed()) return detail::emit_morse(o, out);
    if (dq->parsed()) detail::emit_dimquot(o, out);
    if (tp->parsed()) return detail::emit_toeplitz(o, out);
  } catch (const CapExceeded& e) {
    if (o.json_output) out << json{{"refused", true}, {"reason", e.reason()}, {"message", e.what()}}.dump(2) << "\n";
    err << "refused (" << e.reason() << "): " << e.what() << "\n";
    return refused;
  } catch (const io::FormatError& e) {
    err << "malformed input: " << e.what() << "\n";
    return usage;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return usage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return usage;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return usage;
  }
  return ok;
}

}  // namespace relcoh::cli
