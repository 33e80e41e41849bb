#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relcoh/abelian.hpp"
#include "relcoh/fg_group.hpp"
#include "relcoh/groups.hpp"
#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"

namespace relcoh::io {

using nlohmann::json;

/// Malformed input; `field` names the offending JSON path.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(path + "." + key, "missing");
  return *it;
}

inline std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw FormatError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

/// Integers are written as decimal strings; both strings and JSON integers are read.
inline Integer integer_from_json(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return Integer::parse(j.get<std::string>());
    if (j.is_number_integer()) return Integer(j.get<long long>());
    if (j.is_number_unsigned()) return Integer::parse(std::to_string(j.get<unsigned long long>()));
  } catch (const std::invalid_argument&) {
  }
  throw FormatError(path, "expected an integer or a decimal string");
}

inline json integer_to_json(const Integer& x) { return x.to_string(); }

inline json matrix_to_json(const ExactMatrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(integer_to_json(m.at(i, j)));
    entries.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ExactMatrix matrix_from_json(const json& j, const std::string& path = "matrix") {
  std::size_t rows = detail::count(detail::member(j, "rows", path), path + ".rows");
  std::size_t cols = detail::count(detail::member(j, "cols", path), path + ".cols");
  const json& entries = detail::member(j, "entries", path);
  if (!entries.is_array() || entries.size() != rows) throw FormatError(path + ".entries", "expected " + std::to_string(rows) + " rows");
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < rows; ++i) {
    std::string rp = path + ".entries[" + std::to_string(i) + "]";
    if (!entries[i].is_array() || entries[i].size() != cols) throw FormatError(rp, "expected " + std::to_string(cols) + " entries");
    IntVector row;
    for (std::size_t k = 0; k < cols; ++k) row.push_back(integer_from_json(entries[i][k], rp + "[" + std::to_string(k) + "]"));
    out.push_back(std::move(row));
  }
  return ExactMatrix::from_rows(rows, cols, out);
}

inline json vector_to_json(const IntVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(integer_to_json(x));
  return out;
}

inline IntVector vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, "expected an array");
  IntVector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

/// {"factors": [...], "rank": r}. Factors fitting in 64 bits are plain numbers.
inline json group_to_json(const FgAbGroup& g) {
  json factors = json::array();
  for (const auto& f : g.invariant_factors()) {
    if (f.fits_int64()) {
      factors.push_back(f.to_int64());
    } else {
      factors.push_back(f.to_string());
    }
  }
  return {{"factors", std::move(factors)}, {"rank", g.free_rank()}};
}

inline FgAbGroup group_from_json(const json& j, const std::string& path = "group") {
  const json& factors = detail::member(j, "factors", path);
  if (!factors.is_array()) throw FormatError(path + ".factors", "expected an array");
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::string fp = path + ".factors[" + std::to_string(i) + "]";
    Integer f = integer_from_json(factors[i], fp);
    if (f.sign() <= 0) throw FormatError(fp, "factors must be positive");
    orders.push_back(f);
  }
  std::size_t rank = j.contains("rank") ? detail::count(j["rank"], path + ".rank") : 0;
  return FgAbGroup(orders, rank);
}

/// Parses the printed form ("0", "Z", "Z^2 + Z/2 + Z/4") back into a group.
inline FgAbGroup group_from_text(const std::string& text) {
  std::vector<Integer> orders;
  std::size_t rank = 0;
  std::string compact;
  for (char c : text)
    if (c != ' ') compact += c;
  if (compact == "0") return FgAbGroup();
  std::stringstream ss(compact);
  std::string part;
  auto bad = [&] { return std::invalid_argument("cannot parse group '" + text + "'"); };
  if (compact.empty()) throw bad();
  while (std::getline(ss, part, '+')) {
    if (part == "Z") {
      ++rank;
    } else if (part.rfind("Z^", 0) == 0) {
      Integer r = Integer::parse(part.substr(2));
      if (r.sign() < 0 || !r.fits_int64()) throw bad();
      rank += static_cast<std::size_t>(r.to_int64());
    } else if (part.rfind("Z/", 0) == 0) {
      Integer f = Integer::parse(part.substr(2));
      if (f.sign() <= 0) throw bad();
      orders.push_back(f);
    } else {
      throw bad();
    }
  }
  return FgAbGroup(orders, rank);
}

inline json hom_to_json(const AbHom& h) {
  return {{"source", group_to_json(h.source())}, {"target", group_to_json(h.target())}, {"matrix", matrix_to_json(h.matrix())}};
}

inline AbHom hom_from_json(const json& j, const std::string& path = "hom") {
  auto src = group_from_json(detail::member(j, "source", path), path + ".source");
  auto dst = group_from_json(detail::member(j, "target", path), path + ".target");
  auto m = matrix_from_json(detail::member(j, "matrix", path), path + ".matrix");
  try {
    return AbHom(src, dst, m);
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ".matrix", e.what());
  }
}

/// {"order": n, "table": [[...]]} or {"degree": d, "generators": [[...]]}.
inline FiniteGroup finite_group_from_json(const json& j, const std::string& path = "group") {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  if (j.contains("table")) {
    std::size_t order = detail::count(detail::member(j, "order", path), path + ".order");
    const json& t = j["table"];
    if (!t.is_array() || t.size() != order) throw FormatError(path + ".table", "expected " + std::to_string(order) + " rows");
    std::vector<std::vector<Element>> table;
    for (std::size_t i = 0; i < order; ++i) {
      std::string rp = path + ".table[" + std::to_string(i) + "]";
      if (!t[i].is_array() || t[i].size() != order) throw FormatError(rp, "expected " + std::to_string(order) + " entries");
      std::vector<Element> row;
      for (std::size_t k = 0; k < order; ++k) row.push_back(static_cast<Element>(detail::count(t[i][k], rp + "[" + std::to_string(k) + "]")));
      table.push_back(std::move(row));
    }
    try {
      return FiniteGroup::from_table(std::move(table));
    } catch (const std::invalid_argument& e) {
      throw FormatError(path + ".table", e.what());
    }
  }
  if (j.contains("generators")) {
    std::size_t degree = detail::count(detail::member(j, "degree", path), path + ".degree");
    const json& gens = j["generators"];
    if (!gens.is_array()) throw FormatError(path + ".generators", "expected an array");
    std::vector<Permutation> perms;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::string gp = path + ".generators[" + std::to_string(i) + "]";
      if (!gens[i].is_array() || gens[i].size() != degree) throw FormatError(gp, "expected " + std::to_string(degree) + " images");
      Permutation p;
      for (std::size_t k = 0; k < degree; ++k) p.push_back(static_cast<std::uint32_t>(detail::count(gens[i][k], gp + "[" + std::to_string(k) + "]")));
      perms.push_back(std::move(p));
    }
    try {
      return FiniteGroup::from_permutations(degree, perms);
    } catch (const std::invalid_argument& e) {
      throw FormatError(path + ".generators", e.what());
    }
  }
  throw FormatError(path, "expected either table or generators");
}

/// Cohomology report: {"group", "subgroup", "n", "result", "orbit_counts"}.
struct CohomologyReport {
  std::string group;
  json subgroup;  // null, or the generator list as given
  std::size_t n = 0;
  FgAbGroup result;
  std::vector<std::size_t> orbit_counts;
};

inline json report_to_json(const CohomologyReport& r) {
  return {{"group", r.group}, {"subgroup", r.subgroup}, {"n", r.n}, {"result", group_to_json(r.result)}, {"orbit_counts", r.orbit_counts}};
}

inline CohomologyReport report_from_json(const json& j) {
  CohomologyReport r;
  const json& g = detail::member(j, "group", "report");
  if (!g.is_string()) throw FormatError("report.group", "expected a string");
  r.group = g.get<std::string>();
  r.subgroup = detail::member(j, "subgroup", "report");
  r.n = detail::count(detail::member(j, "n", "report"), "report.n");
  r.result = group_from_json(detail::member(j, "result", "report"), "report.result");
  const json& counts = detail::member(j, "orbit_counts", "report");
  if (!counts.is_array()) throw FormatError("report.orbit_counts", "expected an array");
  for (std::size_t i = 0; i < counts.size(); ++i) r.orbit_counts.push_back(detail::count(counts[i], "report.orbit_counts[" + std::to_string(i) + "]"));
  return r;
}

/// Reads and parses a JSON file; syntax errors name the file.
inline json read_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw FormatError(filename, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(filename, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace relcoh::io
