#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rab/problem.hpp"

namespace rab {
namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(std::span<const cplx> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

cplx complex_from_json(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
    parse_fail(where + ": expected a [re, im] pair");
  }
  const double re = node[0].get<double>();
  const double im = node[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) parse_fail(where + ": non-finite value");
  return {re, im};
}

ComplexVector vector_from_json(const json& node, std::size_t expected, const std::string& field) {
  if (!node.is_array()) parse_fail("field '" + field + "': expected an array");
  if (node.size() != expected) {
    parse_fail("field '" + field + "': expected " + std::to_string(expected) + " entries, got " +
               std::to_string(node.size()));
  }
  ComplexVector out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    out[i] = complex_from_json(node[i], "field '" + field + "' entry " + std::to_string(i));
  }
  return out;
}

ComplexMatrix matrix_from_json(const json& node, std::size_t rows, std::size_t cols, const std::string& field) {
  if (!node.is_array()) parse_fail("field '" + field + "': expected an array of rows");
  if (node.size() != rows) {
    parse_fail("field '" + field + "': expected " + std::to_string(rows) + " rows, got " +
               std::to_string(node.size()));
  }
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = vector_from_json(node[i], cols, field + "[" + std::to_string(i) + "]");
    std::copy(row.begin(), row.end(), out.row(i).begin());
  }
  return out;
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t require_count(const json& doc, const char* key) {
  const json& node = require(doc, key);
  if (!node.is_number_integer() || node.get<long long>() < 0) {
    parse_fail(std::string("field '") + key + "': expected a nonnegative integer");
  }
  return node.get<std::size_t>();
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line/column for the message.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    parse_fail("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void append_matrix(std::string& out, const char* key, const ComplexMatrix& m, bool last) {
  out += "  \"";
  out += key;
  out += "\": [\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += "    " + vector_to_json(m.row(i)).dump();
    out += i + 1 < m.rows() ? ",\n" : "\n";
  }
  out += last ? "  ]\n" : "  ],\n";
}

}  // namespace

std::string serialize_problem(const RabProblem& p) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(p.n()) + ",\n";
  out += "  \"m\": " + std::to_string(p.m()) + ",\n";
  out += "  \"epsilon\": " + json(p.epsilon).dump() + ",\n";
  append_matrix(out, "R", p.R, false);
  out += "  \"a\": " + vector_to_json(p.a).dump() + ",\n";
  append_matrix(out, "A", p.A, true);
  out += "}\n";
  return out;
}

LoadedProblem parse_problem(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) parse_fail("top level must be an object");
  const std::size_t n = require_count(doc, "n");
  const std::size_t m = require_count(doc, "m");
  if (n == 0) parse_fail("field 'n': must be at least 1");
  const json& eps = require(doc, "epsilon");
  if (!eps.is_number()) parse_fail("field 'epsilon': expected a number");

  LoadedProblem out;
  out.problem.epsilon = eps.get<double>();
  out.problem.R = matrix_from_json(require(doc, "R"), n, n, "R");
  out.problem.a = vector_from_json(require(doc, "a"), n, "a");
  out.problem.A = matrix_from_json(require(doc, "A"), m, n, "A");
  out.warnings = validate(out.problem).messages;
  return out;
}

void save_problem(const RabProblem& p, const std::filesystem::path& path) { write_file(path, serialize_problem(p)); }

LoadedProblem load_problem(const std::filesystem::path& path) { return parse_problem(read_file(path)); }

std::string serialize_solution(const SolutionFile& s) {
  json doc;
  doc["n"] = s.w.size();
  doc["w"] = vector_to_json(s.w);
  if (!s.verdict.empty()) doc["verdict"] = s.verdict;
  if (s.objective) doc["objective"] = *s.objective;
  if (s.mu) doc["mu"] = *s.mu;
  if (s.k) doc["k"] = *s.k;
  return doc.dump(2) + "\n";
}

SolutionFile parse_solution(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) parse_fail("top level must be an object");
  const json& w = require(doc, "w");
  if (!w.is_array()) parse_fail("field 'w': expected an array");
  std::size_t n = w.size();
  if (doc.contains("n")) n = require_count(doc, "n");
  SolutionFile out;
  out.w = vector_from_json(w, n, "w");
  if (auto it = doc.find("verdict"); it != doc.end() && it->is_string()) out.verdict = it->get<std::string>();
  if (auto it = doc.find("objective"); it != doc.end() && it->is_number()) out.objective = it->get<double>();
  if (auto it = doc.find("mu"); it != doc.end() && it->is_number()) out.mu = it->get<double>();
  if (auto it = doc.find("k"); it != doc.end() && it->is_number()) out.k = it->get<double>();
  return out;
}

void save_solution(const SolutionFile& s, const std::filesystem::path& path) {
  write_file(path, serialize_solution(s));
}

SolutionFile load_solution(const std::filesystem::path& path) { return parse_solution(read_file(path)); }

}  // namespace rab
