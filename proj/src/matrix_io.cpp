#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "floquet/matrices.hpp"

namespace floquet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parses a double at the start of [first, last); returns the end of the number.
const char* read_double(const char* first, const char* last, double& out) {
  // from_chars rejects a leading '+'.
  const char* p = first;
  bool negate = false;
  if (p != last && (*p == '+' || *p == '-')) {
    negate = *p == '-';
    ++p;
  }
  auto [end, ec] = std::from_chars(p, last, out);
  if (ec != std::errc() || end == p) return nullptr;
  if (negate) out = -out;
  return end;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

FiniteMatrix external(CMatrix data, int k, const std::string& origin) {
  const bool herm = hermitian_defect(data) <= 1e-12;
  return FiniteMatrix(std::move(data), k, MatrixKind::external, herm, origin);
}

}  // namespace

Complex parse_complex(const std::string& raw) {
  const std::string cell = trim(raw);
  if (cell.empty()) throw std::runtime_error("empty matrix entry");
  const char* first = cell.data();
  const char* last = first + cell.size();
  double a = 0.0;
  const char* p = read_double(first, last, a);
  if (p == nullptr) throw std::runtime_error("cannot parse matrix entry '" + cell + "'");
  if (p == last) return {a, 0.0};
  if (*p == 'j' || *p == 'i') {
    if (p + 1 != last) throw std::runtime_error("trailing characters in '" + cell + "'");
    return {0.0, a};
  }
  double b = 0.0;
  if (*p != '+' && *p != '-') throw std::runtime_error("cannot parse matrix entry '" + cell + "'");
  const char* q = read_double(p, last, b);
  if (q == nullptr || q + 1 != last || (*q != 'j' && *q != 'i'))
    throw std::runtime_error("cannot parse matrix entry '" + cell + "'");
  return {a, b};
}

FiniteMatrix parse_matrix_csv(const std::string& text, int k) {
  std::vector<std::vector<Complex>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<Complex> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_complex(cell));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw std::runtime_error("matrix CSV is empty");
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw std::runtime_error("matrix CSV is not square (row " + std::to_string(i + 1) + " has " +
                               std::to_string(rows[i].size()) + " entries, expected " +
                               std::to_string(n) + ")");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return external(std::move(m), k, "external csv");
}

FiniteMatrix parse_matrix_json(const std::string& text, int k) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    const auto& re = doc.at("re");
    const auto n = static_cast<Eigen::Index>(re.size());
    if (n == 0) throw std::runtime_error("matrix JSON is empty");
    CMatrix m = CMatrix::Zero(n, n);
    const auto fill = [&](const json& rows, bool imag) {
      if (static_cast<Eigen::Index>(rows.size()) != n)
        throw std::runtime_error("matrix JSON is not square");
      for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
          throw std::runtime_error("matrix JSON is not square");
        for (Eigen::Index j = 0; j < n; ++j) {
          const double x = rows[i][j].get<double>();
          if (imag)
            m(i, j).imag(x);
          else
            m(i, j).real(x);
        }
      }
    };
    fill(re, false);
    if (doc.contains("im")) fill(doc.at("im"), true);
    return external(std::move(m), k, "external json");
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid matrix JSON: ") + e.what());
  }
}

FiniteMatrix load_matrix(const std::string& path, int k) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  FiniteMatrix m = is_json ? parse_matrix_json(ss.str(), k) : parse_matrix_csv(ss.str(), k);
  return FiniteMatrix(m.data(), k, MatrixKind::external, m.hermitian(), "external " + path);
}

void write_matrix_csv(std::ostream& os, const CMatrix& m) {
  const bool real = m.imag().cwiseAbs().maxCoeff() == 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      const Complex z = m(i, j);
      os << fmt17(z.real());
      if (!real) os << (std::signbit(z.imag()) ? "" : "+") << fmt17(z.imag()) << 'j';
    }
    os << '\n';
  }
}

std::string matrix_to_json(const CMatrix& m) {
  using nlohmann::json;
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"re", re}, {"im", im}}.dump();
}

void save_matrix(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json)
    out << matrix_to_json(m) << '\n';
  else
    write_matrix_csv(out, m);
}

}  // namespace floquet
