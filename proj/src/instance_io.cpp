#include "randsel/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "randsel/errors.hpp"

namespace randsel {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, comment-stripped line split into tokens.
  std::vector<std::string> next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    throw ParseError(std::string("unexpected end of input, expecting ") + expecting,
                     line_no_);
  }

  bool at_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return false;
    }
    return true;
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

double number(const std::string& tok, int line) {
  try {
    return parse_double(tok);
  } catch (const InvalidInputError& e) {
    throw ParseError(e.what(), line);
  }
}

int count_after(LineReader& r, const char* keyword) {
  auto t = r.next(keyword);
  if (t.size() != 2 || t[0] != keyword) {
    throw ParseError(std::string("expected '") + keyword + " <count>'", r.line());
  }
  const double v = number(t[1], r.line());
  if (v != static_cast<int>(v) || v < 1) {
    throw ParseError(std::string(keyword) + " must be a positive integer", r.line());
  }
  return static_cast<int>(v);
}

Eigen::MatrixXd read_matrix(LineReader& r, const char* name, int m) {
  auto head = r.next(name);
  if (head.size() != 1 || head[0] != name) {
    throw ParseError(std::string("expected '") + name + "'", r.line());
  }
  Eigen::MatrixXd out(m, m);
  for (int i = 0; i < m; ++i) {
    auto row = r.next("matrix row");
    if (static_cast<int>(row.size()) != m) {
      throw ParseError(std::string(name) + " row needs " + std::to_string(m) +
                           " entries",
                       r.line());
    }
    for (int j = 0; j < m; ++j) out(i, j) = number(row[j], r.line());
  }
  return out;
}

void write_row(std::ostringstream& out, const Eigen::RowVectorXd& row) {
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (j) out << ' ';
    out << format_double(row(j));
  }
  out << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InvalidInputError("not a number: '" + token + "'");
  }
  return v;
}

Instance parse_instance(std::istream& in) {
  LineReader r(in);
  const int m = count_after(r, "state_dim");
  Eigen::MatrixXd a = read_matrix(r, "A", m);
  Eigen::MatrixXd q = read_matrix(r, "Q", m);
  const int n = count_after(r, "sensors");
  std::vector<CandidateSensor> sensors;
  for (int i = 0; i < n; ++i) {
    auto row = r.next("sensor line");
    if (static_cast<int>(row.size()) != m + 1) {
      throw ParseError("sensor line needs " + std::to_string(m) +
                           " coefficients and a variance",
                       r.line());
    }
    CandidateSensor s{Eigen::VectorXd(m), 0.0};
    for (int j = 0; j < m; ++j) s.c(j) = number(row[j], r.line());
    s.sigma2 = number(row[m], r.line());
    sensors.push_back(std::move(s));
  }
  if (!r.at_end()) throw ParseError("trailing content", r.line());
  if (!q.isApprox(q.transpose(), 1e-12)) {
    throw ParseError("Q is not symmetric", r.line());
  }
  try {
    return Instance{LtiSystem(std::move(a), SymmetricMatrix(q)),
                    SensorPool(std::move(sensors))};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), r.line());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  return parse_instance(in);
}

std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  const int m = inst.system.state_dim();
  out << "state_dim " << m << "\nA\n";
  for (int i = 0; i < m; ++i) write_row(out, inst.system.a().row(i));
  out << "Q\n";
  for (int i = 0; i < m; ++i) write_row(out, inst.system.q().matrix().row(i));
  out << "sensors " << inst.pool.size() << '\n';
  for (const auto& s : inst.pool.sensors()) {
    Eigen::RowVectorXd row(m + 1);
    row << s.c.transpose(), s.sigma2;
    write_row(out, row);
  }
  return out.str();
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << format_instance(inst);
}

Eigen::VectorXd load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  std::string line;
  int line_no = 0;
  std::vector<std::pair<long, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.rfind("index", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected index,probability", line_no);
    std::string prob = line.substr(comma + 1);
    while (!prob.empty() && (prob.back() == '\r' || prob.back() == ' ')) prob.pop_back();
    rows.emplace_back(static_cast<long>(number(line.substr(0, comma), line_no)),
                      number(prob, line_no));
  }
  Eigen::VectorXd p(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<long>(i) + 1) {
      throw ParseError("indices must be 1..n in order", static_cast<int>(i) + 2);
    }
    p(i) = rows[i].second;
  }
  return p;
}

std::string format_distribution(const Eigen::VectorXd& p) {
  std::ostringstream out;
  out << "index,probability\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    out << i + 1 << ',' << format_double(p(i)) << '\n';
  }
  return out.str();
}

}  // namespace randsel
