#include "savsddp/lp_problem.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_set>

#include "savsddp/errors.hpp"

namespace savsddp::lp {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

int LpProblem::add_variable(double lower, double upper, double cost, std::string name) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  var_names_.push_back(std::move(name));
  return num_vars() - 1;
}

void LpProblem::add_row(std::string id, std::vector<std::pair<int, double>> coeffs,
                        double rhs) {
  rows_.push_back(LpRow{std::move(id), std::move(coeffs), rhs});
}

int LpProblem::row_index(const std::string& id) const {
  for (int i = 0; i < num_rows(); ++i) {
    if (rows_[i].id == id) return i;
  }
  return -1;
}

void LpProblem::validate() const {
  const int n = num_vars();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lower_[j]))
      throw ValidationError("variable " + std::to_string(j) + ": lower bound must be finite");
    if (std::isnan(upper_[j]))
      throw ValidationError("variable " + std::to_string(j) + ": upper bound is NaN");
    if (lower_[j] > upper_[j])
      throw ValidationError("variable " + std::to_string(j) + ": lower bound " +
                            std::to_string(lower_[j]) + " exceeds upper bound " +
                            std::to_string(upper_[j]));
    if (!std::isfinite(cost_[j]))
      throw ValidationError("variable " + std::to_string(j) + ": non-finite cost");
  }
  std::unordered_set<std::string> seen;
  for (int i = 0; i < num_rows(); ++i) {
    const LpRow& r = rows_[i];
    if (!r.id.empty() && !seen.insert(r.id).second)
      throw ValidationError("duplicate row id '" + r.id + "'");
    if (!std::isfinite(r.rhs))
      throw ValidationError("row '" + r.id + "': non-finite rhs");
    for (const auto& [j, a] : r.coeffs) {
      if (j < 0 || j >= n)
        throw ValidationError("row '" + r.id + "': coefficient references variable " +
                              std::to_string(j) + " out of range [0," +
                              std::to_string(n) + ")");
      if (!std::isfinite(a))
        throw ValidationError("row '" + r.id + "': non-finite coefficient");
    }
  }
}

bool LpProblem::operator==(const LpProblem& other) const {
  if (cost_ != other.cost_ || lower_ != other.lower_ || upper_ != other.upper_)
    return false;
  if (rows_.size() != other.rows_.size()) return false;
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].id != other.rows_[i].id || rows_[i].rhs != other.rows_[i].rhs ||
        rows_[i].coeffs != other.rows_[i].coeffs)
      return false;
  }
  return true;
}

namespace {

void append_number(std::string& out, double v) {
  if (v == kInf) {
    out += "inf";
    return;
  }
  if (v == -kInf) {
    out += "-inf";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_number(const std::string& tok, const char* what) {
  if (tok == "inf") return kInf;
  if (tok == "-inf") return -kInf;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw ValidationError(std::string("lp parse: bad ") + what + " '" + tok + "'");
  return v;
}

}  // namespace

std::string dump_problem(const LpProblem& p) {
  std::string out;
  out += "lp 1 vars ";
  out += std::to_string(p.num_vars());
  out += "\nminimize :";
  for (int j = 0; j < p.num_vars(); ++j) {
    out += ' ';
    append_number(out, p.cost()[j]);
    out += "*x";
    out += std::to_string(j);
  }
  out += '\n';
  for (int j = 0; j < p.num_vars(); ++j) {
    out += "bound x";
    out += std::to_string(j);
    out += " : ";
    append_number(out, p.lower()[j]);
    out += ' ';
    append_number(out, p.upper()[j]);
    out += '\n';
  }
  for (const LpRow& r : p.rows()) {
    out += "row ";
    out += r.id.empty() ? "_" : r.id;
    out += " :";
    for (const auto& [j, a] : r.coeffs) {
      out += ' ';
      append_number(out, a);
      out += "*x";
      out += std::to_string(j);
    }
    out += " = ";
    append_number(out, r.rhs);
    out += '\n';
  }
  out += "end\n";
  return out;
}

LpProblem parse_problem(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  auto next = [&]() -> std::string {
    std::string t;
    if (!(in >> t)) throw ValidationError("lp parse: unexpected end of input");
    return t;
  };

  if (next() != "lp" || next() != "1")
    throw ValidationError("lp parse: missing 'lp 1' header");
  if (next() != "vars") throw ValidationError("lp parse: missing 'vars'");
  const int n = static_cast<int>(parse_number(next(), "var count"));

  if (next() != "minimize" || next() != ":")
    throw ValidationError("lp parse: missing 'minimize :'");
  std::vector<double> cost(n, 0.0);
  for (int j = 0; j < n; ++j) {
    tok = next();
    auto star = tok.find("*x");
    if (star == std::string::npos)
      throw ValidationError("lp parse: bad objective term '" + tok + "'");
    cost[j] = parse_number(tok.substr(0, star), "cost");
  }

  LpProblem p;
  std::vector<std::pair<double, double>> bounds(n, {0.0, kInf});
  for (int j = 0; j < n; ++j) {
    if (next() != "bound") throw ValidationError("lp parse: expected 'bound'");
    next();  // variable name, positional
    if (next() != ":") throw ValidationError("lp parse: expected ':' in bound");
    double lo = parse_number(next(), "lower bound");
    double up = parse_number(next(), "upper bound");
    bounds[j] = {lo, up};
  }
  for (int j = 0; j < n; ++j) p.add_variable(bounds[j].first, bounds[j].second, cost[j]);

  while (true) {
    tok = next();
    if (tok == "end") break;
    if (tok != "row") throw ValidationError("lp parse: expected 'row' or 'end'");
    std::string id = next();
    if (id == "_") id.clear();
    if (next() != ":") throw ValidationError("lp parse: expected ':' in row");
    std::vector<std::pair<int, double>> coeffs;
    while (true) {
      tok = next();
      if (tok == "=") break;
      auto star = tok.find("*x");
      if (star == std::string::npos)
        throw ValidationError("lp parse: bad row term '" + tok + "'");
      double a = parse_number(tok.substr(0, star), "coefficient");
      int j = static_cast<int>(parse_number(tok.substr(star + 2), "var index"));
      coeffs.emplace_back(j, a);
    }
    double rhs = parse_number(next(), "rhs");
    p.add_row(std::move(id), std::move(coeffs), rhs);
  }
  return p;
}

}  // namespace savsddp::lp
