#include "coverage_miqp/lp_format.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coverage_miqp {

namespace {

constexpr int kTermsPerLine = 6;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual:
      return "<=";
    case Sense::GreaterEqual:
      return ">=";
    case Sense::Equal:
      return "=";
  }
  return "=";
}

class TermWriter {
 public:
  explicit TermWriter(std::ostringstream& out) : out_(out) {}

  void term(double coef, const std::string& body) {
    if (count_ > 0 && count_ % kTermsPerLine == 0) out_ << "\n   ";
    out_ << (std::signbit(coef) ? " - " : " + ") << num(std::abs(coef)) << ' ' << body;
    ++count_;
  }

 private:
  std::ostringstream& out_;
  int count_ = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_number(const std::string& tok, double& out) {
  const std::string l = lower(tok);
  if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") {
    out = kInf;
    return true;
  }
  if (l == "-inf" || l == "-infinity") {
    out = -kInf;
    return true;
  }
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

double require_number(const std::string& tok) {
  double v = 0;
  if (!parse_number(tok, v)) throw std::invalid_argument("lp: expected a number, got '" + tok + "'");
  return v;
}

bool is_sense(const std::string& tok) { return tok == "<=" || tok == ">=" || tok == "=" || tok == "=<" || tok == "=>"; }

Sense to_sense(const std::string& tok) {
  if (tok == "<=" || tok == "=<") return Sense::LessEqual;
  if (tok == ">=" || tok == "=>") return Sense::GreaterEqual;
  return Sense::Equal;
}

// Linear term stream "[+|-] [number] name ...". Returns the index after the
// last consumed token; stops at a sense token or '['.
std::size_t parse_terms(const std::vector<std::string>& tok, std::size_t i, std::map<std::string, double>& into) {
  while (i < tok.size() && !is_sense(tok[i]) && tok[i] != "[") {
    double sign = 1.0;
    if (tok[i] == "+" || tok[i] == "-") {
      // "+ [" opens the quadratic bracket.
      if (i + 1 < tok.size() && tok[i + 1] == "[") return i + 1;
      sign = tok[i] == "-" ? -1.0 : 1.0;
      ++i;
    }
    if (i >= tok.size()) throw std::invalid_argument("lp: dangling sign");
    double coef = 1.0;
    double parsed = 0.0;
    if (parse_number(tok[i], parsed)) {
      coef = parsed;
      ++i;
    }
    if (i >= tok.size() || is_sense(tok[i])) throw std::invalid_argument("lp: coefficient without variable");
    into[tok[i]] += sign * coef;
    ++i;
  }
  return i;
}

std::size_t parse_quadratic(const std::vector<std::string>& tok, std::size_t i,
                            std::map<std::pair<std::string, std::string>, double>& into) {
  // tok[i] == "["
  ++i;
  while (i < tok.size() && tok[i] != "]") {
    double sign = 1.0;
    if (tok[i] == "+" || tok[i] == "-") {
      sign = tok[i] == "-" ? -1.0 : 1.0;
      ++i;
    }
    double coef = 1.0;
    double parsed = 0.0;
    if (i < tok.size() && parse_number(tok[i], parsed)) {
      coef = parsed;
      ++i;
    }
    if (i + 2 >= tok.size()) throw std::invalid_argument("lp: truncated quadratic term");
    const std::string a = tok[i];
    std::string b;
    if (tok[i + 1] == "^") {
      if (tok[i + 2] != "2") throw std::invalid_argument("lp: only squares are supported");
      b = a;
    } else if (tok[i + 1] == "*") {
      b = tok[i + 2];
    } else {
      throw std::invalid_argument("lp: malformed quadratic term near '" + a + "'");
    }
    i += 3;
    into[{std::min(a, b), std::max(a, b)}] += sign * coef / 2.0;
  }
  if (i >= tok.size()) throw std::invalid_argument("lp: unterminated quadratic bracket");
  if (i + 2 >= tok.size() || tok[i + 1] != "/" || tok[i + 2] != "2") {
    throw std::invalid_argument("lp: quadratic bracket must be followed by '/ 2'");
  }
  return i + 3;
}

}  // namespace

LpProblem to_lp_problem(const MiqpModel& m) {
  const auto& vars = m.vars;
  LpProblem p;
  for (const auto& t : m.objective.linear) p.objective[vars[t.var].name] += t.coef;
  p.objective[vars[vars.obj_const()].name] += m.objective.constant;
  for (const auto& q : m.objective.quadratic) {
    const std::string& a = vars[q.i].name;
    const std::string& b = vars[q.j].name;
    p.quadratic[{std::min(a, b), std::max(a, b)}] += q.coef;
  }
  for (const auto& r : m.rows) {
    LpRow row{r.name, {}, r.sense, r.rhs};
    for (const auto& t : r.terms) row.coefs[vars[t.var].name] += t.coef;
    p.rows.push_back(std::move(row));
  }
  for (const auto& v : vars.variables()) {
    if (v.type == VarType::Binary) {
      p.binaries.push_back(v.name);
    } else {
      p.bounds[v.name] = {v.lb, v.ub};
    }
  }
  std::sort(p.binaries.begin(), p.binaries.end());
  return p;
}

std::string write_lp(const LpProblem& p) {
  std::ostringstream out;
  out << "Minimize\n obj:";
  {
    TermWriter w(out);
    for (const auto& [name, coef] : p.objective) w.term(coef, name);
  }
  if (!p.quadratic.empty()) {
    out << "\n   + [";
    TermWriter w(out);
    for (const auto& [key, coef] : p.quadratic) {
      const std::string body = key.first == key.second ? key.first + " ^ 2" : key.first + " * " + key.second;
      w.term(2.0 * coef, body);
    }
    out << " ] / 2";
  }
  out << "\nSubject To\n";
  for (const auto& r : p.rows) {
    out << ' ' << r.name << ':';
    TermWriter w(out);
    if (r.coefs.empty()) w.term(0.0, "obj_const");
    for (const auto& [name, coef] : r.coefs) w.term(coef, name);
    out << ' ' << sense_text(r.sense) << ' ' << num(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& [name, b] : p.bounds) {
    const auto [lb, ub] = b;
    if (std::isinf(lb) && lb < 0 && std::isinf(ub) && ub > 0) {
      out << ' ' << name << " free\n";
    } else if (lb == ub) {
      out << ' ' << name << " = " << num(lb) << '\n';
    } else {
      out << ' ' << num(lb) << " <= " << name << " <= " << num(ub) << '\n';
    }
  }
  out << "Binaries\n";
  for (std::size_t i = 0; i < p.binaries.size(); ++i) {
    out << ' ' << p.binaries[i];
    if ((i + 1) % 8 == 0 || i + 1 == p.binaries.size()) out << '\n';
  }
  out << "End\n";
  return out.str();
}

std::string write_lp(const MiqpModel& m) { return write_lp(to_lp_problem(m)); }

LpProblem read_lp(std::string_view text) {
  enum class Section { None, Objective, Constraints, Bounds, Binaries, Done };
  Section section = Section::None;
  std::vector<std::string> objective_tokens;
  std::vector<std::string> constraint_tokens;
  LpProblem p;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    const auto comment = raw.find('\\');
    const std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    const std::string key = lower(line);
    if (key == "minimize" || key == "minimum" || key == "min") {
      section = Section::Objective;
      continue;
    }
    if (section == Section::None) throw std::invalid_argument("lp: the objective section must come first");
    if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
      section = Section::Constraints;
      continue;
    }
    if (key == "bounds" || key == "bound") {
      section = Section::Bounds;
      continue;
    }
    if (key == "binaries" || key == "binary" || key == "bin") {
      section = Section::Binaries;
      continue;
    }
    if (key == "end") {
      section = Section::Done;
      continue;
    }
    const auto tok = split(line);
    switch (section) {
      case Section::Objective:
        objective_tokens.insert(objective_tokens.end(), tok.begin(), tok.end());
        break;
      case Section::Constraints:
        constraint_tokens.insert(constraint_tokens.end(), tok.begin(), tok.end());
        break;
      case Section::Bounds: {
        if (tok.size() == 2 && lower(tok[1]) == "free") {
          p.bounds[tok[0]] = {-kInf, kInf};
        } else if (tok.size() == 3 && tok[1] == "=") {
          const double v = require_number(tok[2]);
          p.bounds[tok[0]] = {v, v};
        } else if (tok.size() == 5 && tok[1] == "<=" && tok[3] == "<=") {
          p.bounds[tok[2]] = {require_number(tok[0]), require_number(tok[4])};
        } else if (tok.size() == 3 && (tok[1] == "<=" || tok[1] == ">=")) {
          double v = 0;
          const bool number_first = parse_number(tok[0], v);
          const std::string& name = number_first ? tok[2] : tok[0];
          auto& b = p.bounds.try_emplace(name, 0.0, kInf).first->second;
          const bool upper = (tok[1] == "<=") != number_first;
          (upper ? b.second : b.first) = require_number(number_first ? tok[0] : tok[2]);
        } else {
          throw std::invalid_argument("lp: unsupported bound line '" + line + "'");
        }
        break;
      }
      case Section::Binaries:
        p.binaries.insert(p.binaries.end(), tok.begin(), tok.end());
        break;
      case Section::None:
      case Section::Done:
        throw std::invalid_argument("lp: content after End");
    }
  }
  if (section != Section::Done) throw std::invalid_argument("lp: missing End");

  std::size_t i = 0;
  if (!objective_tokens.empty() && objective_tokens[0].back() == ':') ++i;
  while (i < objective_tokens.size()) {
    i = parse_terms(objective_tokens, i, p.objective);
    if (i >= objective_tokens.size()) break;
    if (objective_tokens[i] != "[") throw std::invalid_argument("lp: unexpected '" + objective_tokens[i] + "'");
    i = parse_quadratic(objective_tokens, i, p.quadratic);
  }
  i = 0;
  while (i < constraint_tokens.size()) {
    LpRow row;
    if (constraint_tokens[i].back() == ':') {
      row.name = constraint_tokens[i].substr(0, constraint_tokens[i].size() - 1);
      ++i;
    } else {
      row.name = "r" + std::to_string(p.rows.size());
    }
    i = parse_terms(constraint_tokens, i, row.coefs);
    if (i + 1 >= constraint_tokens.size() || !is_sense(constraint_tokens[i])) {
      throw std::invalid_argument("lp: row '" + row.name + "' has no sense/rhs");
    }
    row.sense = to_sense(constraint_tokens[i]);
    row.rhs = require_number(constraint_tokens[i + 1]);
    i += 2;
    std::erase_if(row.coefs, [](const auto& kv) { return kv.second == 0.0; });
    p.rows.push_back(std::move(row));
  }
  std::sort(p.binaries.begin(), p.binaries.end());
  return p;
}

void export_lp(const MiqpModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << write_lp(m);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace coverage_miqp
