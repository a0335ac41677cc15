#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctt/milp.hpp"

// Reading and writing models in the CPLEX LP text format.

namespace ctt {

struct LpTerm {
  std::string var;
  double coef = 0.0;

  friend bool operator==(const LpTerm&, const LpTerm&) = default;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;

  friend bool operator==(const LpRow&, const LpRow&) = default;
};

/// In-memory form of an LP file, keyed by names.
struct LpFile {
  bool maximize = true;
  std::string objective_name = "obj";
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> binaries;
  std::set<std::string> generals;

  std::set<std::string> variables() const {
    std::set<std::string> v(binaries.begin(), binaries.end());
    v.insert(generals.begin(), generals.end());
    for (const auto& t : objective) v.insert(t.var);
    for (const auto& r : rows)
      for (const auto& t : r.terms) v.insert(t.var);
    for (const auto& [name, b] : bounds) v.insert(name);
    return v;
  }

  friend bool operator==(const LpFile&, const LpFile&) = default;
};

class LpParseError : public Error {
 public:
  using Error::Error;
};

/// 12 significant digits, no trailing zeros.
inline std::string format_lp_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline LpFile to_lp_file(const MilpModel& model) {
  LpFile f;
  f.maximize = true;
  auto convert = [&model](const std::vector<Term>& terms) {
    std::vector<LpTerm> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back({model.variables[t.var].name, t.coef});
    return out;
  };
  f.objective = convert(model.objective);
  for (const auto& r : model.rows) f.rows.push_back({r.label, convert(r.terms), r.sense, r.rhs});
  for (const auto& v : model.variables) {
    if (v.integer && v.lower == 0.0 && v.upper == 1.0)
      f.binaries.insert(v.name);
    else {
      f.bounds[v.name] = {v.lower, v.upper};
      if (v.integer) f.generals.insert(v.name);
    }
  }
  return f;
}

namespace detail {

class LineWriter {
 public:
  explicit LineWriter(std::ostream& os) : os_(os) {}

  void start(const std::string& s) {
    os_ << s;
    width_ = s.size();
  }

  void piece(const std::string& s) {
    if (width_ + s.size() > kWrap) {
      os_ << '\n';
      width_ = 0;
    }
    os_ << s;
    width_ += s.size();
  }

  void end() {
    os_ << '\n';
    width_ = 0;
  }

 private:
  static constexpr std::size_t kWrap = 200;  // readers commonly cap lines at 255
  std::ostream& os_;
  std::size_t width_ = 0;
};

inline void write_terms(LineWriter& w, const std::vector<LpTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const double mag = std::abs(t.coef);
    std::string s;
    if (first)
      s = (t.coef < 0 ? " - " : " ") + format_lp_number(mag) + " " + t.var;
    else
      s = (t.coef < 0 ? " - " : " + ") + format_lp_number(mag) + " " + t.var;
    w.piece(s);
    first = false;
  }
}

inline const char* sense_token(RowSense s) {
  switch (s) {
    case RowSense::le: return "<=";
    case RowSense::ge: return ">=";
    case RowSense::eq: return "=";
  }
  return "=";
}

}  // namespace detail

inline void write_lp(const LpFile& f, std::ostream& os, double constant_offset = 0.0) {
  os << "\\ car-to-train assignment model\n";
  os << "\\ constant offset removed from objective: " << format_lp_number(constant_offset) << "\n";
  os << "\\ net income = objective - constant offset\n";
  os << (f.maximize ? "Maximize\n" : "Minimize\n");
  detail::LineWriter w(os);
  w.start(" " + f.objective_name + ":");
  detail::write_terms(w, f.objective);
  w.end();

  os << "Subject To\n";
  for (const auto& r : f.rows) {
    w.start(" " + r.name + ":");
    detail::write_terms(w, r.terms);
    w.piece(std::string(" ") + detail::sense_token(r.sense) + " " + format_lp_number(r.rhs));
    w.end();
  }

  if (!f.bounds.empty()) {
    os << "Bounds\n";
    for (const auto& [name, b] : f.bounds)
      os << " " << format_lp_number(b.first) << " <= " << name << " <= " << format_lp_number(b.second) << "\n";
  }
  if (!f.binaries.empty()) {
    os << "Binaries\n";
    w.start("");
    for (const auto& name : f.binaries) w.piece(" " + name);
    w.end();
  }
  if (!f.generals.empty()) {
    os << "Generals\n";
    w.start("");
    for (const auto& name : f.generals) w.piece(" " + name);
    w.end();
  }
  os << "End\n";
}

/// Writes the model in LP format. Output depends only on the model: rows in
/// build order, bounds and integer sections sorted by name.
inline void write_lp(const MilpModel& model, std::ostream& os) { write_lp(to_lp_file(model), os, model.constant_offset); }

inline std::string to_lp_string(const MilpModel& model) {
  std::ostringstream os;
  write_lp(model, os);
  return os.str();
}

inline void export_lp(const MilpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_lp(model, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

namespace detail {

enum class LpSection { none, objective, constraints, bounds, binaries, generals, end };

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::optional<LpSection> section_keyword(const std::string& line, bool& maximize) {
  std::string l = lower(line);
  // Collapse runs of whitespace so "subject   to" matches.
  std::string norm;
  for (char c : l) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!norm.empty() && norm.back() != ' ') norm += ' ';
    } else {
      norm += c;
    }
  }
  while (!norm.empty() && norm.back() == ' ') norm.pop_back();
  if (norm == "maximize" || norm == "maximise" || norm == "maximum" || norm == "max") {
    maximize = true;
    return LpSection::objective;
  }
  if (norm == "minimize" || norm == "minimise" || norm == "minimum" || norm == "min") {
    maximize = false;
    return LpSection::objective;
  }
  if (norm == "subject to" || norm == "such that" || norm == "st" || norm == "s.t.") return LpSection::constraints;
  if (norm == "bounds" || norm == "bound") return LpSection::bounds;
  if (norm == "binaries" || norm == "binary" || norm == "bin") return LpSection::binaries;
  if (norm == "generals" || norm == "general" || norm == "gen" || norm == "integers") return LpSection::generals;
  if (norm == "end") return LpSection::end;
  return std::nullopt;
}

inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      ++i;
      if (i < text.size() && text[i] == '=') {
        op += '=';
        ++i;
      }
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      out.push_back(op);
      continue;
    }
    if (c == '+' || c == '-') {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    // Names run to the next delimiter; a number may carry an exponent sign.
    const bool numeric = std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    std::size_t j = i;
    while (j < text.size()) {
      const char d = text[j];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '<' || d == '>' || d == '=') break;
      if ((d == '+' || d == '-') && !(numeric && (text[j - 1] == 'e' || text[j - 1] == 'E'))) break;
      ++j;
    }
    out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_number(const std::string& tok) {
  const std::string l = lower(tok);
  if (l == "inf" || l == "infinity") return std::numeric_limits<double>::infinity();
  if (tok.empty() || !(std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.')) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) return std::nullopt;
  return v;
}

inline bool is_sense(const std::string& t) { return t == "<=" || t == ">=" || t == "="; }

inline RowSense to_sense(const std::string& t) {
  if (t == "<=") return RowSense::le;
  if (t == ">=") return RowSense::ge;
  return RowSense::eq;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<std::string> toks) : toks_(std::move(toks)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const std::string& peek() const { return toks_.at(pos_); }
  std::string next() {
    if (done()) throw LpParseError("unexpected end of section");
    return toks_[pos_++];
  }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

// Reads "[+|-] [coef] var" terms until a sense token or the end.
inline std::vector<LpTerm> parse_terms(TokenCursor& cur) {
  std::vector<LpTerm> terms;
  while (!cur.done() && !is_sense(cur.peek())) {
    double sign = 1.0;
    while (!cur.done() && (cur.peek() == "+" || cur.peek() == "-")) sign *= cur.next() == "-" ? -1.0 : 1.0;
    std::string tok = cur.next();
    double coef = 1.0;
    if (auto num = parse_number(tok)) {
      coef = *num;
      tok = cur.next();
    }
    if (parse_number(tok) || is_sense(tok)) throw LpParseError("expected a variable name, got '" + tok + "'");
    terms.push_back({tok, sign * coef});
  }
  return terms;
}

inline double parse_signed_number(TokenCursor& cur) {
  double sign = 1.0;
  while (!cur.done() && (cur.peek() == "+" || cur.peek() == "-")) sign *= cur.next() == "-" ? -1.0 : 1.0;
  const std::string tok = cur.next();
  auto v = parse_number(tok);
  if (!v) throw LpParseError("expected a number, got '" + tok + "'");
  return sign * *v;
}

inline bool peek_signed_number(const TokenCursor& cur) {
  if (cur.done()) return false;
  const std::string& t = cur.peek();
  return t == "+" || t == "-" || parse_number(t).has_value();
}

inline void parse_bounds(TokenCursor& cur, LpFile& f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  while (!cur.done()) {
    if (peek_signed_number(cur)) {
      // lo <= name [<= hi]
      const double lo = parse_signed_number(cur);
      const std::string op = cur.next();
      const std::string name = cur.next();
      auto& b = f.bounds.try_emplace(name, 0.0, inf).first->second;
      if (op == "<=") b.first = lo;
      else if (op == ">=") b.second = lo;
      else b = {lo, lo};
      if (!cur.done() && is_sense(cur.peek())) {
        const std::string op2 = cur.next();
        const double v = parse_signed_number(cur);
        if (op2 == "<=") b.second = v;
        else if (op2 == ">=") b.first = v;
      }
      continue;
    }
    const std::string name = cur.next();
    auto& b = f.bounds.try_emplace(name, 0.0, inf).first->second;
    if (!cur.done() && lower(cur.peek()) == "free") {
      cur.next();
      b = {-inf, inf};
      continue;
    }
    const std::string op = cur.next();
    const double v = parse_signed_number(cur);
    if (op == "<=") b.second = v;
    else if (op == ">=") b.first = v;
    else b = {v, v};
  }
}

}  // namespace detail

/// Parses CPLEX-LP text. Supports the subset used by common writers:
/// objective, labeled or unlabeled rows, bounds (ranges, one-sided, free),
/// Binaries and Generals sections; '\' starts a comment.
inline LpFile read_lp(std::istream& in) {
  using namespace detail;
  LpFile f;
  std::map<LpSection, std::string> text;
  LpSection section = LpSection::none;
  std::string line;
  bool seen_objective = false;
  while (std::getline(in, line)) {
    if (auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    if (auto kw = section_keyword(line, f.maximize)) {
      section = *kw;
      seen_objective = seen_objective || section == LpSection::objective;
      if (section == LpSection::end) break;
      continue;
    }
    if (section == LpSection::none) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) throw LpParseError("text before the objective section");
      continue;
    }
    text[section] += line + "\n";
  }
  if (!seen_objective) throw LpParseError("missing objective section");

  {
    TokenCursor cur(tokenize(text[LpSection::objective]));
    if (!cur.done() && cur.peek().back() == ':') {
      f.objective_name = cur.next();
      f.objective_name.pop_back();
    }
    f.objective = parse_terms(cur);
    if (!cur.done()) throw LpParseError("unexpected '" + cur.peek() + "' in objective");
  }
  {
    TokenCursor cur(tokenize(text[LpSection::constraints]));
    std::size_t unnamed = 0;
    while (!cur.done()) {
      LpRow row;
      if (cur.peek().back() == ':') {
        row.name = cur.next();
        row.name.pop_back();
      } else {
        row.name = "R" + std::to_string(++unnamed);
      }
      row.terms = parse_terms(cur);
      if (cur.done()) throw LpParseError("row '" + row.name + "' has no sense");
      row.sense = to_sense(cur.next());
      row.rhs = parse_signed_number(cur);
      f.rows.push_back(std::move(row));
    }
  }
  {
    TokenCursor cur(tokenize(text[LpSection::bounds]));
    parse_bounds(cur, f);
  }
  for (const auto& tok : tokenize(text[LpSection::binaries])) f.binaries.insert(tok);
  for (const auto& tok : tokenize(text[LpSection::generals])) f.generals.insert(tok);
  return f;
}

inline LpFile read_lp_string(const std::string& s) {
  std::istringstream in(s);
  return read_lp(in);
}

inline LpFile read_lp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_lp(in);
}

}  // namespace ctt
