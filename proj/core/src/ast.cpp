// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/ast.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "laq/error.hpp"

namespace laq {

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "<>";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

bool cmp_apply_int(Cmp c, long long a, long long b) {
  switch (c) {
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

bool cmp_apply_double(Cmp c, double a, double b) {
  switch (c) {
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

bool cmp_apply_string(Cmp c, const std::string& a, const std::string& b) {
  switch (c) {
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

const Binding* LaScript::find(std::string_view name) const {
  for (const auto& b : bindings) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const std::string& LaScript::result_var() const {
  if (bindings.empty()) throw SyntaxError("empty script has no result");
  return bindings.back().name;
}

namespace {

struct Token {
  enum class Kind { Ident, Number, String, Punct, End };
  Kind kind{Kind::End};
  std::string text;  // idents lowercased only for keyword checks
  double number{0.0};
  int col{0};
};

class Lexer {
 public:
  Lexer(std::string_view line, int line_no) : s_(line), line_(line_no) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError("line " + std::to_string(line_) + ", col " + std::to_string(tok_.col) +
                      ": " + msg);
  }

  int line() const { return line_; }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.col = int(pos_) + 1;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    const char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      tok_.kind = Token::Kind::Number;
      tok_.text = std::string(s_.substr(start, pos_ - start));
      auto [p, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(),
                                     tok_.number);
      if (ec != std::errc() || p != tok_.text.data() + tok_.text.size()) {
        throw SyntaxError("line " + std::to_string(line_) + ", col " + std::to_string(tok_.col) +
                          ": malformed number '" + tok_.text + "'");
      }
      return;
    }
    if (c == '\'') {
      std::size_t end = s_.find('\'', pos_ + 1);
      if (end == std::string_view::npos) {
        throw SyntaxError("line " + std::to_string(line_) + ", col " + std::to_string(tok_.col) +
                          ": unterminated string literal");
      }
      tok_.kind = Token::Kind::String;
      tok_.text = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return;
    }
    // multi-char comparison operators
    static const char* two[] = {"<=", ">=", "<>"};
    for (const char* op : two) {
      if (s_.substr(pos_, 2) == op) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = op;
        pos_ += 2;
        return;
      }
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_{0};
  int line_;
  Token tok_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_keyword(const std::string& ident, const char* kw) { return lower(ident) == kw; }

const char* kReserved[] = {"krao", "dot", "filter", "tr",     "lift", "sum",  "bool",
                           "calc", "and", "or",     "not",    "between", "in", "like",
                           "having", "output", "as", "case", "when", "then", "else", "end",
                           "value"};

bool reserved(const std::string& ident) {
  const std::string l = lower(ident);
  return std::any_of(std::begin(kReserved), std::end(kReserved),
                     [&](const char* k) { return l == k; });
}

class LineParser {
 public:
  explicit LineParser(Lexer& lx) : lx_(lx) {}

  Expr parse_expr() {
    const Token t = lx_.take();
    if (t.kind != Token::Kind::Ident) lx_.fail("expected an expression");
    const std::string kw = lower(t.text);
    if (kw == "krao" || kw == "dot") {
      expect("(");
      Expr a = parse_expr();
      expect(",");
      Expr b = parse_expr();
      expect(")");
      Expr e;
      e.kind = kw == "krao" ? Expr::Kind::Krao : Expr::Kind::Dot;
      e.a = std::make_shared<Expr>(std::move(a));
      e.b = std::make_shared<Expr>(std::move(b));
      return e;
    }
    if (kw == "tr" || kw == "sum" || kw == "bool") {
      expect("(");
      Expr a = parse_expr();
      expect(")");
      Expr e;
      e.kind = kw == "tr" ? Expr::Kind::Tr : kw == "sum" ? Expr::Kind::Sum : Expr::Kind::Bool;
      e.a = std::make_shared<Expr>(std::move(a));
      return e;
    }
    if (kw == "filter") {
      expect("(");
      Expr e;
      e.kind = Expr::Kind::Filter;
      e.pred = std::make_shared<Predicate>(parse_predicate());
      expect(")");
      return e;
    }
    if (kw == "lift") {
      expect("(");
      Expr e;
      e.kind = Expr::Kind::Lift;
      e.scalar = std::make_shared<ScalarExpr>(parse_scalar());
      expect(")");
      return e;
    }
    if (kw == "calc") {
      expect("(");
      Expr e;
      e.kind = Expr::Kind::Calc;
      e.calc = std::make_shared<CalcExpr>(parse_calc());
      expect(")");
      return e;
    }
    if (reserved(t.text)) lx_.fail("reserved word '" + t.text + "' cannot name a matrix");
    Expr e;
    e.kind = Expr::Kind::Name;
    e.name = t.text;
    return e;
  }

  Predicate parse_predicate() { return parse_or(); }

  ScalarExpr parse_scalar() { return parse_sum_expr(); }

  CalcExpr parse_calc() { return parse_calc_sum(); }

  void expect(const std::string& p) {
    const Token t = lx_.take();
    if (t.kind != Token::Kind::Punct || t.text != p) {
      lx_.fail("expected '" + p + "'" + (t.text.empty() ? "" : ", got '" + t.text + "'"));
    }
  }

  bool peek_punct(const std::string& p) const {
    return lx_.peek().kind == Token::Kind::Punct && lx_.peek().text == p;
  }

  bool peek_kw(const char* kw) const {
    return lx_.peek().kind == Token::Kind::Ident && is_keyword(lx_.peek().text, kw);
  }

 private:
  Predicate parse_or() {
    Predicate p = parse_and();
    while (peek_kw("or")) {
      lx_.take();
      Predicate q = parse_and();
      Predicate o;
      o.kind = Predicate::Kind::Or;
      o.lhs = std::make_shared<Predicate>(std::move(p));
      o.rhs = std::make_shared<Predicate>(std::move(q));
      p = std::move(o);
    }
    return p;
  }

  Predicate parse_and() {
    Predicate p = parse_not();
    while (peek_kw("and")) {
      lx_.take();
      Predicate q = parse_not();
      Predicate a;
      a.kind = Predicate::Kind::And;
      a.lhs = std::make_shared<Predicate>(std::move(p));
      a.rhs = std::make_shared<Predicate>(std::move(q));
      p = std::move(a);
    }
    return p;
  }

  Predicate parse_not() {
    if (peek_kw("not")) {
      lx_.take();
      Predicate n;
      n.kind = Predicate::Kind::Not;
      n.lhs = std::make_shared<Predicate>(parse_not());
      return n;
    }
    if (peek_punct("(")) {
      lx_.take();
      Predicate p = parse_predicate();
      expect(")");
      return p;
    }
    return parse_atom();
  }

  Predicate parse_atom() {
    const Token t = lx_.take();
    if (t.kind != Token::Kind::Ident || reserved(t.text)) lx_.fail("expected an attribute name");
    Predicate p;
    p.kind = Predicate::Kind::Atom;
    PredAtom& a = p.atom;
    a.attr = t.text;

    if (peek_kw("between")) {
      lx_.take();
      a.kind = PredAtom::Kind::Between;
      std::tie(a.lo, a.range_quoted) = take_literal();
      if (!peek_kw("and")) lx_.fail("expected 'and' in between");
      lx_.take();
      bool hi_quoted = false;
      std::tie(a.hi, hi_quoted) = take_literal();
      if (hi_quoted != a.range_quoted) lx_.fail("between bounds must have matching kinds");
      return p;
    }
    if (peek_kw("in")) {
      lx_.take();
      a.kind = PredAtom::Kind::In;
      expect("(");
      bool first = true;
      while (true) {
        auto [lit, quoted] = take_literal();
        if (first) {
          a.set_quoted = quoted;
          first = false;
        } else if (quoted != a.set_quoted) {
          lx_.fail("in-list elements must have matching kinds");
        }
        a.set.push_back(lit);
        if (peek_punct(",")) {
          lx_.take();
          continue;
        }
        expect(")");
        break;
      }
      return p;
    }
    if (peek_kw("like")) {
      lx_.take();
      a.kind = PredAtom::Kind::Like;
      const Token s = lx_.take();
      if (s.kind != Token::Kind::String) lx_.fail("like expects a quoted pattern");
      a.pattern = s.text;
      return p;
    }

    a.cmp = take_cmp();
    const Token rhs = lx_.take();
    if (rhs.kind == Token::Kind::Ident && !reserved(rhs.text)) {
      a.kind = PredAtom::Kind::CompareAttr;
      a.attr2 = rhs.text;
    } else if (rhs.kind == Token::Kind::String) {
      a.kind = PredAtom::Kind::Compare;
      a.literal = rhs.text;
      a.literal_quoted = true;
    } else if (rhs.kind == Token::Kind::Number) {
      a.kind = PredAtom::Kind::Compare;
      a.literal = rhs.text;
      a.literal_quoted = false;
    } else {
      lx_.fail("expected a literal or attribute after comparison");
    }
    return p;
  }

  Cmp take_cmp() {
    const Token t = lx_.take();
    if (t.kind != Token::Kind::Punct) lx_.fail("expected a comparison operator");
    if (t.text == "=") return Cmp::Eq;
    if (t.text == "<>") return Cmp::Ne;
    if (t.text == "<") return Cmp::Lt;
    if (t.text == "<=") return Cmp::Le;
    if (t.text == ">") return Cmp::Gt;
    if (t.text == ">=") return Cmp::Ge;
    lx_.fail("unknown comparison operator '" + t.text + "'");
  }

  std::pair<std::string, bool> take_literal() {
    const Token t = lx_.take();
    if (t.kind == Token::Kind::String) return {t.text, true};
    if (t.kind == Token::Kind::Number) return {t.text, false};
    lx_.fail("expected a literal");
  }

  ScalarExpr parse_sum_expr() {
    ScalarExpr e = parse_mul_expr();
    while (peek_punct("+") || peek_punct("-")) {
      const bool plus = lx_.take().text == "+";
      ScalarExpr r = parse_mul_expr();
      ScalarExpr n;
      n.kind = plus ? ScalarExpr::Kind::Add : ScalarExpr::Kind::Sub;
      n.lhs = std::make_shared<ScalarExpr>(std::move(e));
      n.rhs = std::make_shared<ScalarExpr>(std::move(r));
      e = std::move(n);
    }
    return e;
  }

  ScalarExpr parse_mul_expr() {
    ScalarExpr e = parse_scalar_unary();
    while (peek_punct("*") || peek_punct("/")) {
      const bool mul = lx_.take().text == "*";
      ScalarExpr r = parse_scalar_unary();
      ScalarExpr n;
      n.kind = mul ? ScalarExpr::Kind::Mul : ScalarExpr::Kind::Div;
      n.lhs = std::make_shared<ScalarExpr>(std::move(e));
      n.rhs = std::make_shared<ScalarExpr>(std::move(r));
      e = std::move(n);
    }
    return e;
  }

  ScalarExpr parse_scalar_unary() {
    if (peek_punct("(")) {
      lx_.take();
      ScalarExpr e = parse_scalar();
      expect(")");
      return e;
    }
    if (peek_punct("-")) {
      lx_.take();
      ScalarExpr zero;
      zero.kind = ScalarExpr::Kind::Literal;
      zero.literal = 0.0;
      ScalarExpr r = parse_scalar_unary();
      ScalarExpr n;
      n.kind = ScalarExpr::Kind::Sub;
      n.lhs = std::make_shared<ScalarExpr>(std::move(zero));
      n.rhs = std::make_shared<ScalarExpr>(std::move(r));
      return n;
    }
    const Token t = lx_.take();
    if (t.kind == Token::Kind::Number) {
      ScalarExpr e;
      e.kind = ScalarExpr::Kind::Literal;
      e.literal = t.number;
      return e;
    }
    if (t.kind == Token::Kind::Ident && is_keyword(t.text, "case")) {
      if (!peek_kw("when")) lx_.fail("expected 'when' after 'case'");
      lx_.take();
      ScalarExpr e;
      e.kind = ScalarExpr::Kind::Case;
      e.cond = std::make_shared<Predicate>(parse_predicate());
      if (!peek_kw("then")) lx_.fail("expected 'then'");
      lx_.take();
      e.lhs = std::make_shared<ScalarExpr>(parse_scalar());
      if (!peek_kw("else")) lx_.fail("expected 'else'");
      lx_.take();
      e.rhs = std::make_shared<ScalarExpr>(parse_scalar());
      if (!peek_kw("end")) lx_.fail("expected 'end'");
      lx_.take();
      return e;
    }
    if (t.kind == Token::Kind::Ident && !reserved(t.text)) {
      ScalarExpr e;
      e.kind = ScalarExpr::Kind::Attr;
      e.attr = t.text;
      return e;
    }
    lx_.fail("expected a measure attribute, number or case expression");
  }

  CalcExpr parse_calc_sum() {
    CalcExpr e = parse_calc_mul();
    while (peek_punct("+") || peek_punct("-")) {
      const bool plus = lx_.take().text == "+";
      CalcExpr r = parse_calc_mul();
      CalcExpr n;
      n.kind = plus ? CalcExpr::Kind::Add : CalcExpr::Kind::Sub;
      n.lhs = std::make_shared<CalcExpr>(std::move(e));
      n.rhs = std::make_shared<CalcExpr>(std::move(r));
      e = std::move(n);
    }
    return e;
  }

  CalcExpr parse_calc_mul() {
    CalcExpr e = parse_calc_unary();
    while (peek_punct("*") || peek_punct("/")) {
      const bool mul = lx_.take().text == "*";
      CalcExpr r = parse_calc_unary();
      CalcExpr n;
      n.kind = mul ? CalcExpr::Kind::Mul : CalcExpr::Kind::Div;
      n.lhs = std::make_shared<CalcExpr>(std::move(e));
      n.rhs = std::make_shared<CalcExpr>(std::move(r));
      e = std::move(n);
    }
    return e;
  }

  CalcExpr parse_calc_unary() {
    if (peek_punct("(")) {
      lx_.take();
      CalcExpr e = parse_calc();
      expect(")");
      return e;
    }
    const Token t = lx_.take();
    if (t.kind == Token::Kind::Number) {
      CalcExpr e;
      e.kind = CalcExpr::Kind::Literal;
      e.literal = t.number;
      return e;
    }
    if (t.kind == Token::Kind::Ident && !reserved(t.text)) {
      CalcExpr e;
      e.kind = CalcExpr::Kind::Var;
      e.var = t.text;
      return e;
    }
    lx_.fail("expected a scalar binding or number");
  }

  Lexer& lx_;
};

}  // namespace

LaScript parse_script(const std::string& text) {
  LaScript script;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Lexer lx(raw, line_no);
    if (lx.peek().kind == Token::Kind::End) continue;
    LineParser p(lx);

    if (lx.peek().kind == Token::Kind::Ident && is_keyword(lx.peek().text, "output")) {
      lx.take();
      const Token v = lx.take();
      if (v.kind != Token::Kind::Ident) lx.fail("output expects a binding name");
      if (!(lx.peek().kind == Token::Kind::Ident && is_keyword(lx.peek().text, "as")))
        lx.fail("expected 'as'");
      lx.take();
      const Token tag = lx.take();
      if (tag.kind != Token::Kind::Ident) lx.fail("output expects a tag name");
      script.outputs.push_back(OutputSpec{v.text, tag.text});
      if (lx.peek().kind != Token::Kind::End) lx.fail("trailing tokens after output directive");
      continue;
    }
    if (lx.peek().kind == Token::Kind::Ident && is_keyword(lx.peek().text, "having")) {
      if (script.having) lx.fail("duplicate having directive");
      lx.take();
      const Token v = lx.take();
      if (v.kind != Token::Kind::Ident) lx.fail("having expects a binding name");
      HavingSpec h;
      h.var = v.text;
      const Token op = lx.take();
      if (op.kind != Token::Kind::Punct) lx.fail("having expects a comparison");
      if (op.text == "=") h.cmp = Cmp::Eq;
      else if (op.text == "<>") h.cmp = Cmp::Ne;
      else if (op.text == "<") h.cmp = Cmp::Lt;
      else if (op.text == "<=") h.cmp = Cmp::Le;
      else if (op.text == ">") h.cmp = Cmp::Gt;
      else if (op.text == ">=") h.cmp = Cmp::Ge;
      else lx.fail("unknown comparison '" + op.text + "'");
      const Token rhs = lx.take();
      if (rhs.kind == Token::Kind::Number) {
        h.literal = rhs.number;
      } else if (rhs.kind == Token::Kind::Ident && !reserved(rhs.text)) {
        h.rhs_is_var = true;
        h.rhs_var = rhs.text;
      } else {
        lx.fail("having expects a number or scalar binding");
      }
      script.having = h;
      if (lx.peek().kind != Token::Kind::End) lx.fail("trailing tokens after having directive");
      continue;
    }

    const Token name = lx.take();
    if (name.kind != Token::Kind::Ident || reserved(name.text)) {
      lx.fail("expected a binding name");
    }
    p.expect("=");
    if (script.find(name.text)) {
      throw DuplicateBinding("line " + std::to_string(line_no) + ": variable '" + name.text +
                             "' is already bound");
    }
    Expr e = p.parse_expr();
    if (lx.peek().kind != Token::Kind::End) lx.fail("trailing tokens after binding");
    script.bindings.push_back(Binding{name.text, std::move(e)});
  }
  if (script.bindings.empty()) throw SyntaxError("script contains no bindings");
  return script;
}

LaScript parse_script_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open script file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str());
}

namespace {

std::string number_text(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string pretty_pred(const Predicate& p, bool parens);

std::string pretty_atom(const PredAtom& a) {
  auto lit = [](const std::string& text, bool quoted) {
    return quoted ? "'" + text + "'" : text;
  };
  switch (a.kind) {
    case PredAtom::Kind::Compare:
      return a.attr + " " + cmp_name(a.cmp) + " " + lit(a.literal, a.literal_quoted);
    case PredAtom::Kind::CompareAttr:
      return a.attr + " " + cmp_name(a.cmp) + " " + a.attr2;
    case PredAtom::Kind::Between:
      return a.attr + " between " + lit(a.lo, a.range_quoted) + " and " +
             lit(a.hi, a.range_quoted);
    case PredAtom::Kind::In: {
      std::string s = a.attr + " in (";
      for (std::size_t i = 0; i < a.set.size(); ++i) {
        if (i) s += ", ";
        s += lit(a.set[i], a.set_quoted);
      }
      return s + ")";
    }
    case PredAtom::Kind::Like:
      return a.attr + " like '" + a.pattern + "'";
  }
  return "";
}

std::string pretty_pred(const Predicate& p, bool parens) {
  std::string s;
  switch (p.kind) {
    case Predicate::Kind::Atom:
      return pretty_atom(p.atom);
    case Predicate::Kind::And:
      s = pretty_pred(*p.lhs, true) + " and " + pretty_pred(*p.rhs, true);
      break;
    case Predicate::Kind::Or:
      s = pretty_pred(*p.lhs, true) + " or " + pretty_pred(*p.rhs, true);
      break;
    case Predicate::Kind::Not:
      return "not (" + pretty_pred(*p.lhs, false) + ")";
  }
  return parens ? "(" + s + ")" : s;
}

std::string pretty_scalar(const ScalarExpr& e, bool parens) {
  switch (e.kind) {
    case ScalarExpr::Kind::Attr:
      return e.attr;
    case ScalarExpr::Kind::Literal:
      return number_text(e.literal);
    case ScalarExpr::Kind::Case:
      return "case when " + pretty_pred(*e.cond, false) + " then " +
             pretty_scalar(*e.lhs, true) + " else " + pretty_scalar(*e.rhs, true) + " end";
    default:
      break;
  }
  const char* op = e.kind == ScalarExpr::Kind::Add   ? " + "
                   : e.kind == ScalarExpr::Kind::Sub ? " - "
                   : e.kind == ScalarExpr::Kind::Mul ? " * "
                                                     : " / ";
  std::string s = pretty_scalar(*e.lhs, true) + op + pretty_scalar(*e.rhs, true);
  return parens ? "(" + s + ")" : s;
}

std::string pretty_calc(const CalcExpr& e, bool parens) {
  switch (e.kind) {
    case CalcExpr::Kind::Var:
      return e.var;
    case CalcExpr::Kind::Literal:
      return number_text(e.literal);
    default:
      break;
  }
  const char* op = e.kind == CalcExpr::Kind::Add   ? " + "
                   : e.kind == CalcExpr::Kind::Sub ? " - "
                   : e.kind == CalcExpr::Kind::Mul ? " * "
                                                   : " / ";
  std::string s = pretty_calc(*e.lhs, true) + op + pretty_calc(*e.rhs, true);
  return parens ? "(" + s + ")" : s;
}

}  // namespace

std::string pretty(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Name:
    case Expr::Kind::Var:
    case Expr::Kind::AttrRef:
      return e.name;
    case Expr::Kind::Krao:
      return "krao(" + pretty(*e.a) + ", " + pretty(*e.b) + ")";
    case Expr::Kind::Dot:
      return "dot(" + pretty(*e.a) + ", " + pretty(*e.b) + ")";
    case Expr::Kind::Filter:
      return "filter(" + pretty_pred(*e.pred, false) + ")";
    case Expr::Kind::Tr:
      return "tr(" + pretty(*e.a) + ")";
    case Expr::Kind::Lift:
      return "lift(" + pretty_scalar(*e.scalar, false) + ")";
    case Expr::Kind::Sum:
      return "sum(" + pretty(*e.a) + ")";
    case Expr::Kind::Bool:
      return "bool(" + pretty(*e.a) + ")";
    case Expr::Kind::Calc:
      return "calc(" + pretty_calc(*e.calc, false) + ")";
  }
  return "";
}

std::string pretty(const LaScript& s) {
  std::string out;
  for (const auto& b : s.bindings) out += b.name + " = " + pretty(b.expr) + "\n";
  for (const auto& o : s.outputs) out += "output " + o.var + " as " + o.tag + "\n";
  if (s.having) {
    out += "having " + s.having->var + " " + cmp_name(s.having->cmp) + " " +
           (s.having->rhs_is_var ? s.having->rhs_var : number_text(s.having->literal)) + "\n";
  }
  return out;
}

namespace {

void collect_pred_attrs(const Predicate& p, std::set<std::string>& out) {
  if (p.kind == Predicate::Kind::Atom) {
    out.insert(p.atom.attr);
    if (p.atom.kind == PredAtom::Kind::CompareAttr) out.insert(p.atom.attr2);
    return;
  }
  if (p.lhs) collect_pred_attrs(*p.lhs, out);
  if (p.rhs) collect_pred_attrs(*p.rhs, out);
}

void collect_scalar_attrs(const ScalarExpr& e, std::set<std::string>& out) {
  if (e.kind == ScalarExpr::Kind::Attr) out.insert(e.attr);
  if (e.cond) collect_pred_attrs(*e.cond, out);
  if (e.lhs) collect_scalar_attrs(*e.lhs, out);
  if (e.rhs) collect_scalar_attrs(*e.rhs, out);
}

void collect_expr_names(const Expr& e, std::set<std::string>& names,
                        std::set<std::string>& attrs) {
  switch (e.kind) {
    case Expr::Kind::Name:
    case Expr::Kind::Var:
    case Expr::Kind::AttrRef:
      names.insert(e.name);
      return;
    case Expr::Kind::Filter:
      collect_pred_attrs(*e.pred, attrs);
      return;
    case Expr::Kind::Lift:
      collect_scalar_attrs(*e.scalar, attrs);
      return;
    case Expr::Kind::Calc:
      return;  // calc references scalar bindings, never attributes
    default:
      if (e.a) collect_expr_names(*e.a, names, attrs);
      if (e.b) collect_expr_names(*e.b, names, attrs);
  }
}

}  // namespace

std::set<std::string> referenced_attributes(const LaScript& s) {
  std::set<std::string> names, attrs;
  for (const auto& b : s.bindings) collect_expr_names(b.expr, names, attrs);
  for (const auto& n : names) {
    if (!s.find(n)) attrs.insert(n);
  }
  return attrs;
}

}  // namespace laq
