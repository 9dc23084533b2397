#include "topent/dsl.hpp"
#include "topent/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace topent::dsl {

const char* to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::syntax: return "syntax error";
    case Diagnostic::Kind::arity: return "arity error";
    case Diagnostic::Kind::validation: return "validation error";
  }
  return "error";
}

std::string Diagnostic::str() const {
  std::ostringstream out;
  out << line << ':' << column << ": " << to_string(kind) << ": " << message;
  if (!expected.empty()) {
    out << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) out << (i ? ", " : "") << expected[i];
    out << ')';
  }
  return out.str();
}

int DslProgram::exit_code() const {
  if (ok()) return 0;
  for (const auto& d : diagnostics)
    if (d.kind != Diagnostic::Kind::validation) return 1;
  return 2;
}

namespace {

enum class Tok { ident, integer, lparen, rparen, comma, lbrack, rbrack, lbrace, rbrace, langle, rangle, bar, slash, arrow, end };

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::integer: return "integer";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::lbrack: return "'['";
    case Tok::rbrack: return "']'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::langle: return "'<'";
    case Tok::rangle: return "'>'";
    case Tok::bar: return "'|'";
    case Tok::slash: return "'/'";
    case Tok::arrow: return "'->'";
    case Tok::end: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

struct Failure {
  std::vector<Diagnostic> diagnostics;
};

[[noreturn]] void fail(Diagnostic::Kind kind, std::size_t line, std::size_t col, std::string message,
                       std::vector<std::string> expected = {}) {
  throw Failure{{Diagnostic{kind, line, col, std::move(message), std::move(expected)}}};
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, k = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::integer, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::arrow, "->", l, k});
      advance(2);
      continue;
    }
    Tok t;
    switch (c) {
      case '(': t = Tok::lparen; break;
      case ')': t = Tok::rparen; break;
      case ',': t = Tok::comma; break;
      case '[': t = Tok::lbrack; break;
      case ']': t = Tok::rbrack; break;
      case '{': t = Tok::lbrace; break;
      case '}': t = Tok::rbrace; break;
      case '<': t = Tok::langle; break;
      case '>': t = Tok::rangle; break;
      case '|': t = Tok::bar; break;
      case '/': t = Tok::slash; break;
      default:
        fail(Diagnostic::Kind::syntax, l, k, std::string("unexpected character '") + c + "'");
    }
    out.push_back({t, std::string(1, c), l, k});
    advance(1);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

// Untyped syntax tree; the grammar below is shared by every function.
struct Term {
  enum class Kind { call, integer, rational, list, set, seq };
  Kind kind = Kind::integer;
  std::size_t line = 1, col = 1;
  std::string name;
  std::uint64_t num = 0, den = 1;
  std::vector<Term> items;   // call arguments, list/set members, sequence preperiod
  std::vector<Term> period;  // sequence period
  std::optional<std::uint64_t> arrow;
};

const std::vector<std::string> kTermStart = {"identifier", "integer", "'['", "'{'", "'<'"};

class TermParser {
 public:
  explicit TermParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Term parse_all() {
    Term t = term();
    expect(Tok::end);
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    const Token& t = peek();
    const std::string got = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    fail(Diagnostic::Kind::syntax, t.line, t.col, "unexpected " + got, std::move(expected));
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) unexpected({describe(kind)});
    return take();
  }

  std::uint64_t integer_value(const Token& t) {
    std::uint64_t v = 0;
    for (char c : t.text) {
      const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10)
        fail(Diagnostic::Kind::syntax, t.line, t.col, "integer literal too large");
      v = v * 10 + d;
    }
    return v;
  }

  // items separated by commas, up to (not including) `close`
  std::vector<Term> items(Tok close, std::vector<std::string> closers) {
    std::vector<Term> out;
    if (peek().kind == close) return out;
    out.push_back(term());
    while (peek().kind == Tok::comma) {
      take();
      out.push_back(term());
    }
    if (peek().kind != close) {
      closers.insert(closers.begin(), "','");
      unexpected(closers);
    }
    return out;
  }

  Term term() {
    const Token& t = peek();
    Term out;
    out.line = t.line;
    out.col = t.col;
    switch (t.kind) {
      case Tok::ident: {
        out.kind = Term::Kind::call;
        out.name = take().text;
        expect(Tok::lparen);
        out.items = items(Tok::rparen, {"')'"});
        take();
        return out;
      }
      case Tok::integer: {
        out.num = integer_value(take());
        if (peek().kind == Tok::slash) {
          take();
          if (peek().kind != Tok::integer) unexpected({"integer"});
          out.kind = Term::Kind::rational;
          out.den = integer_value(take());
        }
        return out;
      }
      case Tok::lbrack: {
        take();
        out.kind = Term::Kind::list;
        out.items = items(Tok::rbrack, {"']'"});
        take();
        if (peek().kind == Tok::arrow) {
          take();
          if (peek().kind != Tok::integer) unexpected({"integer"});
          out.arrow = integer_value(take());
        }
        return out;
      }
      case Tok::lbrace: {
        take();
        out.kind = Term::Kind::set;
        out.items = items(Tok::rbrace, {"'}'"});
        take();
        return out;
      }
      case Tok::langle: {
        take();
        out.kind = Term::Kind::seq;
        out.items = items(Tok::bar, {"'|'"});
        take();
        out.period = items(Tok::rangle, {"'>'"});
        take();
        return out;
      }
      default:
        unexpected(kTermStart);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Terms to expressions.

const std::vector<std::string> kFunctions = {"full",  "evconst", "sr",      "cylsched", "finite",
                                             "orbit", "sft",     "modmap",  "shift",    "dilate",
                                             "restrict", "block", "union",  "djunion",  "prod",
                                             "image", "cls"};

[[noreturn]] void shape_error(const Term& t, const std::string& message) {
  fail(Diagnostic::Kind::arity, t.line, t.col, message);
}

[[noreturn]] void range_error(const Term& t, const std::string& message) {
  fail(Diagnostic::Kind::validation, t.line, t.col, message);
}

const char* kind_name(Term::Kind k) {
  switch (k) {
    case Term::Kind::call: return "an expression";
    case Term::Kind::integer: return "an integer";
    case Term::Kind::rational: return "a rational";
    case Term::Kind::list: return "a list";
    case Term::Kind::set: return "a set";
    case Term::Kind::seq: return "a sequence";
  }
  return "?";
}

std::string arg_label(const Term& call, std::size_t i) {
  return call.name + ": argument " + std::to_string(i + 1);
}

void require_kind(const Term& t, Term::Kind kind, const std::string& label) {
  if (t.kind != kind)
    shape_error(t, label + " must be " + kind_name(kind) + ", got " + kind_name(t.kind));
}

std::uint32_t as_u32(const Term& t, const std::string& label) {
  require_kind(t, Term::Kind::integer, label);
  if (t.num > std::numeric_limits<std::uint32_t>::max()) range_error(t, label + " is out of range");
  return static_cast<std::uint32_t>(t.num);
}

std::size_t as_size(const Term& t, const std::string& label) {
  require_kind(t, Term::Kind::integer, label);
  if (t.num > (std::uint64_t{1} << 31)) range_error(t, label + " is out of range");
  return static_cast<std::size_t>(t.num);
}

std::vector<Symbol> as_symbols(const std::vector<Term>& terms, const std::string& label) {
  std::vector<Symbol> out;
  for (const auto& t : terms) out.push_back(as_u32(t, label));
  return out;
}

SymbolSet as_set(const Term& t, const std::string& label) {
  require_kind(t, Term::Kind::set, label);
  SymbolSet s = as_symbols(t.items, label + " member");
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

void arity(const Term& call, std::size_t lo, std::size_t hi, const char* shape) {
  const std::size_t n = call.items.size();
  if (n < lo || n > hi) {
    std::string count = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
    shape_error(call, call.name + " takes " + count + " argument" + (hi == 1 ? "" : "s") + ": " + call.name +
                          "(" + shape + "), got " + std::to_string(n));
  }
}

// Checks the node just built; children were already checked, so every
// message belongs to this node.
SeqSetExpr checked(const Term& t, SeqSetExpr e) {
  const auto issues = validate(e);
  if (!issues.empty()) {
    Failure f;
    for (const auto& m : issues) f.diagnostics.push_back({Diagnostic::Kind::validation, t.line, t.col, m, {}});
    throw f;
  }
  return e;
}

SeqSetExpr build(const Term& t);

std::pair<SeqSetExpr, SeqSetExpr> two_children(const Term& t) {
  std::optional<SeqSetExpr> a, b;
  Failure combined;
  try {
    a = build(t.items[0]);
  } catch (Failure& f) {
    combined.diagnostics = std::move(f.diagnostics);
  }
  try {
    b = build(t.items[1]);
  } catch (Failure& f) {
    combined.diagnostics.insert(combined.diagnostics.end(), f.diagnostics.begin(), f.diagnostics.end());
  }
  if (!combined.diagnostics.empty()) throw combined;
  return {*a, *b};
}

SeqSetExpr build(const Term& t) {
  if (t.kind != Term::Kind::call) shape_error(t, std::string("expected an expression, got ") + kind_name(t.kind));
  const std::string& f = t.name;
  const auto& a = t.items;

  if (f == "full") {
    arity(t, 1, 1, "k");
    return checked(t, full_shift(as_u32(a[0], arg_label(t, 0))));
  }
  if (f == "evconst") {
    arity(t, 2, 2, "k, z");
    return checked(t, ev_const(as_u32(a[0], arg_label(t, 0)), as_u32(a[1], arg_label(t, 1))));
  }
  if (f == "sr") {
    arity(t, 2, 3, "k, r[, z]");
    const auto k = as_u32(a[0], arg_label(t, 0));
    const Term& rt = a[1];
    if (rt.kind != Term::Kind::integer && rt.kind != Term::Kind::rational)
      shape_error(rt, arg_label(t, 1) + " must be a rational, got " + kind_name(rt.kind));
    if (rt.den == 0) range_error(rt, "sr: zero denominator");
    const auto max = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (rt.num > max || rt.den > max) range_error(rt, "sr: rational out of range");
    const Rational r(static_cast<std::int64_t>(rt.num), static_cast<std::int64_t>(rt.den));
    const Symbol z = a.size() == 3 ? as_u32(a[2], arg_label(t, 2)) : 0;
    return checked(t, sr_set(k, r, z));
  }
  if (f == "cylsched") {
    arity(t, 2, 2, "k, <subsets | subsets> or pq(z, [p,q], ...)");
    const auto k = as_u32(a[0], arg_label(t, 0));
    const Term& s = a[1];
    if (s.kind == Term::Kind::seq) {
      SubsetSequence seq;
      for (const auto& x : s.items) seq.prefix.push_back(as_set(x, "cylsched: subset"));
      for (const auto& x : s.period) seq.period.push_back(as_set(x, "cylsched: subset"));
      return checked(t, cyl_sched(k, std::move(seq)));
    }
    if (s.kind == Term::Kind::call && s.name == "pq") {
      if (s.items.empty()) shape_error(s, "pq takes a frozen symbol and at least one [p, q] pair");
      BlockPlan plan;
      plan.z = as_u32(s.items[0], "pq: argument 1");
      for (std::size_t i = 1; i < s.items.size(); ++i) {
        const Term& pair = s.items[i];
        require_kind(pair, Term::Kind::list, "pq: argument " + std::to_string(i + 1));
        if (pair.items.size() != 2 || pair.arrow) shape_error(pair, "pq: pairs are written [p, q]");
        plan.schedule.pairs.push_back({as_size(pair.items[0], "pq: p"), as_size(pair.items[1], "pq: q")});
      }
      if (plan.schedule.pairs.empty()) shape_error(s, "pq: at least one [p, q] pair is required");
      const auto& last = plan.schedule.pairs.back();
      if (last.q > 0) {
        plan.schedule.target = double(last.p) / double(last.q);
        plan.schedule.target_rational = Rational(std::int64_t(last.p), std::int64_t(last.q));
      }
      return checked(t, cyl_sched(k, std::move(plan)));
    }
    shape_error(s, "cylsched: argument 2 must be a subset sequence <...|...> or pq(...)");
  }
  if (f == "finite") {
    if (a.empty()) shape_error(t, "finite takes an optional alphabet size and at least one sequence");
    std::size_t first = 0;
    std::optional<std::uint32_t> k;
    if (a[0].kind == Term::Kind::integer) {
      k = as_u32(a[0], arg_label(t, 0));
      first = 1;
    }
    if (first == a.size()) shape_error(t, "finite: at least one sequence is required");
    std::vector<PeriodicSequence> seqs;
    Symbol top = 0;
    for (std::size_t i = first; i < a.size(); ++i) {
      require_kind(a[i], Term::Kind::seq, arg_label(t, i));
      PeriodicSequence s{as_symbols(a[i].items, "finite: symbol"), as_symbols(a[i].period, "finite: symbol")};
      for (Symbol x : s.prefix) top = std::max(top, x);
      for (Symbol x : s.period) top = std::max(top, x);
      seqs.push_back(std::move(s));
    }
    return checked(t, finite_set(k.value_or(top + 1), std::move(seqs)));
  }
  if (f == "orbit") {
    arity(t, 1, 1, "[T(0), T(1), ...]");
    require_kind(a[0], Term::Kind::list, arg_label(t, 0));
    return checked(t, orbit(FiniteMap{as_symbols(a[0].items, "orbit: image")}));
  }
  if (f == "sft") {
    arity(t, 1, 1, "[{successors of 0}, ...]");
    require_kind(a[0], Term::Kind::list, arg_label(t, 0));
    TransitionRelation rel;
    for (const auto& s : a[0].items) rel.successors.push_back(as_set(s, "sft: successors"));
    return checked(t, orbit_sv(std::move(rel)));
  }
  if (f == "modmap") {
    arity(t, 3, 3, "[T(0), ...], {K}, z");
    require_kind(a[0], Term::Kind::list, arg_label(t, 0));
    ModifiedMap m{FiniteMap{as_symbols(a[0].items, "modmap: image")}, as_set(a[1], arg_label(t, 1)),
                  as_u32(a[2], arg_label(t, 2))};
    try {
      return checked(t, orbit(modify_map(m)));
    } catch (const InvarianceViolation& e) {
      std::string msg = e.what();
      if (!e.offending().empty()) msg += " (" + e.offending().front() + ")";
      range_error(t, "modmap: " + msg);
    } catch (const std::invalid_argument& e) {
      range_error(t, std::string("modmap: ") + e.what());
    }
  }
  if (f == "shift" || f == "dilate" || f == "restrict" || f == "block") {
    arity(t, 2, 2, "k, expr");
    const std::size_t k = as_size(a[0], arg_label(t, 0));
    SeqSetExpr inner = build(a[1]);
    if (f == "shift") return checked(t, shift(k, inner));
    if (f == "dilate") return checked(t, dilate(k, inner));
    if (f == "restrict") return checked(t, restriction(k, inner));
    return checked(t, block(k, inner));
  }
  if (f == "union" || f == "djunion" || f == "prod") {
    arity(t, 2, 2, "expr, expr");
    auto [l, r] = two_children(t);
    if (f == "union") return checked(t, unite(l, r));
    if (f == "djunion") return checked(t, disjoint_union(l, r));
    return checked(t, product(l, r));
  }
  if (f == "image") {
    arity(t, 2, 2, "[map]->k, expr");
    require_kind(a[0], Term::Kind::list, arg_label(t, 0));
    SymbolMap m;
    m.table = as_symbols(a[0].items, "image: symbol");
    if (a[0].arrow) {
      if (*a[0].arrow > std::numeric_limits<std::uint32_t>::max()) range_error(a[0], "image: target size out of range");
      m.target_size = static_cast<std::uint32_t>(*a[0].arrow);
    } else {
      m.target_size = m.table.empty() ? 1 : *std::max_element(m.table.begin(), m.table.end()) + 1;
    }
    return checked(t, image(std::move(m), build(a[1])));
  }
  if (f == "cls") {
    arity(t, 1, 1, "expr");
    return checked(t, closure(build(a[0])));
  }
  std::vector<std::string> expected;
  for (const auto& name : kFunctions) expected.push_back(name);
  fail(Diagnostic::Kind::syntax, t.line, t.col, "unknown function '" + f + "'", expected);
}

// ---------------------------------------------------------------------------
// Printer.

template <class T, class Fn>
void join(std::ostream& out, const std::vector<T>& xs, Fn&& fn) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ", ";
    fn(xs[i]);
  }
}

void print_set(std::ostream& out, const SymbolSet& s) {
  out << '{';
  join(out, s, [&](Symbol x) { out << x; });
  out << '}';
}

template <class T, class Fn>
void print_seq(std::ostream& out, const EventuallyPeriodic<T>& s, Fn&& fn) {
  out << '<';
  join(out, s.prefix, fn);
  out << (s.prefix.empty() ? "| " : " | ");
  join(out, s.period, fn);
  out << '>';
}

void print_expr(std::ostream& out, const SeqSetExpr& e) {
  const auto& v = e.node().value;
  if (auto* n = std::get_if<nodes::FullShift>(&v)) {
    out << "full(" << n->k << ')';
  } else if (auto* n = std::get_if<nodes::EvConst>(&v)) {
    out << "evconst(" << n->k << ", " << n->z << ')';
  } else if (auto* n = std::get_if<nodes::SRSet>(&v)) {
    out << "sr(" << n->k << ", " << n->r.str();
    if (n->z != 0) out << ", " << n->z;
    out << ')';
  } else if (auto* n = std::get_if<nodes::CylSched>(&v)) {
    out << "cylsched(" << n->k << ", ";
    if (auto* s = std::get_if<SubsetSequence>(&n->schedule)) {
      print_seq(out, *s, [&](const SymbolSet& z) { print_set(out, z); });
    } else {
      const auto& plan = std::get<BlockPlan>(n->schedule);
      out << "pq(" << plan.z;
      for (const auto& p : plan.schedule.pairs) out << ", [" << p.p << ", " << p.q << ']';
      out << ')';
    }
    out << ')';
  } else if (auto* n = std::get_if<nodes::FiniteSet>(&v)) {
    out << "finite(" << n->k;
    for (const auto& s : n->sequences) {
      out << ", ";
      print_seq(out, s, [&](Symbol x) { out << x; });
    }
    out << ')';
  } else if (auto* n = std::get_if<nodes::Orbit>(&v)) {
    out << "orbit([";
    join(out, n->map.table, [&](Symbol x) { out << x; });
    out << "])";
  } else if (auto* n = std::get_if<nodes::OrbitSV>(&v)) {
    out << "sft([";
    join(out, n->relation.successors, [&](const SymbolSet& s) { print_set(out, s); });
    out << "])";
  } else if (auto* n = std::get_if<nodes::Shift>(&v)) {
    out << "shift(" << n->k << ", ";
    print_expr(out, n->inner);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Dilate>(&v)) {
    out << "dilate(" << n->k << ", ";
    print_expr(out, n->inner);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Restrict>(&v)) {
    out << "restrict(" << n->k << ", ";
    print_expr(out, n->inner);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Block>(&v)) {
    out << "block(" << n->k << ", ";
    print_expr(out, n->inner);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Union>(&v)) {
    out << "union(";
    print_expr(out, n->left);
    out << ", ";
    print_expr(out, n->right);
    out << ')';
  } else if (auto* n = std::get_if<nodes::DisjointUnion>(&v)) {
    out << "djunion(";
    print_expr(out, n->left);
    out << ", ";
    print_expr(out, n->right);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Product>(&v)) {
    out << "prod(";
    print_expr(out, n->left);
    out << ", ";
    print_expr(out, n->right);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Image>(&v)) {
    out << "image([";
    join(out, n->map.table, [&](Symbol x) { out << x; });
    out << "]->" << n->map.target_size << ", ";
    print_expr(out, n->inner);
    out << ')';
  } else if (auto* n = std::get_if<nodes::Closure>(&v)) {
    out << "cls(";
    print_expr(out, n->inner);
    out << ')';
  }
}

}  // namespace

DslProgram parse(std::string_view source) {
  DslProgram prog;
  prog.source = std::string(source);
  try {
    Term root = TermParser(lex(source)).parse_all();
    prog.expr = build(root);
  } catch (Failure& f) {
    prog.expr.reset();
    prog.diagnostics = std::move(f.diagnostics);
  }
  return prog;
}

std::string print(const SeqSetExpr& expr) {
  std::ostringstream out;
  print_expr(out, expr);
  return out.str();
}

}  // namespace topent::dsl
