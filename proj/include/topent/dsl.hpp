#pragma once

// Text syntax for sequence-set expressions.
//
//   full(2)                      evconst(3, 0)
//   sr(3, 2/5)                   sr(2, 1/2, 1)          frozen symbol 1
//   cylsched(2, <{0} | {0,1}, {0}>)                     eventually periodic subsets
//   cylsched(2, pq(0, [1,2], [2,4], [3,6]))             block schedule, frozen symbol 0
//   finite(2, <0 | 1>, <| 0, 1>)                        eventually periodic sequences
//   orbit([1, 2, 0])             sft([{0,1}, {0}])
//   modmap([0,1,2,3], {0,1}, 0)  orbit of the modified map T_{K,z}
//   shift(k, e)  dilate(k, e)  restrict(k, e)  block(k, e)
//   union(e, e)  djunion(e, e)  prod(e, e)  image([0,2]->3, e)  cls(e)
//
// Whitespace is insignificant and `#` starts a comment.

#include "topent/symbolic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topent::dsl {

struct Diagnostic {
  enum class Kind { syntax, arity, validation };

  Kind kind = Kind::syntax;
  std::size_t line = 1, column = 1;
  std::string message;
  std::vector<std::string> expected;  // syntax errors: tokens that would have been accepted

  /// "line:col: kind: message (expected ...)"
  std::string str() const;
};

const char* to_string(Diagnostic::Kind kind);

struct DslProgram {
  std::string source;
  std::optional<SeqSetExpr> expr;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return expr.has_value() && diagnostics.empty(); }
  /// 0 on success, 1 for syntax and arity errors, 2 for validation errors.
  int exit_code() const;
};

DslProgram parse(std::string_view source);

/// Canonical text; parse(print(e)) is structurally equal to e.
std::string print(const SeqSetExpr& expr);

}  // namespace topent::dsl
