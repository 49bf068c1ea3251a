#pragma once

#include <string>

#include "pcc/cone.hpp"
#include "pcc/crofton.hpp"

namespace pcc {

/// Cone description in JSON:
///   {"p": 3, "n": 2, "d": 1,
///    "pieces": [{"e": 1, "r": 1, "phase": 0, "A": [["1"], ["0"]],
///                "base": {"depth": 1, "classes": [[1]]}}]}
/// Matrix entries are rational strings "num/den" (integers are also accepted).
/// Errors name the offending field.
ConeSet parse_document(const std::string& text);
/// Canonical form: sorted keys, two-space indentation, entries as strings.
std::string serialize_document(const ConeSet& x);

/// {lhs, rhs, level, generic_count, refined_count, equal, ...}
std::string report_json(const CroftonReport& rep, long p);

/// Rational function of L such as "2/(L-1)" or "3*L^-2 + 1/2".
struct Expression {
  LocRingElem num;
  LocRingElem den;
  bool has_L = false;
};
Expression parse_expression(const std::string& text);
/// Symbolic equality, or equality at q = p when the expression has no L.
bool expression_matches(const Expression& e, const LocRingElem& value, long p);

}  // namespace pcc
