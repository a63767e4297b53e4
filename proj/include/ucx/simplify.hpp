#pragma once

// Optional post-pass: OR alternatives as an exclusive disjunction of
// conjunctions, with common-factor extraction.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ucx/cx_model.hpp"

namespace ucx {

/// Negation-free, constant-free formula over activity literals.
struct BooleanExpr {
    enum class Kind { literal, and_, xor_ };

    Kind kind = Kind::literal;
    std::string name;                    // literal only
    std::vector<BooleanExpr> children;  // and_/xor_ only, at least two

    static BooleanExpr literal(std::string name);
    /// A single operand is returned unchanged; nested nodes of the same kind
    /// are flattened.
    static BooleanExpr conj(std::vector<BooleanExpr> operands);
    static BooleanExpr exclusive(std::vector<BooleanExpr> operands);

    std::set<std::string> literals() const;
    bool evaluate(const std::set<std::string>& true_literals) const;

    bool operator==(const BooleanExpr&) const = default;
};

/// XOR over one conjunction per alternative; composites are expanded into
/// their members. Throws DataError for an empty family or empty alternative.
BooleanExpr or_formula(const Alternatives& alternatives);

/// Pulls literals shared by every XOR branch into a conjunctive prefix, as
/// long as each branch keeps at least one literal.
BooleanExpr factor(const BooleanExpr& expr);

/// "(a∧b)⊕(a∧c)" or, with `ascii`, "(a&b)^(a&c)".
std::string to_string(const BooleanExpr& expr, bool ascii = false);

/// Replaces every OR gateway by the AND/XOR subgraph of its factored formula.
/// The canonical unification output is left untouched.
UCXGraph render_factored(const UCXGraph& graph);

/// Gateway id -> formula text for every OR gateway.
std::map<std::string, std::string> simplify_report(const UCXGraph& graph, bool ascii = false, bool factored = true);

}  // namespace ucx
