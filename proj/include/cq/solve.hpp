#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cq/formula.hpp"

namespace cq {

// One rewrite application. `path` addresses the replaced subformula in the
// pre-step tree (0 = left/only child, 1 = right child); `before`/`after` are
// its printed forms.
struct TraceStep {
    int step = 0;       // rule number 1..12
    std::string sub;    // "", "i", "ii"
    std::vector<int> path;
    std::string before;
    std::string after;
};

struct SolveOptions {
    std::uint64_t budget = 1'000'000;  // max rewrite steps before BudgetExceeded
    bool trace = false;
};

struct SolveResult {
    FormulaPtr solved;
    std::vector<TraceStep> trace;
    std::uint64_t steps = 0;
};

// Rewrites a positive conjunctive query to its solved form. Deterministic:
// rules are tried in fixed priority bands and within a band at the first
// applicable position in postorder. Conjunction spines are kept
// right-associated throughout.
SolveResult solve(const FormulaPtr& q, const SolveOptions& opts = {});
FormulaPtr solve_form(const FormulaPtr& q);

std::string trace_line(const TraceStep& s);
// Re-applies a recorded trace to q, verifying each step's before-text.
// Throws NotApplicable on any mismatch; returns the final formula.
FormulaPtr replay(const FormulaPtr& q, const std::vector<TraceStep>& trace);

// TRUE, FALSE, or (existential prefix over) equations x1=s1 & ... & xn=sn
// followed by atoms, where the x's are distinct free variables occurring
// nowhere else, every bound variable occurs in the body, and no right-hand
// side is a bare bound variable. Any conjunction association is accepted.
bool is_solved_form(const FormulaPtr& f);

bool is_consistent(const FormulaPtr& q);  // solve(q) is not FALSE

// Decomposition of a solved form.
struct Solved {
    FK k = FK::And;  // FK::True, FK::False, or FK::And for a proper body
    std::vector<std::string> bound;  // existential prefix, outermost first
    std::vector<std::pair<std::string, TermPtr>> eqs;
    std::vector<FormulaPtr> atoms;
};

Solved decompose(const FormulaPtr& f);  // pre: is_solved_form(f)
FormulaPtr compose(const Solved& s);

std::set<std::string> elim_vars(const FormulaPtr& solved);   // left-hand sides
std::set<std::string> param_vars(const FormulaPtr& solved);  // other free variables
std::vector<std::string> bound_vars(const FormulaPtr& solved);

// Canonical representative of a solved form's equivalence class: eliminable
// variables are maximized within variable-variable equation classes,
// equations are sorted by left-hand side, bound variables are renamed to
// B1, B2, ... in first-occurrence order. Idempotent; two solved forms are
// isomorphic iff their canonical forms are syntactically equal.
FormulaPtr canonicalize(const FormulaPtr& solved);
FormulaPtr canonical_form(const FormulaPtr& q);  // canonicalize(solve(q))

bool equivalent(const FormulaPtr& q1, const FormulaPtr& q2);

// Decides q1 <= q2 in the generality order: every solution family of q1 is
// one of q2's. Requires equal cardinality to hold at all.
bool more_general(const FormulaPtr& q1, const FormulaPtr& q2);

// Difference pairs of two aligned consistent solved forms: union of the term
// difference sets of corresponding equation right-hand sides and atom
// arguments. Throws AlignmentError when the eliminable lists or atoms do not
// line up, Inconsistent on a FALSE input.
std::vector<TermPair> query_diff(const FormulaPtr& s1, const FormulaPtr& s2);

}  // namespace cq
