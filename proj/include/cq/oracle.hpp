#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cq/formula.hpp"
#include "cq/subst.hpp"

namespace cq {

// Semantic reference machinery over finite universes of constants. Tuples
// hold printed ground terms; a relation is a tuple set. Queries take one
// relation per atom position (a multiinterpretation) whose tuples are ground
// atoms written [predicate, arg1, ..., argk]; full formulas take one relation
// per predicate whose tuples are argument lists.
using Tuple = std::vector<std::string>;
using Rel = std::set<Tuple>;
using Interp = std::map<std::string, Rel>;
using Valuation = std::map<std::string, std::string>;  // variable -> universe constant

// The valuations over free(q) under which q holds with the i-th atom
// constrained by interps[i]. Throws ArityMismatch unless |interps| == card(q).
std::set<Valuation> solutions(const FormulaPtr& q, const std::vector<Rel>& interps,
                              const std::vector<std::string>& universe);

// Classical evaluation of an arbitrary formula; quantifiers range over the
// universe, equations compare ground terms syntactically (terms may fall
// outside the universe; atom membership is then simply false).
bool eval_formula(const FormulaPtr& f, const Interp& interp, const Valuation& h,
                  const std::vector<std::string>& universe);

// Ground instances of a substitution restricted to `vars`, as valuations
// over exactly `vars`. The bottom substitution has no instances.
std::set<Valuation> instances(const Subst& s, const std::vector<std::string>& universe,
                              const std::set<std::string>& vars);

enum class Verdict { Confirmed, Refuted, Inconclusive };

struct OracleReport {
    Verdict verdict = Verdict::Inconclusive;
    std::string witness;  // printed refuting valuation, when refuted
    std::uint64_t enumerated = 0;
    double elapsed_ms = 0.0;
};

struct OracleOptions {
    int extra_constants = -1;  // -1: derive from the variable counts
    int depth = 3;             // ground-term depth for the function-symbol refuter sweep
    std::uint64_t max_valuations = 5'000'000;
};

// Semantic equivalence check. Over constant-only signatures the verdict is
// exact (Confirmed or Refuted); with proper function symbols only refutation
// is attempted and the fallback verdict is Inconclusive.
OracleReport check_equiv(const FormulaPtr& q1, const FormulaPtr& q2,
                         const OracleOptions& opts = {});

// Exact membership of a ground valuation in a consistent solved E-formula's
// solutions over the full term universe: bound variables act as match
// variables. `h` must cover the free variables of the form.
bool solved_member(const FormulaPtr& solved, const std::map<std::string, TermPtr>& h);

// Valuation witnessing the solved form as sharply as possible: parameters
// and bound variables take distinct fresh constants (avoiding
// used_symbols), eliminables take the resulting right-hand side values.
std::map<std::string, TermPtr> canonical_valuation(const FormulaPtr& solved,
                                                   const std::set<std::string>& used_symbols);

// Every generalization of a consistent E-formula up to equivalence, as
// canonical solved forms (the formula itself and TRUE included), obtained by
// cutting right-hand side positions and merging equal cut subterms. Throws
// Inconsistent for inconsistent input, BudgetExceeded past size_bound
// candidates.
std::vector<FormulaPtr> enumerate_generalizations(const FormulaPtr& e,
                                                  std::uint64_t size_bound = 1'000'000);

}  // namespace cq
