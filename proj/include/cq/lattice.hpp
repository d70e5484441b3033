#pragma once

#include <set>
#include <string>
#include <vector>

#include "cq/formula.hpp"
#include "cq/subst.hpp"

namespace cq {

// E-formulas (queries without atoms) modulo equivalence form a lattice that
// mirrors the generality order on substitutions. Inputs here must satisfy
// is_eformula; results are canonical solved forms unless noted.

// Gamma: the substitution of a consistent E-formula's canonical solved form
// ({xi -> si} plus identity bindings for the parameters); FALSE maps to bottom.
Subst to_substitution(const FormulaPtr& e);

// Gamma inverse: bottom maps to FALSE, the empty substitution to TRUE, and
// otherwise the bindings become equations with the range existentially
// quantified (domain variables occurring in values are renamed first so the
// binders cannot capture the left-hand sides).
FormulaPtr to_eformula(const Subst& s);

FormulaPtr meet(const FormulaPtr& e1, const FormulaPtr& e2);  // glb: conjoin and solve

// lub: anti-unification of the Gamma images componentwise, with one shared
// generalization-variable table across components.
FormulaPtr join(const FormulaPtr& e1, const FormulaPtr& e2);

FormulaPtr meet_all(const std::vector<FormulaPtr>& es);  // EmptySet when es is empty
FormulaPtr join_all(const std::vector<FormulaPtr>& es);

// Existentially quantifies the free variables outside xs, ascending name
// order outermost first. Purely syntactic: the result is not solved.
FormulaPtr project(const FormulaPtr& e, const std::set<std::string>& xs);

// Free variables of the solved form: the minimal set the formula really
// constrains. Throws Inconsistent when e has no solutions.
std::set<std::string> kernel_e(const FormulaPtr& e);

}  // namespace cq
