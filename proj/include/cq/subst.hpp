#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cq/formula.hpp"
#include "cq/term.hpp"

namespace cq {

// Finite substitution: either the bottom element or a finite map from
// variable names to terms. Identity bindings X -> X are significant: they
// widen the domain.
struct Subst {
    bool bot = false;
    std::map<std::string, TermPtr> b;
};

inline Subst s_bottom() { return Subst{true, {}}; }
inline Subst s_empty() { return Subst{false, {}}; }
Subst s_of(std::initializer_list<std::pair<std::string, TermPtr>> bs);

bool subst_eq(const Subst& s, const Subst& t);  // syntactic equality

std::set<std::string> dom(const Subst& s);         // pre: not bottom
std::set<std::string> range_vars(const Subst& s);  // variables of value terms; pre: not bottom

// tσ; requires VARS(t) ⊆ DOM(σ). Throws NotApplicable listing missing variables.
TermPtr apply_to_term(const Subst& s, const TermPtr& t);

// Composition σθ over DOM(σ); requires RANGE(σ) ⊆ DOM(θ).
// Bottom is absorbing on either side.
Subst compose(const Subst& s, const Subst& t);

// Restriction σ|X over DOM(σ) ∩ X; bottom restricts to bottom.
Subst restrict_to(const Subst& s, const std::set<std::string>& xs);

// Union of substitutions with disjoint domains; bottom absorbs.
Subst subst_union(const Subst& s, const Subst& t);

// Extends σ to DOM(σ) ∪ xs, mapping each new variable x to x itself when x
// is outside the current range, else to the first variable outside the
// current range (context variables in name order, then fresh names).
Subst regular_extension(const Subst& s, const std::set<std::string>& xs);

// Capture-avoiding application Fσ. The substitution is first restricted to
// the free variables of F and regularly extended over them; quantified
// variables threatened by capture are renamed deterministically.
FormulaPtr apply_to_formula(const Subst& s, const FormulaPtr& f);

bool is_permutation(const Subst& s);  // pre: not bottom

// Minimal X with σ|X equivalent to σ: x is in the kernel iff σ(x) is a
// non-variable term or σ(x) is a variable occurring in another binding's value.
std::set<std::string> kernel(const Subst& s);

// Decides σ ⪯ θ (θ is more general): regular extensions over the common
// domain, then the difference-set matcher.
bool more_general_subst(const Subst& s, const Subst& t);
bool equivalent_subst(const Subst& s, const Subst& t);

}  // namespace cq
