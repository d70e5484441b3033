#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cq/formula.hpp"
#include "cq/subst.hpp"
#include "cq/term.hpp"

namespace cq {

// Function and predicate symbols with fixed arities. The two symbol sets
// must be disjoint; symbol names are lowercase identifiers.
struct Signature {
    std::map<std::string, int> funcs;
    std::map<std::string, int> preds;

    // Throws SignatureError on reserved names, uppercase names, or a symbol
    // appearing in both sets.
    void validate() const;
};

// Parsers. With infer=true unknown symbols are added to the signature from
// usage; with infer=false any undeclared symbol is a syntax error. Arity
// conflicts and function/predicate clashes are syntax errors either way.
// Positions in SyntaxError are 1-based character offsets.
TermPtr parse_term(const std::string& text, Signature& sig, bool infer);
FormulaPtr parse_formula(const std::string& text, Signature& sig, bool infer);
// parse_formula plus the check that the result is a positive conjunctive query.
FormulaPtr parse_query(const std::string& text, Signature& sig, bool infer);
Subst parse_subst(const std::string& text, Signature& sig, bool infer);
std::vector<std::string> parse_varlist(const std::string& text);

// Convenience forms over a throwaway inferring signature.
TermPtr parse_term(const std::string& text);
FormulaPtr parse_formula(const std::string& text);
FormulaPtr parse_query(const std::string& text);
Subst parse_subst(const std::string& text);

std::string print_term(const TermPtr& t);
std::string print_formula(const FormulaPtr& f);
std::string print_subst(const Subst& s);
std::string print_varset(const std::set<std::string>& xs);
std::string print_diffset(const std::vector<TermPair>& ps);

}  // namespace cq
