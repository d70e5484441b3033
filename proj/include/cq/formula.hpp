#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cq/term.hpp"

namespace cq {

enum class FK { True, False, Eq, Atom, Not, And, Or, Imp, Iff, Exists, Forall };

// Immutable formula node. Queries are the fragment
// {True, False, Eq, Atom, And, Exists}; the remaining connectives exist for
// substitution application and the semantic oracle.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FK k;
    TermPtr l, r;               // Eq
    std::string pred;           // Atom
    std::vector<TermPtr> args;  // Atom
    FormulaPtr a, b;            // children: a for unary/quantified, a+b for binary
    std::string v;              // quantified variable
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_eq(TermPtr l, TermPtr r);
FormulaPtr f_atom(std::string pred, std::vector<TermPtr> args = {});
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_imp(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(std::string v, FormulaPtr a);
FormulaPtr f_forall(std::string v, FormulaPtr a);

bool feq(const FormulaPtr& f, const FormulaPtr& g);  // syntactic equality

std::set<std::string> free_vars(const FormulaPtr& f);
// Every identifier that occurs as a variable, free or bound.
void collect_all_var_names(const FormulaPtr& f, std::set<std::string>& out);
std::set<std::string> all_var_names(const FormulaPtr& f);

int card(const FormulaPtr& f);  // number of atom nodes
bool is_query(const FormulaPtr& f);
bool is_eformula(const FormulaPtr& f);  // query with card 0
int formula_size(const FormulaPtr& f);  // formula nodes plus term nodes

// Rebuilds every conjunction spine right-associated, recursively.
FormulaPtr right_assoc(const FormulaPtr& f);

// Simultaneous replacement of free occurrences of xs[i] by ss[i].
// Throws NotSubstitutible if a quantifier would capture a variable of ss[i].
FormulaPtr replace(const FormulaPtr& f, const std::vector<std::string>& xs,
                   const std::vector<TermPtr>& ss);

// Alpha-equivalence: equality up to renaming of bound variables.
bool is_variant(const FormulaPtr& f, const FormulaPtr& g);

// Deterministic fresh-name source: yields "U", then "V0", "V1", ...,
// skipping occupied names. Every yielded name becomes occupied.
class NameGen {
public:
    NameGen() = default;
    explicit NameGen(std::set<std::string> occupied) : used_(std::move(occupied)) {}
    void occupy(const std::string& n) { used_.insert(n); }
    void occupy_all(const std::set<std::string>& ns) { used_.insert(ns.begin(), ns.end()); }
    bool occupied(const std::string& n) const { return used_.count(n) != 0; }
    std::string fresh();

private:
    std::set<std::string> used_;
    long next_ = -1;  // -1 encodes "U", then V0, V1, ...
};

}  // namespace cq
