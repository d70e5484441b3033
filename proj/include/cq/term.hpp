#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cq {

// Immutable first-order term: a variable or a function symbol applied to
// argument terms. Constants are 0-ary applications. Variable names start
// with an uppercase letter or '_', symbol names start lowercase.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    std::string name;
    bool var;
    std::vector<TermPtr> args;  // empty for variables
};

TermPtr mk_var(std::string name);
TermPtr mk_app(std::string name, std::vector<TermPtr> args = {});

bool term_eq(const TermPtr& s, const TermPtr& t);
// Total order: variables before applications, then by name, then by arguments.
int term_cmp(const TermPtr& s, const TermPtr& t);

void collect_vars(const TermPtr& t, std::set<std::string>& out);
std::set<std::string> term_vars(const TermPtr& t);
bool occurs_in(const std::string& var, const TermPtr& t);
bool is_ground(const TermPtr& t);
int term_size(const TermPtr& t);  // number of nodes

// Replaces every occurrence of a mapped variable, simultaneously.
// Variables outside the map are left in place.
TermPtr term_replace(const TermPtr& t, const std::map<std::string, TermPtr>& m);

using TermPair = std::pair<TermPtr, TermPtr>;

// Difference set of two terms: the maximal disagreeing subterm pairs found
// by parallel descent, except that a shared variable position contributes
// the pair (x,x) and agreeing ground positions contribute nothing.
// Order of pairs is first occurrence during descent; duplicates removed.
std::vector<TermPair> diff_set(const TermPtr& s, const TermPtr& t);

}  // namespace cq
