#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "cq/error.hpp"
#include "cq/formula.hpp"
#include "cq/text.hpp"
#include "gen.hpp"

using namespace cq;

namespace {
FormulaPtr F(const std::string& s) { return parse_formula(s); }
}  // namespace

TEST_CASE("free variables") {
    CHECK(free_vars(F("exists Z . q(X, Y) & p(Z)")) == std::set<std::string>{"X", "Y"});
    CHECK(free_vars(F("X = f(Y) & exists X . p(X)")) == std::set<std::string>{"X", "Y"});
    CHECK(free_vars(F("true")).empty());
    CHECK(free_vars(F("exists X . X = a")).empty());
    CHECK(all_var_names(F("exists Z . q(X, Y) & p(Z)")) ==
          std::set<std::string>{"X", "Y", "Z"});
}

TEST_CASE("cardinality and fragment recognizers") {
    CHECK(card(F("X = a")) == 0);
    CHECK(card(F("p(X) & exists Y . q(X, Y) & p(Y)")) == 3);
    CHECK(is_query(F("exists Z . X = f(Z) & p(X)")));
    CHECK(!is_query(F("not p(X)")));
    CHECK(!is_query(F("p(X) | q(X, Y)")));
    CHECK(!is_query(F("forall X . p(X)")));
    CHECK(is_eformula(F("exists Z . X = f(Z)")));
    CHECK(!is_eformula(F("exists Z . X = f(Z) & p(X)")));
    CHECK(is_eformula(F("false")));
}

TEST_CASE("replacement of free occurrences is simultaneous") {
    FormulaPtr f = F("q(X, Y) & exists X . p(X)");
    FormulaPtr g = replace(f, {"X", "Y"}, {parse_term("Y"), parse_term("X")});
    CHECK(print_formula(g) == "q(Y,X) & (exists X . p(X))");

    FormulaPtr h = replace(F("X = Y"), {"X", "Y"}, {parse_term("a"), parse_term("b")});
    CHECK(print_formula(h) == "a = b");

    // untouched variables stay; replacing a bound name does nothing inside
    FormulaPtr i = replace(F("exists X . q(X, Y)"), {"Y"}, {parse_term("f(Z)")});
    CHECK(print_formula(i) == "exists X . q(X,f(Z))");
}

TEST_CASE("replacement refuses capture") {
    CHECK_THROWS_AS(replace(F("exists X . q(X, Y)"), {"Y"}, {parse_term("f(X)")}),
                    NotSubstitutible);
    CHECK_NOTHROW(replace(F("exists X . q(X, Y)"), {"Y"}, {parse_term("f(W)")}));
    // replacing X itself under exists X is a no-op, not a capture
    CHECK_NOTHROW(replace(F("exists X . p(X)"), {"X"}, {parse_term("f(X)")}));
}

TEST_CASE("free variables after replacement") {
    gen::Gen G(21);
    for (int round = 0; round < 300; ++round) {
        FormulaPtr f = G.full_formula(1 + G.pick(12));
        std::set<std::string> fv = free_vars(f);
        std::vector<std::string> xs(fv.begin(), fv.end());
        std::vector<TermPtr> ss;
        for (std::size_t i = 0; i < xs.size(); ++i) ss.push_back(G.term(1));
        FormulaPtr g;
        try {
            g = replace(f, xs, ss);
        } catch (const NotSubstitutible&) {
            continue;
        }
        std::set<std::string> want;
        for (const TermPtr& t : ss) collect_vars(t, want);
        CHECK(free_vars(g) == want);
    }
}

TEST_CASE("variant relation") {
    CHECK(is_variant(F("exists Z . X = f(Z)"), F("exists W . X = f(W)")));
    CHECK(!is_variant(F("exists Z . X = f(Z)"), F("exists W . Y = f(W)")));
    CHECK(!is_variant(F("exists Z . q(Z, Z)"), F("exists Z . exists W . q(Z, W)")));
    CHECK(is_variant(F("exists X . exists Y . q(X, Y)"), F("exists Y . exists X . q(Y, X)")));
    // binding the same outer name twice still distinguishes occurrences
    CHECK(!is_variant(F("exists X . q(X, Y)"), F("exists Y . q(Y, Y)")));
}

TEST_CASE("variant is an equivalence relation on samples") {
    gen::Gen G(22);
    std::vector<FormulaPtr> fs;
    for (int i = 0; i < 40; ++i) fs.push_back(G.full_formula(1 + G.pick(8)));
    for (const FormulaPtr& f : fs) CHECK(is_variant(f, f));
    for (const FormulaPtr& f : fs)
        for (const FormulaPtr& g : fs) CHECK(is_variant(f, g) == is_variant(g, f));
}

TEST_CASE("right association of conjunction spines") {
    FormulaPtr f = right_assoc(F("(p(X) & q(X, Y)) & (p(Y) & p(X))"));
    CHECK(print_formula(f) == "p(X) & q(X,Y) & p(Y) & p(X)");
    REQUIRE(f->k == FK::And);
    CHECK(f->a->k == FK::Atom);
    // recurses under quantifiers and other connectives
    FormulaPtr g = right_assoc(F("exists Z . (p(Z) & p(Z)) & p(Z)"));
    CHECK(g->a->a->k == FK::Atom);
    gen::Gen G(23);
    for (int i = 0; i < 200; ++i) {
        FormulaPtr h = G.query(1 + G.pick(20));
        FormulaPtr r = right_assoc(h);
        CHECK(card(r) == card(h));
        CHECK(free_vars(r) == free_vars(h));
        CHECK(feq(right_assoc(r), r));  // idempotent
    }
}

TEST_CASE("formula size counts formula and term nodes") {
    CHECK(formula_size(F("true")) == 1);
    CHECK(formula_size(F("X = a")) == 3);
    CHECK(formula_size(F("p(f(X))")) == 3);
}

TEST_CASE("fresh name generation") {
    NameGen ng;
    CHECK(ng.fresh() == "U");
    CHECK(ng.fresh() == "V0");
    CHECK(ng.fresh() == "V1");
    NameGen ng2({"U", "V0", "V2"});
    CHECK(ng2.fresh() == "V1");
    CHECK(ng2.fresh() == "V3");
    NameGen ng3;
    ng3.occupy("V0");
    CHECK(ng3.fresh() == "U");
    CHECK(ng3.fresh() == "V1");
    CHECK(ng3.occupied("V0"));
}
