#include <doctest.h>

#include <string>

#include "cq/error.hpp"
#include "cq/formula.hpp"
#include "cq/subst.hpp"
#include "cq/term.hpp"
#include "cq/text.hpp"
#include "gen.hpp"

using namespace cq;

TEST_CASE("term parsing") {
    TermPtr t = parse_term("f(X, a)");
    CHECK(print_term(t) == "f(X,a)");
    CHECK(parse_term("_tmp")->var);
    CHECK(parse_term("X1")->var);
    CHECK(!parse_term("c")->var);
    CHECK(print_term(parse_term("  g( f( X ) , Y )")) == "g(f(X),Y)");
    CHECK_THROWS_AS(parse_term("f(X"), SyntaxError);
    CHECK_THROWS_AS(parse_term("f(,X)"), SyntaxError);
    CHECK_THROWS_AS(parse_term(""), SyntaxError);
    CHECK_THROWS_AS(parse_term("f(X) Y"), SyntaxError);  // trailing junk
}

TEST_CASE("syntax errors carry 1-based positions") {
    try {
        parse_term("f(X");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 4);
        CHECK(e.code() == "syntax");
    }
    try {
        Signature sig;
        parse_formula("X = ", sig, true);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("formula parsing: structure and precedence") {
    FormulaPtr f = parse_formula("exists Z . X = f(Z) & p(X)");
    REQUIRE(f->k == FK::Exists);
    CHECK(f->v == "Z");
    REQUIRE(f->a->k == FK::And);
    CHECK(f->a->a->k == FK::Eq);
    CHECK(f->a->b->k == FK::Atom);

    // & is right-associative
    FormulaPtr g = parse_formula("p(X) & q(X, Y) & p(Y)");
    REQUIRE(g->k == FK::And);
    CHECK(g->a->k == FK::Atom);
    CHECK(g->b->k == FK::And);

    // precedence: iff < imp < or < and < not
    FormulaPtr h = parse_formula("not p(X) & q(X, Y) -> p(Y) | p(X) <-> true");
    REQUIRE(h->k == FK::Iff);
    REQUIRE(h->a->k == FK::Imp);
    CHECK(h->a->a->k == FK::And);
    CHECK(h->a->a->a->k == FK::Not);
    CHECK(h->a->b->k == FK::Or);

    // implication chains right
    FormulaPtr i = parse_formula("p(X) -> q(X, Y) -> p(Y)");
    REQUIRE(i->k == FK::Imp);
    CHECK(i->b->k == FK::Imp);

    // bare lowercase identifier = 0-ary atom; reserved words are not atoms
    FormulaPtr j = parse_formula("halt & true");
    REQUIRE(j->k == FK::And);
    CHECK(j->a->k == FK::Atom);
    CHECK(j->a->pred == "halt");
    CHECK(j->b->k == FK::True);
    CHECK(parse_formula("false")->k == FK::False);
    CHECK_THROWS_AS(parse_formula("exists true . p(X)"), SyntaxError);
}

TEST_CASE("quantifier scope extends to the right") {
    FormulaPtr f = parse_formula("exists X . p(X) & q(X, Y)");
    REQUIRE(f->k == FK::Exists);
    CHECK(f->a->k == FK::And);
    FormulaPtr g = parse_formula("(exists X . p(X)) & q(X, Y)");
    REQUIRE(g->k == FK::And);
    CHECK(g->a->k == FK::Exists);
    FormulaPtr h = parse_formula("forall X . exists Y . q(X, Y)");
    REQUIRE(h->k == FK::Forall);
    CHECK(h->a->k == FK::Exists);
}

TEST_CASE("parse_query rejects non-queries") {
    CHECK(is_query(parse_query("exists Z . X = f(Z) & p(X)")));
    CHECK_THROWS_AS(parse_query("not p(X)"), SyntaxError);
    CHECK_THROWS_AS(parse_query("p(X) | q(X, Y)"), SyntaxError);
    CHECK_THROWS_AS(parse_query("forall X . p(X)"), SyntaxError);
}

TEST_CASE("signature inference and conflicts") {
    Signature sig;
    parse_formula("p(f(X), a) & q(X, Y)", sig, true);
    CHECK(sig.funcs.at("f") == 1);
    CHECK(sig.funcs.at("a") == 0);
    CHECK(sig.preds.at("p") == 2);
    CHECK(sig.preds.at("q") == 2);
    // arity conflict
    CHECK_THROWS_AS(parse_formula("p(X, Y, Z)", sig, true), SyntaxError);
    // function/predicate kind clash
    CHECK_THROWS_AS(parse_formula("f(X) = p(X)", sig, true), SyntaxError);
    // within one string too
    Signature sig2;
    CHECK_THROWS_AS(parse_formula("p(f(X), f(X, Y))", sig2, true), SyntaxError);
}

TEST_CASE("strict mode rejects undeclared symbols") {
    Signature sig;
    sig.funcs = {{"f", 1}, {"a", 0}};
    sig.preds = {{"p", 1}};
    CHECK(print_formula(parse_formula("p(f(a))", sig, false)) == "p(f(a))");
    CHECK_THROWS_AS(parse_formula("p(g(a))", sig, false), SyntaxError);
    CHECK_THROWS_AS(parse_formula("q(a, a)", sig, false), SyntaxError);
    Signature bad;
    bad.funcs = {{"true", 0}};
    CHECK_THROWS_AS(bad.validate(), SignatureError);
    Signature bad2;
    bad2.funcs = {{"s", 1}};
    bad2.preds = {{"s", 1}};
    CHECK_THROWS_AS(bad2.validate(), SignatureError);
}

TEST_CASE("substitution parsing and printing") {
    Subst s = parse_subst("{X -> f(Y), Y -> Y}");
    CHECK(!s.bot);
    CHECK(dom(s) == std::set<std::string>{"X", "Y"});
    CHECK(print_subst(s) == "{X -> f(Y), Y -> Y}");
    CHECK(print_subst(parse_subst("{}")) == "{}");
    CHECK(parse_subst("bottom").bot);
    CHECK(print_subst(s_bottom()) == "bottom");
    // bindings print sorted by variable
    CHECK(print_subst(parse_subst("{Z -> a, X -> b}")) == "{X -> b, Z -> a}");
    CHECK_THROWS_AS(parse_subst("{X -> a, X -> b}"), SyntaxError);
    CHECK_THROWS_AS(parse_subst("{X -> }"), SyntaxError);
    CHECK_THROWS_AS(parse_subst("{x -> a}"), SyntaxError);
}

TEST_CASE("variable list parsing") {
    CHECK(parse_varlist("X, Y, Z") == std::vector<std::string>{"X", "Y", "Z"});
    CHECK(parse_varlist("X") == std::vector<std::string>{"X"});
    CHECK(parse_varlist("").empty());
    CHECK_THROWS_AS(parse_varlist("X, f"), SyntaxError);
}

TEST_CASE("printing policy") {
    CHECK(print_formula(parse_formula("X = f(Y)")) == "X = f(Y)");
    CHECK(print_formula(parse_formula("X = f(Y) & p(X)")) == "X = f(Y) & p(X)");
    CHECK(print_formula(parse_formula("exists U . p(Z, X, U)")) == "exists U . p(Z,X,U)");
    // an open-tail construct on the left of & gets parentheses
    CHECK(print_formula(f_and(f_exists("Z", f_atom("p", {mk_var("Z")})),
                              f_atom("q", {mk_var("X"), mk_var("Y")}))) ==
          "(exists Z . p(Z)) & q(X,Y)");
    CHECK(print_formula(parse_formula("not (p(X) & q(X, Y))")) == "not (p(X) & q(X,Y))");
    CHECK(print_formula(parse_formula("not not p(X)")) == "not not p(X)");
    CHECK(print_formula(parse_formula("(p(X) | q(X, Y)) & true")) == "(p(X) | q(X,Y)) & true");
    CHECK(print_formula(parse_formula("p(X) -> q(X, Y) -> p(Y)")) ==
          "p(X) -> q(X,Y) -> p(Y)");
    CHECK(print_formula(parse_formula("(p(X) -> q(X, Y)) -> p(Y)")) ==
          "(p(X) -> q(X,Y)) -> p(Y)");
    CHECK(print_varset({"Y", "X"}) == "{X, Y}");
    CHECK(print_varset({}) == "{}");
}

TEST_CASE("print-parse round trip on random formulas") {
    gen::Gen G(11);
    for (int i = 0; i < 1000; ++i) {
        FormulaPtr f = G.full_formula(1 + G.pick(25));
        std::string s = print_formula(f);
        FormulaPtr g = parse_formula(s);
        CHECK(feq(f, g));
        CHECK(print_formula(g) == s);
    }
}

TEST_CASE("print-parse round trip on random substitutions") {
    gen::Gen G(12);
    for (int i = 0; i < 300; ++i) {
        Subst s = G.subst(4);
        CHECK(subst_eq(parse_subst(print_subst(s)), s));
    }
}
