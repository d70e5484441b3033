#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cq/error.hpp"
#include "cq/formula.hpp"
#include "cq/oracle.hpp"
#include "cq/solve.hpp"
#include "cq/text.hpp"
#include "gen.hpp"

using namespace cq;

namespace {

FormulaPtr Q(const std::string& s) { return parse_query(s); }

Valuation V(std::initializer_list<std::pair<std::string, std::string>> xs) {
    Valuation h;
    for (const auto& [k, v] : xs) h[k] = v;
    return h;
}

// The positional relation carrying every ground atom of a per-predicate
// interpretation: tuples [pred, arg1, ..., argk].
Rel atoms_of(const Interp& in) {
    Rel r;
    for (const auto& [p, rel] : in)
        for (const Tuple& t : rel) {
            Tuple a{p};
            a.insert(a.end(), t.begin(), t.end());
            r.insert(a);
        }
    return r;
}

}  // namespace

TEST_CASE("solutions under positional relations") {
    std::vector<std::string> u = {"a", "b"};
    // no atoms: equations alone decide
    CHECK(solutions(Q("true"), {}, u) == std::set<Valuation>{V({})});
    CHECK(solutions(Q("false"), {}, u).empty());
    CHECK(solutions(Q("X = a"), {}, u) == std::set<Valuation>{V({{"X", "a"}})});
    CHECK(solutions(Q("X = Y"), {}, u) ==
          std::set<Valuation>{V({{"X", "a"}, {"Y", "a"}}), V({{"X", "b"}, {"Y", "b"}})});
    // each atom position has its own relation
    CHECK(solutions(Q("p(X) & p(X)"), {Rel{{"p", "a"}}, Rel{{"p", "b"}}}, u).empty());
    CHECK(solutions(Q("p(X) & p(X)"), {Rel{{"p", "a"}}, Rel{{"p", "a"}, {"p", "b"}}}, u) ==
          std::set<Valuation>{V({{"X", "a"}})});
    CHECK(solutions(Q("q(X, Y)"), {Rel{{"q", "a", "b"}}}, u) ==
          std::set<Valuation>{V({{"X", "a"}, {"Y", "b"}})});
    // bound variables range over the universe
    CHECK(solutions(Q("exists Y . q(X, Y)"), {Rel{{"q", "a", "b"}}}, u) ==
          std::set<Valuation>{V({{"X", "a"}})});
    // one relation per atom is enforced
    CHECK_THROWS_AS(solutions(Q("p(X)"), {}, u), ArityMismatch);
    CHECK_THROWS_AS(solutions(Q("true"), {Rel{}}, u), ArityMismatch);
}

TEST_CASE("classical evaluation") {
    std::vector<std::string> u = {"a", "b"};
    Interp empty;
    CHECK(eval_formula(parse_formula("a = a"), empty, {}, u));
    CHECK(!eval_formula(parse_formula("a = b"), empty, {}, u));
    CHECK(eval_formula(parse_formula("X = a"), empty, V({{"X", "a"}}), u));
    CHECK(!eval_formula(parse_formula("forall X . X = a"), empty, {}, u));
    CHECK(eval_formula(parse_formula("forall X . X = a"), empty, {}, {"a"}));
    CHECK(eval_formula(parse_formula("exists X . exists Y . not X = Y"), empty, {}, u));
    Interp in{{"p", {{"a"}}}};
    CHECK(eval_formula(parse_formula("p(a)"), in, {}, u));
    CHECK(!eval_formula(parse_formula("p(b)"), in, {}, u));
    CHECK(!eval_formula(parse_formula("p(a)"), empty, {}, u));
    CHECK(eval_formula(parse_formula("p(a) -> p(b)"), empty, {}, u));
    CHECK(eval_formula(parse_formula("exists X . p(X) & not p(b)"), in, {}, u));
    // terms outside the universe simply fail atom membership
    CHECK(!eval_formula(parse_formula("p(f(a))"), in, {}, u));
    CHECK(eval_formula(parse_formula("f(a) = f(a)"), empty, {}, u));
}

TEST_CASE("ground instances of substitutions") {
    std::vector<std::string> u = {"a", "b"};
    CHECK(instances(parse_subst("{X -> a}"), u, {"X"}) == std::set<Valuation>{V({{"X", "a"}})});
    CHECK(instances(parse_subst("{X -> Y, Z -> Y}"), u, {"X", "Z"}) ==
          std::set<Valuation>{V({{"X", "a"}, {"Z", "a"}}), V({{"X", "b"}, {"Z", "b"}})});
    // variables outside the domain are unconstrained
    CHECK(instances(s_empty(), u, {"X"}) ==
          std::set<Valuation>{V({{"X", "a"}}), V({{"X", "b"}})});
    CHECK(instances(s_bottom(), u, {"X"}).empty());
    // non-constant values never ground to the universe
    CHECK(instances(parse_subst("{X -> f(Y)}"), u, {"X"}).empty());
}

TEST_CASE("solutions agree with classical evaluation on constant relation vectors") {
    gen::Gen G(61, true);
    std::vector<std::string> u = {"a", "b"};
    for (int round = 0; round < 120; ++round) {
        FormulaPtr q = G.query(1 + G.pick(10));
        Interp in;
        for (const auto& [p, n] : G.preds)
            for (int t = 0; t < 3; ++t) {
                Tuple tup;
                for (int i = 0; i < n; ++i) tup.push_back(u[G.pick(2)]);
                if (G.coin()) in[p].insert(tup);
            }
        std::vector<Rel> rels(card(q), atoms_of(in));
        std::set<Valuation> sol = solutions(q, rels, u);
        std::set<std::string> fvset = free_vars(q);
        std::vector<std::string> fv(fvset.begin(), fvset.end());
        std::set<Valuation> want;
        std::vector<std::size_t> idx(fv.size(), 0);
        for (;;) {
            Valuation h;
            for (std::size_t i = 0; i < fv.size(); ++i) h[fv[i]] = u[idx[i]];
            if (eval_formula(q, in, h, u)) want.insert(h);
            std::size_t i = 0;
            for (; i < fv.size(); ++i) {
                if (++idx[i] < u.size()) break;
                idx[i] = 0;
            }
            if (i == fv.size()) break;
        }
        CHECK(sol == want);
    }
}

TEST_CASE("equivalence oracle: constant-only verdicts are exact") {
    OracleReport r = check_equiv(Q("exists Z . X = Z & Y = Z"), Q("X = Y"));
    CHECK(r.verdict == Verdict::Confirmed);
    r = check_equiv(Q("X = a"), Q("X = b"));
    CHECK(r.verdict == Verdict::Refuted);
    CHECK(!r.witness.empty());
    r = check_equiv(Q("p(X) & q(X, X)"), Q("q(X, X) & p(X)"));
    CHECK(r.verdict == Verdict::Refuted);  // positions differ
    r = check_equiv(Q("p(X)"), Q("p(X) & p(X)"));
    CHECK(r.verdict == Verdict::Refuted);  // cardinality differs
    r = check_equiv(Q("X = a & p(X)"), Q("X = a & p(a)"));
    CHECK(r.verdict == Verdict::Confirmed);

    gen::Gen G(62, true);
    for (int round = 0; round < 80; ++round) {
        FormulaPtr q1 = G.query(1 + G.pick(8));
        FormulaPtr q2 = G.query(1 + G.pick(8));
        OracleReport rep = check_equiv(q1, q2);
        REQUIRE(rep.verdict != Verdict::Inconclusive);
        CHECK((rep.verdict == Verdict::Confirmed) == equivalent(q1, q2));
    }
}

TEST_CASE("equivalence oracle: function-symbol refutation") {
    OracleReport r = check_equiv(Q("X = f(a)"), Q("exists V . X = f(V)"));
    CHECK(r.verdict == Verdict::Refuted);
    CHECK(r.witness == "{X -> f(c)}");
    r = check_equiv(Q("exists U . X = f(U, U)"), Q("exists V1 . exists V2 . X = f(V1, V2)"));
    CHECK(r.verdict == Verdict::Refuted);
    // confirmation is not available with proper function symbols
    r = check_equiv(Q("X = f(Y)"), Q("X = f(Y)"));
    CHECK(r.verdict == Verdict::Inconclusive);
    r = check_equiv(Q("X = f(X)"), Q("a = b"));
    CHECK(r.verdict == Verdict::Confirmed);  // both inconsistent: FALSE vs FALSE

    // never refute genuinely equivalent pairs
    gen::Gen G(63);
    OracleOptions fast;
    fast.depth = 2;
    fast.max_valuations = 20'000;
    for (int round = 0; round < 100; ++round) {
        FormulaPtr s = solve_form(G.query(1 + G.pick(12)));
        FormulaPtr iso = G.iso_transform(s);
        CHECK(check_equiv(s, iso, fast).verdict != Verdict::Refuted);
    }
}

TEST_CASE("a single generating constant hides the pair-merge distinction at low depth") {
    // ground terms over {a, f/2} up to each depth
    FormulaPtr e1 = Q("exists U . X = f(U, U)");
    FormulaPtr e2 = Q("exists V1 . exists V2 . X = f(V1, V2)");
    std::vector<std::string> layer = {"a"};
    std::vector<std::string> all = layer;
    for (int depth = 2; depth <= 3; ++depth) {
        std::vector<std::string> next;
        for (const std::string& s : all)
            for (const std::string& t : all) next.push_back("f(" + s + "," + t + ")");
        all.insert(all.end(), next.begin(), next.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());

        auto members = [&](const FormulaPtr& e) {
            std::set<std::string> got;
            for (const std::string& t : all)
                if (eval_formula(e, {}, V({{"X", t}}), all)) got.insert(t);
            return got;
        };
        if (depth <= 2)
            CHECK(members(e1) == members(e2));  // indistinguishable this shallow
        else
            CHECK(members(e1) != members(e2));  // f(a,f(a,a)) separates them
    }
}

TEST_CASE("membership in a solved form over the term universe") {
    FormulaPtr e = Q("X = f(Y)");
    CHECK(solved_member(e, {{"X", parse_term("f(a)")}, {"Y", parse_term("a")}}));
    CHECK(!solved_member(e, {{"X", parse_term("a")}, {"Y", parse_term("a")}}));
    CHECK(!solved_member(e, {{"X", parse_term("f(a)")}, {"Y", parse_term("b")}}));
    FormulaPtr ex = Q("exists Z . X = f(Z)");
    CHECK(solved_member(ex, {{"X", parse_term("f(g(a,b))")}}));
    CHECK(!solved_member(ex, {{"X", parse_term("a")}}));
    CHECK(solved_member(f_true(), {}));
    CHECK(!solved_member(f_false(), {}));
    CHECK_THROWS_AS(solved_member(e, {{"X", parse_term("f(a)")}}), NotApplicable);
    CHECK_THROWS_AS(solved_member(Q("p(X)"), {{"X", parse_term("a")}}), NotApplicable);
}

TEST_CASE("canonical valuations") {
    std::map<std::string, TermPtr> h = canonical_valuation(Q("X = f(Y)"), {});
    CHECK(print_term(h.at("Y")) == "c");
    CHECK(print_term(h.at("X")) == "f(c)");
    h = canonical_valuation(Q("X = Y"), {"c"});
    CHECK(print_term(h.at("Y")) == "d");
    h = canonical_valuation(Q("exists Z . X = f(Z)"), {});
    CHECK(print_term(h.at("X")) == "f(c)");
    CHECK(canonical_valuation(f_true(), {}).empty());
    CHECK_THROWS_AS(canonical_valuation(f_false(), {}), Inconsistent);
    // the valuation always satisfies its own form
    gen::Gen G(64);
    for (int round = 0; round < 100; ++round) {
        FormulaPtr e = G.consistent_eformula(1 + G.pick(10));
        FormulaPtr s = canonical_form(e);
        std::map<std::string, TermPtr> cv = canonical_valuation(s, {});
        std::map<std::string, TermPtr> free_part;
        for (const std::string& v : free_vars(s)) free_part[v] = cv.at(v);
        CHECK(solved_member(s, free_part));
    }
}

TEST_CASE("generalization enumeration") {
    auto texts = [](const std::vector<FormulaPtr>& fs) {
        std::set<std::string> out;
        for (const FormulaPtr& f : fs) out.insert(print_formula(f));
        return out;
    };
    CHECK(texts(enumerate_generalizations(Q("X = f(a)"))) ==
          std::set<std::string>{"X = f(a)", "exists B1 . X = f(B1)", "true"});
    CHECK(texts(enumerate_generalizations(Q("exists U . X = f(U, U)"))) ==
          std::set<std::string>{"exists B1 . X = f(B1,B1)",
                                "exists B1 . exists B2 . X = f(B1,B2)", "true"});
    // merging cut positions across components yields the shared-variable form
    CHECK(texts(enumerate_generalizations(Q("X = a & Y = a"))) ==
          std::set<std::string>{"X = a & Y = a", "X = a", "Y = a", "X = Y", "true"});
    CHECK(texts(enumerate_generalizations(f_true())) == std::set<std::string>{"true"});
    CHECK_THROWS_AS(enumerate_generalizations(Q("X = f(X)")), Inconsistent);
    CHECK_THROWS_AS(enumerate_generalizations(Q("false")), Inconsistent);
    CHECK_THROWS_AS(enumerate_generalizations(Q("X = f(a)"), 1), BudgetExceeded);

    gen::Gen G(65);
    for (int round = 0; round < 40; ++round) {
        FormulaPtr e = G.consistent_eformula(1 + G.pick(7));
        std::vector<FormulaPtr> gens = enumerate_generalizations(e, 200'000);
        for (const FormulaPtr& g : gens) {
            CHECK(is_solved_form(g));
            CHECK(more_general(e, g));
        }
        // pairwise inequivalent and closed under the original and TRUE
        bool has_self = false, has_true = false;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (equivalent(gens[i], e)) has_self = true;
            if (gens[i]->k == FK::True) has_true = true;
            for (std::size_t j = i + 1; j < gens.size(); ++j)
                CHECK(!equivalent(gens[i], gens[j]));
        }
        CHECK(has_self);
        CHECK(has_true);
    }
}
