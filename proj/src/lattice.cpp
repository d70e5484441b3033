#include "cq/lattice.hpp"

#include <algorithm>

#include "cq/error.hpp"
#include "cq/solve.hpp"

namespace cq {

namespace {

void require_eformula(const FormulaPtr& e) {
    if (!is_eformula(e))
        throw NotApplicable("an E-formula (a query without atoms) is required");
}

FormulaPtr conj_of(const std::vector<FormulaPtr>& leaves) {
    FormulaPtr r = leaves.back();
    for (std::size_t i = leaves.size() - 1; i-- > 0;) r = f_and(leaves[i], r);
    return r;
}

}  // namespace

Subst to_substitution(const FormulaPtr& e) {
    require_eformula(e);
    FormulaPtr s = canonical_form(e);
    if (s->k == FK::False) return s_bottom();
    if (s->k == FK::True) return s_empty();
    Solved d = decompose(s);
    Subst out;
    for (const auto& [x, t] : d.eqs) out.b[x] = t;
    for (const std::string& p : param_vars(s)) out.b[p] = mk_var(p);
    return out;
}

FormulaPtr to_eformula(const Subst& s) {
    if (s.bot) return f_false();
    if (s.b.empty()) return f_true();
    std::set<std::string> dm = dom(s);
    std::set<std::string> rng = range_vars(s);
    std::set<std::string> all = dm;
    all.insert(rng.begin(), rng.end());
    NameGen gen(all);
    std::map<std::string, TermPtr> ren;
    std::set<std::string> binders;
    for (const std::string& v : rng) {
        if (dm.count(v)) {
            std::string n = gen.fresh();
            ren[v] = mk_var(n);
            binders.insert(n);
        } else {
            binders.insert(v);
        }
    }
    std::vector<FormulaPtr> eqs;
    for (const auto& [x, t] : s.b) eqs.push_back(f_eq(mk_var(x), term_replace(t, ren)));
    FormulaPtr body = conj_of(eqs);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = f_exists(*it, body);
    return canonical_form(body);
}

FormulaPtr meet(const FormulaPtr& e1, const FormulaPtr& e2) {
    require_eformula(e1);
    require_eformula(e2);
    return canonical_form(f_and(e1, e2));
}

FormulaPtr join(const FormulaPtr& e1, const FormulaPtr& e2) {
    require_eformula(e1);
    require_eformula(e2);
    Subst s1 = to_substitution(e1);
    Subst s2 = to_substitution(e2);
    if (s1.bot) return canonical_form(e2);
    if (s2.bot) return canonical_form(e1);

    std::set<std::string> occupied;
    for (const Subst* s : {&s1, &s2}) {
        for (const std::string& v : dom(*s)) occupied.insert(v);
        for (const std::string& v : range_vars(*s)) occupied.insert(v);
    }
    NameGen gen(occupied);
    // Bound-derived range variables (range minus domain) of the two sides are
    // unrelated even when they share a name; separate them.
    for (Subst* s : {&s1, &s2}) {
        std::map<std::string, TermPtr> ren;
        for (const std::string& v : range_vars(*s))
            if (!s->b.count(v)) {
                std::string n = gen.fresh();
                occupied.insert(n);
                ren[v] = mk_var(n);
            }
        if (!ren.empty())
            for (auto& [x, t] : s->b) t = term_replace(t, ren);
    }

    std::set<std::string> d = dom(s1);
    for (const std::string& x : dom(s2)) d.insert(x);
    s1 = regular_extension(s1, d);
    s2 = regular_extension(s2, d);

    // Componentwise anti-unification with one shared table: the same pair of
    // disagreeing subterms always yields the same generalization variable.
    std::vector<std::pair<TermPair, TermPtr>> table;
    long next_g = 1;
    auto gvar = [&](const TermPtr& a, const TermPtr& b) {
        for (const auto& [p, v] : table)
            if (term_eq(p.first, a) && term_eq(p.second, b)) return v;
        std::string n;
        do {
            n = "G" + std::to_string(next_g++);
        } while (occupied.count(n));
        occupied.insert(n);
        TermPtr v = mk_var(n);
        table.emplace_back(TermPair{a, b}, v);
        return v;
    };
    auto au = [&](const TermPtr& a, const TermPtr& b, auto&& self) -> TermPtr {
        if (term_eq(a, b)) return a;
        if (!a->var && !b->var && a->name == b->name && a->args.size() == b->args.size()) {
            std::vector<TermPtr> as;
            as.reserve(a->args.size());
            for (std::size_t i = 0; i < a->args.size(); ++i)
                as.push_back(self(a->args[i], b->args[i], self));
            return mk_app(a->name, std::move(as));
        }
        return gvar(a, b);
    };

    std::vector<FormulaPtr> eqs;
    for (const std::string& v : d) {
        TermPtr g = au(s1.b.at(v), s2.b.at(v), au);
        if (!(g->var && g->name == v)) eqs.push_back(f_eq(mk_var(v), g));
    }
    if (eqs.empty()) return f_true();
    FormulaPtr body = conj_of(eqs);
    for (auto it = table.rbegin(); it != table.rend(); ++it)
        body = f_exists(it->second->name, body);
    return canonical_form(body);
}

FormulaPtr meet_all(const std::vector<FormulaPtr>& es) {
    if (es.empty()) throw EmptySet("meet of an empty family");
    for (const FormulaPtr& e : es) require_eformula(e);
    FormulaPtr acc = canonical_form(es[0]);
    for (std::size_t i = 1; i < es.size(); ++i) acc = meet(acc, es[i]);
    return acc;
}

FormulaPtr join_all(const std::vector<FormulaPtr>& es) {
    if (es.empty()) throw EmptySet("join of an empty family");
    for (const FormulaPtr& e : es) require_eformula(e);
    FormulaPtr acc = canonical_form(es[0]);
    for (std::size_t i = 1; i < es.size(); ++i) acc = join(acc, es[i]);
    return acc;
}

FormulaPtr project(const FormulaPtr& e, const std::set<std::string>& xs) {
    require_eformula(e);
    std::set<std::string> zs = free_vars(e);
    for (const std::string& x : xs) zs.erase(x);
    FormulaPtr out = e;
    for (auto it = zs.rbegin(); it != zs.rend(); ++it) out = f_exists(*it, out);
    return out;
}

std::set<std::string> kernel_e(const FormulaPtr& e) {
    require_eformula(e);
    FormulaPtr s = solve_form(e);
    if (s->k == FK::False) throw Inconsistent("inconsistent E-formula has no kernel");
    return free_vars(s);
}

}  // namespace cq
