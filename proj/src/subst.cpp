#include "cq/subst.hpp"

#include <algorithm>

#include "cq/error.hpp"
#include "cq/text.hpp"

namespace cq {

Subst s_of(std::initializer_list<std::pair<std::string, TermPtr>> bs) {
    Subst s;
    for (const auto& [x, t] : bs) s.b[x] = t;
    return s;
}

bool subst_eq(const Subst& s, const Subst& t) {
    if (s.bot != t.bot) return false;
    if (s.bot) return true;
    if (s.b.size() != t.b.size()) return false;
    auto i = s.b.begin(), j = t.b.begin();
    for (; i != s.b.end(); ++i, ++j)
        if (i->first != j->first || !term_eq(i->second, j->second)) return false;
    return true;
}

std::set<std::string> dom(const Subst& s) {
    if (s.bot) throw NotApplicable("bottom substitution has no domain");
    std::set<std::string> out;
    for (const auto& [x, t] : s.b) out.insert(x);
    return out;
}

std::set<std::string> range_vars(const Subst& s) {
    if (s.bot) throw NotApplicable("bottom substitution has no range");
    std::set<std::string> out;
    for (const auto& [x, t] : s.b) collect_vars(t, out);
    return out;
}

TermPtr apply_to_term(const Subst& s, const TermPtr& t) {
    if (s.bot) throw NotApplicable("bottom substitution cannot be applied");
    std::set<std::string> missing;
    for (const std::string& v : term_vars(t))
        if (!s.b.count(v)) missing.insert(v);
    if (!missing.empty())
        throw NotApplicable("term variables " + print_varset(missing) +
                            " are outside the substitution domain");
    return term_replace(t, s.b);
}

Subst compose(const Subst& s, const Subst& t) {
    if (s.bot || t.bot) return s_bottom();
    for (const std::string& v : range_vars(s))
        if (!t.b.count(v))
            throw NotApplicable("range variable " + v +
                                " is outside the second substitution's domain");
    Subst r;
    for (const auto& [x, u] : s.b) r.b[x] = term_replace(u, t.b);
    return r;
}

Subst restrict_to(const Subst& s, const std::set<std::string>& xs) {
    if (s.bot) return s_bottom();
    Subst r;
    for (const auto& [x, t] : s.b)
        if (xs.count(x)) r.b[x] = t;
    return r;
}

Subst subst_union(const Subst& s, const Subst& t) {
    if (s.bot || t.bot) return s_bottom();
    Subst r = s;
    for (const auto& [x, u] : t.b) {
        if (r.b.count(x)) throw DomainOverlap("domains overlap at " + x);
        r.b[x] = u;
    }
    return r;
}

Subst regular_extension(const Subst& s, const std::set<std::string>& xs) {
    if (s.bot) throw NotApplicable("bottom substitution has no regular extension");
    Subst r = s;
    std::set<std::string> rng = range_vars(s);
    std::set<std::string> pool = rng;
    for (const auto& [x, t] : s.b) pool.insert(x);
    pool.insert(xs.begin(), xs.end());
    NameGen gen(pool);
    for (const std::string& x : xs) {
        if (r.b.count(x)) continue;
        std::string pick;
        if (!rng.count(x)) {
            pick = x;
        } else {
            for (const std::string& c : pool)
                if (!rng.count(c)) {
                    pick = c;
                    break;
                }
            if (pick.empty()) pick = gen.fresh();
        }
        r.b[x] = mk_var(pick);
        rng.insert(pick);
    }
    return r;
}

bool is_permutation(const Subst& s) {
    if (s.bot) return false;
    std::set<std::string> vals;
    for (const auto& [x, t] : s.b) {
        if (!t->var) return false;
        if (!vals.insert(t->name).second) return false;
    }
    return true;
}

std::set<std::string> kernel(const Subst& s) {
    if (s.bot) throw NotApplicable("bottom substitution has no kernel");
    std::set<std::string> out;
    for (const auto& [x, t] : s.b) {
        if (!t->var) {
            out.insert(x);
            continue;
        }
        for (const auto& [y, u] : s.b)
            if (y != x && occurs_in(t->name, u)) {
                out.insert(x);
                break;
            }
    }
    return out;
}

bool more_general_subst(const Subst& s, const Subst& t) {
    if (s.bot) return true;
    if (t.bot) return false;
    std::set<std::string> d = dom(s);
    for (const std::string& x : dom(t)) d.insert(x);
    Subst se = regular_extension(s, d);
    Subst te = regular_extension(t, d);
    std::map<std::string, TermPtr> mapping;
    for (const std::string& x : d) {
        for (const TermPair& p : diff_set(se.b.at(x), te.b.at(x))) {
            if (!p.second->var) return false;
            auto [it, inserted] = mapping.emplace(p.second->name, p.first);
            if (!inserted && !term_eq(it->second, p.first)) return false;
        }
    }
    return true;
}

bool equivalent_subst(const Subst& s, const Subst& t) {
    return more_general_subst(s, t) && more_general_subst(t, s);
}

namespace {

FormulaPtr app_rec(const Subst& s, const FormulaPtr& f) {
    switch (f->k) {
        case FK::True:
        case FK::False:
            return f;
        case FK::Eq:
            return f_eq(apply_to_term(s, f->l), apply_to_term(s, f->r));
        case FK::Atom: {
            std::vector<TermPtr> as;
            as.reserve(f->args.size());
            for (const TermPtr& t : f->args) as.push_back(apply_to_term(s, t));
            return f_atom(f->pred, std::move(as));
        }
        case FK::Not:
            return f_not(app_rec(s, f->a));
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff: {
            FormulaPtr na = app_rec(restrict_to(s, free_vars(f->a)), f->a);
            FormulaPtr nb = app_rec(restrict_to(s, free_vars(f->b)), f->b);
            switch (f->k) {
                case FK::And:
                    return f_and(na, nb);
                case FK::Or:
                    return f_or(na, nb);
                case FK::Imp:
                    return f_imp(na, nb);
                default:
                    return f_iff(na, nb);
            }
        }
        case FK::Exists:
        case FK::Forall: {
            const std::string& x = f->v;
            std::set<std::string> rng = range_vars(s);
            std::string nx = x;
            FormulaPtr body = f->a;
            if (rng.count(x)) {
                // The binder collides with an introduced variable: rename it
                // to the first context name (then fresh name) that keeps the
                // quantified formula a variant of the original.
                std::set<std::string> ctx = rng;
                for (const auto& [v, t] : s.b) ctx.insert(v);
                collect_all_var_names(f->a, ctx);
                ctx.insert(x);
                NameGen gen(ctx);
                std::vector<std::string> cands(ctx.begin(), ctx.end());
                bool done = false;
                for (std::size_t i = 0; !done; ++i) {
                    std::string y = i < cands.size() ? cands[i] : gen.fresh();
                    if (rng.count(y)) continue;
                    FormulaPtr nb;
                    try {
                        nb = replace(f->a, {x}, {mk_var(y)});
                    } catch (const NotSubstitutible&) {
                        continue;
                    }
                    FormulaPtr renamed =
                        f->k == FK::Exists ? f_exists(y, nb) : f_forall(y, nb);
                    if (!is_variant(renamed, f)) continue;
                    nx = y;
                    body = nb;
                    done = true;
                }
            }
            Subst inner = s;
            if (free_vars(body).count(nx)) inner.b[nx] = mk_var(nx);
            FormulaPtr nb = app_rec(inner, body);
            return f->k == FK::Exists ? f_exists(nx, nb) : f_forall(nx, nb);
        }
    }
    return f;
}

}  // namespace

FormulaPtr apply_to_formula(const Subst& s, const FormulaPtr& f) {
    if (s.bot) throw NotApplicable("bottom substitution cannot be applied");
    std::set<std::string> free = free_vars(f);
    Subst top = regular_extension(restrict_to(s, free), free);
    return app_rec(top, f);
}

}  // namespace cq
