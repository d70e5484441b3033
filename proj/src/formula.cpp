#include "cq/formula.hpp"

#include <optional>

#include "cq/error.hpp"

namespace cq {

namespace {

std::shared_ptr<Formula> mut(FK k) {
    auto f = std::make_shared<Formula>();
    f->k = k;
    return f;
}

}  // namespace

FormulaPtr f_true() {
    static const FormulaPtr t = mut(FK::True);
    return t;
}

FormulaPtr f_false() {
    static const FormulaPtr f = mut(FK::False);
    return f;
}

FormulaPtr f_eq(TermPtr l, TermPtr r) {
    auto f = mut(FK::Eq);
    f->l = std::move(l);
    f->r = std::move(r);
    return f;
}

FormulaPtr f_atom(std::string pred, std::vector<TermPtr> args) {
    auto f = mut(FK::Atom);
    f->pred = std::move(pred);
    f->args = std::move(args);
    return f;
}

FormulaPtr f_not(FormulaPtr a) {
    auto f = mut(FK::Not);
    f->a = std::move(a);
    return f;
}

static FormulaPtr binary(FK k, FormulaPtr a, FormulaPtr b) {
    auto f = mut(k);
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary(FK::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary(FK::Or, std::move(a), std::move(b)); }
FormulaPtr f_imp(FormulaPtr a, FormulaPtr b) { return binary(FK::Imp, std::move(a), std::move(b)); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return binary(FK::Iff, std::move(a), std::move(b)); }

FormulaPtr f_exists(std::string v, FormulaPtr a) {
    auto f = mut(FK::Exists);
    f->v = std::move(v);
    f->a = std::move(a);
    return f;
}

FormulaPtr f_forall(std::string v, FormulaPtr a) {
    auto f = mut(FK::Forall);
    f->v = std::move(v);
    f->a = std::move(a);
    return f;
}

bool feq(const FormulaPtr& f, const FormulaPtr& g) {
    if (f.get() == g.get()) return true;
    if (f->k != g->k) return false;
    switch (f->k) {
        case FK::True:
        case FK::False:
            return true;
        case FK::Eq:
            return term_eq(f->l, g->l) && term_eq(f->r, g->r);
        case FK::Atom: {
            if (f->pred != g->pred || f->args.size() != g->args.size()) return false;
            for (std::size_t i = 0; i < f->args.size(); ++i)
                if (!term_eq(f->args[i], g->args[i])) return false;
            return true;
        }
        case FK::Not:
            return feq(f->a, g->a);
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            return feq(f->a, g->a) && feq(f->b, g->b);
        case FK::Exists:
        case FK::Forall:
            return f->v == g->v && feq(f->a, g->a);
    }
    return false;
}

namespace {

void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f->k) {
        case FK::True:
        case FK::False:
            return;
        case FK::Eq: {
            std::set<std::string> vs;
            collect_vars(f->l, vs);
            collect_vars(f->r, vs);
            for (const auto& v : vs)
                if (!bound.count(v)) out.insert(v);
            return;
        }
        case FK::Atom: {
            std::set<std::string> vs;
            for (const auto& a : f->args) collect_vars(a, vs);
            for (const auto& v : vs)
                if (!bound.count(v)) out.insert(v);
            return;
        }
        case FK::Not:
            free_vars_rec(f->a, bound, out);
            return;
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            free_vars_rec(f->a, bound, out);
            free_vars_rec(f->b, bound, out);
            return;
        case FK::Exists:
        case FK::Forall: {
            bool fresh = bound.insert(f->v).second;
            free_vars_rec(f->a, bound, out);
            if (fresh) bound.erase(f->v);
            return;
        }
    }
}

}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    free_vars_rec(f, bound, out);
    return out;
}

void collect_all_var_names(const FormulaPtr& f, std::set<std::string>& out) {
    switch (f->k) {
        case FK::True:
        case FK::False:
            return;
        case FK::Eq:
            collect_vars(f->l, out);
            collect_vars(f->r, out);
            return;
        case FK::Atom:
            for (const auto& a : f->args) collect_vars(a, out);
            return;
        case FK::Not:
            collect_all_var_names(f->a, out);
            return;
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            collect_all_var_names(f->a, out);
            collect_all_var_names(f->b, out);
            return;
        case FK::Exists:
        case FK::Forall:
            out.insert(f->v);
            collect_all_var_names(f->a, out);
            return;
    }
}

std::set<std::string> all_var_names(const FormulaPtr& f) {
    std::set<std::string> out;
    collect_all_var_names(f, out);
    return out;
}

int card(const FormulaPtr& f) {
    switch (f->k) {
        case FK::Atom:
            return 1;
        case FK::Not:
            return card(f->a);
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            return card(f->a) + card(f->b);
        case FK::Exists:
        case FK::Forall:
            return card(f->a);
        default:
            return 0;
    }
}

bool is_query(const FormulaPtr& f) {
    switch (f->k) {
        case FK::True:
        case FK::False:
        case FK::Eq:
        case FK::Atom:
            return true;
        case FK::And:
            return is_query(f->a) && is_query(f->b);
        case FK::Exists:
            return is_query(f->a);
        default:
            return false;
    }
}

bool is_eformula(const FormulaPtr& f) { return is_query(f) && card(f) == 0; }

int formula_size(const FormulaPtr& f) {
    switch (f->k) {
        case FK::True:
        case FK::False:
            return 1;
        case FK::Eq:
            return 1 + term_size(f->l) + term_size(f->r);
        case FK::Atom: {
            int n = 1;
            for (const auto& a : f->args) n += term_size(a);
            return n;
        }
        case FK::Not:
            return 1 + formula_size(f->a);
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            return 1 + formula_size(f->a) + formula_size(f->b);
        case FK::Exists:
        case FK::Forall:
            return 1 + formula_size(f->a);
    }
    return 1;
}

namespace {

void conjuncts_of(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->k == FK::And) {
        conjuncts_of(f->a, out);
        conjuncts_of(f->b, out);
    } else {
        out.push_back(f);
    }
}

}  // namespace

FormulaPtr right_assoc(const FormulaPtr& f) {
    switch (f->k) {
        case FK::True:
        case FK::False:
        case FK::Eq:
        case FK::Atom:
            return f;
        case FK::Not: {
            auto a = right_assoc(f->a);
            return a.get() == f->a.get() ? f : f_not(a);
        }
        case FK::Or:
        case FK::Imp:
        case FK::Iff: {
            auto a = right_assoc(f->a);
            auto b = right_assoc(f->b);
            if (a.get() == f->a.get() && b.get() == f->b.get()) return f;
            auto g = std::make_shared<Formula>(*f);
            g->a = a;
            g->b = b;
            return g;
        }
        case FK::And: {
            std::vector<FormulaPtr> cs;
            conjuncts_of(f, cs);
            FormulaPtr acc = right_assoc(cs.back());
            for (std::size_t i = cs.size() - 1; i-- > 0;) acc = f_and(right_assoc(cs[i]), acc);
            return acc;
        }
        case FK::Exists:
        case FK::Forall: {
            auto a = right_assoc(f->a);
            if (a.get() == f->a.get()) return f;
            return f->k == FK::Exists ? f_exists(f->v, a) : f_forall(f->v, a);
        }
    }
    return f;
}

namespace {

// pretty-printing for error messages only; real printing lives in text.cpp
std::string term_text(const TermPtr& t) {
    if (t->var || t->args.empty()) return t->name;
    std::string s = t->name + "(";
    for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) s += ",";
        s += term_text(t->args[i]);
    }
    return s + ")";
}

FormulaPtr replace_rec(const FormulaPtr& f, const std::map<std::string, TermPtr>& m) {
    if (m.empty()) return f;
    switch (f->k) {
        case FK::True:
        case FK::False:
            return f;
        case FK::Eq:
            return f_eq(term_replace(f->l, m), term_replace(f->r, m));
        case FK::Atom: {
            std::vector<TermPtr> args;
            args.reserve(f->args.size());
            for (const auto& a : f->args) args.push_back(term_replace(a, m));
            return f_atom(f->pred, std::move(args));
        }
        case FK::Not:
            return f_not(replace_rec(f->a, m));
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff: {
            auto g = std::make_shared<Formula>(*f);
            g->a = replace_rec(f->a, m);
            g->b = replace_rec(f->b, m);
            return g;
        }
        case FK::Exists:
        case FK::Forall: {
            auto inner = m;
            inner.erase(f->v);
            if (inner.empty()) return f;
            auto fv = free_vars(f->a);
            for (const auto& [x, s] : inner) {
                if (!fv.count(x)) continue;
                if (occurs_in(f->v, s)) throw NotSubstitutible(x, term_text(s));
            }
            auto a = replace_rec(f->a, inner);
            return f->k == FK::Exists ? f_exists(f->v, a) : f_forall(f->v, a);
        }
    }
    return f;
}

}  // namespace

FormulaPtr replace(const FormulaPtr& f, const std::vector<std::string>& xs,
                   const std::vector<TermPtr>& ss) {
    if (xs.size() != ss.size()) throw Error("usage", "replace: variable/term count mismatch");
    std::map<std::string, TermPtr> m;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!m.emplace(xs[i], ss[i]).second)
            throw Error("usage", "replace: duplicate variable " + xs[i]);
    }
    return replace_rec(f, m);
}

namespace {

bool variant_term(const TermPtr& s, const TermPtr& t, const std::map<std::string, int>& bl,
                  const std::map<std::string, int>& br) {
    if (s->var != t->var) return false;
    if (s->var) {
        auto i = bl.find(s->name);
        auto j = br.find(t->name);
        if ((i == bl.end()) != (j == br.end())) return false;
        if (i != bl.end()) return i->second == j->second;
        return s->name == t->name;
    }
    if (s->name != t->name || s->args.size() != t->args.size()) return false;
    for (std::size_t i = 0; i < s->args.size(); ++i)
        if (!variant_term(s->args[i], t->args[i], bl, br)) return false;
    return true;
}

bool variant_rec(const FormulaPtr& f, const FormulaPtr& g, std::map<std::string, int>& bl,
                 std::map<std::string, int>& br, int depth) {
    if (f->k != g->k) return false;
    switch (f->k) {
        case FK::True:
        case FK::False:
            return true;
        case FK::Eq:
            return variant_term(f->l, g->l, bl, br) && variant_term(f->r, g->r, bl, br);
        case FK::Atom: {
            if (f->pred != g->pred || f->args.size() != g->args.size()) return false;
            for (std::size_t i = 0; i < f->args.size(); ++i)
                if (!variant_term(f->args[i], g->args[i], bl, br)) return false;
            return true;
        }
        case FK::Not:
            return variant_rec(f->a, g->a, bl, br, depth);
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            return variant_rec(f->a, g->a, bl, br, depth) &&
                   variant_rec(f->b, g->b, bl, br, depth);
        case FK::Exists:
        case FK::Forall: {
            auto saved_l = bl.find(f->v) != bl.end() ? std::optional<int>(bl[f->v]) : std::nullopt;
            auto saved_r = br.find(g->v) != br.end() ? std::optional<int>(br[g->v]) : std::nullopt;
            bl[f->v] = depth;
            br[g->v] = depth;
            bool ok = variant_rec(f->a, g->a, bl, br, depth + 1);
            if (saved_l) bl[f->v] = *saved_l; else bl.erase(f->v);
            if (saved_r) br[g->v] = *saved_r; else br.erase(g->v);
            return ok;
        }
    }
    return false;
}

}  // namespace

bool is_variant(const FormulaPtr& f, const FormulaPtr& g) {
    std::map<std::string, int> bl, br;
    return variant_rec(f, g, bl, br, 0);
}

std::string NameGen::fresh() {
    for (;;) {
        std::string cand = next_ < 0 ? std::string("U") : "V" + std::to_string(next_);
        ++next_;
        if (used_.insert(cand).second) return cand;
    }
}

}  // namespace cq
