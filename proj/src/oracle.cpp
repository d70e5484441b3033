#include "cq/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <optional>

#include "cq/error.hpp"
#include "cq/solve.hpp"
#include "cq/text.hpp"

namespace cq {

namespace {

// --- ground evaluation -------------------------------------------------------

std::map<std::string, TermPtr> as_const_map(const Valuation& h) {
    std::map<std::string, TermPtr> m;
    for (const auto& [x, c] : h) m[x] = mk_app(c);
    return m;
}

// --- fresh constant stream: c, d, e, c1, d1, e1, c2, ... ---------------------

class ConstGen {
public:
    explicit ConstGen(std::set<std::string> used) : used_(std::move(used)) {}
    std::string fresh() {
        static const char* base[] = {"c", "d", "e"};
        for (;; ++i_) {
            std::string n = base[i_ % 3];
            if (i_ >= 3) n += std::to_string(i_ / 3);
            if (!used_.count(n)) {
                used_.insert(n);
                ++i_;
                return n;
            }
        }
    }

private:
    std::set<std::string> used_;
    int i_ = 0;
};

void collect_syms_term(const TermPtr& t, std::set<std::string>& consts,
                       std::set<std::string>& funcs) {
    if (t->var) return;
    if (t->args.empty()) {
        consts.insert(t->name);
        return;
    }
    funcs.insert(t->name);
    for (const TermPtr& a : t->args) collect_syms_term(a, consts, funcs);
}

void collect_syms(const FormulaPtr& f, std::set<std::string>& consts,
                  std::set<std::string>& funcs, std::set<std::string>& preds) {
    switch (f->k) {
        case FK::Eq:
            collect_syms_term(f->l, consts, funcs);
            collect_syms_term(f->r, consts, funcs);
            return;
        case FK::Atom:
            preds.insert(f->pred);
            for (const TermPtr& t : f->args) collect_syms_term(t, consts, funcs);
            return;
        case FK::Not:
        case FK::Exists:
        case FK::Forall:
            collect_syms(f->a, consts, funcs, preds);
            return;
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            collect_syms(f->a, consts, funcs, preds);
            collect_syms(f->b, consts, funcs, preds);
            return;
        default:
            return;
    }
}

// --- multiinterpretation satisfaction ----------------------------------------

std::string ground_text(const TermPtr& t, const std::map<std::string, TermPtr>& env) {
    return print_term(term_replace(t, env));
}

bool sat(const FormulaPtr& q, const std::vector<Rel>& interps,
         std::map<std::string, TermPtr>& env, const std::vector<std::string>& u, int base) {
    switch (q->k) {
        case FK::True:
            return true;
        case FK::False:
            return false;
        case FK::Eq:
            return ground_text(q->l, env) == ground_text(q->r, env);
        case FK::Atom: {
            Tuple t;
            t.reserve(q->args.size() + 1);
            t.push_back(q->pred);
            for (const TermPtr& a : q->args) t.push_back(ground_text(a, env));
            return interps[base].count(t) != 0;
        }
        case FK::And:
            return sat(q->a, interps, env, u, base) &&
                   sat(q->b, interps, env, u, base + card(q->a));
        case FK::Exists: {
            auto it = env.find(q->v);
            std::optional<TermPtr> old;
            if (it != env.end()) old = it->second;
            bool ok = false;
            for (const std::string& d : u) {
                env[q->v] = mk_app(d);
                if (sat(q->a, interps, env, u, base)) {
                    ok = true;
                    break;
                }
            }
            if (old)
                env[q->v] = *old;
            else
                env.erase(q->v);
            return ok;
        }
        default:
            throw NotApplicable("multiinterpretation solutions require a query");
    }
}

}  // namespace

std::set<Valuation> solutions(const FormulaPtr& q, const std::vector<Rel>& interps,
                              const std::vector<std::string>& universe) {
    if (!is_query(q)) throw NotApplicable("multiinterpretation solutions require a query");
    if (static_cast<int>(interps.size()) != card(q))
        throw ArityMismatch("need exactly " + std::to_string(card(q)) +
                            " relations, got " + std::to_string(interps.size()));
    std::set<std::string> fvset = free_vars(q);
    std::vector<std::string> fv(fvset.begin(), fvset.end());
    std::set<Valuation> out;
    if (universe.empty()) return out;
    std::vector<std::size_t> idx(fv.size(), 0);
    for (;;) {
        std::map<std::string, TermPtr> env;
        Valuation h;
        for (std::size_t i = 0; i < fv.size(); ++i) {
            env[fv[i]] = mk_app(universe[idx[i]]);
            h[fv[i]] = universe[idx[i]];
        }
        if (sat(q, interps, env, universe, 0)) out.insert(h);
        std::size_t i = 0;
        for (; i < fv.size(); ++i) {
            if (++idx[i] < universe.size()) break;
            idx[i] = 0;
        }
        if (i == fv.size()) break;
    }
    return out;
}

bool eval_formula(const FormulaPtr& f, const Interp& interp, const Valuation& h,
                  const std::vector<std::string>& universe) {
    std::map<std::string, TermPtr> env = as_const_map(h);
    auto rec = [&](const FormulaPtr& g, auto&& self) -> bool {
        switch (g->k) {
            case FK::True:
                return true;
            case FK::False:
                return false;
            case FK::Eq:
                return ground_text(g->l, env) == ground_text(g->r, env);
            case FK::Atom: {
                auto it = interp.find(g->pred);
                if (it == interp.end()) return false;
                Tuple t;
                t.reserve(g->args.size());
                for (const TermPtr& a : g->args) t.push_back(ground_text(a, env));
                return it->second.count(t) != 0;
            }
            case FK::Not:
                return !self(g->a, self);
            case FK::And:
                return self(g->a, self) && self(g->b, self);
            case FK::Or:
                return self(g->a, self) || self(g->b, self);
            case FK::Imp:
                return !self(g->a, self) || self(g->b, self);
            case FK::Iff:
                return self(g->a, self) == self(g->b, self);
            case FK::Exists:
            case FK::Forall: {
                auto it = env.find(g->v);
                std::optional<TermPtr> old;
                if (it != env.end()) old = it->second;
                bool all = true, any = false;
                for (const std::string& d : universe) {
                    env[g->v] = mk_app(d);
                    bool r = self(g->a, self);
                    all = all && r;
                    any = any || r;
                    if (g->k == FK::Exists ? any : !all) break;
                }
                if (old)
                    env[g->v] = *old;
                else
                    env.erase(g->v);
                return g->k == FK::Exists ? any : all;
            }
        }
        return false;
    };
    return rec(f, rec);
}

std::set<Valuation> instances(const Subst& s, const std::vector<std::string>& universe,
                              const std::set<std::string>& vars) {
    std::set<Valuation> out;
    if (s.bot || universe.empty()) return out;
    std::set<std::string> uset(universe.begin(), universe.end());
    std::vector<std::string> rng;
    for (const std::string& v : range_vars(s)) rng.push_back(v);
    std::vector<std::string> rest;
    for (const std::string& v : vars)
        if (!s.b.count(v)) rest.push_back(v);

    std::vector<std::size_t> gi(rng.size(), 0);
    for (;;) {
        std::map<std::string, TermPtr> g;
        for (std::size_t i = 0; i < rng.size(); ++i) g[rng[i]] = mk_app(universe[gi[i]]);
        Valuation base;
        bool ok = true;
        for (const std::string& x : vars) {
            auto it = s.b.find(x);
            if (it == s.b.end()) continue;
            TermPtr val = term_replace(it->second, g);
            if (val->var || !val->args.empty() || !uset.count(val->name)) {
                ok = false;
                break;
            }
            base[x] = val->name;
        }
        if (ok) {
            // remaining variables are unconstrained
            std::vector<std::size_t> ri(rest.size(), 0);
            for (;;) {
                Valuation h = base;
                for (std::size_t i = 0; i < rest.size(); ++i) h[rest[i]] = universe[ri[i]];
                out.insert(h);
                std::size_t i = 0;
                for (; i < rest.size(); ++i) {
                    if (++ri[i] < universe.size()) break;
                    ri[i] = 0;
                }
                if (i == rest.size()) break;
            }
        }
        std::size_t i = 0;
        for (; i < rng.size(); ++i) {
            if (++gi[i] < universe.size()) break;
            gi[i] = 0;
        }
        if (i == rng.size()) break;
    }
    return out;
}

// --- exact equivalence over constant signatures -------------------------------

namespace {

struct LimitHit {};

using WSeq = std::vector<int>;
using WSet = std::vector<WSeq>;  // sorted, unique

WSet wset_union(const WSet& a, const WSet& b) {
    WSet r;
    r.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

WSet wset_concat(const WSet& a, const WSet& b) {
    WSet r;
    r.reserve(a.size() * b.size());
    for (const WSeq& x : a)
        for (const WSeq& y : b) {
            WSeq s = x;
            s.insert(s.end(), y.begin(), y.end());
            r.push_back(std::move(s));
        }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Table of solution-witness sets per packed valuation over the subformula's
// free variables; the packing uses base-|U| digits in variable name order.
struct WNode {
    std::vector<std::string> fv;
    std::vector<WSet> table;
};

class WBuilder {
public:
    WBuilder(const std::vector<std::string>& u, std::uint64_t max_cells)
        : u_(u), max_cells_(max_cells) {}

    std::uint64_t cells = 0;

    WNode build(const FormulaPtr& q) {
        switch (q->k) {
            case FK::True: {
                WNode n;
                n.table = {WSet{WSeq{}}};
                charge(1);
                return n;
            }
            case FK::False: {
                WNode n;
                n.table = {WSet{}};
                charge(1);
                return n;
            }
            case FK::Eq: {
                WNode n;
                std::set<std::string> vs = term_vars(q->l);
                collect_vars(q->r, vs);
                n.fv.assign(vs.begin(), vs.end());
                std::uint64_t sz = ipow(u_.size(), n.fv.size());
                charge(sz);
                n.table.resize(sz);
                std::vector<int> dig(n.fv.size(), 0);
                for (std::uint64_t i = 0; i < sz; ++i) {
                    decode(i, n.fv.size(), dig);
                    if (ceval(q->l, n.fv, dig) == ceval(q->r, n.fv, dig))
                        n.table[i] = {WSeq{}};
                }
                return n;
            }
            case FK::Atom: {
                WNode n;
                std::set<std::string> vs;
                for (const TermPtr& t : q->args) collect_vars(t, vs);
                n.fv.assign(vs.begin(), vs.end());
                std::uint64_t sz = ipow(u_.size(), n.fv.size());
                charge(sz);
                n.table.resize(sz);
                std::vector<int> dig(n.fv.size(), 0);
                for (std::uint64_t i = 0; i < sz; ++i) {
                    decode(i, n.fv.size(), dig);
                    Tuple t;
                    t.reserve(q->args.size());
                    for (const TermPtr& a : q->args) t.push_back(ceval(a, n.fv, dig));
                    n.table[i] = {WSeq{atom_id(q->pred, t)}};
                }
                return n;
            }
            case FK::And: {
                WNode na = build(q->a), nb = build(q->b);
                WNode n;
                std::set<std::string> vs(na.fv.begin(), na.fv.end());
                vs.insert(nb.fv.begin(), nb.fv.end());
                n.fv.assign(vs.begin(), vs.end());
                std::uint64_t sz = ipow(u_.size(), n.fv.size());
                charge(sz);
                n.table.resize(sz);
                std::vector<std::size_t> pa = positions(na.fv, n.fv), pb = positions(nb.fv, n.fv);
                std::vector<int> dig(n.fv.size(), 0);
                for (std::uint64_t i = 0; i < sz; ++i) {
                    decode(i, n.fv.size(), dig);
                    n.table[i] =
                        wset_concat(na.table[project(dig, pa)], nb.table[project(dig, pb)]);
                }
                return n;
            }
            case FK::Exists: {
                WNode nc = build(q->a);
                auto it = std::find(nc.fv.begin(), nc.fv.end(), q->v);
                if (it == nc.fv.end()) return nc;  // vacuous binder
                std::size_t pv = it - nc.fv.begin();
                WNode n;
                n.fv = nc.fv;
                n.fv.erase(n.fv.begin() + pv);
                std::uint64_t sz = ipow(u_.size(), n.fv.size());
                charge(sz);
                n.table.resize(sz);
                std::vector<int> dig(n.fv.size(), 0);
                std::vector<int> cdig(nc.fv.size(), 0);
                for (std::uint64_t i = 0; i < sz; ++i) {
                    decode(i, n.fv.size(), dig);
                    WSet acc;
                    for (std::size_t d = 0; d < u_.size(); ++d) {
                        for (std::size_t j = 0, k = 0; j < nc.fv.size(); ++j)
                            cdig[j] = j == pv ? static_cast<int>(d) : dig[k++];
                        std::uint64_t ci = 0;
                        for (std::size_t j = nc.fv.size(); j-- > 0;)
                            ci = ci * u_.size() + cdig[j];
                        acc = wset_union(acc, nc.table[ci]);
                    }
                    n.table[i] = std::move(acc);
                }
                return n;
            }
            default:
                throw NotApplicable("the exact comparison requires a query");
        }
    }

    std::uint64_t project(const std::vector<int>& dig, const std::vector<std::size_t>& pos) {
        std::uint64_t r = 0;
        for (std::size_t i = pos.size(); i-- > 0;) r = r * u_.size() + dig[pos[i]];
        return r;
    }

    void decode(std::uint64_t idx, std::size_t nvars, std::vector<int>& dig) {
        for (std::size_t i = 0; i < nvars; ++i) {
            dig[i] = static_cast<int>(idx % u_.size());
            idx /= u_.size();
        }
    }

    static std::vector<std::size_t> positions(const std::vector<std::string>& sub,
                                              const std::vector<std::string>& full) {
        std::vector<std::size_t> p;
        p.reserve(sub.size());
        for (const std::string& v : sub)
            p.push_back(std::find(full.begin(), full.end(), v) - full.begin());
        return p;
    }

    std::string ceval(const TermPtr& t, const std::vector<std::string>& fv,
                      const std::vector<int>& dig) {
        if (!t->var) return t->name;  // constants only on this path
        std::size_t i = std::find(fv.begin(), fv.end(), t->name) - fv.begin();
        return u_[dig[i]];
    }

    int atom_id(const std::string& pred, const Tuple& t) {
        auto key = std::make_pair(pred, t);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(ids_.size());
        ids_.emplace(std::move(key), id);
        return id;
    }

private:
    void charge(std::uint64_t n) {
        cells += n;
        if (cells > max_cells_) throw LimitHit{};
    }

    const std::vector<std::string>& u_;
    std::uint64_t max_cells_;
    std::map<std::pair<std::string, Tuple>, int> ids_;
};

// --- matching-based membership (function symbols allowed) ---------------------

bool match_term(const TermPtr& ground, const TermPtr& pat,
                const std::set<std::string>& pat_vars, std::map<std::string, TermPtr>& bind) {
    if (pat->var && pat_vars.count(pat->name)) {
        auto [it, inserted] = bind.emplace(pat->name, ground);
        return inserted || term_eq(it->second, ground);
    }
    if (pat->var || ground->var) return term_eq(ground, pat);
    if (ground->name != pat->name || ground->args.size() != pat->args.size()) return false;
    for (std::size_t i = 0; i < ground->args.size(); ++i)
        if (!match_term(ground->args[i], pat->args[i], pat_vars, bind)) return false;
    return true;
}

// Does the valuation (with the listed ground atom argument tuples) satisfy
// the solved form? Bound variables of the form are the match unknowns.
bool member_match(const FormulaPtr& solved, const std::map<std::string, TermPtr>& h,
                  const std::vector<std::vector<TermPtr>>& atom_args) {
    if (solved->k == FK::False) return false;
    if (solved->k == FK::True) return true;
    Solved d = decompose(solved);
    std::set<std::string> pat_vars(d.bound.begin(), d.bound.end());
    std::map<std::string, TermPtr> params;  // free variables ground via h
    for (const auto& [x, t] : h)
        if (!pat_vars.count(x)) params[x] = t;
    std::map<std::string, TermPtr> bind;
    for (const auto& [x, t] : d.eqs) {
        auto hx = h.find(x);
        if (hx == h.end()) throw NotApplicable("valuation misses variable " + x);
        if (!match_term(hx->second, term_replace(t, params), pat_vars, bind)) return false;
    }
    if (d.atoms.size() != atom_args.size()) return false;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
        if (d.atoms[i]->args.size() != atom_args[i].size()) return false;
        for (std::size_t j = 0; j < atom_args[i].size(); ++j)
            if (!match_term(atom_args[i][j], term_replace(d.atoms[i]->args[j], params),
                            pat_vars, bind))
                return false;
    }
    return true;
}

}  // namespace

bool solved_member(const FormulaPtr& solved, const std::map<std::string, TermPtr>& h) {
    if (!is_solved_form(solved)) throw NotApplicable("membership requires a solved form");
    if (card(solved) != 0) throw NotApplicable("membership requires an E-formula");
    for (const std::string& v : free_vars(solved))
        if (!h.count(v)) throw NotApplicable("valuation misses free variable " + v);
    return member_match(solved, h, {});
}

std::map<std::string, TermPtr> canonical_valuation(const FormulaPtr& solved,
                                                   const std::set<std::string>& used_symbols) {
    if (!is_solved_form(solved)) throw NotApplicable("a solved form is required");
    if (solved->k == FK::False) throw Inconsistent("an inconsistent form has no valuation");
    std::map<std::string, TermPtr> h;
    if (solved->k == FK::True) return h;
    Solved d = decompose(solved);
    ConstGen gen(used_symbols);
    for (const std::string& p : param_vars(solved)) h[p] = mk_app(gen.fresh());
    for (const std::string& z : d.bound) h[z] = mk_app(gen.fresh());
    for (const auto& [x, t] : d.eqs) h[x] = term_replace(t, h);
    return h;
}

OracleReport check_equiv(const FormulaPtr& q1, const FormulaPtr& q2, const OracleOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    OracleReport rep;
    auto finish = [&](Verdict v, std::string w = "") {
        rep.verdict = v;
        rep.witness = std::move(w);
        rep.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        return rep;
    };
    if (!is_query(q1) || !is_query(q2))
        throw NotApplicable("the equivalence oracle requires queries");
    if (card(q1) != card(q2))
        return finish(Verdict::Refuted, "cardinalities differ: " + std::to_string(card(q1)) +
                                            " vs " + std::to_string(card(q2)));

    std::set<std::string> consts, funcs, preds;
    collect_syms(q1, consts, funcs, preds);
    collect_syms(q2, consts, funcs, preds);

    if (funcs.empty()) {
        // Exact: compare witness tables over constants plus enough fresh ones.
        std::set<std::string> fv = free_vars(q1);
        for (const std::string& v : free_vars(q2)) fv.insert(v);
        std::set<std::string> bound = all_var_names(q1);
        for (const std::string& v : all_var_names(q2)) bound.insert(v);
        for (const std::string& v : fv) bound.erase(v);
        std::size_t k = opts.extra_constants >= 0
                            ? static_cast<std::size_t>(opts.extra_constants)
                            : fv.size() + bound.size() + 1;
        std::set<std::string> used = consts;
        used.insert(preds.begin(), preds.end());
        ConstGen cg(used);
        std::vector<std::string> u(consts.begin(), consts.end());
        for (std::size_t i = 0; i < k; ++i) u.push_back(cg.fresh());

        try {
            WBuilder wb(u, opts.max_valuations);
            WNode n1 = wb.build(right_assoc(q1));
            WNode n2 = wb.build(right_assoc(q2));
            std::vector<std::string> full(fv.begin(), fv.end());
            std::vector<std::size_t> p1 = WBuilder::positions(n1.fv, full);
            std::vector<std::size_t> p2 = WBuilder::positions(n2.fv, full);
            std::uint64_t sz = ipow(u.size(), full.size());
            std::vector<int> dig(full.size(), 0);
            for (std::uint64_t i = 0; i < sz; ++i) {
                ++rep.enumerated;
                wb.decode(i, full.size(), dig);
                if (n1.table[wb.project(dig, p1)] != n2.table[wb.project(dig, p2)]) {
                    Subst w;
                    for (std::size_t j = 0; j < full.size(); ++j)
                        w.b[full[j]] = mk_app(u[dig[j]]);
                    return finish(Verdict::Refuted, print_subst(w));
                }
            }
            return finish(Verdict::Confirmed);
        } catch (const LimitHit&) {
            return finish(Verdict::Inconclusive, "valuation budget exhausted");
        }
    }

    // Function symbols present: attempt refutation from each side's sharpest
    // valuation; equivalence itself is not decided over truncated universes.
    FormulaPtr s1 = canonical_form(q1), s2 = canonical_form(q2);
    if (s1->k == FK::False && s2->k == FK::False) return finish(Verdict::Confirmed);
    std::set<std::string> used = consts;
    used.insert(funcs.begin(), funcs.end());
    used.insert(preds.begin(), preds.end());

    auto direction = [&](const FormulaPtr& sa, const FormulaPtr& sb) -> std::optional<Subst> {
        if (sa->k == FK::False) return std::nullopt;  // nothing to exhibit
        std::map<std::string, TermPtr> h = canonical_valuation(sa, used);
        // Variables free only on the other side take fresh constants too.
        ConstGen extra(used);
        std::set<std::string> cover = free_vars(sa);
        for (const std::string& v : free_vars(sb))
            if (!cover.count(v) && !h.count(v)) h[v] = mk_app(extra.fresh());
        std::vector<std::vector<TermPtr>> atoms;
        if (sa->k != FK::True)
            for (const FormulaPtr& a : decompose(sa).atoms) {
                std::vector<TermPtr> args;
                args.reserve(a->args.size());
                for (const TermPtr& t : a->args) args.push_back(term_replace(t, h));
                atoms.push_back(std::move(args));
            }
        ++rep.enumerated;
        if (member_match(sb, h, atoms)) return std::nullopt;
        Subst w;
        std::set<std::string> report_vars = free_vars(sa);
        for (const std::string& v : free_vars(sb)) report_vars.insert(v);
        for (const std::string& v : report_vars)
            if (h.count(v)) w.b[v] = h.at(v);
        return w;
    };
    if (auto w = direction(s1, s2)) return finish(Verdict::Refuted, print_subst(*w));
    if (auto w = direction(s2, s1)) return finish(Verdict::Refuted, print_subst(*w));

    // For E-formulas, sweep valuations over depth-bounded ground terms too.
    if (card(q1) == 0 && s1->k != FK::False && s2->k != FK::False) {
        std::map<std::string, std::size_t> arities;
        auto note = [&](const FormulaPtr& s) {
            if (s->k == FK::True) return;
            for (const auto& [x, t] : decompose(s).eqs) {
                auto walk = [&](const TermPtr& u, auto&& self) -> void {
                    if (u->var) return;
                    arities[u->name] = u->args.size();
                    for (const TermPtr& a : u->args) self(a, self);
                };
                walk(t, walk);
            }
        };
        note(s1);
        note(s2);
        if (!std::any_of(arities.begin(), arities.end(),
                         [](const auto& kv) { return kv.second == 0; })) {
            ConstGen cg(used);
            arities[cg.fresh()] = 0;  // ensure the ground universe is nonempty
        }
        std::vector<TermPtr> ground, prev;
        for (const auto& [f, n] : arities)
            if (n == 0) ground.push_back(mk_app(f));
        prev = ground;
        for (int d = 1; d <= opts.depth && ground.size() < 60; ++d) {
            std::vector<TermPtr> next;
            for (const auto& [f, n] : arities) {
                if (n == 0) continue;
                // one argument drawn from the previous layer, the rest minimal
                for (const TermPtr& t : prev) {
                    std::vector<TermPtr> args(n, ground.front());
                    for (std::size_t i = 0; i < n; ++i) {
                        args[i] = t;
                        next.push_back(mk_app(f, args));
                        args[i] = ground.front();
                    }
                }
            }
            std::sort(next.begin(), next.end(),
                      [](const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) < 0; });
            next.erase(std::unique(next.begin(), next.end(),
                                   [](const TermPtr& a, const TermPtr& b) {
                                       return term_eq(a, b);
                                   }),
                       next.end());
            ground.insert(ground.end(), next.begin(), next.end());
            prev = std::move(next);
        }
        std::set<std::string> fv = free_vars(s1);
        for (const std::string& v : free_vars(s2)) fv.insert(v);
        std::vector<std::string> fvv(fv.begin(), fv.end());
        std::vector<std::size_t> idx(fvv.size(), 0);
        for (;;) {
            if (++rep.enumerated > opts.max_valuations) break;
            std::map<std::string, TermPtr> h;
            for (std::size_t i = 0; i < fvv.size(); ++i) h[fvv[i]] = ground[idx[i]];
            bool m1 = member_match(s1, h, {}), m2 = member_match(s2, h, {});
            if (m1 != m2) {
                Subst w;
                w.b = h;
                return finish(Verdict::Refuted, print_subst(w));
            }
            std::size_t i = 0;
            for (; i < fvv.size(); ++i) {
                if (++idx[i] < ground.size()) break;
                idx[i] = 0;
            }
            if (i == fvv.size()) break;
        }
    }
    return finish(Verdict::Inconclusive, "no refutation found");
}

// --- generalization enumeration ------------------------------------------------

namespace {

TermPtr replace_at(const TermPtr& t, const std::vector<int>& path, std::size_t d,
                   const TermPtr& r) {
    if (d == path.size()) return r;
    std::vector<TermPtr> as = t->args;
    as[path[d]] = replace_at(as[path[d]], path, d + 1, r);
    return mk_app(t->name, std::move(as));
}

struct CutPos {
    std::size_t eq;
    std::vector<int> path;
    TermPtr sub;
};

void collect_positions(const TermPtr& t, std::size_t eq, std::vector<int>& path,
                       std::vector<CutPos>& out) {
    out.push_back({eq, path, t});
    for (std::size_t i = 0; i < t->args.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_positions(t->args[i], eq, path, out);
        path.pop_back();
    }
}

bool is_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin());
}

// All set partitions of {0..n-1} as restricted growth strings.
void partitions_of(std::size_t n, std::vector<std::vector<int>>& out) {
    std::vector<int> a(n, 0);
    auto rec = [&](std::size_t i, int mx, auto&& self) -> void {
        if (i == n) {
            out.push_back(a);
            return;
        }
        for (int v = 0; v <= mx + 1; ++v) {
            a[i] = v;
            self(i + 1, std::max(mx, v), self);
        }
    };
    if (n == 0)
        out.push_back({});
    else
        rec(0, -1, rec);
}

}  // namespace

std::vector<FormulaPtr> enumerate_generalizations(const FormulaPtr& e, std::uint64_t size_bound) {
    if (!is_eformula(e)) throw NotApplicable("generalizations require an E-formula");
    FormulaPtr S = canonical_form(e);
    if (S->k == FK::False) throw Inconsistent("an inconsistent formula has no generalizations");
    std::vector<FormulaPtr> out;
    auto add = [&](const FormulaPtr& cand) {
        for (const FormulaPtr& g : out)
            if (feq(g, cand)) return;
        out.push_back(cand);
    };
    if (S->k == FK::True) {
        out.push_back(f_true());
        return out;
    }
    Solved d = decompose(S);
    std::vector<CutPos> poss;
    for (std::size_t i = 0; i < d.eqs.size(); ++i) {
        std::vector<int> path;
        collect_positions(d.eqs[i].second, i, path, poss);
    }
    std::set<std::string> names = all_var_names(S);
    std::uint64_t count = 0;

    std::vector<std::size_t> chosen;
    auto emit = [&](const std::vector<int>& blocks) {
        if (++count > size_bound) throw BudgetExceeded("generalization budget exceeded");
        // fresh variable per block, numbered by first use in position order
        int nblocks = blocks.empty() ? 0 : *std::max_element(blocks.begin(), blocks.end()) + 1;
        std::vector<std::string> bvar(nblocks);
        long g = 1;
        for (int b = 0; b < nblocks; ++b) {
            std::string n;
            do {
                n = "G" + std::to_string(g++);
            } while (names.count(n));
            bvar[b] = n;
        }
        std::vector<TermPtr> rhs;
        for (const auto& [x, t] : d.eqs) rhs.push_back(t);
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            const CutPos& p = poss[chosen[i]];
            rhs[p.eq] = replace_at(rhs[p.eq], p.path, 0, mk_var(bvar[blocks[i]]));
        }
        std::vector<FormulaPtr> leaves;
        for (std::size_t i = 0; i < d.eqs.size(); ++i)
            leaves.push_back(f_eq(mk_var(d.eqs[i].first), rhs[i]));
        FormulaPtr body = leaves.back();
        for (std::size_t i = leaves.size() - 1; i-- > 0;) body = f_and(leaves[i], body);
        for (std::size_t i = bvar.size(); i-- > 0;) body = f_exists(bvar[i], body);
        // original bound variables surviving the cuts must stay bound
        std::set<std::string> still;
        for (const TermPtr& t : rhs)
            for (const std::string& v : term_vars(t)) still.insert(v);
        for (const std::string& z : d.bound)
            if (still.count(z)) body = f_exists(z, body);
        FormulaPtr cand = canonical_form(body);
        if (more_general(S, cand)) add(cand);
    };

    auto expand_partitions = [&]() {
        // group chosen positions by equal subterms; a block may only merge
        // positions carrying identical subterms
        std::vector<std::vector<std::size_t>> classes;  // indices into chosen
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            bool placed = false;
            for (auto& c : classes)
                if (term_eq(poss[chosen[c[0]]].sub, poss[chosen[i]].sub)) {
                    c.push_back(i);
                    placed = true;
                    break;
                }
            if (!placed) classes.push_back({i});
        }
        std::vector<std::vector<std::vector<int>>> perclass(classes.size());
        for (std::size_t c = 0; c < classes.size(); ++c)
            partitions_of(classes[c].size(), perclass[c]);
        std::vector<std::size_t> pick(classes.size(), 0);
        for (;;) {
            std::vector<int> blocks(chosen.size(), 0);
            int base = 0;
            for (std::size_t c = 0; c < classes.size(); ++c) {
                const std::vector<int>& pa = perclass[c][pick[c]];
                int mx = -1;
                for (std::size_t i = 0; i < classes[c].size(); ++i) {
                    blocks[classes[c][i]] = base + pa[i];
                    mx = std::max(mx, pa[i]);
                }
                base += mx + 1;
            }
            emit(blocks);
            std::size_t c = 0;
            for (; c < classes.size(); ++c) {
                if (++pick[c] < perclass[c].size()) break;
                pick[c] = 0;
            }
            if (c == classes.size()) break;
        }
    };

    auto rec = [&](std::size_t i, auto&& self) -> void {
        if (i == poss.size()) {
            expand_partitions();
            return;
        }
        self(i + 1, self);  // skip position i
        for (std::size_t j : chosen)
            if (poss[j].eq == poss[i].eq &&
                (is_prefix(poss[j].path, poss[i].path) || is_prefix(poss[i].path, poss[j].path)))
                return;  // would nest inside or above an already chosen cut
        chosen.push_back(i);
        self(i + 1, self);
        chosen.pop_back();
    };
    rec(0, rec);
    return out;
}

}  // namespace cq
