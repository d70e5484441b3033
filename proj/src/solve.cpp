#include "cq/solve.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "cq/error.hpp"
#include "cq/text.hpp"

namespace cq {

namespace {

// --- tree addressing ------------------------------------------------------

int child_count(const FormulaPtr& f) {
    switch (f->k) {
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            return 2;
        case FK::Not:
        case FK::Exists:
        case FK::Forall:
            return 1;
        default:
            return 0;
    }
}

FormulaPtr child(const FormulaPtr& f, int i) { return i == 0 ? f->a : f->b; }

FormulaPtr rebuild(const FormulaPtr& f, int i, const FormulaPtr& c) {
    switch (f->k) {
        case FK::And:
            return f_and(i == 0 ? c : f->a, i == 1 ? c : f->b);
        case FK::Or:
            return f_or(i == 0 ? c : f->a, i == 1 ? c : f->b);
        case FK::Imp:
            return f_imp(i == 0 ? c : f->a, i == 1 ? c : f->b);
        case FK::Iff:
            return f_iff(i == 0 ? c : f->a, i == 1 ? c : f->b);
        case FK::Not:
            return f_not(c);
        case FK::Exists:
            return f_exists(f->v, c);
        case FK::Forall:
            return f_forall(f->v, c);
        default:
            return f;
    }
}

FormulaPtr node_at(FormulaPtr f, const std::vector<int>& path) {
    for (int i : path) {
        if (i < 0 || i >= child_count(f)) throw NotApplicable("invalid path into formula");
        f = child(f, i);
    }
    return f;
}

FormulaPtr splice(const FormulaPtr& f, const std::vector<int>& path, std::size_t d,
                  const FormulaPtr& repl) {
    if (d == path.size()) return repl;
    if (path[d] < 0 || path[d] >= child_count(f))
        throw NotApplicable("invalid path into formula");
    return rebuild(f, path[d], splice(child(f, path[d]), path, d + 1, repl));
}

bool contains_false(const FormulaPtr& f) {
    if (f->k == FK::False) return true;
    for (int i = 0; i < child_count(f); ++i)
        if (contains_false(child(f, i))) return true;
    return false;
}

bool all_eq_atom(const FormulaPtr& f) {
    if (f->k == FK::Eq || f->k == FK::Atom) return true;
    if (f->k == FK::And) return all_eq_atom(f->a) && all_eq_atom(f->b);
    return false;
}

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->k == FK::And) {
        flatten_and(f->a, out);
        flatten_and(f->b, out);
    } else {
        out.push_back(f);
    }
}

int leaf_count(const FormulaPtr& f) {
    if (f->k == FK::And) return leaf_count(f->a) + leaf_count(f->b);
    return 1;
}

FormulaPtr build_conj(const std::vector<FormulaPtr>& leaves) {
    FormulaPtr r = leaves.back();
    for (std::size_t i = leaves.size() - 1; i-- > 0;) r = f_and(leaves[i], r);
    return r;
}

FormulaPtr subst_leaf(const FormulaPtr& leaf, const std::map<std::string, TermPtr>& m) {
    if (leaf->k == FK::Eq) return f_eq(term_replace(leaf->l, m), term_replace(leaf->r, m));
    std::vector<TermPtr> as;
    as.reserve(leaf->args.size());
    for (const TermPtr& t : leaf->args) as.push_back(term_replace(t, m));
    return f_atom(leaf->pred, std::move(as));
}

bool leaf_has_var(const FormulaPtr& leaf, const std::string& x) {
    if (leaf->k == FK::Eq) return occurs_in(x, leaf->l) || occurs_in(x, leaf->r);
    for (const TermPtr& t : leaf->args)
        if (occurs_in(x, t)) return true;
    return false;
}

// --- rule scanner -----------------------------------------------------------

struct Found {
    std::vector<int> path;
    int step = 0;
    const char* sub = "";
    FormulaPtr repl;
};

// The substitution rules act on the maximal conjunction of equations and
// atoms around an equation; the relevant binders are the existential chain
// directly above that conjunction.
struct Region {
    std::vector<int> path;
    std::vector<FormulaPtr> leaves;
    std::size_t idx = 0;
    std::set<std::string> binders;
};

class Engine {
public:
    Engine(const FormulaPtr& root, NameGen& gen) : root_(root), gen_(gen) {}

    std::optional<Found> find() {
        if (root_->k != FK::False && contains_false(root_))
            return Found{{}, 12, "", f_false()};
        static const std::vector<std::vector<int>> bands = {
            {2, 3}, {4}, {1}, {7}, {5}, {9}, {8}, {10}, {11}};
        for (const auto& band : bands) {
            band_ = &band;
            found_.reset();
            visit(root_);
            if (found_) return found_;
        }
        return std::nullopt;
    }

private:
    bool visit(const FormulaPtr& f) {
        for (int i = 0; i < child_count(f); ++i) {
            anc_.emplace_back(f, i);
            path_.push_back(i);
            bool stop = visit(child(f, i));
            path_.pop_back();
            anc_.pop_back();
            if (stop) return true;
        }
        for (int step : *band_) {
            std::optional<Found> r = try_step(step, f);
            if (r) {
                found_ = std::move(r);
                return true;
            }
        }
        return false;
    }

    Region region(const FormulaPtr& eq) const {
        std::size_t k = path_.size();
        while (k > 0 && anc_[k - 1].first->k == FK::And) {
            const FormulaPtr& parent = anc_[k - 1].first;
            FormulaPtr sib = path_[k - 1] == 0 ? parent->b : parent->a;
            if (!all_eq_atom(sib)) break;
            --k;
        }
        Region reg;
        reg.path.assign(path_.begin(), path_.begin() + k);
        FormulaPtr root = k == path_.size() ? eq : anc_[k].first;
        flatten_and(root, reg.leaves);
        FormulaPtr cur = root;
        for (std::size_t d = k; d < path_.size(); ++d) {
            if (path_[d] == 1) reg.idx += leaf_count(cur->a);
            cur = child(cur, path_[d]);
        }
        for (std::size_t j = k; j > 0 && anc_[j - 1].first->k == FK::Exists; --j)
            reg.binders.insert(anc_[j - 1].first->v);
        return reg;
    }

    std::optional<Found> try_step(int step, const FormulaPtr& f) {
        switch (step) {
            case 1:
                if (f->k == FK::Eq && !f->l->var && !f->r->var && f->l->name == f->r->name &&
                    f->l->args.size() == f->r->args.size()) {
                    if (f->l->args.empty()) return Found{path_, 1, "", f_true()};
                    std::vector<FormulaPtr> eqs;
                    eqs.reserve(f->l->args.size());
                    for (std::size_t i = 0; i < f->l->args.size(); ++i)
                        eqs.push_back(f_eq(f->l->args[i], f->r->args[i]));
                    return Found{path_, 1, "", build_conj(eqs)};
                }
                break;
            case 2:
                if (f->k == FK::Eq && !f->l->var && !f->r->var &&
                    (f->l->name != f->r->name || f->l->args.size() != f->r->args.size()))
                    return Found{path_, 2, "", f_false()};
                break;
            case 3:
                if (f->k == FK::Eq && f->l->var && !(f->r->var && f->r->name == f->l->name) &&
                    occurs_in(f->l->name, f->r))
                    return Found{path_, 3, "", f_false()};
                break;
            case 4:
                if (f->k == FK::Eq && f->l->var && f->r->var && f->l->name == f->r->name)
                    return Found{path_, 4, "", f_true()};
                break;
            case 5: {  // rules 5 and 6 share the region machinery
                if (f->k != FK::Eq || !f->l->var) break;
                const std::string& x = f->l->name;
                if (occurs_in(x, f->r)) break;  // rules 3 and 4 own these
                Region reg = region(f);
                bool bound = reg.binders.count(x) != 0;
                if (!bound) {
                    bool other = false;
                    for (std::size_t i = 0; i < reg.leaves.size() && !other; ++i)
                        if (i != reg.idx && leaf_has_var(reg.leaves[i], x)) other = true;
                    if (!other) break;
                }
                std::map<std::string, TermPtr> m{{x, f->r}};
                std::vector<FormulaPtr> out;
                out.reserve(reg.leaves.size());
                for (std::size_t i = 0; i < reg.leaves.size(); ++i) {
                    if (i == reg.idx)
                        out.push_back(bound ? f_true() : reg.leaves[i]);
                    else
                        out.push_back(subst_leaf(reg.leaves[i], m));
                }
                return Found{reg.path, bound ? 6 : 5, "", build_conj(out)};
            }
            case 7: {
                if (f->k != FK::Eq) break;
                if (!f->l->var && f->r->var) return Found{path_, 7, "i", f_eq(f->r, f->l)};
                if (f->l->var && f->r->var && f->l->name != f->r->name) {
                    Region reg = region(f);
                    if (!reg.binders.count(f->l->name) && reg.binders.count(f->r->name))
                        return Found{path_, 7, "ii", f_eq(f->r, f->l)};
                }
                break;
            }
            case 8:
                if (f->k == FK::Exists && !free_vars(f->a).count(f->v))
                    return Found{path_, 8, "", f->a};
                break;
            case 9: {
                if (f->k != FK::And) break;
                std::vector<std::string> ys1, ys2;
                FormulaPtr q1 = f->a, q2 = f->b;
                while (q1->k == FK::Exists) {
                    ys1.push_back(q1->v);
                    q1 = q1->a;
                }
                while (q2->k == FK::Exists) {
                    ys2.push_back(q2->v);
                    q2 = q2->a;
                }
                if (ys1.empty() && ys2.empty()) break;
                std::set<std::string> chosen;
                auto rename_side = [&](std::vector<std::string>& ys, FormulaPtr& q,
                                       const std::set<std::string>& forbidden) {
                    for (std::size_t i = ys.size(); i-- > 0;) {  // innermost binder first
                        const std::string y = ys[i];
                        std::string ny =
                            (forbidden.count(y) || chosen.count(y)) ? gen_.fresh() : y;
                        chosen.insert(ny);
                        if (ny != y) q = replace(q, {y}, {mk_var(ny)});
                        ys[i] = ny;
                    }
                };
                rename_side(ys1, q1, all_var_names(f->b));
                std::set<std::string> forb2 = all_var_names(q1);
                forb2.insert(ys1.begin(), ys1.end());
                rename_side(ys2, q2, forb2);
                FormulaPtr body = right_assoc(f_and(q1, q2));
                for (std::size_t i = ys2.size(); i-- > 0;) body = f_exists(ys2[i], body);
                for (std::size_t i = ys1.size(); i-- > 0;) body = f_exists(ys1[i], body);
                return Found{path_, 9, "", body};
            }
            case 10:
                if (f->k != FK::And || f->a->k != FK::Atom) break;
                if (f->b->k == FK::Eq) return Found{path_, 10, "", f_and(f->b, f->a)};
                if (f->b->k == FK::And && f->b->a->k == FK::Eq)
                    return Found{path_, 10, "", f_and(f->b->a, f_and(f->a, f->b->b))};
                break;
            case 11:
                if (f->k != FK::And) break;
                if (f->a->k == FK::True) return Found{path_, 11, "", f->b};
                if (f->b->k == FK::True) return Found{path_, 11, "", f->a};
                break;
            default:
                break;
        }
        return std::nullopt;
    }

    FormulaPtr root_;
    NameGen& gen_;
    const std::vector<int>* band_ = nullptr;
    std::vector<int> path_;
    std::vector<std::pair<FormulaPtr, int>> anc_;
    std::optional<Found> found_;
};

void dedup_pairs(std::vector<TermPair>& ps) {
    std::vector<TermPair> out;
    for (const TermPair& p : ps) {
        bool dup = false;
        for (const TermPair& q : out)
            if (term_eq(p.first, q.first) && term_eq(p.second, q.second)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(p);
    }
    ps = std::move(out);
}

}  // namespace

// --- solving ---------------------------------------------------------------

SolveResult solve(const FormulaPtr& q, const SolveOptions& opts) {
    if (!q) throw NotApplicable("null formula");
    if (!is_query(q)) throw NotApplicable("solving requires a positive conjunctive query");
    SolveResult res;
    FormulaPtr work = right_assoc(q);
    NameGen gen(all_var_names(work));
    for (;;) {
        std::optional<Found> f = Engine(work, gen).find();
        if (!f) break;
        if (res.steps >= opts.budget)
            throw BudgetExceeded("rewrite budget of " + std::to_string(opts.budget) +
                                 " steps exceeded");
        ++res.steps;
        if (opts.trace) {
            TraceStep ts;
            ts.step = f->step;
            ts.sub = f->sub;
            ts.path = f->path;
            ts.before = print_formula(node_at(work, f->path));
            ts.after = print_formula(f->repl);
            res.trace.push_back(std::move(ts));
        }
        work = right_assoc(splice(work, f->path, 0, f->repl));
    }
    res.solved = work;
    return res;
}

FormulaPtr solve_form(const FormulaPtr& q) { return solve(q).solved; }

std::string trace_line(const TraceStep& s) {
    std::ostringstream out;
    out << "step=" << s.step << s.sub << " at=[";
    for (std::size_t i = 0; i < s.path.size(); ++i) {
        if (i) out << ',';
        out << s.path[i];
    }
    out << "] before=" << s.before << " after=" << s.after;
    return out.str();
}

FormulaPtr replay(const FormulaPtr& q, const std::vector<TraceStep>& trace) {
    FormulaPtr work = right_assoc(q);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceStep& s = trace[i];
        FormulaPtr node = node_at(work, s.path);
        std::string have = print_formula(node);
        if (have != s.before)
            throw NotApplicable("trace step " + std::to_string(i + 1) + " expects '" + s.before +
                                "' but found '" + have + "'");
        FormulaPtr repl = parse_formula(s.after);
        work = right_assoc(splice(work, s.path, 0, repl));
    }
    return work;
}

// --- solved forms ------------------------------------------------------------

bool is_solved_form(const FormulaPtr& f) {
    if (f->k == FK::True || f->k == FK::False) return true;
    std::vector<std::string> bound;
    FormulaPtr body = f;
    while (body->k == FK::Exists) {
        bound.push_back(body->v);
        body = body->a;
    }
    if (!all_eq_atom(body)) return false;
    std::vector<FormulaPtr> leaves;
    flatten_and(body, leaves);
    std::size_t n = 0;
    while (n < leaves.size() && leaves[n]->k == FK::Eq) ++n;
    for (std::size_t i = n; i < leaves.size(); ++i)
        if (leaves[i]->k != FK::Atom) return false;  // an equation after an atom
    std::set<std::string> bs(bound.begin(), bound.end());
    if (bs.size() != bound.size()) return false;
    std::set<std::string> xs;
    for (std::size_t i = 0; i < n; ++i) {
        const FormulaPtr& e = leaves[i];
        if (!e->l->var) return false;
        if (bs.count(e->l->name)) return false;
        if (!xs.insert(e->l->name).second) return false;
    }
    std::set<std::string> body_vars;
    for (std::size_t i = 0; i < n; ++i) collect_vars(leaves[i]->r, body_vars);
    for (std::size_t i = n; i < leaves.size(); ++i)
        for (const TermPtr& t : leaves[i]->args) collect_vars(t, body_vars);
    for (const std::string& x : xs)
        if (body_vars.count(x)) return false;
    for (const std::string& z : bound)
        if (!body_vars.count(z)) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (leaves[i]->r->var && bs.count(leaves[i]->r->name)) return false;
    return true;
}

bool is_consistent(const FormulaPtr& q) { return solve(q).solved->k != FK::False; }

Solved decompose(const FormulaPtr& f) {
    if (!is_solved_form(f)) throw NotApplicable("not a solved form");
    Solved s;
    if (f->k == FK::True) {
        s.k = FK::True;
        return s;
    }
    if (f->k == FK::False) {
        s.k = FK::False;
        return s;
    }
    s.k = FK::And;
    FormulaPtr body = f;
    while (body->k == FK::Exists) {
        s.bound.push_back(body->v);
        body = body->a;
    }
    std::vector<FormulaPtr> leaves;
    flatten_and(body, leaves);
    for (const FormulaPtr& l : leaves) {
        if (l->k == FK::Eq)
            s.eqs.emplace_back(l->l->name, l->r);
        else
            s.atoms.push_back(l);
    }
    return s;
}

FormulaPtr compose(const Solved& s) {
    if (s.k == FK::True) return f_true();
    if (s.k == FK::False) return f_false();
    std::vector<FormulaPtr> leaves;
    for (const auto& [x, t] : s.eqs) leaves.push_back(f_eq(mk_var(x), t));
    for (const FormulaPtr& a : s.atoms) leaves.push_back(a);
    if (leaves.empty()) throw NotApplicable("a proper solved body needs at least one conjunct");
    FormulaPtr body = build_conj(leaves);
    for (std::size_t i = s.bound.size(); i-- > 0;) body = f_exists(s.bound[i], body);
    return body;
}

std::set<std::string> elim_vars(const FormulaPtr& solved) {
    Solved s = decompose(solved);
    std::set<std::string> out;
    for (const auto& [x, t] : s.eqs) out.insert(x);
    return out;
}

std::set<std::string> param_vars(const FormulaPtr& solved) {
    std::set<std::string> out = free_vars(solved);
    for (const std::string& x : elim_vars(solved)) out.erase(x);
    return out;
}

std::vector<std::string> bound_vars(const FormulaPtr& solved) { return decompose(solved).bound; }

// --- canonical form ----------------------------------------------------------

FormulaPtr canonicalize(const FormulaPtr& solved) {
    Solved s = decompose(solved);
    if (s.k != FK::And) return s.k == FK::True ? f_true() : f_false();

    // Within each class of variable-variable equations {x1=v, ..., xr=v} the
    // largest name becomes the parameter; names are swapped consistently.
    std::map<std::string, std::vector<std::string>> classes;
    for (const auto& [x, t] : s.eqs)
        if (t->var) classes[t->name].push_back(x);
    std::map<std::string, TermPtr> swap;
    for (const auto& [p, members] : classes) {
        std::string mx = p;
        for (const std::string& m : members) mx = std::max(mx, m);
        if (mx != p) {
            swap[p] = mk_var(mx);
            swap[mx] = mk_var(p);
        }
    }
    if (!swap.empty()) {
        for (auto& [x, t] : s.eqs) {
            auto it = swap.find(x);
            if (it != swap.end()) x = it->second->name;
            t = term_replace(t, swap);
        }
        for (FormulaPtr& a : s.atoms) {
            std::vector<TermPtr> as;
            as.reserve(a->args.size());
            for (const TermPtr& t : a->args) as.push_back(term_replace(t, swap));
            a = f_atom(a->pred, std::move(as));
        }
    }

    std::sort(s.eqs.begin(), s.eqs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Bound variables take names B1, B2, ... in first-occurrence order over
    // the sorted right-hand sides and then the atoms, skipping any Bk free
    // in the form.
    std::set<std::string> bset(s.bound.begin(), s.bound.end());
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto scan = [&](const TermPtr& t, auto&& self) -> void {
        if (t->var) {
            if (bset.count(t->name) && seen.insert(t->name).second) order.push_back(t->name);
            return;
        }
        for (const TermPtr& a : t->args) self(a, self);
    };
    for (const auto& [x, t] : s.eqs) scan(t, scan);
    for (const FormulaPtr& a : s.atoms)
        for (const TermPtr& t : a->args) scan(t, scan);

    std::set<std::string> freen = free_vars(solved);  // unchanged by the swaps
    std::map<std::string, TermPtr> bmap;
    std::vector<std::string> nb;
    long k = 1;
    for (const std::string& y : order) {
        std::string cand;
        for (;; ++k) {
            cand = "B" + std::to_string(k);
            if (!freen.count(cand)) break;
        }
        ++k;
        nb.push_back(cand);
        if (cand != y) bmap[y] = mk_var(cand);
    }
    if (!bmap.empty()) {
        for (auto& [x, t] : s.eqs) t = term_replace(t, bmap);
        for (FormulaPtr& a : s.atoms) {
            std::vector<TermPtr> as;
            as.reserve(a->args.size());
            for (const TermPtr& t : a->args) as.push_back(term_replace(t, bmap));
            a = f_atom(a->pred, std::move(as));
        }
    }
    s.bound = std::move(nb);
    return compose(s);
}

FormulaPtr canonical_form(const FormulaPtr& q) { return canonicalize(solve(q).solved); }

bool equivalent(const FormulaPtr& q1, const FormulaPtr& q2) {
    if (card(q1) != card(q2)) return false;
    return feq(canonical_form(q1), canonical_form(q2));
}

// --- generality order --------------------------------------------------------

bool more_general(const FormulaPtr& q1, const FormulaPtr& q2) {
    if (card(q1) != card(q2)) return false;
    FormulaPtr s1f = canonical_form(q1), s2f = canonical_form(q2);
    if (s1f->k == FK::False) return true;
    if (s2f->k == FK::False) return false;
    Solved s1 = decompose(s1f), s2 = decompose(s2f);
    if (s1.atoms.size() != s2.atoms.size()) return false;
    for (std::size_t i = 0; i < s1.atoms.size(); ++i) {
        if (s1.atoms[i]->pred != s2.atoms[i]->pred ||
            s1.atoms[i]->args.size() != s2.atoms[i]->args.size())
            return false;
    }

    // Bound variables of both sides are renamed apart: the general side's act
    // as match variables, the specific side's as local constants.  Without
    // this a canonical bound name can collide with a free parameter of the
    // other form and silently absorb its constraints.
    NameGen gen(all_var_names(s1f));
    gen.occupy_all(all_var_names(s2f));
    std::map<std::string, TermPtr> ren1, ren;
    for (const std::string& z : s1.bound) ren1[z] = mk_var(gen.fresh());
    for (const std::string& z : s2.bound) ren[z] = mk_var(gen.fresh());
    std::map<std::string, TermPtr> rhs1, rhs2;
    for (const auto& [x, t] : s1.eqs) rhs1[x] = term_replace(t, ren1);
    for (const auto& [x, t] : s2.eqs) rhs2[x] = term_replace(t, ren);

    std::set<std::string> dom = free_vars(s1f);
    for (const std::string& v : free_vars(s2f)) dom.insert(v);

    std::vector<TermPair> pairs;
    for (const std::string& v : dom) {
        auto i1 = rhs1.find(v);
        auto i2 = rhs2.find(v);
        TermPtr c1 = i1 == rhs1.end() ? mk_var(v) : i1->second;
        TermPtr c2 = i2 == rhs2.end() ? mk_var(v) : i2->second;
        for (TermPair& p : diff_set(c1, c2)) pairs.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < s1.atoms.size(); ++i)
        for (std::size_t j = 0; j < s1.atoms[i]->args.size(); ++j) {
            TermPtr a1 = term_replace(s1.atoms[i]->args[j], ren1);
            TermPtr a2 = term_replace(s2.atoms[i]->args[j], ren);
            for (TermPair& p : diff_set(a1, a2)) pairs.push_back(std::move(p));
        }

    // A match exists iff every pair maps a variable of the general side to a
    // single term; parameters map via their identity pairs, which pins them.
    std::map<std::string, TermPtr> mapping;
    for (const TermPair& p : pairs) {
        if (!p.second->var) return false;
        auto [it, inserted] = mapping.emplace(p.second->name, p.first);
        if (!inserted && !term_eq(it->second, p.first)) return false;
    }
    return true;
}

// --- difference of aligned solved forms --------------------------------------

std::vector<TermPair> query_diff(const FormulaPtr& s1f, const FormulaPtr& s2f) {
    if (!is_solved_form(s1f) || !is_solved_form(s2f))
        throw NotApplicable("difference requires solved forms");
    if (s1f->k == FK::False || s2f->k == FK::False)
        throw Inconsistent("difference requires consistent solved forms");
    Solved s1 = decompose(s1f), s2 = decompose(s2f);
    if (s1.eqs.size() != s2.eqs.size())
        throw AlignmentError("eliminable variable lists differ");
    for (std::size_t i = 0; i < s1.eqs.size(); ++i)
        if (s1.eqs[i].first != s2.eqs[i].first)
            throw AlignmentError("eliminable variable lists differ");
    if (s1.atoms.size() != s2.atoms.size()) throw AlignmentError("atom counts differ");
    for (std::size_t i = 0; i < s1.atoms.size(); ++i)
        if (s1.atoms[i]->pred != s2.atoms[i]->pred ||
            s1.atoms[i]->args.size() != s2.atoms[i]->args.size())
            throw AlignmentError("atoms do not line up");

    // Rename a bound variable of the second form only when it collides with
    // a name of the first, so untroubled names survive into the pairs.
    std::set<std::string> names1 = all_var_names(s1f);
    NameGen gen(names1);
    gen.occupy_all(all_var_names(s2f));
    std::map<std::string, TermPtr> ren;
    for (const std::string& z : s2.bound)
        if (names1.count(z)) ren[z] = mk_var(gen.fresh());

    std::vector<TermPair> pairs;
    for (std::size_t i = 0; i < s1.eqs.size(); ++i) {
        TermPtr t2 = term_replace(s2.eqs[i].second, ren);
        for (TermPair& p : diff_set(s1.eqs[i].second, t2)) pairs.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < s1.atoms.size(); ++i)
        for (std::size_t j = 0; j < s1.atoms[i]->args.size(); ++j) {
            TermPtr a2 = term_replace(s2.atoms[i]->args[j], ren);
            for (TermPair& p : diff_set(s1.atoms[i]->args[j], a2)) pairs.push_back(std::move(p));
        }
    dedup_pairs(pairs);
    return pairs;
}

}  // namespace cq
