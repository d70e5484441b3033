#include "cq/term.hpp"

namespace cq {

TermPtr mk_var(std::string name) {
    auto t = std::make_shared<Term>();
    t->name = std::move(name);
    t->var = true;
    return t;
}

TermPtr mk_app(std::string name, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->name = std::move(name);
    t->var = false;
    t->args = std::move(args);
    return t;
}

bool term_eq(const TermPtr& s, const TermPtr& t) {
    if (s.get() == t.get()) return true;
    if (s->var != t->var || s->name != t->name) return false;
    if (s->args.size() != t->args.size()) return false;
    for (std::size_t i = 0; i < s->args.size(); ++i)
        if (!term_eq(s->args[i], t->args[i])) return false;
    return true;
}

int term_cmp(const TermPtr& s, const TermPtr& t) {
    if (s->var != t->var) return s->var ? -1 : 1;
    if (int c = s->name.compare(t->name)) return c < 0 ? -1 : 1;
    if (s->args.size() != t->args.size()) return s->args.size() < t->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < s->args.size(); ++i)
        if (int c = term_cmp(s->args[i], t->args[i])) return c;
    return 0;
}

void collect_vars(const TermPtr& t, std::set<std::string>& out) {
    if (t->var) {
        out.insert(t->name);
        return;
    }
    for (const auto& a : t->args) collect_vars(a, out);
}

std::set<std::string> term_vars(const TermPtr& t) {
    std::set<std::string> out;
    collect_vars(t, out);
    return out;
}

bool occurs_in(const std::string& var, const TermPtr& t) {
    if (t->var) return t->name == var;
    for (const auto& a : t->args)
        if (occurs_in(var, a)) return true;
    return false;
}

bool is_ground(const TermPtr& t) {
    if (t->var) return false;
    for (const auto& a : t->args)
        if (!is_ground(a)) return false;
    return true;
}

int term_size(const TermPtr& t) {
    int n = 1;
    for (const auto& a : t->args) n += term_size(a);
    return n;
}

TermPtr term_replace(const TermPtr& t, const std::map<std::string, TermPtr>& m) {
    if (t->var) {
        auto it = m.find(t->name);
        return it == m.end() ? t : it->second;
    }
    bool changed = false;
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) {
        auto r = term_replace(a, m);
        changed = changed || r.get() != a.get();
        args.push_back(std::move(r));
    }
    return changed ? mk_app(t->name, std::move(args)) : t;
}

namespace {

void diff_rec(const TermPtr& s, const TermPtr& t, std::vector<TermPair>& out) {
    if (s->var && t->var && s->name == t->name) {
        out.emplace_back(s, t);
        return;
    }
    if (!s->var && !t->var && s->name == t->name && s->args.size() == t->args.size()) {
        for (std::size_t i = 0; i < s->args.size(); ++i) diff_rec(s->args[i], t->args[i], out);
        return;
    }
    out.emplace_back(s, t);
}

}  // namespace

std::vector<TermPair> diff_set(const TermPtr& s, const TermPtr& t) {
    std::vector<TermPair> raw;
    diff_rec(s, t, raw);
    std::vector<TermPair> out;
    for (const auto& p : raw) {
        bool seen = false;
        for (const auto& q : out)
            if (term_eq(p.first, q.first) && term_eq(p.second, q.second)) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    return out;
}

}  // namespace cq
