#include "cq/text.hpp"

#include <cctype>
#include <sstream>

#include "cq/error.hpp"

namespace cq {

namespace {

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> r = {"true", "false", "exists", "forall", "not", "bottom"};
    return r;
}

bool is_var_name(const std::string& s) {
    return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

enum class Tok { End, Ident, LP, RP, Comma, Dot, Eq, Amp, Bar, Arrow, DArrow, LB, RB };

struct Token {
    Tok k;
    std::string s;
    std::size_t pos = 0;  // 1-based offset of the first character
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& cur() const { return cur_; }

    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        cur_.pos = i_ + 1;
        if (i_ >= text_.size()) {
            cur_ = {Tok::End, "", i_ + 1};
            return;
        }
        char c = text_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            cur_ = {Tok::Ident, text_.substr(i_, j - i_), i_ + 1};
            i_ = j;
            return;
        }
        switch (c) {
            case '(': single(Tok::LP, "("); return;
            case ')': single(Tok::RP, ")"); return;
            case ',': single(Tok::Comma, ","); return;
            case '.': single(Tok::Dot, "."); return;
            case '&': single(Tok::Amp, "&"); return;
            case '|': single(Tok::Bar, "|"); return;
            case '{': single(Tok::LB, "{"); return;
            case '}': single(Tok::RB, "}"); return;
            case '=': single(Tok::Eq, "="); return;
            case '-':
                if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
                    cur_ = {Tok::Arrow, "->", i_ + 1};
                    i_ += 2;
                    return;
                }
                throw SyntaxError(i_ + 1, "'->'");
            case '<':
                if (i_ + 2 < text_.size() && text_[i_ + 1] == '-' && text_[i_ + 2] == '>') {
                    cur_ = {Tok::DArrow, "<->", i_ + 1};
                    i_ += 3;
                    return;
                }
                throw SyntaxError(i_ + 1, "'<->'");
            default:
                throw SyntaxError(i_ + 1, "a valid token");
        }
    }

private:
    void single(Tok k, const char* s) {
        cur_ = {k, s, i_ + 1};
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token cur_;
};

// Term syntax parsed before symbols are classified: whether a head is a
// function or a predicate depends on whether '=' follows.
struct RawTerm {
    std::string name;
    bool var = false;
    std::vector<RawTerm> args;
    std::size_t pos = 0;
};

class Parser {
public:
    Parser(const std::string& text, Signature& sig, bool infer)
        : lex_(text), sig_(sig), infer_(infer) {}

    TermPtr term_all() {
        RawTerm r = raw_term();
        expect_end();
        return commit_term(r);
    }

    FormulaPtr formula_all() {
        FormulaPtr f = formula();
        expect_end();
        return f;
    }

    Subst subst_all() {
        Subst s = subst();
        expect_end();
        return s;
    }

    std::vector<std::string> varlist_all() {
        std::vector<std::string> xs;
        if (lex_.cur().k == Tok::End) return xs;
        xs.push_back(var_name());
        while (lex_.cur().k == Tok::Comma) {
            lex_.advance();
            xs.push_back(var_name());
        }
        expect_end();
        return xs;
    }

private:
    bool at_word(const char* w) const {
        return lex_.cur().k == Tok::Ident && lex_.cur().s == w;
    }

    void expect(Tok k, const char* what) {
        if (lex_.cur().k != k) throw SyntaxError(lex_.cur().pos, what);
        lex_.advance();
    }

    void expect_end() {
        if (lex_.cur().k != Tok::End) throw SyntaxError(lex_.cur().pos, "end of input");
    }

    std::string var_name() {
        const Token& t = lex_.cur();
        if (t.k != Tok::Ident || reserved_words().count(t.s) || !is_var_name(t.s))
            throw SyntaxError(t.pos, "a variable");
        std::string n = t.s;
        lex_.advance();
        return n;
    }

    RawTerm raw_term() {
        const Token& t = lex_.cur();
        if (t.k != Tok::Ident || reserved_words().count(t.s))
            throw SyntaxError(t.pos, "a term");
        RawTerm r;
        r.name = t.s;
        r.var = is_var_name(t.s);
        r.pos = t.pos;
        lex_.advance();
        if (lex_.cur().k == Tok::LP) {
            if (r.var)
                throw SyntaxError(lex_.cur().pos, "no argument list after a variable");
            lex_.advance();
            r.args.push_back(raw_term());
            while (lex_.cur().k == Tok::Comma) {
                lex_.advance();
                r.args.push_back(raw_term());
            }
            expect(Tok::RP, "')'");
        }
        return r;
    }

    void note_fun(const std::string& name, int arity, std::size_t pos) {
        if (sig_.preds.count(name))
            throw SyntaxError(pos, "a function symbol ('" + name + "' is a predicate)");
        auto it = sig_.funcs.find(name);
        if (it == sig_.funcs.end()) {
            if (!infer_) throw SyntaxError(pos, "a declared function symbol ('" + name + "')");
            sig_.funcs[name] = arity;
        } else if (it->second != arity) {
            throw SyntaxError(pos, "'" + name + "' with arity " + std::to_string(it->second));
        }
    }

    void note_pred(const std::string& name, int arity, std::size_t pos) {
        if (sig_.funcs.count(name))
            throw SyntaxError(pos, "a predicate symbol ('" + name + "' is a function symbol)");
        auto it = sig_.preds.find(name);
        if (it == sig_.preds.end()) {
            if (!infer_) throw SyntaxError(pos, "a declared predicate symbol ('" + name + "')");
            sig_.preds[name] = arity;
        } else if (it->second != arity) {
            throw SyntaxError(pos, "'" + name + "' with arity " + std::to_string(it->second));
        }
    }

    TermPtr commit_term(const RawTerm& r) {
        if (r.var) return mk_var(r.name);
        note_fun(r.name, static_cast<int>(r.args.size()), r.pos);
        std::vector<TermPtr> as;
        as.reserve(r.args.size());
        for (const RawTerm& a : r.args) as.push_back(commit_term(a));
        return mk_app(r.name, std::move(as));
    }

    FormulaPtr formula() { return iff(); }

    FormulaPtr iff() {
        FormulaPtr a = imp();
        if (lex_.cur().k == Tok::DArrow) {
            lex_.advance();
            return f_iff(a, iff());
        }
        return a;
    }

    FormulaPtr imp() {
        FormulaPtr a = disj();
        if (lex_.cur().k == Tok::Arrow) {
            lex_.advance();
            return f_imp(a, imp());
        }
        return a;
    }

    FormulaPtr disj() {
        FormulaPtr a = conj();
        if (lex_.cur().k == Tok::Bar) {
            lex_.advance();
            return f_or(a, disj());
        }
        return a;
    }

    FormulaPtr conj() {
        FormulaPtr a = unary();
        if (lex_.cur().k == Tok::Amp) {
            lex_.advance();
            return f_and(a, conj());
        }
        return a;
    }

    FormulaPtr unary() {
        if (at_word("not")) {
            lex_.advance();
            return f_not(unary());
        }
        if (at_word("exists") || at_word("forall")) {
            bool ex = lex_.cur().s == "exists";
            lex_.advance();
            std::string v = var_name();
            expect(Tok::Dot, "'.'");
            FormulaPtr body = formula();  // quantifier body extends as far right as possible
            return ex ? f_exists(v, body) : f_forall(v, body);
        }
        return primary();
    }

    FormulaPtr primary() {
        if (at_word("true")) {
            lex_.advance();
            return f_true();
        }
        if (at_word("false")) {
            lex_.advance();
            return f_false();
        }
        if (lex_.cur().k == Tok::LP) {
            lex_.advance();
            FormulaPtr f = formula();
            expect(Tok::RP, "')'");
            return f;
        }
        if (lex_.cur().k == Tok::Ident && !reserved_words().count(lex_.cur().s)) {
            RawTerm r1 = raw_term();
            if (lex_.cur().k == Tok::Eq) {
                lex_.advance();
                RawTerm r2 = raw_term();
                TermPtr l = commit_term(r1);
                return f_eq(l, commit_term(r2));
            }
            if (r1.var) throw SyntaxError(r1.pos, "a predicate symbol or an equation");
            note_pred(r1.name, static_cast<int>(r1.args.size()), r1.pos);
            std::vector<TermPtr> as;
            as.reserve(r1.args.size());
            for (const RawTerm& a : r1.args) as.push_back(commit_term(a));
            return f_atom(r1.name, std::move(as));
        }
        throw SyntaxError(lex_.cur().pos, "a formula");
    }

    Subst subst() {
        if (at_word("bottom")) {
            lex_.advance();
            return s_bottom();
        }
        expect(Tok::LB, "'{' or 'bottom'");
        Subst s;
        if (lex_.cur().k == Tok::RB) {
            lex_.advance();
            return s;
        }
        binding(s);
        while (lex_.cur().k == Tok::Comma) {
            lex_.advance();
            binding(s);
        }
        expect(Tok::RB, "'}'");
        return s;
    }

    void binding(Subst& s) {
        std::size_t pos = lex_.cur().pos;
        std::string x = var_name();
        if (s.b.count(x)) throw SyntaxError(pos, "a distinct variable ('" + x + "' repeats)");
        expect(Tok::Arrow, "'->'");
        s.b[x] = commit_term(raw_term());
    }

    Lexer lex_;
    Signature& sig_;
    bool infer_;
};

int prec_of(const FormulaPtr& f) {
    switch (f->k) {
        case FK::True:
        case FK::False:
        case FK::Eq:
        case FK::Atom:
            return 6;
        case FK::Not:
            return 5;
        case FK::And:
            return 4;
        case FK::Or:
            return 3;
        case FK::Imp:
            return 2;
        case FK::Iff:
            return 1;
        case FK::Exists:
        case FK::Forall:
            return 0;
    }
    return 6;
}

bool not_operand_bare(const FormulaPtr& a) {
    return prec_of(a) >= 5 || a->k == FK::Exists || a->k == FK::Forall;
}

// True when the printed form of f ends inside a quantifier body, so that a
// following binary operator would be swallowed by the quantifier on reparse.
bool open_tail(const FormulaPtr& f) {
    switch (f->k) {
        case FK::Exists:
        case FK::Forall:
            return true;
        case FK::Not:
            return not_operand_bare(f->a) && open_tail(f->a);
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff:
            return prec_of(f->b) >= prec_of(f) && open_tail(f->b);
        default:
            return false;
    }
}

void pt(const TermPtr& t, std::ostream& out) {
    out << t->name;
    if (!t->var && !t->args.empty()) {
        out << '(';
        for (std::size_t i = 0; i < t->args.size(); ++i) {
            if (i) out << ',';
            pt(t->args[i], out);
        }
        out << ')';
    }
}

void pf(const FormulaPtr& f, std::ostream& out) {
    switch (f->k) {
        case FK::True:
            out << "true";
            return;
        case FK::False:
            out << "false";
            return;
        case FK::Eq:
            pt(f->l, out);
            out << " = ";
            pt(f->r, out);
            return;
        case FK::Atom:
            out << f->pred;
            if (!f->args.empty()) {
                out << '(';
                for (std::size_t i = 0; i < f->args.size(); ++i) {
                    if (i) out << ',';
                    pt(f->args[i], out);
                }
                out << ')';
            }
            return;
        case FK::Not:
            out << "not ";
            if (not_operand_bare(f->a)) {
                pf(f->a, out);
            } else {
                out << '(';
                pf(f->a, out);
                out << ')';
            }
            return;
        case FK::And:
        case FK::Or:
        case FK::Imp:
        case FK::Iff: {
            const char* op = f->k == FK::And   ? " & "
                             : f->k == FK::Or  ? " | "
                             : f->k == FK::Imp ? " -> "
                                               : " <-> ";
            bool lp = prec_of(f->a) <= prec_of(f) || open_tail(f->a);
            bool rp = prec_of(f->b) < prec_of(f);
            if (lp) out << '(';
            pf(f->a, out);
            if (lp) out << ')';
            out << op;
            if (rp) out << '(';
            pf(f->b, out);
            if (rp) out << ')';
            return;
        }
        case FK::Exists:
        case FK::Forall:
            out << (f->k == FK::Exists ? "exists " : "forall ") << f->v << " . ";
            pf(f->a, out);
            return;
    }
}

}  // namespace

void Signature::validate() const {
    auto check = [](const char* set_name, const std::map<std::string, int>& m) {
        for (const auto& [name, arity] : m) {
            if (name.empty() || is_var_name(name))
                throw SignatureError(std::string(set_name) + " symbol '" + name +
                                     "' must start with a lowercase letter");
            if (reserved_words().count(name))
                throw SignatureError("'" + name + "' is a reserved word");
            if (arity < 0)
                throw SignatureError(std::string(set_name) + " symbol '" + name +
                                     "' has negative arity");
        }
    };
    check("function", funcs);
    check("predicate", preds);
    for (const auto& [name, arity] : funcs)
        if (preds.count(name))
            throw SignatureError("'" + name + "' is both a function and a predicate symbol");
}

TermPtr parse_term(const std::string& text, Signature& sig, bool infer) {
    return Parser(text, sig, infer).term_all();
}

FormulaPtr parse_formula(const std::string& text, Signature& sig, bool infer) {
    return Parser(text, sig, infer).formula_all();
}

FormulaPtr parse_query(const std::string& text, Signature& sig, bool infer) {
    FormulaPtr f = parse_formula(text, sig, infer);
    if (!is_query(f))
        throw SyntaxError(1, "a positive conjunctive query (no not/|/->/<->/forall)");
    return f;
}

Subst parse_subst(const std::string& text, Signature& sig, bool infer) {
    return Parser(text, sig, infer).subst_all();
}

std::vector<std::string> parse_varlist(const std::string& text) {
    Signature sig;
    return Parser(text, sig, true).varlist_all();
}

TermPtr parse_term(const std::string& text) {
    Signature sig;
    return parse_term(text, sig, true);
}

FormulaPtr parse_formula(const std::string& text) {
    Signature sig;
    return parse_formula(text, sig, true);
}

FormulaPtr parse_query(const std::string& text) {
    Signature sig;
    return parse_query(text, sig, true);
}

Subst parse_subst(const std::string& text) {
    Signature sig;
    return parse_subst(text, sig, true);
}

std::string print_term(const TermPtr& t) {
    std::ostringstream out;
    pt(t, out);
    return out.str();
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream out;
    pf(f, out);
    return out.str();
}

std::string print_subst(const Subst& s) {
    if (s.bot) return "bottom";
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [x, t] : s.b) {
        if (!first) out << ", ";
        first = false;
        out << x << " -> ";
        pt(t, out);
    }
    out << '}';
    return out.str();
}

std::string print_varset(const std::set<std::string>& xs) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const std::string& x : xs) {
        if (!first) out << ", ";
        first = false;
        out << x;
    }
    out << '}';
    return out.str();
}

std::string print_diffset(const std::vector<TermPair>& ps) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out << ", ";
        out << '(';
        pt(ps[i].first, out);
        out << ", ";
        pt(ps[i].second, out);
        out << ')';
    }
    out << '}';
    return out.str();
}

}  // namespace cq
