#include "cq/cli.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cq/error.hpp"
#include "cq/lattice.hpp"
#include "cq/oracle.hpp"
#include "cq/solve.hpp"
#include "cq/subst.hpp"
#include "cq/text.hpp"

namespace cq {

namespace {

using nlohmann::json;

constexpr const char* kUsage =
    "usage: cq [flags] [<verb> <arg>...]\n"
    "\n"
    "verbs:\n"
    "  solve Q            rewrite a query to its canonical solved form\n"
    "  equiv Q1 Q2        decide equivalence of two queries\n"
    "  leq Q1 Q2          decide whether Q2 is at least as general as Q1\n"
    "  meet E1 E2         greatest lower bound of two E-formulas\n"
    "  join E1 E2         least upper bound of two E-formulas\n"
    "  project E VARS     existentially close E onto the listed variables\n"
    "  kernel E           essential variables of a consistent E-formula\n"
    "  gamma E            the substitution an E-formula denotes\n"
    "  ungamma S          the E-formula a substitution denotes\n"
    "  apply S F          capture-avoiding application of S to a formula\n"
    "  compose S T        composition (S then T)\n"
    "  restrict S VARS    domain restriction\n"
    "  regext S VARS      regular extension onto DOM(S) and VARS\n"
    "  diff S1 S2         difference pairs of two aligned solved forms\n"
    "  oracle Q1 Q2       semantic equivalence check over finite models\n"
    "  generalize E       every generalization of E up to equivalence\n"
    "\n"
    "flags:\n"
    "  --json             machine-readable output\n"
    "  --script FILE      run one command per line from FILE\n"
    "  --trace            echo rewrite steps (solve)\n"
    "  --infer-sig        infer symbols from usage (default on)\n"
    "  --strict-sig       reject symbols not declared via :sig\n"
    "  --budget N         rewrite step budget (default 1000000)\n"
    "  --depth N          ground-term depth for the oracle refuter (default 3)\n"
    "  --fresh-constants N  fresh constants for exact oracle decisions\n"
    "  --max-interps N    oracle valuation budget (default 5000000)\n"
    "  --size-bound N     generalization enumeration budget\n"
    "  --seed N           accepted for script compatibility\n"
    "\n"
    "without a verb or --script, an interactive loop reads commands from\n"
    "standard input (:trace on|off, :sig [fun|pred NAME/ARITY], :quit).\n";

struct Options {
    bool json = false;
    bool trace = false;
    bool infer = true;
    std::string script;
    bool have_script = false;
    std::uint64_t budget = 1'000'000;
    std::uint64_t size_bound = 1'000'000;
    OracleOptions oracle;
};

struct Session {
    Signature sig;
    Options opt;
};

// Splits a command line into tokens; double quotes group words and are
// stripped. Throws SyntaxError on an unterminated quote.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::string tok;
        bool any = false;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            if (line[i] == '"') {
                std::size_t open = i++;
                while (i < line.size() && line[i] != '"') tok += line[i++];
                if (i == line.size())
                    throw SyntaxError(open + 1, "a closing double quote");
                ++i;
                any = true;
            } else {
                tok += line[i++];
            }
        }
        if (any || !tok.empty()) out.push_back(tok);
    }
    return out;
}

int error_code(const Error& e) { return dynamic_cast<const SyntaxError*>(&e) ? 2 : 1; }

void report(std::ostream& err, const Error& e) {
    err << "error[" << e.code() << "]: " << e.what() << "\n";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Confirmed:
            return "confirmed";
        case Verdict::Refuted:
            return "refuted";
        default:
            return "inconclusive";
    }
}

// Executes one verb; writes the text or JSON result to `out`.
void dispatch(const std::string& verb, const std::vector<std::string>& args, Session& s,
              std::ostream& out) {
    Options& o = s.opt;
    auto F = [&](const std::string& t) { return parse_formula(t, s.sig, o.infer); };
    auto Q = [&](const std::string& t) { return parse_query(t, s.sig, o.infer); };
    auto SU = [&](const std::string& t) { return parse_subst(t, s.sig, o.infer); };
    auto V = [&](const std::string& t) {
        std::vector<std::string> v = parse_varlist(t);
        return std::set<std::string>(v.begin(), v.end());
    };
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw SyntaxError(1, "exactly " + std::to_string(n) + " argument" +
                                     (n == 1 ? "" : "s") + " for '" + verb + "'");
    };
    auto emit_formula = [&](const FormulaPtr& f) {
        if (o.json)
            out << json{{"verb", verb}, {"result", print_formula(f)}}.dump() << "\n";
        else
            out << print_formula(f) << "\n";
    };
    auto emit_subst = [&](const Subst& su) {
        if (o.json) {
            json r;
            if (su.bot) {
                r = json{{"bottom", true}};
            } else {
                json bs = json::array();
                for (const auto& [x, t] : su.b)
                    bs.push_back(json{{"var", x}, {"term", print_term(t)}});
                r = json{{"bindings", bs}};
            }
            out << json{{"verb", verb}, {"result", r}}.dump() << "\n";
        } else {
            out << print_subst(su) << "\n";
        }
    };
    auto emit_bool = [&](bool b) {
        if (o.json)
            out << json{{"verb", verb}, {"result", b}}.dump() << "\n";
        else
            out << (b ? "true" : "false") << "\n";
    };

    if (verb == "solve") {
        need(1);
        SolveOptions so;
        so.budget = o.budget;
        so.trace = o.trace;
        SolveResult r = solve(Q(args[0]), so);
        FormulaPtr c = canonicalize(r.solved);
        if (o.json) {
            json j{{"verb", verb},
                   {"result", print_formula(c)},
                   {"consistent", c->k != FK::False},
                   {"steps", r.steps}};
            if (o.trace) {
                json t = json::array();
                for (const TraceStep& st : r.trace)
                    t.push_back(json{{"step", st.step},
                                     {"sub", st.sub},
                                     {"at", st.path},
                                     {"before", st.before},
                                     {"after", st.after}});
                j["trace"] = t;
            }
            out << j.dump() << "\n";
        } else {
            if (o.trace)
                for (const TraceStep& st : r.trace) out << trace_line(st) << "\n";
            out << print_formula(c) << "\n";
        }
    } else if (verb == "equiv") {
        need(2);
        FormulaPtr a = Q(args[0]), b = Q(args[1]);
        emit_bool(equivalent(a, b));
    } else if (verb == "leq") {
        need(2);
        FormulaPtr a = Q(args[0]), b = Q(args[1]);
        emit_bool(more_general(a, b));
    } else if (verb == "meet") {
        need(2);
        FormulaPtr a = F(args[0]), b = F(args[1]);
        emit_formula(meet(a, b));
    } else if (verb == "join") {
        need(2);
        FormulaPtr a = F(args[0]), b = F(args[1]);
        emit_formula(join(a, b));
    } else if (verb == "project") {
        need(2);
        emit_formula(project(F(args[0]), V(args[1])));
    } else if (verb == "kernel") {
        need(1);
        std::set<std::string> k = kernel_e(F(args[0]));
        if (o.json)
            out << json{{"verb", verb}, {"result", k}}.dump() << "\n";
        else
            out << print_varset(k) << "\n";
    } else if (verb == "gamma") {
        need(1);
        emit_subst(to_substitution(F(args[0])));
    } else if (verb == "ungamma") {
        need(1);
        emit_formula(to_eformula(SU(args[0])));
    } else if (verb == "apply") {
        need(2);
        Subst su = SU(args[0]);
        emit_formula(apply_to_formula(su, F(args[1])));
    } else if (verb == "compose") {
        need(2);
        Subst a = SU(args[0]), b = SU(args[1]);
        emit_subst(compose(a, b));
    } else if (verb == "restrict") {
        need(2);
        emit_subst(restrict_to(SU(args[0]), V(args[1])));
    } else if (verb == "regext") {
        need(2);
        emit_subst(regular_extension(SU(args[0]), V(args[1])));
    } else if (verb == "diff") {
        need(2);
        FormulaPtr a = Q(args[0]), b = Q(args[1]);
        std::vector<TermPair> d = query_diff(a, b);
        if (o.json) {
            json arr = json::array();
            for (const TermPair& p : d)
                arr.push_back(json::array({print_term(p.first), print_term(p.second)}));
            out << json{{"verb", verb}, {"result", arr}}.dump() << "\n";
        } else {
            out << print_diffset(d) << "\n";
        }
    } else if (verb == "oracle") {
        need(2);
        FormulaPtr a = Q(args[0]), b = Q(args[1]);
        OracleReport r = check_equiv(a, b, o.oracle);
        if (o.json) {
            json j{{"verb", verb},
                   {"verdict", verdict_name(r.verdict)},
                   {"enumerated_count", r.enumerated},
                   {"elapsed_ms", r.elapsed_ms}};
            if (!r.witness.empty()) j["witness"] = r.witness;
            out << j.dump() << "\n";
        } else {
            out << verdict_name(r.verdict) << "\n";
            if (r.verdict == Verdict::Refuted && !r.witness.empty())
                out << "witness: " << r.witness << "\n";
            else if (!r.witness.empty())
                out << "note: " << r.witness << "\n";
        }
    } else if (verb == "generalize") {
        need(1);
        std::vector<FormulaPtr> gs = enumerate_generalizations(F(args[0]), o.size_bound);
        if (o.json) {
            json arr = json::array();
            for (const FormulaPtr& g : gs) arr.push_back(print_formula(g));
            out << json{{"verb", verb}, {"result", arr}, {"count", gs.size()}}.dump() << "\n";
        } else {
            for (const FormulaPtr& g : gs) out << print_formula(g) << "\n";
        }
    } else {
        throw SyntaxError(1, "a verb (solve, equiv, leq, meet, join, project, kernel, "
                             "gamma, ungamma, apply, compose, restrict, regext, diff, "
                             "oracle, generalize)");
    }
}

// Handles a colon command; returns false only for :quit.
bool colon_command(const std::vector<std::string>& toks, Session& s, std::ostream& out) {
    const std::string& c = toks[0];
    if (c == ":quit" || c == ":q") return false;
    if (c == ":trace") {
        if (toks.size() != 2 || (toks[1] != "on" && toks[1] != "off"))
            throw SyntaxError(1, "':trace on' or ':trace off'");
        s.opt.trace = toks[1] == "on";
        return true;
    }
    if (c == ":sig") {
        if (toks.size() == 1) {
            for (const auto& [n, a] : s.sig.funcs) out << "fun " << n << "/" << a << "\n";
            for (const auto& [n, a] : s.sig.preds) out << "pred " << n << "/" << a << "\n";
            return true;
        }
        if (toks.size() != 3 || (toks[1] != "fun" && toks[1] != "pred"))
            throw SyntaxError(1, "':sig', ':sig fun NAME/ARITY' or ':sig pred NAME/ARITY'");
        std::string::size_type slash = toks[2].find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == toks[2].size())
            throw SyntaxError(1, "a declaration of the form NAME/ARITY");
        std::string name = toks[2].substr(0, slash);
        int arity;
        try {
            std::size_t used = 0;
            arity = std::stoi(toks[2].substr(slash + 1), &used);
            if (used != toks[2].size() - slash - 1 || arity < 0) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw SyntaxError(1, "a nonnegative arity after '/'");
        }
        Signature next = s.sig;
        auto& side = toks[1] == "fun" ? next.funcs : next.preds;
        auto it = side.find(name);
        if (it != side.end() && it->second != arity)
            throw SignatureError("symbol " + name + " already declared with arity " +
                                 std::to_string(it->second));
        side[name] = arity;
        next.validate();
        s.sig = std::move(next);
        return true;
    }
    throw SyntaxError(1, "':trace', ':sig' or ':quit'");
}

// Runs one already-tokenized command; returns its exit code (0/1/2) and sets
// `quit` on :quit. Never throws.
int run_tokens(const std::vector<std::string>& toks, Session& s, std::ostream& out,
               std::ostream& err, bool& quit) {
    try {
        if (toks[0][0] == ':') {
            if (!colon_command(toks, s, out)) quit = true;
            return 0;
        }
        dispatch(toks[0], {toks.begin() + 1, toks.end()}, s, out);
        return 0;
    } catch (const Error& e) {
        report(err, e);
        return error_code(e);
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}

int run_line(const std::string& line, Session& s, std::ostream& out, std::ostream& err,
             bool& quit) {
    std::vector<std::string> toks;
    try {
        toks = tokenize(line);
    } catch (const Error& e) {
        report(err, e);
        return error_code(e);
    }
    if (toks.empty() || toks[0][0] == '#') return 0;
    return run_tokens(toks, s, out, err, quit);
}

int command_loop(std::istream& in, Session& s, std::ostream& out, std::ostream& err,
                 bool prompt) {
    int worst = 0;
    bool quit = false;
    std::string line;
    while (!quit) {
        if (prompt) out << "cq> " << std::flush;
        if (!std::getline(in, line)) break;
        worst = std::max(worst, run_line(line, s, out, err, quit));
    }
    return prompt ? 0 : worst;  // interactive errors are recoverable, not exit status
}

bool parse_u64(const std::string& t, std::uint64_t& v) {
    try {
        std::size_t used = 0;
        v = std::stoull(t, &used);
        return used == t.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, bool interactive) {
    Session s;
    std::vector<std::string> pos;
    auto fail = [&](const std::string& msg) {
        err << "error[usage]: " << msg << "\n";
        return 2;
    };
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string a = args[i];
        if (a.rfind("--", 0) != 0) {
            pos.push_back(a);
            continue;
        }
        std::string val;
        bool have_val = false;
        std::string::size_type eq = a.find('=');
        if (eq != std::string::npos) {
            val = a.substr(eq + 1);
            have_val = true;
            a = a.substr(0, eq);
        }
        auto take = [&]() -> bool {
            if (have_val) return true;
            if (i + 1 >= args.size()) return false;
            val = args[++i];
            return true;
        };
        auto take_u64 = [&](std::uint64_t& v) {
            return take() && parse_u64(val, v);
        };
        std::uint64_t n = 0;
        if (a == "--help") {
            out << kUsage;
            return 0;
        } else if (a == "--json") {
            s.opt.json = true;
        } else if (a == "--trace") {
            s.opt.trace = true;
        } else if (a == "--infer-sig") {
            s.opt.infer = true;
        } else if (a == "--strict-sig") {
            s.opt.infer = false;
        } else if (a == "--script") {
            if (!take()) return fail("--script needs a file name");
            s.opt.script = val;
            s.opt.have_script = true;
        } else if (a == "--budget") {
            if (!take_u64(s.opt.budget)) return fail("--budget needs a number");
        } else if (a == "--size-bound") {
            if (!take_u64(s.opt.size_bound)) return fail("--size-bound needs a number");
        } else if (a == "--max-interps") {
            if (!take_u64(s.opt.oracle.max_valuations)) return fail("--max-interps needs a number");
        } else if (a == "--depth") {
            if (!take_u64(n)) return fail("--depth needs a number");
            s.opt.oracle.depth = static_cast<int>(n);
        } else if (a == "--fresh-constants") {
            if (!take_u64(n)) return fail("--fresh-constants needs a number");
            s.opt.oracle.extra_constants = static_cast<int>(n);
        } else if (a == "--seed") {
            if (!take_u64(n)) return fail("--seed needs a number");
        } else {
            return fail("unknown flag '" + a + "' (see --help)");
        }
    }

    if (s.opt.have_script) {
        if (!pos.empty()) return fail("--script excludes a verb on the command line");
        std::ifstream f(s.opt.script);
        if (!f) return fail("cannot open script file '" + s.opt.script + "'");
        return command_loop(f, s, out, err, false);
    }
    if (pos.empty()) return command_loop(in, s, out, err, interactive);

    bool quit = false;
    return run_tokens(pos, s, out, err, quit);
}

}  // namespace cq
