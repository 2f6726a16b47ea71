#include "fcm/formula.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace fcm
{

    ParseError::ParseError(const std::string &message, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column)
    {
    }

    namespace
    {

        enum class Tok
        {
            lower,
            upper,
            lparen,
            rparen,
            lbracket,
            rbracket,
            comma,
            colon,
            dot,
            bang,
            question,
            tilde,
            amp,
            bar,
            implies,
            iff,
            end,
        };

        struct Token
        {
            Tok kind;
            std::string text;
            int line;
            int column;
        };

        const char *describe(Tok t)
        {
            switch (t)
            {
            case Tok::lower:
                return "symbol";
            case Tok::upper:
                return "variable";
            case Tok::lparen:
                return "'('";
            case Tok::rparen:
                return "')'";
            case Tok::lbracket:
                return "'['";
            case Tok::rbracket:
                return "']'";
            case Tok::comma:
                return "','";
            case Tok::colon:
                return "':'";
            case Tok::dot:
                return "'.'";
            case Tok::bang:
                return "'!'";
            case Tok::question:
                return "'?'";
            case Tok::tilde:
                return "'~'";
            case Tok::amp:
                return "'&'";
            case Tok::bar:
                return "'|'";
            case Tok::implies:
                return "'=>'";
            case Tok::iff:
                return "'<=>'";
            case Tok::end:
                return "end of input";
            }
            return "?";
        }

        std::vector<Token> lex(std::string_view text)
        {
            std::vector<Token> out;
            int line = 1, col = 1;
            std::size_t i = 0;
            auto advance = [&](std::size_t n) {
                for (std::size_t k = 0; k < n; ++k)
                {
                    if (text[i] == '\n')
                    {
                        ++line;
                        col = 1;
                    }
                    else
                        ++col;
                    ++i;
                }
            };
            while (i < text.size())
            {
                char c = text[i];
                if (std::isspace(static_cast<unsigned char>(c)))
                {
                    advance(1);
                    continue;
                }
                if (c == '%')
                {
                    while (i < text.size() && text[i] != '\n')
                        advance(1);
                    continue;
                }
                int l = line, cl = col;
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                {
                    std::size_t j = i;
                    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                        ++j;
                    std::string word(text.substr(i, j - i));
                    Tok kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::upper : Tok::lower;
                    if (c == '_')
                        throw ParseError("identifier may not start with '_'", l, cl);
                    out.push_back({kind, word, l, cl});
                    advance(j - i);
                    continue;
                }
                auto single = [&](Tok t) {
                    out.push_back({t, std::string(1, c), l, cl});
                    advance(1);
                };
                switch (c)
                {
                case '(':
                    single(Tok::lparen);
                    continue;
                case ')':
                    single(Tok::rparen);
                    continue;
                case '[':
                    single(Tok::lbracket);
                    continue;
                case ']':
                    single(Tok::rbracket);
                    continue;
                case ',':
                    single(Tok::comma);
                    continue;
                case ':':
                    single(Tok::colon);
                    continue;
                case '.':
                    single(Tok::dot);
                    continue;
                case '!':
                    single(Tok::bang);
                    continue;
                case '?':
                    single(Tok::question);
                    continue;
                case '~':
                    single(Tok::tilde);
                    continue;
                case '&':
                    single(Tok::amp);
                    continue;
                case '|':
                    single(Tok::bar);
                    continue;
                default:
                    break;
                }
                if (text.substr(i, 2) == "=>")
                {
                    out.push_back({Tok::implies, "=>", l, cl});
                    advance(2);
                    continue;
                }
                if (text.substr(i, 3) == "<=>")
                {
                    out.push_back({Tok::iff, "<=>", l, cl});
                    advance(3);
                    continue;
                }
                throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
            }
            out.push_back({Tok::end, "", line, col});
            return out;
        }

        // NAME_k denotes the copy-k variant of NAME.
        Var variable_from_token(const std::string &text)
        {
            auto us = text.rfind('_');
            if (us != std::string::npos && us > 0 && us + 1 < text.size())
            {
                bool digits = true;
                for (std::size_t k = us + 1; k < text.size(); ++k)
                    digits = digits && std::isdigit(static_cast<unsigned char>(text[k]));
                if (digits && text[us + 1] != '0')
                    return Var{text.substr(0, us), std::stoi(text.substr(us + 1))};
            }
            return Var{text, 0};
        }

        class Parser
        {
        public:
            explicit Parser(std::string_view text) : toks_(lex(text)) {}

            Formula parse_document()
            {
                if (peek().kind == Tok::lower && peek().text == "fof" && peek(1).kind == Tok::lparen)
                    return parse_statements();
                Formula f = parse_iff();
                expect(Tok::end);
                return f;
            }

            Term parse_single_term()
            {
                Term t = parse_term();
                expect(Tok::end);
                return t;
            }

            Literal parse_single_literal()
            {
                bool positive = true;
                if (peek().kind == Tok::tilde)
                {
                    next();
                    positive = false;
                }
                Literal l = parse_atom();
                l.positive = positive;
                expect(Tok::end);
                return l;
            }

        private:
            const Token &peek(std::size_t ahead = 0) const
            {
                return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
            }

            const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

            [[noreturn]] void fail(const std::string &what, const Token &at) const
            {
                throw ParseError(what + ", found " + describe(at.kind), at.line, at.column);
            }

            const Token &expect(Tok k)
            {
                if (peek().kind != k)
                    fail(std::string("expected ") + describe(k), peek());
                return next();
            }

            Formula parse_statements()
            {
                std::optional<Formula> axioms, conjectures;
                while (peek().kind != Tok::end)
                {
                    const Token &kw = expect(Tok::lower);
                    if (kw.text != "fof")
                        throw ParseError("expected fof(...) statement", kw.line, kw.column);
                    expect(Tok::lparen);
                    next(); // name: any identifier
                    expect(Tok::comma);
                    const Token &role = expect(Tok::lower);
                    expect(Tok::comma);
                    Formula f = parse_iff();
                    expect(Tok::rparen);
                    expect(Tok::dot);
                    auto &slot = role.text == "conjecture" ? conjectures : axioms;
                    if (role.text != "conjecture" && role.text != "axiom" && role.text != "hypothesis" &&
                        role.text != "lemma")
                        throw ParseError("unsupported role '" + role.text + "'", role.line, role.column);
                    slot = slot ? Formula::conjunction(*slot, f) : f;
                }
                if (!conjectures && !axioms)
                    fail("expected at least one statement", peek());
                if (!conjectures)
                    return Formula::negation(*axioms); // refute the axioms
                if (!axioms)
                    return *conjectures;
                return Formula::implication(*axioms, *conjectures);
            }

            Formula parse_iff()
            {
                Formula lhs = parse_implies();
                if (peek().kind == Tok::iff)
                {
                    next();
                    Formula rhs = parse_implies();
                    return Formula::equivalence(lhs, rhs);
                }
                return lhs;
            }

            Formula parse_implies()
            {
                Formula lhs = parse_or();
                if (peek().kind == Tok::implies)
                {
                    next();
                    Formula rhs = parse_implies();
                    return Formula::implication(lhs, rhs);
                }
                return lhs;
            }

            Formula parse_or()
            {
                Formula f = parse_and();
                while (peek().kind == Tok::bar)
                {
                    next();
                    f = Formula::disjunction(f, parse_and());
                }
                return f;
            }

            Formula parse_and()
            {
                Formula f = parse_unary();
                while (peek().kind == Tok::amp)
                {
                    next();
                    f = Formula::conjunction(f, parse_unary());
                }
                return f;
            }

            Formula parse_unary()
            {
                const Token &t = peek();
                switch (t.kind)
                {
                case Tok::tilde:
                    next();
                    return Formula::negation(parse_unary());
                case Tok::bang:
                case Tok::question:
                {
                    auto kind = t.kind == Tok::bang ? Formula::Kind::forall : Formula::Kind::exists;
                    next();
                    expect(Tok::lbracket);
                    std::vector<Var> vars;
                    vars.push_back(variable_from_token(expect(Tok::upper).text));
                    while (peek().kind == Tok::comma)
                    {
                        next();
                        vars.push_back(variable_from_token(expect(Tok::upper).text));
                    }
                    expect(Tok::rbracket);
                    expect(Tok::colon);
                    Formula body = parse_unary();
                    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
                        body = Formula::quantified(kind, *it, body);
                    return body;
                }
                case Tok::lparen:
                {
                    next();
                    Formula f = parse_iff();
                    expect(Tok::rparen);
                    return f;
                }
                case Tok::lower:
                    return Formula::atom(parse_atom());
                default:
                    fail("expected a formula", t);
                }
            }

            Literal parse_atom()
            {
                const Token &name = expect(Tok::lower);
                Literal l{true, name.text, parse_arguments()};
                check_arity(predicate_arity_, name, l.args.size(), "predicate");
                return l;
            }

            std::vector<Term> parse_arguments()
            {
                std::vector<Term> args;
                if (peek().kind != Tok::lparen)
                    return args;
                next();
                args.push_back(parse_term());
                while (peek().kind == Tok::comma)
                {
                    next();
                    args.push_back(parse_term());
                }
                expect(Tok::rparen);
                return args;
            }

            Term parse_term()
            {
                const Token &t = peek();
                if (t.kind == Tok::upper)
                {
                    next();
                    return Term::variable(variable_from_token(t.text));
                }
                if (t.kind == Tok::lower)
                {
                    next();
                    auto args = parse_arguments();
                    check_arity(function_arity_, t, args.size(), "function");
                    return Term::application(t.text, std::move(args));
                }
                fail("expected a term", t);
            }

            void check_arity(std::map<std::string, std::size_t> &table, const Token &at, std::size_t arity,
                             const char *what)
            {
                auto [it, fresh] = table.emplace(at.text, arity);
                if (!fresh && it->second != arity)
                    throw ParseError(std::string(what) + " '" + at.text + "' used with arity " +
                                         std::to_string(arity) + " and " + std::to_string(it->second),
                                     at.line, at.column);
            }

            std::vector<Token> toks_;
            std::size_t pos_ = 0;
            std::map<std::string, std::size_t> predicate_arity_;
            std::map<std::string, std::size_t> function_arity_;
        };

        // ---------- renaming apart ----------

        Term rename_term(const Term &t, const std::map<Var, Var> &ren)
        {
            if (t.is_variable())
            {
                auto it = ren.find(t.var());
                return it == ren.end() ? t : Term::variable(it->second);
            }
            if (t.is_ground())
                return t;
            std::vector<Term> args;
            for (const auto &a : t.args())
                args.push_back(rename_term(a, ren));
            return Term::application(t.symbol(), std::move(args));
        }

        void collect_all_names(const Formula &f, std::set<Var> &out)
        {
            switch (f.kind())
            {
            case Formula::Kind::atom:
                collect_variables(f.atom_literal(), out);
                return;
            case Formula::Kind::negation:
                collect_all_names(f.body(), out);
                return;
            case Formula::Kind::forall:
            case Formula::Kind::exists:
                out.insert(f.bound());
                collect_all_names(f.body(), out);
                return;
            default:
                collect_all_names(f.lhs(), out);
                collect_all_names(f.rhs(), out);
            }
        }

        class Renamer
        {
        public:
            explicit Renamer(const Formula &f)
            {
                collect_all_names(f, taken_);
                for (const auto &v : free_variables(f))
                    claimed_.insert(v);
            }

            Formula run(const Formula &f, std::map<Var, Var> ren)
            {
                switch (f.kind())
                {
                case Formula::Kind::atom:
                {
                    Literal l = f.atom_literal();
                    for (auto &a : l.args)
                        a = rename_term(a, ren);
                    return Formula::atom(std::move(l));
                }
                case Formula::Kind::negation:
                    return Formula::negation(run(f.body(), ren));
                case Formula::Kind::forall:
                case Formula::Kind::exists:
                {
                    Var v = f.bound();
                    if (!claimed_.insert(v).second)
                    {
                        Var fresh = pick_fresh(v);
                        claimed_.insert(fresh);
                        ren[v] = fresh;
                        v = fresh;
                    }
                    else
                        ren.erase(v);
                    return Formula::quantified(f.kind(), v, run(f.body(), ren));
                }
                default:
                    return Formula::binary(f.kind(), run(f.lhs(), ren), run(f.rhs(), ren));
                }
            }

        private:
            Var pick_fresh(const Var &v)
            {
                std::string base = v.index ? v.name + std::to_string(v.index) : v.name;
                for (int k = 1;; ++k)
                {
                    Var cand{base + std::to_string(k), 0};
                    if (!taken_.contains(cand) && !claimed_.contains(cand))
                    {
                        taken_.insert(cand);
                        return cand;
                    }
                }
            }

            std::set<Var> taken_;
            std::set<Var> claimed_;
        };

    } // namespace

    Formula parse_formula(std::string_view text)
    {
        Parser p(text);
        Formula f = p.parse_document();
        Renamer r(f);
        return r.run(f, {});
    }

    Term parse_term(std::string_view text)
    {
        Parser p(text);
        return p.parse_single_term();
    }

    Literal parse_literal(std::string_view text)
    {
        Parser p(text);
        return p.parse_single_literal();
    }

} // namespace fcm
