#include "vecr/parser.hpp"

#include <cctype>
#include <optional>

namespace vecr {

namespace {

enum class Tok {
    End,
    Lambda,
    Dot,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Colon,
    Arrow,
    Forall,
    Var,
    TVar,
    GVar,
    Int,
    Sqrt2,
    LBracket,
    RBracket,
    Comma,
    Semi,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line, col, msg); }

    bool starts_with(const char* s) const {
        return src.compare(pos, std::char_traits<char>::length(s), s) == 0;
    }

    void advance_bytes(size_t n) {
        for (size_t i = 0; i < n; i++) {
            if (src[pos] == '\n') {
                line++;
                col = 1;
            } else {
                col++;
            }
            pos++;
        }
    }

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos < src.size()) {
            char c = src[pos];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance_bytes(1);
                continue;
            }
            if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
                while (pos < src.size() && src[pos] != '\n') advance_bytes(1);
                continue;
            }
            int tl = line, tc = col;
            auto push = [&](Tok k, std::string text, size_t nbytes) {
                out.push_back({k, std::move(text), tl, tc});
                advance_bytes(nbytes);
            };
            if (starts_with("\xce\xbb")) {  // lambda
                push(Tok::Lambda, "\\", 2);
                continue;
            }
            if (starts_with("\xc2\xb7")) {  // middle dot
                push(Tok::Star, "*", 2);
                continue;
            }
            if (starts_with("\xe2\x88\x80")) {  // forall
                push(Tok::Forall, "forall", 3);
                continue;
            }
            if (starts_with("\xe2\x86\x92")) {  // arrow
                push(Tok::Arrow, "->", 3);
                continue;
            }
            if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
                push(Tok::Arrow, "->", 2);
                continue;
            }
            switch (c) {
                case '\\': push(Tok::Lambda, "\\", 1); continue;
                case '.': push(Tok::Dot, ".", 1); continue;
                case '(': push(Tok::LParen, "(", 1); continue;
                case ')': push(Tok::RParen, ")", 1); continue;
                case '+': push(Tok::Plus, "+", 1); continue;
                case '-': push(Tok::Minus, "-", 1); continue;
                case '*': push(Tok::Star, "*", 1); continue;
                case '/': push(Tok::Slash, "/", 1); continue;
                case ':': push(Tok::Colon, ":", 1); continue;
                case '[': push(Tok::LBracket, "[", 1); continue;
                case ']': push(Tok::RBracket, "]", 1); continue;
                case ',': push(Tok::Comma, ",", 1); continue;
                case ';': push(Tok::Semi, ";", 1); continue;
                default: break;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = pos;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                    advance_bytes(1);
                out.push_back({Tok::Int, src.substr(start, pos - start), tl, tc});
                continue;
            }
            if (c == '%') {
                advance_bytes(1);
                if (pos >= src.size() || !std::isalpha(static_cast<unsigned char>(src[pos])))
                    fail("expected identifier after '%'");
                size_t start = pos;
                while (pos < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                        src[pos] == '\''))
                    advance_bytes(1);
                out.push_back({Tok::GVar, src.substr(start, pos - start), tl, tc});
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                size_t start = pos;
                while (pos < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                        src[pos] == '\''))
                    advance_bytes(1);
                std::string word = src.substr(start, pos - start);
                if (word == "forall") {
                    out.push_back({Tok::Forall, word, tl, tc});
                } else if (word == "sqrt2") {
                    out.push_back({Tok::Sqrt2, word, tl, tc});
                } else if (std::isupper(static_cast<unsigned char>(word[0]))) {
                    out.push_back({Tok::TVar, word, tl, tc});
                } else {
                    out.push_back({Tok::Var, word, tl, tc});
                }
                continue;
            }
            fail("unexpected character '" + std::string(1, c) + "'");
        }
        out.push_back({Tok::End, "", line, col});
        return out;
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t pos = 0;
    std::vector<std::string> term_env;  // innermost binder last
    std::vector<TyVar> type_env;
    const Prelude* prelude = nullptr;

    explicit Parser(const std::string& text, const Prelude* pre = nullptr)
        : toks(Lexer(text).run()), prelude(pre) {}

    const TermPtr* prelude_lookup(const std::string& name) const {
        if (!prelude) return nullptr;
        for (auto& [n, def] : *prelude)
            if (n == name) return &def;
        return nullptr;
    }

    const Token& peek(int ahead = 0) const {
        size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    Tok kind(int ahead = 0) const { return peek(ahead).kind; }
    const Token& advance() { return toks[pos++]; }
    bool eat(Tok k) {
        if (kind() == k) {
            pos++;
            return true;
        }
        return false;
    }
    void expect(Tok k, const std::string& what) {
        if (!eat(k)) fail("expected " + what);
    }
    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = peek();
        throw ParseError(t.line, t.col, msg + (t.kind == Tok::End ? " at end of input"
                                                                  : " near '" + t.text + "'"));
    }

    // ---- scalars ------------------------------------------------------

    static bool scalar_start(Tok k) { return k == Tok::Int || k == Tok::Sqrt2 || k == Tok::Minus; }

    Scalar parse_sfactor() {
        if (eat(Tok::Minus)) return -parse_sfactor();
        if (eat(Tok::Sqrt2)) return Scalar::sqrt2();
        if (kind() == Tok::Int) return Scalar(mpq_class(advance().text), mpq_class(0));
        fail("expected scalar");
    }

    Scalar parse_sterm() {
        Scalar v = parse_sfactor();
        for (;;) {
            if (kind() == Tok::Star && scalar_start(kind(1))) {
                advance();
                v = v * parse_sfactor();
            } else if (kind() == Tok::Slash) {
                advance();
                Scalar d = parse_sfactor();
                if (d.is_zero()) throw ZeroDivide("division by zero in scalar literal");
                v = v / d;
            } else {
                return v;
            }
        }
    }

    Scalar parse_sexpr() {
        Scalar v = parse_sterm();
        for (;;) {
            if (kind() == Tok::Plus && scalar_start(kind(1))) {
                advance();
                v = v + parse_sterm();
            } else if (kind() == Tok::Minus && scalar_start(kind(1))) {
                advance();
                v = v - parse_sterm();
            } else {
                return v;
            }
        }
    }

    // A scalar coefficient layer: a scalar expression, then the '*' that
    // attaches it to the atom that follows. Backtracks if that shape is
    // not present.
    template <typename IsAtomStart>
    std::optional<Scalar> try_scalar_layer(IsAtomStart atom_start) {
        if (!scalar_start(kind())) return std::nullopt;
        size_t save = pos;
        Scalar v(0);
        try {
            v = parse_sexpr();
        } catch (const ParseError&) {
            pos = save;
            return std::nullopt;
        }
        if (kind() == Tok::Star && atom_start(peek(1))) {
            advance();
            return v;
        }
        pos = save;
        return std::nullopt;
    }

    // ---- terms --------------------------------------------------------

    bool term_atom_start(const Token& t) const {
        if (t.kind == Tok::Var || t.kind == Tok::Lambda || t.kind == Tok::LParen) return true;
        // An uppercase name is a term atom only when the prelude defines it.
        return t.kind == Tok::TVar && prelude_lookup(t.text) != nullptr;
    }

    TermPtr parse_atom() {
        if (kind() == Tok::Var) {
            const std::string& name = advance().text;
            for (int i = static_cast<int>(term_env.size()) - 1; i >= 0; i--) {
                if (term_env[static_cast<size_t>(i)] == name)
                    return bvar(static_cast<int>(term_env.size()) - 1 - i);
            }
            if (const TermPtr* def = prelude_lookup(name)) return *def;
            return fvar(name);
        }
        if (kind() == Tok::TVar && prelude_lookup(peek().text)) {
            return *prelude_lookup(advance().text);
        }
        if (eat(Tok::Lambda)) {
            if (kind() != Tok::Var) fail("expected binder name");
            std::string name = advance().text;
            UnitPtr ann;
            if (eat(Tok::Colon)) ann = parse_unit_atom();
            expect(Tok::Dot, "'.'");
            term_env.push_back(name);
            TermPtr body = parse_sum();
            term_env.pop_back();
            return abs(name, ann, body);
        }
        if (eat(Tok::LParen)) {
            TermPtr t = parse_sum();
            expect(Tok::RParen, "')'");
            return t;
        }
        fail("expected term");
    }

    TermPtr parse_chain() {
        TermPtr t = parse_atom();
        while (term_atom_start(peek())) t = app(t, parse_atom());
        return t;
    }

    TermPtr parse_scaled() {
        auto atom_start = [this](const Token& t) { return term_atom_start(t); };
        std::vector<Scalar> layers;
        while (auto k = try_scalar_layer(atom_start)) layers.push_back(*k);
        if (!layers.empty() && !term_atom_start(peek())) fail("expected term after scalar");
        TermPtr t = parse_chain();
        for (auto it = layers.rbegin(); it != layers.rend(); ++it) t = scale(*it, t);
        return t;
    }

    TermPtr parse_sum() {
        std::vector<TermPtr> parts{parse_scaled()};
        while (eat(Tok::Plus)) parts.push_back(parse_scaled());
        return sum(std::move(parts));
    }

    // ---- types --------------------------------------------------------

    static bool type_atom_start(const Token& t) {
        Tok k = t.kind;
        return k == Tok::TVar || k == Tok::GVar || k == Tok::Forall || k == Tok::LParen;
    }

    UnitPtr require_unit(const TypePtr& t, const char* where) {
        if (t->kind == TypeKind::Unit) return t->unit;
        if (t->kind == TypeKind::BGVar || t->kind == TypeKind::FGVar)
            throw SortError(std::string("general variable in ") + where + " position");
        throw SortError(std::string("general type in ") + where + " position");
    }

    TypePtr resolve_tyvar(const std::string& name, VarSort sort) {
        for (int i = static_cast<int>(type_env.size()) - 1; i >= 0; i--) {
            const TyVar& v = type_env[static_cast<size_t>(i)];
            if (v.name == name && v.sort == sort) {
                int idx = static_cast<int>(type_env.size()) - 1 - i;
                return sort == VarSort::Unit ? tunit(ubvar(idx)) : tgvar_b(idx);
            }
        }
        return sort == VarSort::Unit ? tunit(ufvar(name)) : tgvar_f(name);
    }

    TypePtr parse_tatom() {
        TypePtr core;
        if (kind() == Tok::TVar) {
            core = resolve_tyvar(advance().text, VarSort::Unit);
        } else if (kind() == Tok::GVar) {
            core = resolve_tyvar(advance().text, VarSort::General);
        } else if (eat(Tok::Forall)) {
            std::vector<TyVar> binders;
            while (kind() == Tok::TVar || kind() == Tok::GVar) {
                binders.push_back({peek().text,
                                   kind() == Tok::TVar ? VarSort::Unit : VarSort::General});
                advance();
            }
            if (binders.empty()) fail("expected type variable after forall");
            expect(Tok::Dot, "'.'");
            for (auto& b : binders) type_env.push_back(b);
            TypePtr body = parse_tatom();
            UnitPtr u = require_unit(body, "forall-body");
            for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
                type_env.pop_back();
                u = forall(it->sort, it->name, u);
            }
            core = tunit(u);
        } else if (eat(Tok::LParen)) {
            core = parse_type_expr();
            expect(Tok::RParen, "')'");
        } else {
            fail("expected type");
        }
        if (eat(Tok::Arrow)) {
            UnitPtr dom = require_unit(core, "arrow-domain");
            TypePtr cod = parse_type_expr();
            return tunit(arrow(dom, cod));
        }
        return core;
    }

    TypePtr parse_tscaled() {
        std::vector<Scalar> layers;
        while (auto k = try_scalar_layer(type_atom_start)) layers.push_back(*k);
        if (!layers.empty() && !type_atom_start(peek())) fail("expected type after scalar");
        TypePtr t = parse_tatom();
        for (auto it = layers.rbegin(); it != layers.rend(); ++it) t = tscale(*it, t);
        return t;
    }

    TypePtr parse_type_expr() {
        std::vector<TypePtr> parts{parse_tscaled()};
        while (eat(Tok::Plus)) parts.push_back(parse_tscaled());
        return tsum(std::move(parts));
    }

    // Binder annotations take a tatom (so an arrow or forall works bare,
    // and anything general is a sort error).
    UnitPtr parse_unit_atom() {
        TypePtr t = parse_tatom();
        return require_unit(t, "binder-annotation");
    }

    // ---- literals -----------------------------------------------------

    std::vector<Scalar> parse_row(Tok end1, Tok end2) {
        std::vector<Scalar> row{parse_sexpr()};
        while (eat(Tok::Comma)) row.push_back(parse_sexpr());
        if (kind() != end1 && kind() != end2) fail("expected separator");
        return row;
    }

    void done() {
        if (kind() != Tok::End) fail("trailing input");
    }
};

}  // namespace

TermPtr parse_term(const std::string& text, const Prelude* prelude) {
    Parser p(text, prelude);
    TermPtr t = p.parse_sum();
    p.done();
    return t;
}

TypePtr parse_type(const std::string& text) {
    Parser p(text);
    TypePtr t = p.parse_type_expr();
    p.done();
    return t;
}

UnitPtr parse_unit_type(const std::string& text) {
    Parser p(text);
    TypePtr t = p.parse_type_expr();
    p.done();
    if (t->kind != TypeKind::Unit) throw SortError("expected a unit type");
    return t->unit;
}

std::vector<std::vector<Scalar>> parse_matrix_literal(const std::string& text) {
    Parser p(text);
    p.expect(Tok::LBracket, "'['");
    std::vector<std::vector<Scalar>> rows;
    rows.push_back(p.parse_row(Tok::Semi, Tok::RBracket));
    while (p.eat(Tok::Semi)) rows.push_back(p.parse_row(Tok::Semi, Tok::RBracket));
    p.expect(Tok::RBracket, "']'");
    p.done();
    for (auto& r : rows)
        if (r.size() != rows[0].size())
            throw Error("ParseError", "matrix rows have unequal lengths");
    return rows;
}

std::vector<Scalar> parse_vector_literal(const std::string& text) {
    Parser p(text);
    p.expect(Tok::LParen, "'('");
    std::vector<Scalar> entries = p.parse_row(Tok::RParen, Tok::RParen);
    p.expect(Tok::RParen, "')'");
    p.done();
    return entries;
}

bool has_unicode_syntax(const std::string& text) {
    for (const char* u : {"\xce\xbb", "\xc2\xb7", "\xe2\x88\x80", "\xe2\x86\x92"}) {
        if (text.find(u) != std::string::npos) return true;
    }
    return false;
}

}  // namespace vecr
