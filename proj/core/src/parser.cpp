#include "minimosa/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace minimosa {
namespace {

enum class Tok : uint8_t {
    End, Ident, IntLit, FloatLit,
    KwClass, KwField, KwCtor, KwMethod, KwVar, KwIf, KwElse, KwWhile, KwFor,
    KwReturn, KwNew, KwCall, KwTrue, KwFalse, KwNull, KwVoid, KwInt, KwBool,
    KwFloat, KwThis,
    LBrace, RBrace, LParen, RParen, LBracket, RBracket, Semi, Comma, Dot,
    Assign, Plus, Minus, Star, Slash, Percent, Amp, Pipe, Caret, Shl, Shr,
    Lt, Le, Gt, Ge, EqEq, Ne, AndAnd, OrOr, Bang, Tilde,
};

struct Token {
    Tok kind = Tok::End;
    int line = 1;
    int col = 1;
    std::string text;
    int64_t intValue = 0;
    double floatValue = 0.0;
};

struct ParseError {
    Diagnostic diag;
};

[[noreturn]] void fail(int line, int col, std::string msg) {
    throw ParseError{Diagnostic{line, col, std::move(msg)}};
}

const std::unordered_map<std::string, Tok>& keywords() {
    static const std::unordered_map<std::string, Tok> kw = {
        {"class", Tok::KwClass},   {"field", Tok::KwField},
        {"ctor", Tok::KwCtor},     {"method", Tok::KwMethod},
        {"var", Tok::KwVar},       {"if", Tok::KwIf},
        {"else", Tok::KwElse},     {"while", Tok::KwWhile},
        {"for", Tok::KwFor},       {"return", Tok::KwReturn},
        {"new", Tok::KwNew},       {"call", Tok::KwCall},
        {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
        {"null", Tok::KwNull},     {"void", Tok::KwVoid},
        {"int", Tok::KwInt},       {"bool", Tok::KwBool},
        {"float", Tok::KwFloat},   {"this", Tok::KwThis},
    };
    return kw;
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skipWhitespaceAndComments();
            Token t;
            t.line = line_;
            t.col = col_;
            if (eof()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = peek();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                lexWord(t);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lexNumber(t);
            } else {
                lexPunct(t);
            }
            out.push_back(std::move(t));
        }
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            line_++;
            col_ = 1;
        } else {
            col_++;
        }
        return c;
    }

    void skipWhitespaceAndComments() {
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                int line = line_, col = col_;
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (eof()) fail(line, col, "unterminated block comment");
                    advance();
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    void lexWord(Token& t) {
        std::string word;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            word += advance();
        auto it = keywords().find(word);
        t.kind = it != keywords().end() ? it->second : Tok::Ident;
        t.text = std::move(word);
    }

    void lexNumber(Token& t) {
        std::string digits;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        bool isFloat = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            isFloat = true;
            digits += advance();
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            char c1 = peek(1);
            char c2 = peek(2);
            if (std::isdigit(static_cast<unsigned char>(c1)) ||
                ((c1 == '+' || c1 == '-') && std::isdigit(static_cast<unsigned char>(c2)))) {
                isFloat = true;
                digits += advance();
                if (peek() == '+' || peek() == '-') digits += advance();
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
            }
        }
        if (isFloat) {
            t.kind = Tok::FloatLit;
            t.floatValue = std::strtod(digits.c_str(), nullptr);
        } else {
            t.kind = Tok::IntLit;
            uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec != std::errc() || v > 9223372036854775807ULL)
                fail(t.line, t.col, "integer literal out of range");
            t.intValue = static_cast<int64_t>(v);
        }
        t.text = std::move(digits);
    }

    void lexPunct(Token& t) {
        char c = advance();
        auto two = [&](char second, Tok yes, Tok no) {
            if (peek() == second) {
                advance();
                t.kind = yes;
            } else {
                t.kind = no;
            }
        };
        switch (c) {
            case '{': t.kind = Tok::LBrace; break;
            case '}': t.kind = Tok::RBrace; break;
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '[': t.kind = Tok::LBracket; break;
            case ']': t.kind = Tok::RBracket; break;
            case ';': t.kind = Tok::Semi; break;
            case ',': t.kind = Tok::Comma; break;
            case '.': t.kind = Tok::Dot; break;
            case '+': t.kind = Tok::Plus; break;
            case '-': t.kind = Tok::Minus; break;
            case '*': t.kind = Tok::Star; break;
            case '/': t.kind = Tok::Slash; break;
            case '%': t.kind = Tok::Percent; break;
            case '^': t.kind = Tok::Caret; break;
            case '~': t.kind = Tok::Tilde; break;
            case '=': two('=', Tok::EqEq, Tok::Assign); break;
            case '!': two('=', Tok::Ne, Tok::Bang); break;
            case '&': two('&', Tok::AndAnd, Tok::Amp); break;
            case '|': two('|', Tok::OrOr, Tok::Pipe); break;
            case '<':
                if (peek() == '<') {
                    advance();
                    t.kind = Tok::Shl;
                } else {
                    two('=', Tok::Le, Tok::Lt);
                }
                break;
            case '>':
                if (peek() == '>') {
                    advance();
                    t.kind = Tok::Shr;
                } else {
                    two('=', Tok::Ge, Tok::Gt);
                }
                break;
            default:
                fail(t.line, t.col, std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
        // Classes may reference each other in any order, so collect every
        // declared class name up front (classes only appear at top level).
        for (size_t i = 0; i + 1 < toks_.size(); ++i) {
            if (toks_[i].kind == Tok::KwClass && toks_[i + 1].kind == Tok::Ident) {
                const Token& name = toks_[i + 1];
                if (classNames_.count(name.text))
                    fail(name.line, name.col, "duplicate class '" + name.text + "'");
                classNames_[name.text] = static_cast<int>(classNames_.size());
            }
        }
    }

    Program run() {
        Program p;
        if (at(Tok::End)) fail(cur().line, cur().col, "expected at least one class");
        while (!at(Tok::End)) p.classes.push_back(parseClass());
        p.exprCount = nextExprId_;
        p.stmtCount = nextStmtId_;
        return p;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t ahead = 1) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(Tok k) const { return cur().kind == k; }
    Token take() { return toks_[pos_++]; }
    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(cur().line, cur().col, std::string("expected ") + what);
        return take();
    }

    ExprPtr makeExpr(ExprKind kind, const Token& t) {
        auto e = std::make_unique<Expr>();
        e->kind = kind;
        e->id = nextExprId_++;
        e->line = t.line;
        e->col = t.col;
        return e;
    }
    StmtPtr makeStmt(StmtKind kind, const Token& t) {
        auto s = std::make_unique<Stmt>();
        s->kind = kind;
        s->id = nextStmtId_++;
        s->line = t.line;
        return s;
    }

    Type parseType() {
        Token t = take();
        switch (t.kind) {
            case Tok::KwBool: return Type::boolType();
            case Tok::KwFloat: return Type::floatType();
            case Tok::KwInt:
                if (at(Tok::LBracket)) {
                    take();
                    expect(Tok::RBracket, "']'");
                    return Type::intArray();
                }
                return Type::intType();
            case Tok::Ident: {
                auto it = classNames_.find(t.text);
                if (it == classNames_.end())
                    fail(t.line, t.col, "unresolved class '" + t.text + "'");
                return Type::object(it->second);
            }
            default:
                fail(t.line, t.col, "expected type");
        }
    }

    ClassDef parseClass() {
        Token kw = expect(Tok::KwClass, "'class'");
        Token name = expect(Tok::Ident, "class name");
        ClassDef cls;
        cls.name = name.text;
        cls.line = kw.line;
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            if (at(Tok::KwField)) {
                Token fkw = take();
                FieldDef f;
                f.type = parseType();
                f.name = expect(Tok::Ident, "field name").text;
                f.line = fkw.line;
                expect(Tok::Semi, "';'");
                cls.fields.push_back(std::move(f));
            } else if (at(Tok::KwCtor)) {
                Token mkw = take();
                MethodDef m;
                m.name = "ctor";
                m.isCtor = true;
                m.returnType = Type::voidType();
                m.line = mkw.line;
                parseParamsAndBody(m);
                cls.methods.push_back(std::move(m));
            } else if (at(Tok::KwMethod)) {
                Token mkw = take();
                MethodDef m;
                m.line = mkw.line;
                if (at(Tok::KwVoid)) {
                    take();
                    m.returnType = Type::voidType();
                } else {
                    m.returnType = parseType();
                }
                m.name = expect(Tok::Ident, "method name").text;
                parseParamsAndBody(m);
                cls.methods.push_back(std::move(m));
            } else {
                fail(cur().line, cur().col, "expected 'field', 'ctor' or 'method'");
            }
        }
        take(); // '}'
        return cls;
    }

    void parseParamsAndBody(MethodDef& m) {
        expect(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            while (true) {
                Type ty = parseType();
                Token pname = expect(Tok::Ident, "parameter name");
                m.localTypes.push_back(ty);
                m.localNames.push_back(pname.text);
                m.numParams++;
                if (at(Tok::Comma)) {
                    take();
                    continue;
                }
                break;
            }
        }
        expect(Tok::RParen, "')'");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) m.body.push_back(parseStmt());
        take();
    }

    std::vector<StmtPtr> parseBlock() {
        expect(Tok::LBrace, "'{'");
        std::vector<StmtPtr> body;
        while (!at(Tok::RBrace)) body.push_back(parseStmt());
        take();
        return body;
    }

    StmtPtr parseStmt() {
        switch (cur().kind) {
            case Tok::KwVar: return parseVarDecl(true);
            case Tok::KwIf: return parseIf();
            case Tok::KwWhile: return parseWhile();
            case Tok::KwFor: return parseFor();
            case Tok::KwReturn: return parseReturn();
            case Tok::KwCall: {
                Token t = cur();
                auto s = makeStmt(StmtKind::ExprStmt, t);
                s->expr = parseExpr();
                if (s->expr->kind != ExprKind::Call)
                    fail(t.line, t.col, "expected method call statement");
                expect(Tok::Semi, "';'");
                return s;
            }
            case Tok::Ident:
            case Tok::KwThis:
                return parseAssign(true);
            default:
                fail(cur().line, cur().col, "expected statement");
        }
    }

    StmtPtr parseVarDecl(bool semi) {
        Token kw = expect(Tok::KwVar, "'var'");
        auto s = makeStmt(StmtKind::VarDecl, kw);
        s->declType = parseType();
        s->name = expect(Tok::Ident, "variable name").text;
        if (at(Tok::Assign)) {
            take();
            s->expr = parseExpr();
        }
        if (semi) expect(Tok::Semi, "';'");
        return s;
    }

    StmtPtr parseAssign(bool semi) {
        Token first = cur();
        ExprPtr target = parsePostfix();
        if (target->kind != ExprKind::LocalRef && target->kind != ExprKind::FieldRef &&
            target->kind != ExprKind::ArrayIndex)
            fail(first.line, first.col, "invalid assignment target");
        auto s = makeStmt(StmtKind::Assign, first);
        expect(Tok::Assign, "'='");
        s->lhs = std::move(target);
        s->expr = parseExpr();
        if (semi) expect(Tok::Semi, "';'");
        return s;
    }

    StmtPtr parseIf() {
        Token kw = take();
        auto s = makeStmt(StmtKind::If, kw);
        expect(Tok::LParen, "'('");
        s->expr = parseExpr();
        expect(Tok::RParen, "')'");
        s->body = parseBlock();
        if (at(Tok::KwElse)) {
            take();
            if (at(Tok::KwIf)) {
                s->elseBody.push_back(parseIf());
            } else {
                s->elseBody = parseBlock();
            }
        }
        return s;
    }

    StmtPtr parseWhile() {
        Token kw = take();
        auto s = makeStmt(StmtKind::While, kw);
        expect(Tok::LParen, "'('");
        s->expr = parseExpr();
        expect(Tok::RParen, "')'");
        s->body = parseBlock();
        return s;
    }

    StmtPtr parseFor() {
        Token kw = take();
        auto s = makeStmt(StmtKind::For, kw);
        expect(Tok::LParen, "'('");
        if (!at(Tok::Semi)) {
            s->init = at(Tok::KwVar) ? parseVarDecl(false) : parseAssign(false);
        }
        expect(Tok::Semi, "';'");
        s->expr = parseExpr();
        expect(Tok::Semi, "';'");
        if (!at(Tok::RParen)) {
            if (at(Tok::KwCall)) {
                Token t = cur();
                auto u = makeStmt(StmtKind::ExprStmt, t);
                u->expr = parseExpr();
                if (u->expr->kind != ExprKind::Call)
                    fail(t.line, t.col, "expected method call");
                s->update = std::move(u);
            } else {
                s->update = parseAssign(false);
            }
        }
        expect(Tok::RParen, "')'");
        s->body = parseBlock();
        return s;
    }

    StmtPtr parseReturn() {
        Token kw = take();
        auto s = makeStmt(StmtKind::Return, kw);
        if (!at(Tok::Semi)) s->expr = parseExpr();
        expect(Tok::Semi, "';'");
        return s;
    }

    // Expression grammar, loosest to tightest binding:
    //   || > && > | > ^ > & > ==,!= > <,<=,>,>= > <<,>> > +,- > *,/,% > unary > postfix
    ExprPtr parseExpr() { return parseOr(); }

    ExprPtr parseBinaryLevel(ExprPtr (Parser::*next)(),
                             std::initializer_list<std::pair<Tok, BinaryOp>> ops) {
        ExprPtr lhs = (this->*next)();
        while (true) {
            bool matched = false;
            for (auto [tok, op] : ops) {
                if (at(tok)) {
                    Token t = take();
                    auto e = makeExpr(ExprKind::Binary, t);
                    e->bop = op;
                    e->lhs = std::move(lhs);
                    e->rhs = (this->*next)();
                    lhs = std::move(e);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr parseOr() { return parseBinaryLevel(&Parser::parseAnd, {{Tok::OrOr, BinaryOp::Or}}); }
    ExprPtr parseAnd() { return parseBinaryLevel(&Parser::parseBitOr, {{Tok::AndAnd, BinaryOp::And}}); }
    ExprPtr parseBitOr() { return parseBinaryLevel(&Parser::parseBitXor, {{Tok::Pipe, BinaryOp::BitOr}}); }
    ExprPtr parseBitXor() { return parseBinaryLevel(&Parser::parseBitAnd, {{Tok::Caret, BinaryOp::BitXor}}); }
    ExprPtr parseBitAnd() { return parseBinaryLevel(&Parser::parseEquality, {{Tok::Amp, BinaryOp::BitAnd}}); }
    ExprPtr parseEquality() {
        return parseBinaryLevel(&Parser::parseRelational,
                                {{Tok::EqEq, BinaryOp::Eq}, {Tok::Ne, BinaryOp::Ne}});
    }
    ExprPtr parseRelational() {
        return parseBinaryLevel(&Parser::parseShift, {{Tok::Lt, BinaryOp::Lt},
                                                      {Tok::Le, BinaryOp::Le},
                                                      {Tok::Gt, BinaryOp::Gt},
                                                      {Tok::Ge, BinaryOp::Ge}});
    }
    ExprPtr parseShift() {
        return parseBinaryLevel(&Parser::parseAdditive,
                                {{Tok::Shl, BinaryOp::Shl}, {Tok::Shr, BinaryOp::Shr}});
    }
    ExprPtr parseAdditive() {
        return parseBinaryLevel(&Parser::parseMultiplicative,
                                {{Tok::Plus, BinaryOp::Add}, {Tok::Minus, BinaryOp::Sub}});
    }
    ExprPtr parseMultiplicative() {
        return parseBinaryLevel(&Parser::parseUnary, {{Tok::Star, BinaryOp::Mul},
                                                      {Tok::Slash, BinaryOp::Div},
                                                      {Tok::Percent, BinaryOp::Mod}});
    }

    ExprPtr parseUnary() {
        if (at(Tok::Minus) || at(Tok::Bang) || at(Tok::Tilde)) {
            Token t = take();
            auto e = makeExpr(ExprKind::Unary, t);
            e->uop = t.kind == Tok::Minus ? UnaryOp::Neg
                     : t.kind == Tok::Bang ? UnaryOp::Not
                                           : UnaryOp::BitNot;
            e->lhs = parseUnary();
            return e;
        }
        return parsePostfix();
    }

    ExprPtr parsePostfix() {
        ExprPtr e = parsePrimary();
        while (true) {
            if (at(Tok::Dot)) {
                Token t = take();
                Token name = expect(Tok::Ident, "field name");
                auto f = makeExpr(ExprKind::FieldRef, t);
                f->name = name.text;
                f->lhs = std::move(e);
                e = std::move(f);
            } else if (at(Tok::LBracket)) {
                Token t = take();
                auto ix = makeExpr(ExprKind::ArrayIndex, t);
                ix->lhs = std::move(e);
                ix->rhs = parseExpr();
                expect(Tok::RBracket, "']'");
                e = std::move(ix);
            } else {
                return e;
            }
        }
    }

    std::vector<ExprPtr> parseArgs() {
        expect(Tok::LParen, "'('");
        std::vector<ExprPtr> args;
        if (!at(Tok::RParen)) {
            while (true) {
                args.push_back(parseExpr());
                if (at(Tok::Comma)) {
                    take();
                    continue;
                }
                break;
            }
        }
        expect(Tok::RParen, "')'");
        return args;
    }

    ExprPtr parsePrimary() {
        Token t = cur();
        switch (t.kind) {
            case Tok::IntLit: {
                take();
                auto e = makeExpr(ExprKind::IntLit, t);
                e->intValue = t.intValue;
                return e;
            }
            case Tok::FloatLit: {
                take();
                auto e = makeExpr(ExprKind::FloatLit, t);
                e->floatValue = t.floatValue;
                return e;
            }
            case Tok::KwTrue:
            case Tok::KwFalse: {
                take();
                auto e = makeExpr(ExprKind::BoolLit, t);
                e->boolValue = t.kind == Tok::KwTrue;
                return e;
            }
            case Tok::KwNull:
                take();
                return makeExpr(ExprKind::NullLit, t);
            case Tok::KwThis:
                take();
                return makeExpr(ExprKind::ThisRef, t);
            case Tok::Ident: {
                take();
                auto e = makeExpr(ExprKind::LocalRef, t);
                e->name = t.text;
                return e;
            }
            case Tok::LParen: {
                take();
                ExprPtr e = parseExpr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::KwNew: {
                take();
                if (at(Tok::KwInt) && peek().kind == Tok::LBracket) {
                    take();
                    take();
                    auto e = makeExpr(ExprKind::NewArray, t);
                    e->lhs = parseExpr();
                    expect(Tok::RBracket, "']'");
                    return e;
                }
                Token name = expect(Tok::Ident, "class name");
                auto e = makeExpr(ExprKind::NewObject, t);
                e->name = name.text;
                e->args = parseArgs();
                return e;
            }
            case Tok::KwCall: {
                take();
                Token recv = cur();
                ExprPtr object;
                if (at(Tok::KwThis)) {
                    take();
                    object = makeExpr(ExprKind::ThisRef, recv);
                } else {
                    Token id = expect(Tok::Ident, "receiver");
                    object = makeExpr(ExprKind::LocalRef, recv);
                    object->name = id.text;
                }
                expect(Tok::Dot, "'.'");
                Token mname = expect(Tok::Ident, "method name");
                auto e = makeExpr(ExprKind::Call, t);
                e->name = mname.text;
                e->object = std::move(object);
                e->args = parseArgs();
                return e;
            }
            default:
                fail(t.line, t.col, "expected expression");
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    int nextExprId_ = 0;
    int nextStmtId_ = 0;
    std::unordered_map<std::string, int> classNames_;
};

// Resolves names to slots/indices and types every expression, accumulating
// diagnostics instead of stopping at the first problem.
class Resolver {
public:
    Resolver(Program& p, std::vector<Diagnostic>& diags) : p_(p), diags_(diags) {}

    void run() {
        resolveSignatures();
        if (!diags_.empty()) return;
        for (size_t c = 0; c < p_.classes.size(); ++c)
            for (auto& m : p_.classes[c].methods) resolveMethod(static_cast<int>(c), m);
        p_.scopes.sameTypeSlots.resize(p_.exprCount);
        for (auto& [id, slots] : scopeAlternatives_) p_.scopes.sameTypeSlots[id] = std::move(slots);
        harvestConstants();
    }

private:
    void error(int line, int col, std::string msg) {
        diags_.push_back(Diagnostic{line, col, std::move(msg)});
    }

    void resolveSignatures() {
        for (size_t c = 0; c < p_.classes.size(); ++c) {
            auto& cls = p_.classes[c];
            std::unordered_set<std::string> fieldNames, methodNames;
            for (auto& f : cls.fields)
                if (!fieldNames.insert(f.name).second)
                    error(f.line, 1, "duplicate field '" + f.name + "'");
            int ctors = 0;
            for (auto& m : cls.methods) {
                if (m.isCtor) {
                    ctors++;
                    if (ctors > 1)
                        error(m.line, 1, "class '" + cls.name + "' has multiple constructors");
                } else if (!methodNames.insert(m.name).second) {
                    error(m.line, 1, "duplicate method '" + m.name + "'");
                }
            }
            if (ctors == 0) {
                MethodDef ctor;
                ctor.name = "ctor";
                ctor.isCtor = true;
                ctor.returnType = Type::voidType();
                ctor.line = cls.line;
                cls.methods.push_back(std::move(ctor));
            }
            for (size_t m = 0; m < cls.methods.size(); ++m) {
                auto& md = cls.methods[m];
                md.classIndex = static_cast<int>(c);
                md.globalIndex = static_cast<int>(p_.methodTable.size());
                md.qualifiedName = cls.name + "." + md.name;
                if (md.isCtor) cls.ctorLocal = static_cast<int>(m);
                p_.methodTable.emplace_back(static_cast<int>(c), static_cast<int>(m));
            }
        }
    }

    struct Scope {
        std::vector<std::pair<std::string, int>> names; // name -> slot, innermost last
        std::vector<size_t> marks;
    };

    void resolveMethod(int classIdx, MethodDef& m) {
        method_ = &m;
        classIdx_ = classIdx;
        scope_ = Scope{};
        for (int i = 0; i < m.numParams; ++i) {
            if (lookup(m.localNames[i]) >= 0)
                error(m.line, 1, "duplicate parameter '" + m.localNames[i] + "'");
            scope_.names.emplace_back(m.localNames[i], i);
        }
        resolveBlock(m.body); // non-void fall-through yields the default value at runtime
    }

    int lookup(const std::string& name) const {
        for (auto it = scope_.names.rbegin(); it != scope_.names.rend(); ++it)
            if (it->first == name) return it->second;
        return -1;
    }

    void pushScope() { scope_.marks.push_back(scope_.names.size()); }
    void popScope() {
        scope_.names.resize(scope_.marks.back());
        scope_.marks.pop_back();
    }

    bool assignable(const Type& dst, const Type& src) const {
        if (dst == src) return true;
        if (dst.kind == TypeKind::Float && src.kind == TypeKind::Int) return true;
        if (src.kind == TypeKind::Null &&
            (dst.kind == TypeKind::Object || dst.kind == TypeKind::IntArray))
            return true;
        return false;
    }

    // Returns true when every path through the statement list returns.
    bool resolveBlock(std::vector<StmtPtr>& body) {
        pushScope();
        bool returned = false;
        for (auto& s : body) {
            if (returned) {
                error(s->line, 1, "unreachable statement");
                break;
            }
            returned = resolveStmt(*s);
        }
        popScope();
        return returned;
    }

    bool resolveStmt(Stmt& s) {
        switch (s.kind) {
            case StmtKind::VarDecl: {
                if (s.expr) {
                    resolveExpr(*s.expr, false);
                    if (s.expr->type.kind != TypeKind::Void &&
                        !assignable(s.declType, s.expr->type))
                        error(s.line, 1, "type mismatch: cannot initialize " +
                                             p_.typeName(s.declType) + " from " +
                                             p_.typeName(s.expr->type));
                }
                s.slot = static_cast<int>(method_->localTypes.size());
                method_->localTypes.push_back(s.declType);
                method_->localNames.push_back(s.name);
                scope_.names.emplace_back(s.name, s.slot);
                return false;
            }
            case StmtKind::Assign: {
                resolveExpr(*s.lhs, true);
                resolveExpr(*s.expr, false);
                if (s.lhs->type.kind != TypeKind::Void && s.expr->type.kind != TypeKind::Void &&
                    !assignable(s.lhs->type, s.expr->type))
                    error(s.line, 1, "type mismatch: cannot assign " + p_.typeName(s.expr->type) +
                                         " to " + p_.typeName(s.lhs->type));
                return false;
            }
            case StmtKind::If: {
                resolveCondition(s);
                bool thenReturns = resolveBlock(s.body);
                bool elseReturns = !s.elseBody.empty() && resolveBlock(s.elseBody);
                return thenReturns && elseReturns;
            }
            case StmtKind::While: {
                resolveCondition(s);
                resolveBlock(s.body);
                return false;
            }
            case StmtKind::For: {
                pushScope();
                if (s.init) resolveStmt(*s.init);
                resolveCondition(s);
                if (s.update) resolveStmt(*s.update);
                resolveBlock(s.body);
                popScope();
                return false;
            }
            case StmtKind::Return: {
                if (s.expr) {
                    resolveExpr(*s.expr, false);
                    if (method_->returnType.kind == TypeKind::Void)
                        error(s.line, 1, "void method cannot return a value");
                    else if (s.expr->type.kind != TypeKind::Void &&
                             !assignable(method_->returnType, s.expr->type))
                        error(s.line, 1, "type mismatch: cannot return " +
                                             p_.typeName(s.expr->type) +
                                             " from method returning " +
                                             p_.typeName(method_->returnType));
                } else if (method_->returnType.kind != TypeKind::Void) {
                    error(s.line, 1, "non-void method must return a value");
                }
                return true;
            }
            case StmtKind::ExprStmt:
                resolveExpr(*s.expr, false);
                return false;
        }
        return false;
    }

    void resolveCondition(Stmt& s) {
        resolveExpr(*s.expr, false);
        if (s.expr->type.kind != TypeKind::Void && s.expr->type.kind != TypeKind::Bool)
            error(s.expr->line, s.expr->col, "condition must be bool");
    }

    void resolveExpr(Expr& e, bool asLvalue) {
        switch (e.kind) {
            case ExprKind::IntLit: e.type = Type::intType(); return;
            case ExprKind::FloatLit: e.type = Type::floatType(); return;
            case ExprKind::BoolLit: e.type = Type::boolType(); return;
            case ExprKind::NullLit: e.type = Type::nullType(); return;
            case ExprKind::ThisRef:
                e.classIndex = classIdx_;
                e.type = Type::object(classIdx_);
                return;
            case ExprKind::LocalRef: {
                int slot = lookup(e.name);
                if (slot < 0) {
                    error(e.line, e.col, "unresolved name '" + e.name + "'");
                    e.type = Type::voidType();
                    return;
                }
                e.slot = slot;
                e.type = method_->localTypes[slot];
                if (!asLvalue) {
                    std::vector<int> alts;
                    for (const auto& [name, s] : scope_.names)
                        if (s != slot && method_->localTypes[s] == e.type) alts.push_back(s);
                    std::sort(alts.begin(), alts.end());
                    alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
                    if (!alts.empty()) scopeAlternatives_[e.id] = std::move(alts);
                }
                return;
            }
            case ExprKind::FieldRef: {
                resolveExpr(*e.lhs, false);
                const Type& bt = e.lhs->type;
                if (bt.kind == TypeKind::Void) {
                    e.type = Type::voidType();
                    return;
                }
                if (bt.kind != TypeKind::Object) {
                    error(e.line, e.col, "field access on non-object value");
                    e.type = Type::voidType();
                    return;
                }
                const auto& cls = p_.classes[bt.cls];
                for (size_t i = 0; i < cls.fields.size(); ++i) {
                    if (cls.fields[i].name == e.name) {
                        e.classIndex = bt.cls;
                        e.fieldIndex = static_cast<int>(i);
                        e.type = cls.fields[i].type;
                        return;
                    }
                }
                error(e.line, e.col, "unresolved field '" + e.name + "' in class " + cls.name);
                e.type = Type::voidType();
                return;
            }
            case ExprKind::ArrayIndex: {
                resolveExpr(*e.lhs, false);
                resolveExpr(*e.rhs, false);
                if (e.lhs->type.kind != TypeKind::Void && e.lhs->type.kind != TypeKind::IntArray)
                    error(e.line, e.col, "indexing a non-array value");
                if (e.rhs->type.kind != TypeKind::Void && e.rhs->type.kind != TypeKind::Int)
                    error(e.line, e.col, "array index must be int");
                e.type = Type::intType();
                return;
            }
            case ExprKind::Unary: {
                resolveExpr(*e.lhs, false);
                const Type& t = e.lhs->type;
                if (t.kind == TypeKind::Void) {
                    e.type = Type::voidType();
                    return;
                }
                switch (e.uop) {
                    case UnaryOp::Neg:
                        if (!t.isNumeric()) {
                            error(e.line, e.col, "operand of '-' must be numeric");
                            e.type = Type::voidType();
                        } else {
                            e.type = t;
                        }
                        return;
                    case UnaryOp::Not:
                        if (t.kind != TypeKind::Bool)
                            error(e.line, e.col, "operand of '!' must be bool");
                        e.type = Type::boolType();
                        return;
                    case UnaryOp::BitNot:
                        if (t.kind != TypeKind::Int)
                            error(e.line, e.col, "operand of '~' must be int");
                        e.type = Type::intType();
                        return;
                }
                return;
            }
            case ExprKind::Binary: return resolveBinary(e);
            case ExprKind::Call: {
                resolveExpr(*e.object, false);
                const Type& rt = e.object->type;
                if (rt.kind == TypeKind::Void) {
                    e.type = Type::voidType();
                    return;
                }
                if (rt.kind != TypeKind::Object) {
                    error(e.line, e.col, "method call on non-object value");
                    e.type = Type::voidType();
                    return;
                }
                const auto& cls = p_.classes[rt.cls];
                const MethodDef* target = nullptr;
                for (const auto& m : cls.methods)
                    if (!m.isCtor && m.name == e.name) target = &m;
                if (!target) {
                    error(e.line, e.col, "unresolved method '" + e.name + "' in class " + cls.name);
                    e.type = Type::voidType();
                    return;
                }
                e.classIndex = rt.cls;
                e.methodIndex = target->globalIndex;
                checkArgs(e, *target);
                e.type = target->returnType;
                return;
            }
            case ExprKind::NewObject: {
                int ci = p_.findClass(e.name);
                if (ci < 0) {
                    error(e.line, e.col, "unresolved class '" + e.name + "'");
                    e.type = Type::voidType();
                    return;
                }
                e.classIndex = ci;
                const auto& cls = p_.classes[ci];
                checkArgs(e, cls.methods[cls.ctorLocal]);
                e.type = Type::object(ci);
                return;
            }
            case ExprKind::NewArray: {
                resolveExpr(*e.lhs, false);
                if (e.lhs->type.kind != TypeKind::Void && e.lhs->type.kind != TypeKind::Int)
                    error(e.line, e.col, "array length must be int");
                e.type = Type::intArray();
                return;
            }
        }
    }

    void checkArgs(Expr& e, const MethodDef& m) {
        for (auto& a : e.args) resolveExpr(*a, false);
        if (static_cast<int>(e.args.size()) != m.numParams) {
            error(e.line, e.col, m.qualifiedName + " expects " + std::to_string(m.numParams) +
                                     " argument(s), got " + std::to_string(e.args.size()));
            return;
        }
        for (int i = 0; i < m.numParams; ++i) {
            const Type& at = e.args[i]->type;
            if (at.kind != TypeKind::Void && !assignable(m.localTypes[i], at))
                error(e.args[i]->line, e.args[i]->col,
                      "type mismatch in argument " + std::to_string(i + 1) + " of " +
                          m.qualifiedName);
        }
    }

    void resolveBinary(Expr& e) {
        resolveExpr(*e.lhs, false);
        resolveExpr(*e.rhs, false);
        const Type& a = e.lhs->type;
        const Type& b = e.rhs->type;
        if (a.kind == TypeKind::Void || b.kind == TypeKind::Void) {
            e.type = Type::voidType();
            return;
        }
        auto mismatch = [&] {
            error(e.line, e.col, std::string("invalid operands to '") + opToken(e.bop) + "' (" +
                                     p_.typeName(a) + ", " + p_.typeName(b) + ")");
            e.type = Type::voidType();
        };
        switch (e.bop) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
            case BinaryOp::Mul:
            case BinaryOp::Div:
                if (!a.isNumeric() || !b.isNumeric()) return mismatch();
                e.type = (a.kind == TypeKind::Float || b.kind == TypeKind::Float)
                             ? Type::floatType()
                             : Type::intType();
                return;
            case BinaryOp::Mod:
            case BinaryOp::BitAnd:
            case BinaryOp::BitOr:
            case BinaryOp::BitXor:
            case BinaryOp::Shl:
            case BinaryOp::Shr:
                if (a.kind != TypeKind::Int || b.kind != TypeKind::Int) return mismatch();
                e.type = Type::intType();
                return;
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
                if (!a.isNumeric() || !b.isNumeric()) return mismatch();
                e.type = Type::boolType();
                return;
            case BinaryOp::Eq:
            case BinaryOp::Ne: {
                bool ok = (a.isNumeric() && b.isNumeric()) ||
                          (a.kind == TypeKind::Bool && b.kind == TypeKind::Bool) ||
                          (a.isReference() && b.isReference() &&
                           (a == b || a.kind == TypeKind::Null || b.kind == TypeKind::Null));
                if (!ok) return mismatch();
                e.type = Type::boolType();
                return;
            }
            case BinaryOp::And:
            case BinaryOp::Or:
                if (a.kind != TypeKind::Bool || b.kind != TypeKind::Bool) return mismatch();
                e.type = Type::boolType();
                return;
        }
    }

    void harvestConstants() {
        std::vector<int64_t> ints;
        std::vector<double> floats;
        auto visitExpr = [&](const Expr& e, auto&& self) -> void {
            if (e.kind == ExprKind::IntLit) ints.push_back(e.intValue);
            if (e.kind == ExprKind::FloatLit) floats.push_back(e.floatValue);
            if (e.lhs) self(*e.lhs, self);
            if (e.rhs) self(*e.rhs, self);
            if (e.object) self(*e.object, self);
            for (const auto& a : e.args) self(*a, self);
        };
        auto visitStmt = [&](const Stmt& s, auto&& self) -> void {
            if (s.lhs) visitExpr(*s.lhs, visitExpr);
            if (s.expr) visitExpr(*s.expr, visitExpr);
            if (s.init) self(*s.init, self);
            if (s.update) self(*s.update, self);
            for (const auto& c : s.body) self(*c, self);
            for (const auto& c : s.elseBody) self(*c, self);
        };
        for (const auto& cls : p_.classes)
            for (const auto& m : cls.methods)
                for (const auto& s : m.body) visitStmt(*s, visitStmt);
        std::sort(ints.begin(), ints.end());
        ints.erase(std::unique(ints.begin(), ints.end()), ints.end());
        std::sort(floats.begin(), floats.end());
        floats.erase(std::unique(floats.begin(), floats.end()), floats.end());
        p_.intConstants = std::move(ints);
        p_.floatConstants = std::move(floats);
    }

    Program& p_;
    std::vector<Diagnostic>& diags_;
    std::unordered_map<int, std::vector<int>> scopeAlternatives_;
    MethodDef* method_ = nullptr;
    int classIdx_ = 0;
    Scope scope_;
};

} // namespace

ParseResult parseProgram(const std::string& source) {
    ParseResult result;
    try {
        Lexer lexer(source);
        Parser parser(lexer.run());
        Program p = parser.run();
        Resolver resolver(p, result.diagnostics);
        resolver.run();
        if (result.diagnostics.empty()) result.program = std::move(p);
    } catch (const ParseError& e) {
        result.diagnostics.push_back(e.diag);
    }
    return result;
}

Program parseOrThrow(const std::string& source) {
    ParseResult r = parseProgram(source);
    if (!r.ok()) {
        const auto& d = r.diagnostics.front();
        throw std::runtime_error(std::to_string(d.line) + ":" + std::to_string(d.col) + ": " +
                                 d.message);
    }
    return std::move(*r.program);
}

} // namespace minimosa
