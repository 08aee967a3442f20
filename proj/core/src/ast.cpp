#include "minimosa/ast.hpp"

#include <cstdio>
#include <cstring>

namespace minimosa {

bool isComparison(BinaryOp op) { return op >= BinaryOp::Lt && op <= BinaryOp::Ne; }
bool isArithmetic(BinaryOp op) { return op <= BinaryOp::Mod; }
bool isBitwise(BinaryOp op) { return op >= BinaryOp::BitAnd && op <= BinaryOp::Shr; }

const char* opToken(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::BitAnd: return "&";
        case BinaryOp::BitOr: return "|";
        case BinaryOp::BitXor: return "^";
        case BinaryOp::Shl: return "<<";
        case BinaryOp::Shr: return ">>";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::And: return "&&";
        case BinaryOp::Or: return "||";
    }
    return "?";
}

const char* opToken(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Not: return "!";
        case UnaryOp::BitNot: return "~";
    }
    return "?";
}

int Program::findClass(const std::string& name) const {
    for (size_t i = 0; i < classes.size(); ++i)
        if (classes[i].name == name) return static_cast<int>(i);
    return -1;
}

std::string Program::typeName(const Type& t) const {
    switch (t.kind) {
        case TypeKind::Void: return "void";
        case TypeKind::Int: return "int";
        case TypeKind::Bool: return "bool";
        case TypeKind::Float: return "float";
        case TypeKind::IntArray: return "int[]";
        case TypeKind::Object: return t.cls >= 0 ? classes[t.cls].name : "<class>";
        case TypeKind::Null: return "null";
    }
    return "?";
}

namespace {

std::string formatFloat(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // guarantee the literal re-lexes as a float
    if (!std::strpbrk(buf, ".eE")) std::strcat(buf, ".0");
    return buf;
}

// Fully parenthesized expression printing: grouping survives re-parsing
// without reconstructing precedence.
void printExprInto(const Program& p, const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::IntLit:
            out += std::to_string(e.intValue);
            return;
        case ExprKind::FloatLit:
            out += formatFloat(e.floatValue);
            return;
        case ExprKind::BoolLit:
            out += e.boolValue ? "true" : "false";
            return;
        case ExprKind::NullLit:
            out += "null";
            return;
        case ExprKind::ThisRef:
            out += "this";
            return;
        case ExprKind::LocalRef:
            out += e.name;
            return;
        case ExprKind::FieldRef:
            printExprInto(p, *e.lhs, out);
            out += ".";
            out += e.name;
            return;
        case ExprKind::ArrayIndex:
            printExprInto(p, *e.lhs, out);
            out += "[";
            printExprInto(p, *e.rhs, out);
            out += "]";
            return;
        case ExprKind::Unary:
            out += opToken(e.uop);
            out += "(";
            printExprInto(p, *e.lhs, out);
            out += ")";
            return;
        case ExprKind::Binary:
            out += "(";
            printExprInto(p, *e.lhs, out);
            out += " ";
            out += opToken(e.bop);
            out += " ";
            printExprInto(p, *e.rhs, out);
            out += ")";
            return;
        case ExprKind::Call: {
            out += "call ";
            printExprInto(p, *e.object, out);
            out += ".";
            out += e.name;
            out += "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                printExprInto(p, *e.args[i], out);
            }
            out += ")";
            return;
        }
        case ExprKind::NewObject: {
            out += "new ";
            out += e.name;
            out += "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                printExprInto(p, *e.args[i], out);
            }
            out += ")";
            return;
        }
        case ExprKind::NewArray:
            out += "new int[";
            printExprInto(p, *e.lhs, out);
            out += "]";
            return;
    }
}

// Emits every statement on the line recorded in the AST so that line-based
// coverage targets are identical after a print/parse round trip.
class Printer {
public:
    explicit Printer(const Program& p) : p_(p) {}

    std::string run() {
        for (const auto& cls : p_.classes) printClass(cls);
        out_ += "\n";
        return std::move(out_);
    }

private:
    void toLine(int line) {
        while (curLine_ < line) {
            out_ += "\n";
            curLine_++;
            atLineStart_ = true;
        }
    }

    void emit(const std::string& text) {
        if (!atLineStart_) out_ += " ";
        out_ += text;
        atLineStart_ = false;
    }

    void printClass(const ClassDef& cls) {
        toLine(cls.line);
        emit("class " + cls.name + " {");
        for (const auto& f : cls.fields) {
            toLine(f.line);
            emit("field " + p_.typeName(f.type) + " " + f.name + ";");
        }
        for (const auto& m : cls.methods) {
            if (m.isCtor && m.body.empty() && m.numParams == 0 && m.line == cls.line)
                continue; // synthesized default constructor: not part of the source
            printMethod(m);
        }
        emit("}");
    }

    void printMethod(const MethodDef& m) {
        toLine(m.line);
        std::string head = m.isCtor ? "ctor(" : "method " + p_.typeName(m.returnType) + " " + m.name + "(";
        for (int i = 0; i < m.numParams; ++i) {
            if (i) head += ", ";
            head += p_.typeName(m.localTypes[i]) + " " + m.localNames[i];
        }
        head += ") {";
        emit(head);
        for (const auto& s : m.body) printStmt(*s);
        emit("}");
    }

    std::string exprText(const Expr& e) {
        std::string s;
        printExprInto(p_, e, s);
        return s;
    }

    std::string inlineStmt(const Stmt& s) {
        switch (s.kind) {
            case StmtKind::VarDecl: {
                std::string t = "var " + p_.typeName(s.declType) + " " + s.name;
                if (s.expr) t += " = " + exprText(*s.expr);
                return t;
            }
            case StmtKind::Assign:
                return exprText(*s.lhs) + " = " + exprText(*s.expr);
            case StmtKind::ExprStmt:
                return exprText(*s.expr);
            default:
                return "";
        }
    }

    void printStmt(const Stmt& s) {
        toLine(s.line);
        switch (s.kind) {
            case StmtKind::VarDecl:
            case StmtKind::Assign:
            case StmtKind::ExprStmt:
                emit(inlineStmt(s) + ";");
                return;
            case StmtKind::Return:
                emit(s.expr ? "return " + exprText(*s.expr) + ";" : "return;");
                return;
            case StmtKind::If: {
                emit("if (" + exprText(*s.expr) + ") {");
                for (const auto& c : s.body) printStmt(*c);
                if (!s.elseBody.empty()) {
                    emit("} else {");
                    for (const auto& c : s.elseBody) printStmt(*c);
                }
                emit("}");
                return;
            }
            case StmtKind::While: {
                emit("while (" + exprText(*s.expr) + ") {");
                for (const auto& c : s.body) printStmt(*c);
                emit("}");
                return;
            }
            case StmtKind::For: {
                std::string head = "for (";
                if (s.init) head += inlineStmt(*s.init);
                head += ";";
                head += " " + exprText(*s.expr) + ";";
                if (s.update) head += " " + inlineStmt(*s.update);
                head += ") {";
                emit(head);
                for (const auto& c : s.body) printStmt(*c);
                emit("}");
                return;
            }
        }
    }

    const Program& p_;
    std::string out_;
    int curLine_ = 1;
    bool atLineStart_ = true;
};

} // namespace

std::string printProgram(const Program& p) { return Printer(p).run(); }

std::string printExpr(const Program& p, const Expr& e) {
    std::string out;
    printExprInto(p, e, out);
    return out;
}

} // namespace minimosa
