#pragma once

// Abstract syntax for the mini language: a single-file, class-based imperative
// language with int/bool/float scalars, int arrays, and object references.
// Programs are resolved in place (name -> slot/index) so later stages never
// touch identifiers again.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace minimosa {

enum class TypeKind : uint8_t { Void, Int, Bool, Float, IntArray, Object, Null };

struct Type {
    TypeKind kind = TypeKind::Void;
    int cls = -1; // class index when kind == Object

    bool operator==(const Type& o) const {
        return kind == o.kind && (kind != TypeKind::Object || cls == o.cls);
    }
    bool operator!=(const Type& o) const { return !(*this == o); }

    bool isNumeric() const { return kind == TypeKind::Int || kind == TypeKind::Float; }
    bool isReference() const {
        return kind == TypeKind::Object || kind == TypeKind::IntArray || kind == TypeKind::Null;
    }

    static Type voidType() { return {TypeKind::Void, -1}; }
    static Type intType() { return {TypeKind::Int, -1}; }
    static Type boolType() { return {TypeKind::Bool, -1}; }
    static Type floatType() { return {TypeKind::Float, -1}; }
    static Type intArray() { return {TypeKind::IntArray, -1}; }
    static Type object(int cls) { return {TypeKind::Object, cls}; }
    static Type nullType() { return {TypeKind::Null, -1}; }
};

enum class BinaryOp : uint8_t {
    Add, Sub, Mul, Div, Mod,
    BitAnd, BitOr, BitXor, Shl, Shr,
    Lt, Le, Gt, Ge, Eq, Ne,
    And, Or,
};

enum class UnaryOp : uint8_t { Neg, Not, BitNot };

bool isComparison(BinaryOp op);
bool isArithmetic(BinaryOp op);
bool isBitwise(BinaryOp op);
const char* opToken(BinaryOp op);
const char* opToken(UnaryOp op);

enum class ExprKind : uint8_t {
    IntLit, FloatLit, BoolLit, NullLit,
    LocalRef,   // slot
    ThisRef,
    FieldRef,   // object.field
    ArrayIndex, // array[index]
    Unary,
    Binary,
    Call,       // call recv.m(args)
    NewObject,  // new C(args)
    NewArray,   // new int[len]
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    ExprKind kind;
    int id = -1; // program-unique, assigned by the parser
    int line = 0;
    int col = 0;
    Type type; // filled by the resolver

    int64_t intValue = 0;
    double floatValue = 0.0;
    bool boolValue = false;

    int slot = -1;       // LocalRef
    int classIndex = -1; // FieldRef/NewObject/Call receiver class/ThisRef
    int fieldIndex = -1; // FieldRef
    int methodIndex = -1; // Call: global method index

    BinaryOp bop = BinaryOp::Add;
    UnaryOp uop = UnaryOp::Neg;

    ExprPtr lhs, rhs;           // Binary; Unary/FieldRef/ArrayIndex use lhs (+ rhs for index)
    ExprPtr object;             // Call receiver
    std::vector<ExprPtr> args;  // Call/NewObject arguments; NewArray length in lhs

    std::string name; // identifier as written (kept for printing/diagnostics)
};

enum class StmtKind : uint8_t { VarDecl, Assign, If, While, For, Return, ExprStmt };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    StmtKind kind;
    int id = -1; // program-unique
    int line = 0;

    int slot = -1;   // VarDecl
    Type declType;   // VarDecl
    std::string name; // VarDecl identifier

    ExprPtr lhs;  // Assign target (LocalRef/FieldRef/ArrayIndex)
    ExprPtr expr; // VarDecl init / Assign value / If-While-For condition / Return value / ExprStmt call

    StmtPtr init, update;         // For
    std::vector<StmtPtr> body;    // If-then / While / For
    std::vector<StmtPtr> elseBody; // If-else
};

struct Param {
    std::string name;
    Type type;
};

struct MethodDef {
    std::string name; // "ctor" for constructors
    bool isCtor = false;
    Type returnType; // Void for ctors
    int numParams = 0;
    std::vector<Type> localTypes;        // slots: params first, then locals
    std::vector<std::string> localNames; // parallel to localTypes
    std::vector<StmtPtr> body;
    int classIndex = -1;
    int globalIndex = -1;
    int line = 0;
    std::string qualifiedName; // "Cls.m"
};

struct FieldDef {
    std::string name;
    Type type;
    int line = 0;
};

struct ClassDef {
    std::string name;
    int line = 0;
    std::vector<FieldDef> fields;
    std::vector<MethodDef> methods; // ctor included (synthesized if absent)
    int ctorLocal = -1;             // index into methods
};

// Alternative same-typed slots visible at a local-variable read, used by the
// variable-replacement mutation operator. Indexed by expression id.
struct ScopeInfo {
    std::vector<std::vector<int>> sameTypeSlots;
};

struct Program {
    std::vector<ClassDef> classes;
    int cutClass = 0; // first class in the file is the class under test
    int exprCount = 0;
    int stmtCount = 0;
    std::vector<std::pair<int, int>> methodTable; // global method index -> (class, local)
    ScopeInfo scopes;

    // literal pool harvested from the source, for test-input generation
    std::vector<int64_t> intConstants;
    std::vector<double> floatConstants;

    const MethodDef& method(int global) const {
        auto [c, m] = methodTable[global];
        return classes[c].methods[m];
    }
    MethodDef& method(int global) {
        auto [c, m] = methodTable[global];
        return classes[c].methods[m];
    }
    int numMethods() const { return static_cast<int>(methodTable.size()); }
    int findClass(const std::string& name) const;
    std::string typeName(const Type& t) const;
};

// Line-preserving canonical printer: every statement is emitted on the line
// recorded in the AST (padding with blank lines as needed), so re-parsing the
// output yields the same line-based coverage targets.
std::string printProgram(const Program& p);
std::string printExpr(const Program& p, const Expr& e);

} // namespace minimosa
