#include "minimosa/testcase.hpp"

#include "minimosa/parser.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <set>

using namespace minimosa;

TEST_CASE("random tests are always valid") {
    Program p = parseOrThrow(fixtures::kAccum);
    RandomSource rng(42);
    for (int i = 0; i < 500; ++i) {
        TestCase t = randomTest(p, rng, 40);
        std::string err;
        INFO(err);
        CHECK(validateTest(p, t, &err));
        REQUIRE(t.length() >= 1);
        CHECK(t.length() <= 40);
        // a test starts by constructing the class under test
        CHECK(t.statements[0].kind == TestStatement::Kind::Construct);
        CHECK(t.statements[0].classIndex == p.cutClass);
    }
}

TEST_CASE("random tests are seed-deterministic") {
    Program p = parseOrThrow(fixtures::kFaulty);
    RandomSource a(7), b(7), c(8);
    TestCase ta = randomTest(p, a, 20);
    TestCase tb = randomTest(p, b, 20);
    CHECK(ta == tb);
    // different stream, almost surely different test; either way it validates
    TestCase tc = randomTest(p, c, 20);
    CHECK(validateTest(p, tc));
}

TEST_CASE("crossover produces valid children") {
    Program p = parseOrThrow(fixtures::kAccum);
    RandomSource rng(3);
    for (int i = 0; i < 200; ++i) {
        TestCase a = randomTest(p, rng, 25);
        TestCase b = randomTest(p, rng, 25);
        auto [c1, c2] = crossoverSinglePoint(a, b, p, rng);
        CHECK(validateTest(p, c1));
        CHECK(validateTest(p, c2));
        CHECK(c1.length() >= 1);
        CHECK(c2.length() >= 1);
    }
}

TEST_CASE("mutation keeps tests valid and bounded") {
    Program p = parseOrThrow(fixtures::kAccum);
    RandomSource rng(11);
    GenomeParams params;
    params.maxLength = 15;
    TestCase t = randomTest(p, rng, params.maxLength);
    for (int i = 0; i < 500; ++i) {
        t = mutateUniform(t, p, rng, params);
        std::string err;
        INFO(err);
        CHECK(validateTest(p, t, &err));
        CHECK(t.length() >= 1);
        // insertions may overshoot the target length, but never unboundedly
        CHECK(t.length() <= 2 * params.maxLength);
    }
}

TEST_CASE("statement removal remaps later references") {
    Program p = parseOrThrow(fixtures::kAccum);
    int addM = -1;
    for (int g = 0; g < p.numMethods(); ++g)
        if (p.method(g).qualifiedName == "Accum.add") addM = g;
    REQUIRE(addM >= 0);

    // v0 = new Accum(); v1 = 2.5; v0.add(v1)
    TestCase t;
    TestStatement ctor;
    ctor.kind = TestStatement::Kind::Construct;
    ctor.classIndex = 0;
    ctor.varType = Type::object(0);
    t.statements.push_back(ctor);

    TestStatement prim;
    prim.kind = TestStatement::Kind::PrimitiveAssign;
    prim.args = {TestArg::ofFloat(2.5)};
    prim.varType = Type::floatType();
    t.statements.push_back(prim);

    TestStatement call;
    call.kind = TestStatement::Kind::MethodCall;
    call.methodIndex = addM;
    call.receiver = 0;
    call.args = {TestArg::ofRef(1)};
    call.varType = Type::voidType();
    t.statements.push_back(call);

    REQUIRE(validateTest(p, t));

    SUBCASE("removing an unreferenced statement keeps the test valid") {
        TestCase u = removeStatement(t, 2);
        CHECK(u.length() == 2);
        CHECK(validateTest(p, u));
    }
    SUBCASE("removal in front shifts references down") {
        TestCase u = removeStatement(t, 1);
        // the call now reads a dangling argument and must fail validation
        CHECK(u.length() == 2);
        CHECK(u.statements[1].args[0].ref == -1);
        CHECK_FALSE(validateTest(p, u));
    }
    SUBCASE("removing the receiver dangles the call") {
        TestCase u = removeStatement(t, 0);
        CHECK(u.statements[1].receiver == -1);
        CHECK_FALSE(validateTest(p, u));
    }
}

TEST_CASE("validation rejects malformed tests") {
    Program p = parseOrThrow(fixtures::kSign);

    SUBCASE("empty test") {
        CHECK_FALSE(validateTest(p, TestCase{}));
    }
    SUBCASE("no construction of the class under test") {
        TestCase t;
        TestStatement prim;
        prim.kind = TestStatement::Kind::PrimitiveAssign;
        prim.args = {TestArg::ofInt(1)};
        prim.varType = Type::intType();
        t.statements.push_back(prim);
        CHECK_FALSE(validateTest(p, t));
    }
    SUBCASE("forward reference") {
        TestCase t;
        TestStatement ctor;
        ctor.kind = TestStatement::Kind::Construct;
        ctor.classIndex = 0;
        ctor.varType = Type::object(0);
        t.statements.push_back(ctor);

        TestStatement call;
        call.kind = TestStatement::Kind::MethodCall;
        call.methodIndex = 1;
        call.receiver = 0;
        call.args = {TestArg::ofRef(5)}; // beyond the end
        call.varType = Type::intType();
        t.statements.push_back(call);
        CHECK_FALSE(validateTest(p, t));
    }
    SUBCASE("argument type mismatch") {
        TestCase t;
        TestStatement ctor;
        ctor.kind = TestStatement::Kind::Construct;
        ctor.classIndex = 0;
        ctor.varType = Type::object(0);
        t.statements.push_back(ctor);

        TestStatement call;
        call.kind = TestStatement::Kind::MethodCall;
        call.methodIndex = 1; // Signum.sign(int)
        call.receiver = 0;
        call.args = {TestArg::ofBool(true)};
        call.varType = Type::intType();
        t.statements.push_back(call);
        CHECK_FALSE(validateTest(p, t));
    }
}

TEST_CASE("static shape proxies") {
    Program p = parseOrThrow(fixtures::kSign);
    RandomSource rng(5);
    TestCase t = randomTest(p, rng, 30);
    StaticProxies sp = staticProxies(t);
    CHECK(sp.length == t.length());
    CHECK(sp.calls + sp.nonCalls == sp.length);

    int calls = 0;
    for (const TestStatement& st : t.statements) calls += st.isCall() ? 1 : 0;
    CHECK(sp.calls == calls);
}

TEST_CASE("suites round-trip through json") {
    Program p = parseOrThrow(fixtures::kAccum);
    RandomSource rng(17);
    TestSuite suite;
    suite.subject = "accum";
    suite.algorithm = "dynamosa";
    suite.seed = 99;
    for (int i = 0; i < 8; ++i) suite.tests.push_back(randomTest(p, rng, 12));

    std::string j = suiteToJson(p, suite);
    TestSuite back = suiteFromJson(p, j);
    CHECK(back.subject == suite.subject);
    CHECK(back.algorithm == suite.algorithm);
    CHECK(back.seed == suite.seed);
    REQUIRE(back.tests.size() == suite.tests.size());
    for (size_t i = 0; i < suite.tests.size(); ++i) CHECK(back.tests[i] == suite.tests[i]);

    // serialization is stable: same suite, same bytes
    CHECK(suiteToJson(p, back) == j);

    CHECK_THROWS_AS(suiteFromJson(p, "{"), std::runtime_error);
    CHECK_THROWS_AS(suiteFromJson(p, R"({"tests": 3})"), std::runtime_error);
}

TEST_CASE("formatting shows variables and calls") {
    Program p = parseOrThrow(fixtures::kSign);
    RandomSource rng(23);
    TestCase t = randomTest(p, rng, 10);
    std::string text = formatTest(p, t);
    CHECK(text.find("new Signum()") != std::string::npos);
    CHECK(text.find("v0") != std::string::npos);
}
