#pragma once

// Fixture sources shared across the unit tests. Each program is small enough
// to reason about by hand; tests hard-code facts (block counts, distances,
// mutant effects) derived from these sources on paper.

#include "minimosa/subject.hpp"

#include <string>

namespace fixtures {

// Three-way classifier: two sequential conditionals with early returns.
inline const std::string kSign = R"(
class Signum {
    field int calls;

    ctor() {
        this.calls = 0;
    }

    method int sign(int x) {
        this.calls = this.calls + 1;
        if (x > 0) {
            return 1;
        }
        if (x < 0) {
            return 0 - 1;
        }
        return 0;
    }
}
)";

// Countdown loop with an early exit inside the body: the shape that forces
// control dependence onto the loop-free graph (a header must not depend on
// edges inside its own body, or guard chains would cycle).
inline const std::string kLoopExit = R"(
class Countdown {
    field int last;

    ctor() {
        this.last = 0;
    }

    method int run(int v) {
        while (v > 0) {
            if (v == 3) {
                this.last = v;
                return 1;
            }
            v = v - 1;
        }
        return 0;
    }
}
)";

// Nested conditionals: the inner branch is only reachable through the outer
// true edge, giving a two-level guard chain.
inline const std::string kNested = R"(
class Gate {
    field int hits;

    ctor() {
        this.hits = 0;
    }

    method int open(int a, int b) {
        if (a > 10) {
            if (b > 20) {
                this.hits = this.hits + 1;
                return 2;
            }
            return 1;
        }
        return 0;
    }
}
)";

// Accumulator with a bounded for loop and an object field, exercising loops,
// allocation, and float arithmetic in one subject.
inline const std::string kAccum = R"(
class Accum {
    field float total;
    field int count;

    ctor() {
        this.total = 0.0;
        this.count = 0;
    }

    method void add(float v) {
        this.total = this.total + v;
        this.count = this.count + 1;
    }

    method float scaled(int times) {
        var float r = 0.0;
        if (times > 8) {
            times = 8;
        }
        for (var int i = 0; i < times; i = i + 1) {
            r = r + this.total;
        }
        return r;
    }
}
)";

// One satisfiable conditional plus one that no integer input can satisfy:
// the search covers what it can, then stagnates on the rest forever. Used to
// drive the heuristic-switching machinery deterministically.
inline const std::string kStubborn = R"(
class Stubborn {
    field int seen;

    ctor() {
        this.seen = 0;
    }

    method int poke(int v) {
        var int acc = 0;
        if (v > 100) {
            acc = acc + 1;
        }
        if (v * v == 3) {
            acc = acc + 10;
        }
        this.seen = this.seen + acc;
        return acc;
    }
}
)";

// Faulty operations: division, array indexing, null field access, and
// unbounded recursion, one method each.
inline const std::string kFaulty = R"(
class Faulty {
    field Faulty next;

    ctor() {
        this.next = null;
    }

    method int divide(int a, int b) {
        return a / b;
    }

    method int pick(int n, int i) {
        var int[] xs = new int[n];
        xs[0] = 7;
        return xs[i];
    }

    method int poke() {
        var Faulty n = this.next;
        return call n.poke();
    }

    method int sink(int d) {
        return call this.sink(d + 1);
    }
}
)";

inline minimosa::Subject make(const std::string& source, const std::string& name,
                              minimosa::CriteriaSet criteria = minimosa::CriteriaSet::all()) {
    return minimosa::subjectFromSource(source, criteria, name);
}

} // namespace fixtures
