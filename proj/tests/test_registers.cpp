#include <doctest.h>

#include <thread>
#include <vector>

#include "wfa/instrumented_arena.hpp"
#include "wfa/native_arena.hpp"

using namespace wfa;

TEST_CASE_TEMPLATE_DEFINE("basic register semantics", ArenaT, register_semantics) {
    ArenaT arena;

    SUBCASE("alloc returns the initial value and distinct ids") {
        RegisterId a = arena.alloc(RegisterValue{7});
        RegisterId b = arena.alloc(RegisterValue{8});
        CHECK(a != b);
        CHECK(arena.rd(a) == RegisterValue{7});
        CHECK(arena.rd(b) == RegisterValue{8});
    }

    SUBCASE("alloc increments allocation_count by exactly one") {
        std::size_t before = arena.allocation_count();
        arena.alloc(RegisterValue{0});
        CHECK(arena.allocation_count() == before + 1);
        arena.alloc(RegisterValue{0});
        CHECK(arena.allocation_count() == before + 2);
    }

    SUBCASE("wr then rd; later write wins") {
        RegisterId r = arena.alloc(RegisterValue{1});
        arena.wr(r, RegisterValue{2});
        CHECK(arena.rd(r) == RegisterValue{2});
        arena.wr(r, RegisterValue{3});
        CHECK(arena.rd(r) == RegisterValue{3});
    }

    SUBCASE("cas succeeds on match, fails on mismatch") {
        RegisterId r = arena.alloc(RegisterValue{10, 20});
        CHECK(arena.cas(r, RegisterValue{10, 20}, RegisterValue{11, 21}));
        CHECK(arena.rd(r) == RegisterValue{11, 21});
        CHECK_FALSE(arena.cas(r, RegisterValue{10, 20}, RegisterValue{12, 22}));
        CHECK(arena.rd(r) == RegisterValue{11, 21});
    }

    SUBCASE("unknown register id is a usage fault") {
        CHECK_THROWS(arena.rd(RegisterId{1234}));
        CHECK_THROWS(arena.wr(RegisterId{1234}, RegisterValue{}));
        CHECK_THROWS(arena.cas(RegisterId{1234}, RegisterValue{}, RegisterValue{}));
    }
}
TEST_CASE_TEMPLATE_INVOKE(register_semantics, NativeArena, InstrumentedArena);

TEST_CASE("instrumented arena counts one step per register action") {
    InstrumentedArena arena;
    RegisterId r = arena.alloc(RegisterValue{0});
    CHECK(arena.steps() == 0);  // alloc is not a step
    arena.rd(r);
    CHECK(arena.steps() == 1);
    arena.wr(r, RegisterValue{1});
    CHECK(arena.steps() == 2);
    arena.cas(r, RegisterValue{1}, RegisterValue{2});
    CHECK(arena.steps() == 3);
    CHECK(arena.log().reg_events.size() == 4);  // alloc + 3 actions
}

TEST_CASE("native cas: concurrent same-expected cas has exactly one winner") {
    for (int round = 0; round < 200; round++) {
        NativeArena arena;
        RegisterId r = arena.alloc(RegisterValue{0});
        int wins = 0;
        std::vector<std::thread> ts;
        std::atomic<int> winners{0};
        for (int t = 0; t < 4; t++)
            ts.emplace_back([&, t] {
                if (arena.cas(r, RegisterValue{0}, RegisterValue{t + 1})) winners.fetch_add(1);
            });
        for (auto& t : ts) t.join();
        wins = winners.load();
        CHECK(wins == 1);
    }
}

TEST_CASE("register values compare structurally") {
    RegisterValue a{1, 2, 3};
    RegisterValue b{1, 2, 3};
    RegisterValue c{1, 2};
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.size() == 3);
    CHECK(a[1] == 2);
    CHECK_THROWS(a[3]);
}
