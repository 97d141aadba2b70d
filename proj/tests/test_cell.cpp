#include "oracles.hpp"
#include "rcell/cell.hpp"
#include "rcell/instance_io.hpp"
#include "rcell/schedule.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rcell;

namespace {

CellInstance cell(int m, int p, int eps = 1, int delta = 2) { return {m, Duration(eps), Duration(delta), Duration(p)}; }

} // namespace

TEST(Distance, FourCaseExamples) {
    const auto inst = cell(4, 0);
    EXPECT_EQ(distance(inst, Activity::load(1), Activity::load(3)), Duration(10));
    EXPECT_EQ(distance(inst, Activity::unload(3), Activity::load(2)), Duration(16));
    EXPECT_EQ(distance(inst, Activity::load(4), Activity::unload(2)), Duration(12));
    EXPECT_EQ(distance(inst, Activity::load(2), Activity::unload(2)), Duration(8));
}

TEST(Distance, SameActivityRejected) {
    const auto inst = cell(3, 0);
    EXPECT_THROW((void)distance(inst, Activity::unload(2), Activity::unload(2)), std::invalid_argument);
    EXPECT_THROW((void)distance(inst, Activity::load(4), Activity::unload(1)), std::out_of_range);
}

TEST(Distance, MatchesStationWalk) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 6);
        const CellInstance inst(m, Duration(1 + static_cast<int>(rng() % 4)), Duration(1 + static_cast<int>(rng() % 5)),
                                Duration(static_cast<int>(rng() % 300)));
        for (int a = 0; a < 2 * m; ++a)
            for (int b = 0; b < 2 * m; ++b) {
                if (a == b) continue;
                const auto x = Activity::from_index(a, m);
                const auto y = Activity::from_index(b, m);
                ASSERT_EQ(distance(inst, x, y), oracle::walk_distance(inst, x, y)) << x.name() << "->" << y.name();
            }
    }
}

TEST(Distance, AtLeastOnePickAndPlace) {
    const CellInstance inst(5, Duration(3), Duration(1), Duration(10));
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b)
            if (a != b) EXPECT_GE(distance(inst, Activity::from_index(a, 5), Activity::from_index(b, 5)), Duration(6));
}

TEST(Distance, FractionalParametersStayExact) {
    const CellInstance inst(3, Duration(1, 2), Duration(3, 4), Duration(5, 3));
    EXPECT_EQ(distance(inst, Activity::load(1), Activity::load(2)), Duration(1) + Duration(9, 4));
    EXPECT_EQ(min_separation(inst, 1), Duration(1) + Duration(9, 4) + Duration(5, 3));
}

TEST(MinSeparation, Examples) {
    EXPECT_EQ(min_separation(cell(4, 0), 1), Duration(10));
    EXPECT_EQ(min_separation(cell(4, 100), 4), Duration(104));
    EXPECT_THROW((void)min_separation(cell(4, 0), 0), std::out_of_range);
    EXPECT_THROW((void)min_separation(cell(4, 0), 5), std::out_of_range);
}

TEST(MinSeparation, ExceedsLoadToUnloadDistanceByProcessingTime) {
    for (int m = 1; m <= 6; ++m)
        for (int p : {0, 17, 250}) {
            const auto inst = cell(m, p);
            for (int i = 1; i <= m; ++i)
                EXPECT_EQ(min_separation(inst, i) - inst.proc(i), distance(inst, Activity::load(i), Activity::unload(i)));
        }
}

TEST(BigM, PublishedValues) {
    EXPECT_EQ(big_m(cell(4, 0)), Duration(108));
    EXPECT_EQ(big_m(cell(4, 250)), Duration(316));
    EXPECT_EQ(big_m(cell(5, 100)), Duration(192));
    EXPECT_EQ(big_m(cell(6, 0)), Duration(212));
    EXPECT_EQ(big_m(cell(6, 250)), Duration(372));
}

TEST(BigM, NonUniformRejected) {
    const CellInstance inst(3, Duration(1), Duration(2), std::vector<Duration>{Duration(0), Duration(5), Duration(0)});
    EXPECT_THROW((void)big_m(inst), std::invalid_argument);
}

// The closed form overshoots the canonical cycle by exactly 2(m-1)delta,
// independent of p and epsilon.
TEST(BigM, ExcessOverCanonicalCycle) {
    for (int m = 1; m <= 6; ++m)
        for (int eps : {1, 2})
            for (int delta : {1, 2, 3})
                for (int p = 0; p <= 250; p += 25) {
                    const auto inst = cell(m, p, eps, delta);
                    EXPECT_EQ(big_m(inst) - canonical_cycle_time(inst), Duration(2 * (m - 1) * delta))
                        << "m=" << m << " eps=" << eps << " delta=" << delta << " p=" << p;
                }
}

TEST(BigM, IntegerClosure) {
    for (int m = 1; m <= 6; ++m)
        for (int p : {0, 33, 250}) {
            const auto inst = cell(m, p, 2, 3);
            EXPECT_TRUE(big_m(inst).is_integer());
            for (int i = 1; i <= m; ++i) EXPECT_TRUE(min_separation(inst, i).is_integer());
        }
}

TEST(CellInstance, Validation) {
    EXPECT_THROW(cell(0, 0), InvalidInstance);
    EXPECT_THROW(CellInstance(2, Duration(0), Duration(1), Duration(0)), InvalidInstance);
    EXPECT_THROW(CellInstance(2, Duration(1), Duration(-1), Duration(0)), InvalidInstance);
    EXPECT_THROW(CellInstance(2, Duration(1), Duration(1), Duration(-3)), InvalidInstance);
    EXPECT_THROW(CellInstance(2, Duration(1), Duration(1), std::vector<Duration>{Duration(1)}), InvalidInstance);
}

TEST(CellInstance, HashDistinguishesParameters) {
    EXPECT_EQ(cell(4, 50).hash(), cell(4, 50).hash());
    EXPECT_NE(cell(4, 50).hash(), cell(4, 75).hash());
    EXPECT_NE(cell(4, 50).hash(), cell(5, 50).hash());
}

TEST(ActivityIndex, CanonicalOrder) {
    const int m = 4;
    for (int idx = 0; idx < 2 * m; ++idx) EXPECT_EQ(Activity::from_index(idx, m).index(m), idx);
    EXPECT_EQ(Activity::load(1).index(m), 0);
    EXPECT_EQ(Activity::unload(1).index(m), m);
}

TEST(InstanceJson, UniformAndPerMachine) {
    const auto a = parse_instance(R"({"m": 4, "epsilon": 1, "delta": 2, "p": 50})");
    EXPECT_EQ(a, cell(4, 50));
    const auto b = parse_instance(R"({"m": 2, "epsilon": 0.5, "delta": 2, "p_i": [3, 4.25]})");
    EXPECT_EQ(b.epsilon(), Duration(1, 2));
    EXPECT_EQ(b.proc(2), Duration(17, 4));
    EXPECT_EQ(instance_from_json(instance_to_json(b)), b);
}

TEST(InstanceJson, Rejections) {
    EXPECT_THROW(parse_instance(R"({"m": 4, "epsilon": 1, "delta": 2, "p": 0, "extra": 1})"), InstanceFormatError);
    EXPECT_THROW(parse_instance(R"({"m": 4, "epsilon": 1, "delta": 2})"), InstanceFormatError);
    EXPECT_THROW(parse_instance(R"({"m": 4, "epsilon": 1, "delta": 2, "p": 0, "p_i": [0,0,0,0]})"), InstanceFormatError);
    EXPECT_THROW(parse_instance(R"({"m": 2, "epsilon": 1, "delta": 2, "p_i": [0]})"), InstanceFormatError);
    EXPECT_THROW(parse_instance(R"({"m": 2.5, "epsilon": 1, "delta": 2, "p": 0})"), InstanceFormatError);
    EXPECT_THROW(parse_instance(R"({"m": 2, "epsilon": 0, "delta": 2, "p": 0})"), InstanceFormatError);
    EXPECT_THROW(parse_instance(R"({"m": 2, "epsilon": "1", "delta": 2, "p": 0})"), InstanceFormatError);
    EXPECT_THROW(parse_instance("not json"), InstanceFormatError);
    EXPECT_THROW(parse_instance("[1,2]"), InstanceFormatError);
}

TEST(DurationArithmetic, ExactRationals) {
    EXPECT_EQ(Duration(1, 3) + Duration(1, 6), Duration(1, 2));
    EXPECT_EQ(Duration(193, 2).to_string(), "193/2");
    EXPECT_EQ(Duration::from_double(1.25), Duration(5, 4));
    EXPECT_THROW(Duration::from_double(1.0 / 3.0), std::invalid_argument);
    EXPECT_LT(Duration(95), Duration(193, 2));
}
