#include "doctest.h"

#include <algorithm>
#include <vector>

#include "handy/mining.hpp"
#include "handy/rng.hpp"

using namespace handy;

namespace {

using Sessions = std::vector<std::vector<ServiceId>>;

Sessions randomSessions(Rng& rng) {
    Sessions out;
    size_t count = rng.uniformInt(1, 20);
    for (size_t s = 0; s < count; ++s) {
        std::vector<ServiceId> sess;
        size_t len = rng.uniformInt(1, 6);
        for (size_t i = 0; i < len; ++i)
            sess.push_back(rng.uniformInt(1, 8));
        out.push_back(std::move(sess));
    }
    return out;
}

}  // namespace

TEST_SUITE("mining") {

TEST_CASE("worked example with threshold two") {
    Sessions sessions = {{1, 2, 3}, {1, 2}, {1, 2, 4}};
    MiningResults r = mineFpGrowth(sessions, 2, 0.5);

    REQUIRE(r.frequent_itemsets.size() == 3);
    CHECK(r.supportOf({1}) == 3);
    CHECK(r.supportOf({2}) == 3);
    CHECK(r.supportOf({1, 2}) == 3);
    CHECK(r.supportOf({3}) == 0);
    CHECK(r.supportOf({1, 3}) == 0);
}

TEST_CASE("threshold one enumerates everything") {
    Sessions sessions = {{1, 2, 3}, {1, 2}, {1, 2, 4}};
    MiningResults r = mineFpGrowth(sessions, 1, 0.5);

    // Frequent sets: {1} {2} {3} {4} {12} {13} {14} {23} {123} {124} {24}.
    CHECK(r.frequent_itemsets.size() == 11);
    CHECK(r.supportOf({1, 2, 3}) == 1);
    CHECK(r.supportOf({1, 2, 4}) == 1);
    CHECK(r.supportOf({3, 4}) == 0);
    CHECK(r.maxItemsetSize() == 3);
    CHECK(r.countOfSize(1) == 4);
    CHECK(r.countOfSize(2) == 5);
    CHECK(r.countOfSize(3) == 2);
}

TEST_CASE("repeats within a session count once") {
    Sessions sessions = {{5, 5, 5}, {5, 6, 5}};
    MiningResults r = mineFpGrowth(sessions, 2, 0.5);
    CHECK(r.supportOf({5}) == 2);
    CHECK(r.supportOf({6}) == 0);
    CHECK(r.correlation(5, 6) == doctest::Approx(1.0));
}

TEST_CASE("pair correlation divides by the smaller single support") {
    // 1 appears in 3 sessions, 2 in 2 sessions, together twice: 2/2 = 1.
    Sessions a = {{1, 2}, {1, 2}, {1}};
    CHECK(mineFpGrowth(a, 1, 0.5).correlation(1, 2) == doctest::Approx(1.0));

    // Together twice, min(3, 3) = 3: 2/3.
    Sessions b = {{1, 2}, {1, 2}, {1}, {2}};
    MiningResults r = mineFpGrowth(b, 1, 0.5);
    CHECK(r.correlation(1, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(r.correlation(2, 1) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("self correlation is one for a seen service, zero otherwise") {
    Sessions sessions = {{1, 2}};
    MiningResults r = mineFpGrowth(sessions, 1, 0.5);
    CHECK(r.correlation(1, 1) == doctest::Approx(1.0));
    CHECK(r.correlation(9, 9) == 0.0);
    CHECK(r.correlation(1, 9) == 0.0);
}

TEST_CASE("correlation is computed below the support threshold") {
    // Pair {1,2} occurs once; with min_support 2 it is not frequent, yet the
    // correlation is still 1/1.
    Sessions sessions = {{1, 2}, {3}, {3}};
    MiningResults r = mineFpGrowth(sessions, 2, 0.5);
    CHECK(r.supportOf({1, 2}) == 0);
    CHECK(r.correlation(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("related services are sorted strongest first, ids break ties") {
    // rho(1,2) = rho(1,3) = rho(1,4) = 1, rho(1,5) = 2/3.
    Sessions sessions = {{1, 2, 3, 4}, {1, 2, 3, 4, 5}, {3, 1, 4}, {5}, {5, 1}};
    MiningResults r = mineFpGrowth(sessions, 1, 0.5);
    CHECK(r.correlation(1, 3) == doctest::Approx(1.0));
    CHECK(r.correlation(1, 5) == doctest::Approx(2.0 / 3.0));
    CHECK(r.getRelated(1) == std::vector<ServiceId>{2, 3, 4, 5});

    // Raising epsilon above 2/3 leaves only the perfect pairs.
    MiningResults high = mineFpGrowth(sessions, 1, 0.7);
    CHECK(high.getRelated(1) == std::vector<ServiceId>{2, 3, 4});
}

TEST_CASE("related list respects epsilon strictly") {
    Sessions sessions = {{1, 2}, {1, 2}, {1}, {2}};  // rho = 2/3
    CHECK(mineFpGrowth(sessions, 1, 2.0 / 3.0).getRelated(1).empty());
    CHECK(mineFpGrowth(sessions, 1, 0.6).getRelated(1) == std::vector<ServiceId>{2});
}

TEST_CASE("zero support threshold is rejected") {
    Sessions sessions = {{1}};
    CHECK_THROWS_AS(mineFpGrowth(sessions, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(mineBruteForce(sessions, 0, 0.5), std::invalid_argument);
}

TEST_CASE("empty input mines to empty results") {
    MiningResults r = mineFpGrowth({}, 1, 0.5);
    CHECK(r.frequent_itemsets.empty());
    CHECK(r.pair_correlation.empty());
    CHECK(r.getRelated(1).empty());
    CHECK(r.maxItemsetSize() == 0);
}

TEST_CASE("tree miner agrees with the reference miner on random data") {
    Rng rng(0xf00dull);
    for (int round = 0; round < 120; ++round) {
        Sessions sessions = randomSessions(rng);
        uint32_t min_support = 1 + rng.uniformU32(3);
        MiningResults fp = mineFpGrowth(sessions, min_support, 0.5);
        MiningResults bf = mineBruteForce(sessions, min_support, 0.5);
        REQUIRE(fp.frequent_itemsets == bf.frequent_itemsets);
        REQUIRE(fp.pair_correlation == bf.pair_correlation);
    }
}

}  // TEST_SUITE
