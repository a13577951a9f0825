#include <doctest.h>

#include <random>

#include "saft/cvss.hpp"

using namespace saft;

namespace {

const char* kListing3Vector = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:H";

CvssRequirement req(const std::string& text) { return parse_cvss_requirement(text); }
CvssVector vec(const std::string& text) { return parse_cvss_vector(text); }

}  // namespace

TEST_CASE("the canonical slash form round-trips") {
    CvssVector v = vec(kListing3Vector);
    CHECK(v.version == "3.1");
    CHECK(v.metrics.size() == 8);
    CHECK(v.metric("AV") == "N");
    CHECK(v.metric("A") == "H");
    CHECK(v.to_string() == kListing3Vector);
    CHECK(parse_cvss_vector(v.to_string()) == v);
}

TEST_CASE("unknown metrics and values are rejected") {
    CHECK_THROWS_AS(vec("CVSS:3.1/AV:N/ZZ:L"), ParseError);
    CHECK_THROWS_AS(vec("CVSS:3.1/A:Q"), ParseError);
    CHECK_THROWS_AS(vec("CVSS:3.1/CR:N"), ParseError);  // CR has no N in 3.x
    CHECK_THROWS_AS(vec("CVSS:2.0/AV:N"), ParseError);
    CHECK_THROWS_AS(vec("AV:N/AC:L"), ParseError);
    CHECK_THROWS_AS(vec("CVSS:3.1/AV:N/AV:N"), ParseError);
    CHECK_THROWS_AS(req("CVSS:3.1/A:Q"), ParseError);
}

TEST_CASE("requirements accept don't-care stars") {
    CvssRequirement r = req("CVSS:3.1/C:*/I:*/A:H");
    CHECK(r.metrics.size() == 3);
    CHECK(r.metric("C") == "*");
    CHECK_FALSE(r.all_dont_care());
    CHECK(req("CVSS:3.1/C:*/I:*").all_dont_care());
    CHECK(r.to_string() == "CVSS:3.1/C:*/I:*/A:H");
}

TEST_CASE("the running-example vector meets the fault-tree requirement") {
    CHECK(cvss_satisfies(vec(kListing3Vector), req("CVSS:3.1/C:*/I:*/A:H")));
}

TEST_CASE("ordinal metrics compare greater-than-equal") {
    CvssRequirement cr_m = req("CVSS:3.1/CR:M");
    CHECK(cvss_satisfies(vec("CVSS:3.1/CR:M"), cr_m));
    CHECK(cvss_satisfies(vec("CVSS:3.1/CR:H"), cr_m));
    CHECK_FALSE(cvss_satisfies(vec("CVSS:3.1/CR:L"), cr_m));

    CHECK(cvss_satisfies(vec("CVSS:3.1/A:H"), req("CVSS:3.1/A:L")));
    CHECK_FALSE(cvss_satisfies(vec("CVSS:3.1/A:N"), req("CVSS:3.1/A:L")));
}

TEST_CASE("nominal metrics compare for equality") {
    CHECK(cvss_satisfies(vec("CVSS:3.1/AV:N"), req("CVSS:3.1/AV:N")));
    CHECK_FALSE(cvss_satisfies(vec("CVSS:3.1/AV:L"), req("CVSS:3.1/AV:N")));
    CHECK_FALSE(cvss_satisfies(vec("CVSS:3.1/AV:P"), req("CVSS:3.1/AV:N")));
}

TEST_CASE("metrics absent from the vector fail any concrete requirement") {
    CHECK_FALSE(cvss_satisfies(vec("CVSS:3.1/AV:N"), req("CVSS:3.1/A:H")));
    // X counts as absent on the vector side, don't-care on the requirement side
    CHECK_FALSE(cvss_satisfies(vec("CVSS:3.1/CR:X"), req("CVSS:3.1/CR:L")));
    CHECK(cvss_satisfies(vec("CVSS:3.1/AV:N"), req("CVSS:3.1/CR:X")));
}

TEST_CASE("an all-don't-care requirement accepts every vector") {
    CvssRequirement all = req("CVSS:3.1/AV:*/C:*/I:*/A:*");
    CHECK(cvss_satisfies(vec(kListing3Vector), all));
    CHECK(cvss_satisfies(vec("CVSS:3.0/AC:H"), all));
    CHECK(cvss_satisfies(CvssVector{}, all));
}

TEST_CASE("a vector satisfies itself as a requirement") {
    CvssVector v = vec(kListing3Vector);
    CvssRequirement self;
    self.version = v.version;
    self.metrics = v.metrics;
    CHECK(cvss_satisfies(v, self));
}

TEST_CASE("fragment conditions act as the providing side") {
    // provided condition A:H serves requirement C:*/I:*/A:H
    CHECK(cvss_satisfies(req("CVSS:3.1/A:H"), req("CVSS:3.1/C:*/I:*/A:H")));
    // a don't-care on the providing side guarantees nothing
    CHECK_FALSE(cvss_satisfies(req("CVSS:3.1/A:*"), req("CVSS:3.1/A:H")));
    CHECK_FALSE(cvss_satisfies(req("CVSS:3.1/A:L"), req("CVSS:3.1/A:H")));
    CHECK(cvss_satisfies(req("CVSS:3.1/A:H/C:L"), req("CVSS:3.1/C:L")));
}

namespace {

// random vector over the full vocabulary; nullopt-safe helpers for the
// monotonicity property
const std::vector<std::pair<std::string, std::vector<std::string>>>& metric_pool() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> pool = {
        {"AV", {"N", "A", "L", "P"}}, {"AC", {"L", "H"}},          {"PR", {"N", "L", "H"}},
        {"UI", {"N", "R"}},           {"S", {"U", "C"}},           {"C", {"N", "L", "H"}},
        {"I", {"N", "L", "H"}},       {"A", {"N", "L", "H"}},      {"E", {"U", "P", "F", "H"}},
        {"RL", {"O", "T", "W", "U"}}, {"RC", {"U", "R", "C"}},     {"CR", {"L", "M", "H"}},
        {"IR", {"L", "M", "H"}},      {"AR", {"L", "M", "H"}},
    };
    return pool;
}

CvssVector random_vector(std::mt19937_64& rng) {
    CvssVector v;
    for (const auto& [key, values] : metric_pool()) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
        v.metrics.emplace_back(key,
                               values[std::uniform_int_distribution<size_t>(
                                   0, values.size() - 1)(rng)]);
    }
    return v;
}

/// Requirement derived from the vector so that satisfied pairs are common:
/// entries are dropped, starred, or weakened below the vector's value, with
/// an occasional random (possibly unsatisfiable) entry mixed in.
CvssRequirement random_requirement_for(const CvssVector& v, std::mt19937_64& rng) {
    CvssRequirement r;
    for (const auto& [key, value] : v.metrics) {
        int roll = std::uniform_int_distribution<int>(0, 5)(rng);
        if (roll <= 1) continue;
        if (roll == 2) {
            r.metrics.emplace_back(key, "*");
        } else if (cvss_is_ordinal(key)) {
            for (const auto& [pool_key, values] : metric_pool()) {
                if (pool_key != key) continue;
                size_t current = 0;
                for (size_t i = 0; i < values.size(); ++i) {
                    if (values[i] == value) current = i;
                }
                size_t weakened = std::uniform_int_distribution<size_t>(0, current)(rng);
                r.metrics.emplace_back(key, values[weakened]);
            }
        } else {
            r.metrics.emplace_back(key, value);
        }
    }
    // sometimes demand a metric the vector may not even carry
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        const auto& [key, values] =
            metric_pool()[std::uniform_int_distribution<size_t>(0, metric_pool().size() - 1)(rng)];
        if (!r.metric(key)) {
            r.metrics.emplace_back(
                key, values[std::uniform_int_distribution<size_t>(0, values.size() - 1)(rng)]);
        }
    }
    return r;
}

/// Dominating variant of v: ordinal metrics may move up their scale,
/// nominal metrics stay fixed.
CvssVector dominate(const CvssVector& v, std::mt19937_64& rng) {
    CvssVector out = v;
    for (auto& [key, value] : out.metrics) {
        if (!cvss_is_ordinal(key)) continue;
        auto rank = cvss_ordinal_rank(key, value);
        if (!rank) continue;
        for (const auto& [pool_key, values] : metric_pool()) {
            if (pool_key != key) continue;
            size_t current = 0;
            for (size_t i = 0; i < values.size(); ++i) {
                if (values[i] == value) current = i;
            }
            size_t bumped =
                std::uniform_int_distribution<size_t>(current, values.size() - 1)(rng);
            value = values[bumped];
        }
    }
    return out;
}

}  // namespace

TEST_CASE("satisfaction is monotone under severity domination") {
    std::mt19937_64 rng(20240817);
    size_t satisfied = 0;
    for (int i = 0; i < 1000; ++i) {
        CvssVector v = random_vector(rng);
        CvssRequirement r = random_requirement_for(v, rng);
        if (!cvss_satisfies(v, r)) continue;
        ++satisfied;
        CvssVector stronger = dominate(v, rng);
        CAPTURE(v.to_string());
        CAPTURE(stronger.to_string());
        CAPTURE(r.to_string());
        CHECK(cvss_satisfies(stronger, r));
    }
    CHECK(satisfied > 20);  // the property must actually fire
}
