#include <doctest.h>

#include "saft/dataflow.hpp"
#include "support/fixtures.hpp"

using namespace saft;
using saft::testing::fixture_text;

TEST_CASE("the running-example dataflow parses") {
    DataflowModel model = parse_dataflow(fixture_text("listings/listing1.dataflow"));
    REQUIRE(model.components.size() == 2);
    REQUIRE(model.channels.size() == 1);
    REQUIRE(model.connections.size() == 2);

    const auto* server = model.find_component("simple_trajectory_server");
    REQUIRE(server);
    CHECK(find_property(server->properties, "ros_name") == "simple_trajectory_server");
    CHECK(model.find_component("trajectory_client"));
    CHECK(model.find_channel("trajectory_assign"));

    CHECK(model.connections[0].component == "simple_trajectory_server");
    CHECK(model.connections[0].direction == DataflowModel::Direction::Outgoing);
    CHECK(model.connections[1].component == "trajectory_client");
    CHECK(model.connections[1].direction == DataflowModel::Direction::Incoming);

    auto connected = model.connected_components("trajectory_assign");
    REQUIRE(connected.size() == 2);
}

TEST_CASE("empty text gives an empty model") {
    DataflowModel model = parse_dataflow("");
    CHECK(model.components.empty());
    CHECK(model.channels.empty());
    CHECK(model.connections.empty());
}

TEST_CASE("dangling Connect references are rejected") {
    CHECK_THROWS_AS(parse_dataflow("Connect Component=x -> Channel=c;"), ParseError);
    CHECK_THROWS_AS(
        parse_dataflow("Component x {}\nConnect Component=x -> Channel=missing;"), ParseError);
}

TEST_CASE("duplicate names are rejected per kind") {
    CHECK_THROWS_AS(parse_dataflow("Component a {} Component a {}"), ParseError);
    CHECK_THROWS_AS(parse_dataflow("Channel a {} Channel a {}"), ParseError);
    // a component and a channel may share a name
    CHECK_NOTHROW(parse_dataflow("Component a {} Channel a {}"));
}

TEST_CASE("hyperedges admit several components per channel") {
    DataflowModel model = parse_dataflow(
        "Component a {} Component b {} Component c {} Channel ch {}\n"
        "Connect Component=a -> Channel=ch;\n"
        "Connect Component=b -> Channel=ch;\n"
        "Connect Component=c <- Channel=ch;");
    CHECK(model.connected_components("ch").size() == 3);
}

TEST_CASE("dataflow text survives print-parse") {
    DataflowModel model = parse_dataflow(fixture_text("listings/listing1.dataflow"));
    DataflowModel reparsed = parse_dataflow(print_dataflow(model));
    CHECK(model == reparsed);
    CHECK(print_dataflow(model) == print_dataflow(reparsed));
}

TEST_CASE("syntax errors report their position") {
    try {
        parse_dataflow("Component foo {\n  property = \"x\";\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}
