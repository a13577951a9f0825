#include <doctest.h>

#include <algorithm>

#include "saft/deployment.hpp"
#include "support/fixtures.hpp"

using namespace saft;
using saft::testing::fixture_text;

namespace {

DataflowModel drone_dataflow() {
    return parse_dataflow(fixture_text("listings/listing1.dataflow"));
}

DeploymentModel drone_deployment() {
    return parse_deployment(fixture_text("listings/listing2.deploy"), drone_dataflow());
}

}  // namespace

TEST_CASE("the running-example deployment parses") {
    DeploymentModel model = drone_deployment();

    const auto* platform = model.find_element("ros_nodes");
    REQUIRE(platform);
    CHECK(platform->kind == ElementKind::Platform);

    // ros_nodes is executed on rosbox
    auto on_rosbox = model.executed_on("rosbox");
    CHECK(std::find(on_rosbox.begin(), on_rosbox.end(), "ros_nodes") != on_rosbox.end());
    CHECK(std::find(on_rosbox.begin(), on_rosbox.end(), "Ubuntu_20") != on_rosbox.end());

    // the platform members run on the platform
    auto members = model.executed_on("ros_nodes");
    REQUIRE(members.size() == 4);
    CHECK(members[0] == "simple_trajectory_server");
    CHECK(members[3] == "optitrack_motive");

    // the server depends on its three libraries
    auto deps = model.dependencies_of("simple_trajectory_server");
    REQUIRE(deps.size() == 3);
    CHECK(std::find(deps.begin(), deps.end(), "libfastrtps_so_2_1_1") != deps.end());

    const auto* server = model.find_element("simple_trajectory_server");
    REQUIRE(server);
    CHECK(server->kind == ElementKind::RefComponent);
    CHECK_FALSE(server->implicit);

    const auto* rosbox = model.find_element("rosbox");
    REQUIRE(rosbox);
    CHECK(find_property(rosbox->properties, "reachable") == "ssh");
}

TEST_CASE("declaration-only text has empty relations") {
    DeploymentModel model = parse_deployment("a:Platform\nb:Library", {});
    CHECK(model.executes.empty());
    CHECK(model.depends.empty());
    CHECK(model.find_element("a")->kind == ElementKind::Platform);
    CHECK(model.find_element("b")->kind == ElementKind::Library);
}

TEST_CASE("dependency cycles are rejected") {
    CHECK_THROWS_AS(parse_deployment("a depends {b}\nb depends {a}", {}), ModelError);
    CHECK_THROWS_AS(parse_deployment("a executes {b}\nb depends {a}", {}), ModelError);
    CHECK_THROWS_AS(parse_deployment("a depends {a}", {}), ModelError);
}

TEST_CASE("RefComponents must resolve against the dataflow") {
    CHECK_THROWS_AS(parse_deployment("RefComponent ghost (ros_name=\"ghost\")", drone_dataflow()),
                    ModelError);
    // resolution by element name alone also works
    CHECK_NOTHROW(parse_deployment("RefComponent trajectory_client", drone_dataflow()));
    // full_ros_name matching strips the leading slash
    CHECK_NOTHROW(parse_deployment(
        "RefComponent tc (full_ros_name=\"/trajectory_client\")", drone_dataflow()));
}

TEST_CASE("RefChannels resolve symmetrically") {
    CHECK_NOTHROW(parse_deployment("RefChannel trajectory_assign", drone_dataflow()));
    CHECK_THROWS_AS(parse_deployment("RefChannel ghost", drone_dataflow()), ModelError);
}

TEST_CASE("duplicate explicit declarations are rejected, upgrades are not") {
    CHECK_THROWS_AS(parse_deployment("a:Platform\na:Library", {}), ParseError);
    // implicit first, explicit later
    DeploymentModel model = parse_deployment("box = {a}\na:Library", {});
    CHECK(model.find_element("a")->kind == ElementKind::Library);
    CHECK_FALSE(model.find_element("a")->implicit);
}

TEST_CASE("cpe and cvssreq properties land in dedicated fields") {
    DeploymentModel model = parse_deployment(
        "dds:Library (cpe = \"cpe:2.3:a:eprosima:fast_dds:2.1.1\", "
        "cvssreq = \"CVSS:3.1/A:H\")",
        {});
    const auto* dds = model.find_element("dds");
    REQUIRE(dds);
    CHECK(dds->cpe == "cpe:2.3:a:eprosima:fast_dds:2.1.1");
    REQUIRE(dds->requirement.has_value());
    CHECK(dds->requirement->metric("A") == "H");
    CHECK_THROWS_AS(parse_deployment("x:Library (cvssreq = \"CVSS:3.1/A:Q\")", {}), ParseError);
}

TEST_CASE("deployment text survives print-parse") {
    DeploymentModel model = drone_deployment();
    DeploymentModel reparsed = parse_deployment(print_deployment(model), drone_dataflow());
    CHECK(model == reparsed);
    CHECK(print_deployment(model) == print_deployment(reparsed));
}

TEST_CASE("the closure walks executes and depends-on edges") {
    DeploymentModel model = drone_deployment();
    auto closure = model.reach_closure("simple_trajectory_server");
    CHECK(std::find(closure.begin(), closure.end(), "libfastrtps_so_2_1_1") != closure.end());
    auto rosbox_closure = model.reach_closure("rosbox");
    // everything hangs below rosbox
    CHECK(std::find(rosbox_closure.begin(), rosbox_closure.end(), "libfastcdr_so_1_0_13") !=
          rosbox_closure.end());
}

TEST_CASE("dataflow components map to their deployment element") {
    DataflowModel dataflow = drone_dataflow();
    DeploymentModel model = parse_deployment(fixture_text("listings/listing2.deploy"), dataflow);
    const auto* element =
        model.element_for_dataflow_component(dataflow, "simple_trajectory_server");
    REQUIRE(element);
    CHECK(element->kind == ElementKind::RefComponent);
    CHECK(model.element_for_dataflow_component(dataflow, "trajectory_client") == nullptr);
}
