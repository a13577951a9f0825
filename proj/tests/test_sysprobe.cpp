#include <doctest.h>

#include <algorithm>

#include "saft/sysprobe.hpp"
#include "support/fixtures.hpp"

using namespace saft;
using saft::testing::fixture_path;
using saft::testing::fixture_text;

TEST_CASE("ldd output parses to package ids") {
    std::vector<std::string> warnings;
    auto pkgs = parse_ldd(
        "\tlibfastrtps.so.2.1.1 => /usr/lib/libfastrtps.so.2.1.1 (0x7f00)\n"
        "\tlinux-vdso.so.1 (0x00007ffd)\n"
        "\tlibmissing.so.3 => not found\n",
        &warnings);
    REQUIRE(pkgs.size() == 1);
    CHECK(pkgs[0].name == "libfastrtps");
    CHECK(pkgs[0].version == "2.1.1");
    CHECK(pkgs[0].source == PackageId::Source::Ldd);
    CHECK(warnings.size() == 1);  // the unresolved library

    CHECK(parse_ldd("").empty());

    warnings.clear();
    CHECK(parse_ldd("\tnot a dynamic executable\n", &warnings).empty());
    CHECK(warnings.size() == 1);
}

TEST_CASE("dpkg output keeps only installed rows") {
    auto pkgs = parse_dpkg(fixture_text("drone/snapshots/simple_trajectory_server/dpkg.txt"));
    REQUIRE(pkgs.size() == 2);
    CHECK(pkgs[0].name == "ros-foxy-rmw");
    CHECK(pkgs[0].version == "1.0.3-1");
    CHECK(pkgs[0].source == PackageId::Source::Dpkg);
    CHECK(pkgs[1].name == "quad-solver");

    CHECK(parse_dpkg("Desired=Unknown/Install\n||/ Name Version\n").empty());
    // arch suffixes are stripped
    auto arch = parse_dpkg("ii  libssl1.1:amd64  1.1.1f-1ubuntu2  amd64  ssl");
    REQUIRE(arch.size() == 1);
    CHECK(arch[0].name == "libssl1.1");
}

TEST_CASE("element names mirror the deployment naming of libraries") {
    CHECK(element_name_for_package({"libfastrtps", "2.1.1", PackageId::Source::Ldd}) ==
          "libfastrtps_so_2_1_1");
    CHECK(element_name_for_package({"libfoo", "", PackageId::Source::Ldd}) == "libfoo_so");
    CHECK(element_name_for_package({"ros-foxy-rmw", "1.0.3-1", PackageId::Source::Dpkg}) ==
          "ros_foxy_rmw_1_0_3_1");
}

namespace {

DeploymentModel drone_models(DataflowModel* dataflow_out = nullptr) {
    DataflowModel dataflow = parse_dataflow(fixture_text("listings/listing1.dataflow"));
    DeploymentModel deploy =
        parse_deployment(fixture_text("listings/listing2.deploy"), dataflow);
    if (dataflow_out) *dataflow_out = dataflow;
    return deploy;
}

}  // namespace

TEST_CASE("enrichment adds packages as depends-on edges") {
    DeploymentModel deploy = drone_models();
    SystemSnapshot snapshot = load_snapshot(fixture_path("drone/snapshots"));
    std::vector<std::string> warnings;
    DeploymentModel enriched = enrich_deployment(deploy, snapshot, &warnings);

    auto deps = enriched.dependencies_of("simple_trajectory_server");
    CHECK(std::find(deps.begin(), deps.end(), "libfastrtps_so_2_1_1") != deps.end());
    CHECK(std::find(deps.begin(), deps.end(), "quad_solver_3_2_2ubuntu1") != deps.end());
    CHECK(std::find(deps.begin(), deps.end(), "libc_so_6") != deps.end());

    const auto* quad = enriched.find_element("quad_solver_3_2_2ubuntu1");
    REQUIRE(quad);
    CHECK(quad->kind == ElementKind::Package);
    CHECK(find_property(quad->properties, "package") == "quad-solver");
    CHECK(find_property(quad->properties, "version") == "3.2-2ubuntu1");

    // the library already declared in the deployment text stays as-is
    const auto* fastrtps = enriched.find_element("libfastrtps_so_2_1_1");
    REQUIRE(fastrtps);
    CHECK(fastrtps->implicit);

    SUBCASE("enrichment is idempotent") {
        DeploymentModel again = enrich_deployment(enriched, snapshot);
        CHECK(again == enriched);
    }
    SUBCASE("every pre-existing element and edge survives") {
        for (const auto& e : deploy.elements) CHECK(enriched.find_element(e.name));
        for (const auto& edge : deploy.depends) {
            CHECK(std::find(enriched.depends.begin(), enriched.depends.end(), edge) !=
                  enriched.depends.end());
        }
        for (const auto& edge : deploy.executes) {
            CHECK(std::find(enriched.executes.begin(), enriched.executes.end(), edge) !=
                  enriched.executes.end());
        }
    }
}

TEST_CASE("an empty snapshot leaves the model unchanged") {
    DeploymentModel deploy = drone_models();
    CHECK(enrich_deployment(deploy, SystemSnapshot{}) == deploy);
}

TEST_CASE("snapshots referencing unknown elements are rejected") {
    DeploymentModel deploy = drone_models();
    SystemSnapshot snapshot;
    snapshot.captures["no_such_element"].ldd = "libx.so.1 => /usr/lib/libx.so.1 (0x1)\n";
    CHECK_THROWS_AS(enrich_deployment(deploy, snapshot), ModelError);
}

TEST_CASE("package names normalize for CPE guessing") {
    CHECK(normalize_package_name("libfastrtps") == "fastrtps");
    CHECK(normalize_package_name("libfastrtps_so_2_1_1") == "fastrtps");
    CHECK(normalize_package_name("libfastcdr.so.1.0.13") == "fastcdr");
    CHECK(normalize_package_name("ros-foxy-fastrtps") == "fastrtps");
    CHECK(normalize_package_name("Quad-Solver") == "quad_solver");
    CHECK(normalize_package_version("2.1.1-1ubuntu2") == "2.1.1");
    CHECK(normalize_package_version("1:2.0") == "1");
    CHECK(normalize_package_version("nodigits") == "");
}

TEST_CASE("the alias table wins over the heuristic") {
    AliasTable aliases = AliasTable::load(fixture_path("drone/alias.txt"));
    auto query = guess_cpe({"libfastrtps", "2.1.1", PackageId::Source::Ldd}, aliases, {});
    REQUIRE(query.has_value());
    CHECK(query->cpe == "cpe:2.3:a:eprosima:fast_dds");
    CHECK(query->version == "2.1.1");
}

TEST_CASE("without an alias the product dictionary decides") {
    AliasTable empty;
    auto hit = guess_cpe({"libzmq", "4.3.2", PackageId::Source::Ldd}, empty, {"zmq"});
    REQUIRE(hit.has_value());
    CHECK(hit->cpe == "cpe:2.3:a:*:zmq");
    CHECK(hit->version == "4.3.2");
    // unknown package, empty alias table and dictionary: falls through
    CHECK_FALSE(guess_cpe({"libobscure", "1.0", PackageId::Source::Ldd}, empty, {}).has_value());
}

TEST_CASE("alias patterns support globs and are tried in order") {
    AliasTable aliases = AliasTable::parse(
        "# comment\n"
        "ros-*-fastrtps  cpe:2.3:a:eprosima:fast_dds\n"
        "fast*           cpe:2.3:a:eprosima:fast_other\n");
    auto query = guess_cpe({"ros-foxy-fastrtps", "2.1.1-1", PackageId::Source::Dpkg}, aliases, {});
    REQUIRE(query.has_value());
    CHECK(query->cpe == "cpe:2.3:a:eprosima:fast_dds");  // first match wins

    CHECK_THROWS_AS(AliasTable::parse("only-one-column\n"), ParseError);
    CHECK_THROWS_AS(AliasTable::parse("pkg not-a-cpe\n"), ParseError);
}

TEST_CASE("snapshot directories require at least one capture per element") {
    saft::testing::TempDir dir("snapshot_empty");
    std::filesystem::create_directories(dir.str("element_without_captures"));
    CHECK_THROWS_AS(load_snapshot(dir.str()), ModelError);
}
