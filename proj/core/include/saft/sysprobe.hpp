#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saft/deployment.hpp"
#include "saft/vulndb.hpp"

namespace saft {

struct PackageId {
    enum class Source { Dpkg, Ldd, Manual };
    std::string name;
    std::string version;
    Source source = Source::Manual;
    bool operator==(const PackageId&) const = default;
};

/// Offline capture of a system's dependency state: per deployment element
/// the outputs of ldd, dpkg -l, and lsof, taken from a snapshot directory
/// (<element>/ldd.txt, <element>/dpkg.txt, <element>/lsof.txt).
struct SystemSnapshot {
    struct Capture {
        std::string ldd;
        std::string dpkg;
        std::string lsof;
        bool empty() const { return ldd.empty() && dpkg.empty() && lsof.empty(); }
    };
    std::map<std::string, Capture> captures;  // element name -> capture
    std::string timestamp;                    // contents of timestamp.txt, if present
};

SystemSnapshot load_snapshot(const std::string& dir);

/// One PackageId per resolved `lib => /path (0x...)` line; unparseable
/// lines are skipped with a warning.
std::vector<PackageId> parse_ldd(std::string_view text,
                                 std::vector<std::string>* warnings = nullptr);

/// PackageId per installed (`ii`) row of `dpkg -l` output.
std::vector<PackageId> parse_dpkg(std::string_view text);

/// Deployment-element name for a discovered package
/// (libfastrtps 2.1.1 from ldd -> libfastrtps_so_2_1_1).
std::string element_name_for_package(const PackageId& pkg);

/// Adds depends-on edges and Library/Package elements for every package in
/// the snapshot. Pre-existing elements and edges are preserved; the
/// operation is idempotent.
DeploymentModel enrich_deployment(const DeploymentModel& deploy, const SystemSnapshot& snapshot,
                                  std::vector<std::string>* warnings = nullptr);

/// Two-column text table `package-pattern  cpe-prefix`; patterns may use
/// '*' globs and are tried in file order against the raw and the
/// normalized package name.
struct AliasTable {
    std::vector<std::pair<std::string, std::string>> entries;

    static AliasTable load(const std::string& path);
    static AliasTable parse(std::string_view text, const std::string& file = {});
    std::optional<std::string> lookup(std::string_view raw_name,
                                      std::string_view normalized_name) const;
};

/// lib prefix / .so suffix / distro prefix stripping, lowercase,
/// hyphens to underscores.
std::string normalize_package_name(std::string_view name);

/// Leading dotted-numeric portion: 2.1.1-1ubuntu2 -> 2.1.1.
std::string normalize_package_version(std::string_view version);

/// Alias-table lookup first, then the normalized name against the product
/// dictionary (vendor wildcard). nullopt when neither applies — such
/// packages fall through to full-text search.
std::optional<CpeQuery> guess_cpe(const PackageId& pkg, const AliasTable& aliases,
                                  const std::vector<std::string>& product_dictionary);

}  // namespace saft
