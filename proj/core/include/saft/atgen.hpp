#pragma once

#include <string>
#include <vector>

#include "saft/cwe.hpp"
#include "saft/deployment.hpp"
#include "saft/sysprobe.hpp"
#include "saft/tree.hpp"
#include "saft/vulndb.hpp"

namespace saft {

struct GeneratedAt {
    std::string component;  // deployment element name the tree belongs to
    TreePtr tree;
};

struct AtGenOptions {
    double default_epss = 0.0;  // used when a CVE has no EPSS entry
};

/// One attack tree per vulnerable deployment element: an OR of one
/// AttackStep per matched CVE (id order). Elements resolve to CVEs via
/// their CPE (explicit `cpe` property, alias table, or product
/// dictionary); elements without any CPE fall back to full-text search
/// over the CVE descriptions. Elements with no matches yield no tree.
std::vector<GeneratedAt> generate_attack_trees(const DeploymentModel& deploy,
                                               const CveDatabase& db, const EpssTable& epss,
                                               const AliasTable& aliases,
                                               const CweTitleTable& cwe_titles,
                                               const AtGenOptions& options = {},
                                               std::vector<std::string>* warnings = nullptr);

/// Package identity of a deployment element: enrichment properties when
/// present, otherwise derived from the element name
/// (libfastrtps_so_2_1_1 -> {libfastrtps, 2.1.1}).
PackageId package_identity(const DeploymentModel::Element& element);

}  // namespace saft
