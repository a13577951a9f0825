#include "saft/atgen.hpp"

#include <algorithm>

#include "saft/strings.hpp"

namespace saft {

namespace {

std::string strip_hyphens(std::string_view s) {
    std::string out;
    for (char c : s)
        if (c != '-') out.push_back(c);
    return out;
}

std::vector<std::string> fulltext_keywords(const PackageId& pkg) {
    std::vector<std::string> keywords;
    for (auto& token : split(normalize_package_name(pkg.name), '_')) {
        if (token.size() >= 2 &&
            std::find(keywords.begin(), keywords.end(), token) == keywords.end()) {
            keywords.push_back(std::move(token));
        }
    }
    return keywords;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

PackageId package_identity(const DeploymentModel::Element& element) {
    PackageId pkg;
    if (auto name = find_property(element.properties, "package")) {
        pkg.name = *name;
        if (auto version = find_property(element.properties, "version")) pkg.version = *version;
        auto source = find_property(element.properties, "source").value_or("manual");
        pkg.source = source == "ldd"    ? PackageId::Source::Ldd
                     : source == "dpkg" ? PackageId::Source::Dpkg
                                        : PackageId::Source::Manual;
        return pkg;
    }
    // Derive from names shaped like libfastrtps_so_2_1_1.
    std::string name = element.name;
    if (size_t pos = name.rfind("_so_"); pos != std::string::npos) {
        std::string version = name.substr(pos + 4);
        std::replace(version.begin(), version.end(), '_', '.');
        if (!normalize_package_version(version).empty()) {
            pkg.name = name.substr(0, pos);
            pkg.version = version;
            pkg.source = PackageId::Source::Ldd;
            return pkg;
        }
    }
    if (name.ends_with("_so")) {
        pkg.name = name.substr(0, name.size() - 3);
        pkg.source = PackageId::Source::Ldd;
        return pkg;
    }
    pkg.name = name;
    return pkg;
}

std::vector<GeneratedAt> generate_attack_trees(const DeploymentModel& deploy,
                                               const CveDatabase& db, const EpssTable& epss,
                                               const AliasTable& aliases,
                                               const CweTitleTable& cwe_titles,
                                               const AtGenOptions& options,
                                               std::vector<std::string>* warnings) {
    std::vector<const DeploymentModel::Element*> elements;
    for (const auto& e : deploy.elements) elements.push_back(&e);
    std::sort(elements.begin(), elements.end(),
              [](const auto* a, const auto* b) { return a->name < b->name; });

    const std::vector<std::string> products = db.known_products();

    std::vector<GeneratedAt> out;
    for (const auto* element : elements) {
        PackageId pkg = package_identity(*element);

        std::optional<CpeQuery> query;
        if (element->cpe) {
            query = CpeQuery{*element->cpe, std::nullopt};
            Cpe parsed = parse_cpe(*element->cpe);
            if (parsed.version() == "*" || parsed.version() == "-") {
                std::string version = normalize_package_version(pkg.version);
                if (!version.empty()) query->version = version;
            }
        } else {
            query = guess_cpe(pkg, aliases, products);
        }

        std::vector<CveRecord> matches;
        std::string search_key;
        bool by_cpe = false;
        if (query) {
            by_cpe = true;
            matches = db.match_by_cpe(*query, warnings);
            search_key = query->cpe;
            Cpe parsed = parse_cpe(query->cpe);
            if (query->version && (parsed.version() == "*" || parsed.version() == "-")) {
                // display the prefix:version form used for the lookup
                std::string prefix;
                for (int i = 0; i < 5; ++i) prefix += (i ? ":" : "") + parsed.fields[i];
                search_key = prefix + ":" + *query->version;
            }
        } else {
            std::vector<std::string> keywords = fulltext_keywords(pkg);
            if (!keywords.empty()) matches = db.match_by_fulltext(keywords);
            search_key = join(keywords, " ");
        }
        if (matches.empty()) continue;

        std::string title;
        if (!matches.front().cwe_ids.empty())
            title = cwe_titles.title_for(matches.front().cwe_ids.front());
        std::string description =
            std::string("Generated for search by ") + (by_cpe ? "cpe for keyword: " : "keyword: ") +
            search_key;
        if (!title.empty()) description += " " + title;

        std::vector<TreePtr> steps;
        for (const auto& record : matches) {
            double step_epss = options.default_epss;
            if (auto entry = epss.lookup(record.id)) {
                step_epss = entry->epss;
            } else if (warnings) {
                warnings->push_back("no EPSS entry for " + record.id + " (component '" +
                                    element->name + "'), using default " +
                                    format_double(options.default_epss));
            }
            steps.push_back(make_tree<AttackStep>(record.description, strip_hyphens(record.id),
                                                  record.id, record.cvss, step_epss, 0.0));
        }
        TreePtr tree = make_tree<IntermediateEvent>(description, std::string{},
                                                    make_gate(GateKind::Or, std::move(steps)));
        validate_tree(tree, TreeFlavor::AttackTree);
        out.push_back({element->name, std::move(tree)});
    }
    return out;
}

}  // namespace saft
