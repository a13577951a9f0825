#include "saft/sysprobe.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <sstream>

#include "saft/strings.hpp"

namespace saft {

namespace fs = std::filesystem;

SystemSnapshot load_snapshot(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw ModelError("snapshot directory does not exist: " + dir);
    }
    SystemSnapshot snapshot;
    fs::path ts = fs::path(dir) / "timestamp.txt";
    if (fs::exists(ts)) snapshot.timestamp = trim(read_file(ts.string()));
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& sub : subdirs) {
        SystemSnapshot::Capture capture;
        for (const auto& [file, field] :
             {std::pair{"ldd.txt", &capture.ldd}, std::pair{"dpkg.txt", &capture.dpkg},
              std::pair{"lsof.txt", &capture.lsof}}) {
            fs::path p = sub / file;
            if (fs::exists(p)) *field = read_file(p.string());
        }
        if (capture.empty()) {
            throw ModelError("snapshot element '" + sub.filename().string() +
                             "' has no capture files");
        }
        snapshot.captures[sub.filename().string()] = std::move(capture);
    }
    return snapshot;
}

namespace {

// libfastrtps.so.2.1.1 -> {libfastrtps, 2.1.1}
PackageId package_from_soname(std::string_view soname) {
    PackageId pkg;
    pkg.source = PackageId::Source::Ldd;
    size_t so = soname.find(".so");
    if (so == std::string_view::npos) {
        pkg.name = std::string(soname);
        return pkg;
    }
    pkg.name = std::string(soname.substr(0, so));
    std::string_view rest = soname.substr(so + 3);
    if (rest.starts_with(".")) pkg.version = std::string(rest.substr(1));
    return pkg;
}

}  // namespace

std::vector<PackageId> parse_ldd(std::string_view text, std::vector<std::string>* warnings) {
    std::vector<PackageId> out;
    for (const auto& raw : split(text, '\n')) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.find("not a dynamic executable") != std::string::npos) {
            if (warnings) warnings->push_back("ldd: not a dynamic executable");
            continue;
        }
        size_t arrow = line.find("=>");
        if (arrow == std::string::npos) {
            // linux-vdso / direct loader lines carry no package information
            continue;
        }
        std::string soname = trim(line.substr(0, arrow));
        std::string target = trim(line.substr(arrow + 2));
        if (target.starts_with("not found")) {
            if (warnings) warnings->push_back("ldd: unresolved library " + soname);
            continue;
        }
        if (soname.empty()) {
            if (warnings) warnings->push_back("ldd: unparseable line '" + line + "'");
            continue;
        }
        PackageId pkg = package_from_soname(soname);
        if (std::find(out.begin(), out.end(), pkg) == out.end()) out.push_back(std::move(pkg));
    }
    return out;
}

std::vector<PackageId> parse_dpkg(std::string_view text) {
    std::vector<PackageId> out;
    for (const auto& raw : split(text, '\n')) {
        std::string line = trim(raw);
        if (!line.starts_with("ii")) continue;
        std::istringstream ss(line);
        std::string status, name, version;
        ss >> status >> name >> version;
        if (status != "ii" || name.empty() || version.empty()) continue;
        if (size_t colon = name.find(':'); colon != std::string::npos) {
            name = name.substr(0, colon);  // drop :amd64 style arch suffix
        }
        PackageId pkg{name, version, PackageId::Source::Dpkg};
        if (std::find(out.begin(), out.end(), pkg) == out.end()) out.push_back(std::move(pkg));
    }
    return out;
}

std::string element_name_for_package(const PackageId& pkg) {
    if (pkg.source == PackageId::Source::Ldd) {
        std::string name = sanitize_identifier(pkg.name) + "_so";
        if (!pkg.version.empty()) name += "_" + sanitize_identifier(pkg.version);
        return name;
    }
    std::string name = sanitize_identifier(pkg.name);
    if (!pkg.version.empty()) name += "_" + sanitize_identifier(pkg.version);
    return name;
}

DeploymentModel enrich_deployment(const DeploymentModel& deploy, const SystemSnapshot& snapshot,
                                  std::vector<std::string>* warnings) {
    DeploymentModel model = deploy;
    for (const auto& [element, capture] : snapshot.captures) {
        if (!model.find_element(element)) {
            throw ModelError("snapshot references unknown deployment element '" + element + "'");
        }
        std::vector<PackageId> packages = parse_ldd(capture.ldd, warnings);
        for (auto& pkg : parse_dpkg(capture.dpkg)) packages.push_back(std::move(pkg));
        for (const auto& pkg : packages) {
            std::string dep_name = element_name_for_package(pkg);
            if (!model.find_element(dep_name)) {
                DeploymentModel::Element dep;
                dep.name = dep_name;
                dep.kind = pkg.source == PackageId::Source::Ldd ? ElementKind::Library
                                                                : ElementKind::Package;
                dep.properties.emplace_back("package", pkg.name);
                if (!pkg.version.empty()) dep.properties.emplace_back("version", pkg.version);
                dep.properties.emplace_back(
                    "source", pkg.source == PackageId::Source::Ldd ? "ldd" : "dpkg");
                model.elements.push_back(std::move(dep));
            }
            DeploymentModel::Edge edge{element, dep_name};
            if (std::find(model.depends.begin(), model.depends.end(), edge) ==
                model.depends.end()) {
                model.depends.push_back(std::move(edge));
            }
        }
    }
    return model;
}

AliasTable AliasTable::load(const std::string& path) {
    return parse(read_file(path), path);
}

AliasTable AliasTable::parse(std::string_view text, const std::string& file) {
    AliasTable table;
    size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string pattern, prefix;
        ss >> pattern >> prefix;
        if (pattern.empty() || prefix.empty()) {
            throw ParseError("alias table rows are 'package-pattern cpe-prefix'", line_no, 1,
                             file);
        }
        if (!prefix.starts_with("cpe:2.3:")) {
            throw ParseError("alias target must be a cpe:2.3 prefix", line_no, 1, file);
        }
        table.entries.emplace_back(std::move(pattern), std::move(prefix));
    }
    return table;
}

std::optional<std::string> AliasTable::lookup(std::string_view raw_name,
                                              std::string_view normalized_name) const {
    for (const auto& [pattern, prefix] : entries) {
        if (glob_match(pattern, raw_name) || glob_match(pattern, normalized_name)) {
            return prefix;
        }
    }
    return std::nullopt;
}

std::string normalize_package_name(std::string_view name) {
    std::string n = to_lower(name);
    // cut trailing shared-object suffixes: .so[...] / _so[...]
    if (size_t pos = n.find(".so"); pos != std::string::npos) n = n.substr(0, pos);
    for (size_t pos = n.find("_so"); pos != std::string::npos; pos = n.find("_so", pos + 1)) {
        if (pos + 3 == n.size() || n[pos + 3] == '_' || n[pos + 3] == '.') {
            n = n.substr(0, pos);
            break;
        }
    }
    // distro prefixes: ros-foxy-..., ros_foxy_...
    for (char sep : {'-', '_'}) {
        std::string prefix = std::string("ros") + sep;
        if (n.starts_with(prefix)) {
            size_t next = n.find(sep, prefix.size());
            if (next != std::string::npos) n = n.substr(next + 1);
        }
    }
    if (n.starts_with("lib") && n.size() > 3) n = n.substr(3);
    std::replace(n.begin(), n.end(), '-', '_');
    return n;
}

std::string normalize_package_version(std::string_view version) {
    std::string out;
    bool expecting_digit = true;
    for (char c : version) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            out.push_back(c);
            expecting_digit = false;
        } else if (c == '.' && !expecting_digit) {
            out.push_back(c);
            expecting_digit = true;
        } else {
            break;
        }
    }
    while (!out.empty() && out.back() == '.') out.pop_back();
    return out;
}

std::optional<CpeQuery> guess_cpe(const PackageId& pkg, const AliasTable& aliases,
                                  const std::vector<std::string>& product_dictionary) {
    std::string normalized = normalize_package_name(pkg.name);
    std::string version = normalize_package_version(pkg.version);
    CpeQuery query;
    if (!version.empty()) query.version = version;
    if (auto prefix = aliases.lookup(pkg.name, normalized)) {
        query.cpe = *prefix;
        return query;
    }
    if (std::find(product_dictionary.begin(), product_dictionary.end(), normalized) !=
        product_dictionary.end()) {
        query.cpe = "cpe:2.3:a:*:" + normalized;
        return query;
    }
    return std::nullopt;
}

}  // namespace saft
