#include "benchprio/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "benchprio/rng.hpp"

namespace benchprio {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Minimal RFC4180-ish row splitter; quotes only matter when a field starts
// with one.
std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (true) {
        std::string field;
        if (i < line.size() && line[i] == '"') {
            ++i;
            while (i < line.size()) {
                if (line[i] == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else if (line[i] == '"') {
                    ++i;
                    break;
                } else {
                    field += line[i++];
                }
            }
        } else {
            while (i < line.size() && line[i] != ',') field += line[i++];
        }
        fields.push_back(std::move(field));
        if (i >= line.size()) break;
        ++i;  // skip comma
    }
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> read_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(content);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

double parse_change(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(s, &consumed);
        if (consumed != s.size() || !std::isfinite(v))
            throw ParseError("bad change value '" + s + "' in " + path.string());
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad change value '" + s + "' in " + path.string());
    }
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name,
                      const std::filesystem::path& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw ParseError("missing column '" + name + "' in " + path.string());
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

CoverageMatrix load_coverage(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError("malformed coverage JSON in " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || !doc.contains("benchmarks") ||
        !doc["benchmarks"].is_array())
        throw ParseError("coverage JSON schema violation in " + path.string());

    CoverageMatrix cov(doc["version"].get<std::string>());
    std::set<BenchmarkId> seen;
    for (const auto& entry : doc["benchmarks"]) {
        if (!entry.contains("method") || !entry["method"].is_string())
            throw ParseError("benchmark entry without method in " + path.string());
        BenchmarkId id{entry["method"].get<std::string>(), {}};
        if (id.method.empty()) throw ParseError("empty method name in " + path.string());
        if (entry.contains("params")) {
            for (const auto& p : entry["params"])
                id.params.emplace_back(p.at("k").get<std::string>(),
                                       p.at("v").get<std::string>());
        }
        if (!id.has_unique_keys())
            throw ParseError("duplicate param key for " + id.to_string() + " in " +
                             path.string());
        if (!seen.insert(id).second)
            throw DuplicateBenchmark("duplicate benchmark " + id.to_string() + " in " +
                                     path.string());
        std::set<MethodRef> covered;
        if (entry.contains("covered")) {
            for (const auto& m : entry["covered"]) {
                const auto ref = m.get<std::string>();
                if (ref.empty()) throw ParseError("empty method ref in " + path.string());
                covered.insert(ref);  // duplicates collapse silently
            }
        }
        cov.add(std::move(id), std::move(covered));
    }
    if (cov.size() == 0) throw ParseError("coverage file lists no benchmarks: " + path.string());
    return cov;
}

void save_coverage(const CoverageMatrix& cov, const std::filesystem::path& path) {
    json doc;
    doc["version"] = cov.version();
    doc["benchmarks"] = json::array();
    for (const auto& [id, covered] : cov.benchmarks()) {
        json entry;
        entry["method"] = id.method;
        entry["params"] = json::array();
        for (const auto& [k, v] : id.sorted_params())
            entry["params"].push_back({{"k", k}, {"v", v}});
        entry["covered"] = json::array();
        for (const auto& m : covered) entry["covered"].push_back(m);
        doc["benchmarks"].push_back(std::move(entry));
    }
    write_file(path, doc.dump(2) + "\n");
}

ChangeHistory load_history(const std::filesystem::path& path, bool absolute_values) {
    const auto lines = read_lines(read_file(path));
    if (lines.empty()) throw ParseError("empty history CSV: " + path.string());
    const auto header = split_csv_row(lines[0]);
    const auto c_version = column_of(header, "version", path);
    const auto c_method = column_of(header, "method", path);
    const auto c_params = column_of(header, "params", path);
    const auto c_change = column_of(header, "change_percent", path);

    ChangeHistory hist;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto row = split_csv_row(lines[i]);
        const std::size_t needed = std::max({c_version, c_method, c_params, c_change});
        if (row.size() <= needed)
            throw ParseError("short row " + std::to_string(i + 1) + " in " + path.string());
        double change = parse_change(row[c_change], path);
        if (change < 0.0) {
            if (!absolute_values)
                throw NegativeChange("negative change in " + path.string() + " row " +
                                     std::to_string(i + 1) +
                                     " (pass absolute_values to strip direction)");
            change = -change;
        }
        hist.add(BenchmarkId::from_parts(row[c_method], row[c_params]), row[c_version],
                 change);
    }
    return hist;
}

void save_history(const ChangeHistory& hist, const std::filesystem::path& path) {
    std::string out = "version,method,params,change_percent\n";
    for (const auto& [id, list] : hist.entries()) {
        for (const auto& [version, change] : list) {
            out += csv_escape(version) + ',' + csv_escape(id.method) + ',' +
                   csv_escape(id.params_string()) + ',' + fmt_double(change) + '\n';
        }
    }
    write_file(path, out);
}

DiffSet load_diff(const std::filesystem::path& path) {
    DiffSet diff;
    for (auto& line : read_lines(read_file(path))) {
        // trim surrounding whitespace; blank lines are skipped, never errors
        const auto begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t");
        diff.changed_methods.insert(line.substr(begin, end - begin + 1));
    }
    return diff;
}

void save_diff(const DiffSet& diff, const std::filesystem::path& path) {
    std::string out;
    for (const auto& m : diff.changed_methods) out += m + '\n';
    write_file(path, out);
}

GroundTruthChanges load_truth(const std::filesystem::path& path) {
    const auto lines = read_lines(read_file(path));
    if (lines.empty()) throw ParseError("empty truth CSV: " + path.string());
    const auto header = split_csv_row(lines[0]);
    const auto c_method = column_of(header, "method", path);
    const auto c_params = column_of(header, "params", path);
    const auto c_change = column_of(header, "change_percent", path);

    GroundTruthChanges truth;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto row = split_csv_row(lines[i]);
        if (row.size() <= std::max({c_method, c_params, c_change}))
            throw ParseError("short row " + std::to_string(i + 1) + " in " + path.string());
        const double change = parse_change(row[c_change], path);
        if (change < 0.0)
            throw NegativeChange("negative truth change in " + path.string() + " row " +
                                 std::to_string(i + 1));
        truth.add(BenchmarkId::from_parts(row[c_method], row[c_params]), change);
    }
    return truth;
}

void save_truth(const GroundTruthChanges& truth, const std::filesystem::path& path) {
    std::string out = "method,params,change_percent\n";
    for (const auto& [id, change] : truth.entries())
        out += csv_escape(id.method) + ',' + csv_escape(id.params_string()) + ',' +
               fmt_double(change) + '\n';
    write_file(path, out);
}

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_benchmarks < 1 || spec.n_methods < 1 || spec.n_versions < 1)
        throw std::invalid_argument("synthetic counts must be >= 1");
    if (spec.coverage_density <= 0.0 || spec.coverage_density > 1.0)
        throw std::invalid_argument("coverage_density must be in (0,1]");
    if (spec.change_correlation < 0.0 || spec.change_correlation > 1.0)
        throw std::invalid_argument("change_correlation must be in [0,1]");

    Rng rng(spec.seed);

    std::vector<MethodRef> methods;
    methods.reserve(spec.n_methods);
    for (std::size_t j = 0; j < spec.n_methods; ++j) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "gen.pkg.Unit%04zu.call", j);
        methods.emplace_back(buf);
    }

    CoverageMatrix cov("synthetic");
    std::vector<double> sizes(spec.n_benchmarks, 0.0);
    for (std::size_t b = 0; b < spec.n_benchmarks; ++b) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "gen.bench.Suite.b%04zu", b);
        std::set<MethodRef> covered;
        for (std::size_t j = 0; j < spec.n_methods; ++j)
            if (rng.bernoulli(spec.coverage_density)) covered.insert(methods[j]);
        sizes[b] = static_cast<double>(covered.size());
        cov.add(BenchmarkId{buf, {}}, std::move(covered));
    }

    // Standardized coverage sizes drive the planted changes.
    double mean = 0.0;
    for (double s : sizes) mean += s;
    mean /= static_cast<double>(spec.n_benchmarks);
    double var = 0.0;
    for (double s : sizes) var += (s - mean) * (s - mean);
    var /= static_cast<double>(spec.n_benchmarks);
    const double sd = std::sqrt(var);

    const double rho = spec.change_correlation;
    const double noise_scale = std::sqrt(std::max(0.0, 1.0 - rho * rho));

    GroundTruthChanges truth;
    ChangeHistory hist;
    const auto& entries = cov.benchmarks();
    for (std::size_t b = 0; b < spec.n_benchmarks; ++b) {
        const double z = sd > 0.0 ? (sizes[b] - mean) / sd : 0.0;
        const double y = rho * z + noise_scale * rng.normal();
        const double change = std::max(0.0, 20.0 + 8.0 * y);
        truth.add(entries[b].first, change);
        for (std::size_t v = 0; v < spec.n_versions; ++v) {
            const double wobble = 0.75 + 0.5 * rng.next_double();
            const double h = std::max(0.0, change * wobble + 2.0 * rng.normal());
            hist.add(entries[b].first, "v" + std::to_string(v + 1), h);
        }
    }

    DiffSet diff;
    for (const auto& m : methods)
        if (rng.bernoulli(0.5)) diff.changed_methods.insert(m);

    return SyntheticInstance{std::move(cov), std::move(hist), std::move(diff),
                             std::move(truth)};
}

}  // namespace benchprio
