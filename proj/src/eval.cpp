#include "cbir/eval.h"

#include "cbir/error.h"
#include "number_format.h"
#include "parallel.h"

#include <algorithm>
#include <cstdio>
#include <map>

namespace cbir {

namespace {

std::size_t relevant_in_top(const RankedResult& result, std::string_view group, std::size_t n) {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    if (n > result.size()) {
        throw InvalidArgument("n = " + std::to_string(n) + " exceeds the " + std::to_string(result.size()) +
                              " ranked results");
    }
    return static_cast<std::size_t>(std::count_if(result.begin(), result.begin() + static_cast<std::ptrdiff_t>(n),
                                                   [&](const RankedEntry& e) { return e.group_label == group; }));
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// RFC 4180 quoting for labels that contain separators.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

double precision_at(const RankedResult& result, std::string_view query_group, std::size_t n) {
    return 100.0 * static_cast<double>(relevant_in_top(result, query_group, n)) / static_cast<double>(n);
}

double recall_at(const RankedResult& result, std::string_view query_group, std::size_t group_size, std::size_t n) {
    if (group_size == 0) throw InvalidArgument("group size must be at least 1");
    return static_cast<double>(relevant_in_top(result, query_group, n)) / static_cast<double>(group_size);
}

EvalReport evaluate(const FeatureIndex& index, std::span<const std::size_t> n_values, unsigned threads) {
    if (index.empty()) throw InvalidArgument("cannot evaluate an empty index");
    if (n_values.empty()) throw InvalidArgument("no n values requested");
    std::vector<std::size_t> ns(n_values.begin(), n_values.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.front() < 1) throw InvalidArgument("n values must be at least 1");
    if (ns.back() > index.size()) {
        throw InvalidArgument("n = " + std::to_string(ns.back()) + " exceeds the database size " +
                              std::to_string(index.size()));
    }

    const auto& entries = index.entries();
    std::map<std::string, std::size_t> sizes;
    for (const auto& e : entries) ++sizes[e.group_label];

    // One full ranking per query; only the top max(n) are needed.
    const std::size_t depth = ns.back();
    std::vector<RankedResult> rankings(entries.size());
    detail::parallel_for(entries.size(), threads, [&](std::size_t i) {
        rankings[i] = query(index, entries[i].features, depth, entries[i].image_id);
    });

    EvalReport report;
    report.mode = index.mode();
    report.params = index.params();
    report.dataset_size = index.size();
    report.group_sizes.assign(sizes.begin(), sizes.end());

    for (std::size_t n : ns) {
        EvalRow row;
        row.n = n;
        row.queries.reserve(entries.size());
        // Group means come from integer hit totals so each is rounded once.
        std::map<std::string, std::size_t> hits;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            hits[e.group_label] += relevant_in_top(rankings[i], e.group_label, n);
            row.queries.push_back({e.image_id, e.group_label, precision_at(rankings[i], e.group_label, n),
                                   recall_at(rankings[i], e.group_label, sizes[e.group_label], n)});
        }
        double arp = 0.0;
        double arr = 0.0;
        for (const auto& [label, size] : sizes) {
            const double h = static_cast<double>(hits[label]);
            const double queries = static_cast<double>(size);
            GroupScore g{label, size, 100.0 * h / (static_cast<double>(n) * queries), h / (queries * queries)};
            arp += g.gp_percent;
            arr += g.gr;
            row.groups.push_back(std::move(g));
        }
        row.arp_percent = arp / static_cast<double>(sizes.size());
        row.arr = arr / static_cast<double>(sizes.size());
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string format_table(const EvalReport& report) {
    std::string out = "mode " + std::string(to_string(report.mode)) + ", P=" +
                      std::to_string(report.params.neighbors()) + ", R=" +
                      detail::format_double(report.params.radius()) + ", " + std::to_string(report.dataset_size) +
                      " images in " + std::to_string(report.group_sizes.size()) + " groups\n";

    std::vector<std::vector<std::string>> table(3);
    table[0].push_back("top matches");
    table[1].push_back("ARP (%)");
    table[2].push_back("ARR");
    for (const auto& row : report.rows) {
        table[0].push_back(std::to_string(row.n));
        table[1].push_back(fixed(row.arp_percent, 2));
        table[2].push_back(fixed(row.arr, 4));
    }
    std::vector<std::size_t> widths(table[0].size(), 0);
    for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
    }
    for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            const std::string pad(widths[c] - line[c].size(), ' ');
            out += c == 0 ? line[c] + pad : "  " + pad + line[c];
        }
        out += '\n';
    }
    return out;
}

std::string summary_csv(const EvalReport& report) {
    std::string out = "n,arp_percent,arr\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.n) + "," + detail::format_double(row.arp_percent) + "," +
               detail::format_double(row.arr) + "\n";
    }
    return out;
}

std::string groups_csv(const EvalReport& report) {
    std::string out = "n,group,gp_percent,gr\n";
    for (const auto& row : report.rows) {
        for (const auto& g : row.groups) {
            out += std::to_string(row.n) + "," + csv_field(g.group_label) + "," + detail::format_double(g.gp_percent) + "," +
                   detail::format_double(g.gr) + "\n";
        }
    }
    return out;
}

}  // namespace cbir
