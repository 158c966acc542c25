#pragma once

#include "cbir/retrieval.h"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbir {

/// 100 * (entries among the top n with group == query_group) / n.
/// Throws InvalidArgument when n < 1 or n exceeds the result length.
double precision_at(const RankedResult& result, std::string_view query_group, std::size_t n);

/// (entries among the top n with group == query_group) / group_size.
double recall_at(const RankedResult& result, std::string_view query_group, std::size_t group_size, std::size_t n);

struct QueryScore {
    std::string image_id;
    std::string group_label;
    double precision_percent = 0.0;
    double recall = 0.0;
};

struct GroupScore {
    std::string group_label;
    std::size_t size = 0;
    double gp_percent = 0.0;  // mean precision over the group's queries
    double gr = 0.0;          // mean recall over the group's queries
};

struct EvalRow {
    std::size_t n = 0;
    double arp_percent = 0.0;  // mean of GP over groups
    double arr = 0.0;          // mean of GR over groups
    std::vector<GroupScore> groups;    // ordered by label
    std::vector<QueryScore> queries;   // index order
};

struct EvalReport {
    FeatureMode mode = FeatureMode::Gmlbp;
    LbpParams params;
    std::size_t dataset_size = 0;
    std::vector<std::pair<std::string, std::size_t>> group_sizes;  // ordered by label
    std::vector<EvalRow> rows;  // ascending n, no duplicates
};

/// Every indexed image queries the full index (itself included and preferred
/// on ties). Per-query precision/recall are averaged within each group, then
/// across groups. Throws InvalidArgument for an empty index, n < 1 or n larger
/// than the index.
EvalReport evaluate(const FeatureIndex& index, std::span<const std::size_t> n_values, unsigned threads = 0);

/// Aligned text table: one column per n, rows ARP (%) and ARR.
std::string format_table(const EvalReport& report);
/// `n,arp_percent,arr` then one row per n.
std::string summary_csv(const EvalReport& report);
/// `n,group,gp_percent,gr` then one row per (n, group).
std::string groups_csv(const EvalReport& report);

}  // namespace cbir
