#include "cli.h"

#include "cbir/cbir.h"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace cbir::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string mode = "gmlbp";
    int neighbors = 8;
    double radius = 1.0;
    double hu_weight = 1.0;
    std::size_t top_k = 10;
    std::vector<std::size_t> n_values = {1, 3, 5, 7, 9, 11, 13, 15, 16};
    std::string image;
    std::string manifest;
    std::string index;
    std::string out;
    std::string groups_out;
    std::string gray_out;
    int window_x = 1;
    int window_y = 1;
    double threshold_factor = 1.0;
    unsigned threads = 0;
};

void add_feature_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--mode", cfg.mode, "Feature mode")
        ->check(CLI::IsMember({"lbp", "gmlbp", "hu", "combined"}))
        ->capture_default_str();
    cmd->add_option("--neighbors", cfg.neighbors, "LBP neighbor count P")
        ->check(CLI::Range(4, 16))
        ->capture_default_str();
    cmd->add_option("--radius", cfg.radius, "LBP radius R")->check(CLI::Range(1.0, 1e6))->capture_default_str();
    cmd->add_option("--hu-weight", cfg.hu_weight, "Weight of the Hu segment in combined mode")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

ExtractOptions extract_options(const RunConfig& cfg, FeatureMode mode) {
    try {
        ExtractOptions opts{LbpParams(cfg.neighbors, cfg.radius), cfg.hu_weight};
        (void)feature_dim(mode, opts.params);
        return opts;
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int run_extract(const RunConfig& cfg, std::ostream& out) {
    const FeatureMode mode = parse_feature_mode(cfg.mode);
    const auto opts = extract_options(cfg, mode);
    const GrayImage image = read_image(cfg.image);
    if (!cfg.gray_out.empty()) write_pgm(cfg.gray_out, image);
    const std::string record = serialize(extract(image, mode, opts)) + "\n";
    if (cfg.out.empty()) {
        out << record;
    } else {
        write_text(cfg.out, record);
    }
    return kSuccess;
}

int run_index(const RunConfig& cfg, std::ostream& err) {
    const FeatureMode mode = parse_feature_mode(cfg.mode);
    BuildOptions opts;
    opts.extract = extract_options(cfg, mode);
    opts.threads = cfg.threads;
    opts.base_dir = fs::path(cfg.manifest).parent_path();

    const auto start = std::chrono::steady_clock::now();
    const auto bytes = read_file(cfg.manifest);
    const DatasetManifest manifest = load_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    const FeatureIndex index = build_index(manifest, mode, opts);
    save_index(index, fs::path(cfg.out));
    err << "indexed " << index.size() << " images (" << to_string(mode) << ", dim " << index.dim() << ") in "
        << elapsed_ms(start) << " ms\n";
    return kSuccess;
}

int run_query(const RunConfig& cfg, std::ostream& out) {
    const FeatureIndex index = load_index(fs::path(cfg.index));
    const GrayImage image = read_image(cfg.image);
    const FeatureVector q = extract(image, index.mode(), ExtractOptions{index.params(), cfg.hu_weight});
    const std::string self_id = fs::path(cfg.image).stem().string();
    const RankedResult result = query(index, q, cfg.top_k, self_id);
    for (std::size_t i = 0; i < result.size(); ++i) {
        out << (i + 1) << '\t' << result[i].image_id << '\t' << result[i].group_label << '\t';
        std::array<char, 32> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), result[i].distance);
        out.write(buf.data(), ptr - buf.data());
        out << '\n';
    }
    return kSuccess;
}

int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const FeatureIndex index = load_index(fs::path(cfg.index));
    const EvalReport report = evaluate(index, cfg.n_values, cfg.threads);
    out << format_table(report);
    if (!cfg.out.empty()) write_text(cfg.out, summary_csv(report));
    if (!cfg.groups_out.empty()) write_text(cfg.groups_out, groups_csv(report));
    err << "evaluated " << index.size() << " queries in " << elapsed_ms(start) << " ms\n";
    return kSuccess;
}

int run_edgemap(const RunConfig& cfg, std::ostream& err) {
    const GrayImage image = read_image(cfg.image);
    const EdgeMap edges = moment_edge_map(image, MomentWindow{cfg.window_x, cfg.window_y}, cfg.threshold_factor);
    write_pgm(cfg.out, edges.to_image());
    err << edges.count() << " edge pixels of " << edges.edges.size() << "\n";
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Content-based image retrieval with LBP, GMLBP and Hu moment features", "cbir"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    auto* extract_cmd = app.add_subcommand("extract", "Print the feature record of one image");
    extract_cmd->add_option("image", cfg.image, "PGM/PPM image")->required();
    add_feature_options(extract_cmd, cfg);
    extract_cmd->add_option("--out", cfg.out, "Write the record to a file instead of stdout");
    extract_cmd->add_option("--gray-out", cfg.gray_out, "Also write the decoded grayscale image as P5");

    auto* index_cmd = app.add_subcommand("index", "Build a feature index from a manifest");
    index_cmd->add_option("--manifest", cfg.manifest, "Manifest of path,group_label lines")->required();
    index_cmd->add_option("--out", cfg.out, "Index file to write")->required();
    add_feature_options(index_cmd, cfg);
    index_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    auto* query_cmd = app.add_subcommand("query", "Rank indexed images against a query image");
    query_cmd->add_option("image", cfg.image, "Query image")->required();
    query_cmd->add_option("--index", cfg.index, "Index file")->required();
    query_cmd->add_option("--top-k", cfg.top_k, "Number of results")->check(CLI::PositiveNumber)->capture_default_str();
    query_cmd->add_option("--hu-weight", cfg.hu_weight, "Weight of the Hu segment for combined indexes")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    auto* eval_cmd = app.add_subcommand("eval", "Precision/recall of every image queried against the index");
    eval_cmd->add_option("--index", cfg.index, "Index file")->required();
    eval_cmd->add_option("--n-values", cfg.n_values, "Numbers of top matches")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--out", cfg.out, "Summary CSV (n,arp_percent,arr)");
    eval_cmd->add_option("--groups-out", cfg.groups_out, "Per-group CSV (n,group,gp_percent,gr)");
    eval_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    auto* edge_cmd = app.add_subcommand("edgemap", "Write the local-moment edge map as PGM");
    edge_cmd->add_option("image", cfg.image, "Input image")->required();
    edge_cmd->add_option("--out", cfg.out, "Output PGM")->required();
    edge_cmd->add_option("--window-x", cfg.window_x, "Window half-width in x")->check(CLI::NonNegativeNumber);
    edge_cmd->add_option("--window-y", cfg.window_y, "Window half-width in y")->check(CLI::NonNegativeNumber);
    edge_cmd->add_option("--threshold-factor", cfg.threshold_factor, "Edge if gradient > factor * mean")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "cbir: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (extract_cmd->parsed()) return run_extract(cfg, out);
        if (index_cmd->parsed()) return run_index(cfg, err);
        if (query_cmd->parsed()) return run_query(cfg, out);
        if (eval_cmd->parsed()) return run_eval(cfg, out, err);
        if (edge_cmd->parsed()) return run_edgemap(cfg, err);
    } catch (const UsageError& e) {
        err << "cbir: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "cbir: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}

}  // namespace cbir::cli
