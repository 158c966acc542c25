// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "cbir/cbir.h"
#include "cli.h"
#include "support/oracles.h"
#include "support/synthetic.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cbir;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Collects failed checks; the first few messages end up in the report line.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++total_;
        if (!ok) {
            ++failed_;
            if (failures_.size() < 3) failures_.push_back(what);
        }
    }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::string s = std::to_string(total_ - failed_) + "/" + std::to_string(total_) + " checks";
        for (const auto& f : failures_) s += "; " + f;
        return s;
    }

private:
    int total_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
};

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "cbir");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    return code;
}

std::vector<std::size_t> one_to(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i + 1;
    return v;
}

/// Shared dataset for criteria 4, 7, 8 and 9.
struct SeparableDataset {
    synth::TempDir dir{"acceptance"};
    fs::path manifest = synth::write_separable_dataset(dir.path());
    std::size_t size = synth::kSeparableGroups * synth::kSeparableGroupSize;
};

std::string ac1(Check& c) {
    const Window3x3 fig = {6, 5, 2, 7, 6, 1, 9, 8, 7};
    const auto start = Clock::now();
    const LbpCode code = lbp_code_3x3(fig);
    const double elapsed = ms_since(start);
    c.expect(code == 248, "code " + std::to_string(code));
    c.expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " ms");
    return "3x3 fixture -> " + std::to_string(code) + " in " + std::to_string(elapsed * 1000.0) + " us";
}

std::string ac2(Check& c) {
    c.expect(rotation_invariant(124, 8) == 31, "124 -> " + std::to_string(rotation_invariant(124, 8)));
    for (LbpCode code = 0; code < 256; ++code) {
        const LbpCode ri = rotation_invariant(code, 8);
        c.expect(ri == oracle::min_rotation(code, 8), "oracle mismatch at " + std::to_string(code));
        c.expect(rotation_invariant(ri, 8) == ri, "not idempotent at " + std::to_string(code));
        c.expect(ri <= code, "not minimal at " + std::to_string(code));
        bool in_orbit = false;
        for (int k = 0; k < 8; ++k) {
            const LbpCode rotated = rotate_code(code, k, 8);
            in_orbit = in_orbit || rotated == ri;
            c.expect(rotation_invariant(rotated, 8) == ri, "orbit not constant at " + std::to_string(code));
        }
        c.expect(in_orbit, "result outside the orbit of " + std::to_string(code));
    }
    return "124 -> 31; 256 codes: oracle, idempotence, orbit";
}

std::string ac3(Check& c) {
    // Random textures, duplicated images across groups (zero-distance ties)
    // and the checkerboard set, for every mode.
    std::mt19937 rng(101);
    std::vector<IndexEntry> base;
    std::vector<GrayImage> images;
    for (int i = 0; i < 12; ++i) images.push_back(synth::random_image(16, 16, rng, 1, 255));
    images.push_back(images[0]);
    images.push_back(images[5]);
    for (int p : {2, 3, 4}) images.push_back(synth::checkerboard(16, p, 30, 200));
    std::string modes;
    for (auto mode : {FeatureMode::Lbp, FeatureMode::Gmlbp, FeatureMode::Hu, FeatureMode::Combined}) {
        std::vector<IndexEntry> entries;
        for (std::size_t i = 0; i < images.size(); ++i) {
            entries.push_back({"img" + std::to_string(i), "g" + std::to_string(i % 4), extract(images[i], mode)});
        }
        const FeatureIndex index(mode, LbpParams(), entries);
        const std::size_t n1[] = {1};
        const double arp = evaluate(index, n1).rows[0].arp_percent;
        c.expect(arp == 100.0, std::string(to_string(mode)) + " ARP(1) = " + std::to_string(arp));
        modes += std::string(modes.empty() ? "" : ",") + std::string(to_string(mode));
    }
    return "ARP(1) == 100 for " + modes;
}

std::string ac4(Check& c, const SeparableDataset& data) {
    std::string detail;
    for (const char* mode : {"lbp", "gmlbp"}) {
        const auto start = Clock::now();
        const auto idx = (data.dir / (std::string(mode) + "_ac4.idx")).string();
        const auto csv = (data.dir / (std::string(mode) + "_ac4.csv")).string();
        c.expect(run_cli({"index", "--manifest", data.manifest.string(), "--out", idx, "--mode", mode}) == 0,
                 std::string(mode) + " index failed");
        c.expect(run_cli({"eval", "--index", idx, "--n-values", "1,2,3,4,5,6,7,8,9,10", "--out", csv}) == 0,
                 std::string(mode) + " eval failed");
        const double elapsed = ms_since(start);
        const auto report = evaluate(load_index(fs::path(idx)), one_to(10));
        for (const auto& row : report.rows) {
            c.expect(row.arp_percent == 100.0,
                     std::string(mode) + " ARP(" + std::to_string(row.n) + ") = " + std::to_string(row.arp_percent));
        }
        c.expect(report.rows.back().arr == 1.0, std::string(mode) + " ARR(10) = " + std::to_string(report.rows.back().arr));
        const std::string expected_tail = "10,100,1\n";
        const std::string text = synth::slurp(csv);
        c.expect(text.size() >= expected_tail.size() && text.ends_with(expected_tail), std::string(mode) + " csv tail");
        c.expect(elapsed < 10000.0, std::string(mode) + " end-to-end " + std::to_string(elapsed) + " ms");
        detail += std::string(detail.empty() ? "" : "; ") + mode + " end-to-end " + std::to_string(elapsed) + " ms";
    }
    return "4x10 checkerboards, ARP(1..10) == 100, ARR(10) == 1; " + detail;
}

std::string ac5(Check& c) {
    std::mt19937 rng(103);
    for (int i = 0; i < 20; ++i) {
        const auto img = synth::random_image(8, 8, rng, 0, i % 2 ? 255 : 3);  // low range forces ties
        c.expect(lbp_histogram(img, LbpMode::Classic3x3).bins() == oracle::classic_lbp_hist(img),
                 "lbp histogram " + std::to_string(i));
        const auto gm = gmlbp_histograms(img);
        const auto expect = oracle::gmlbp_hists(img);
        for (int k = 0; k < 9; ++k) c.expect(gm[k].bins() == expect[k], "gmlbp histogram " + std::to_string(i));
    }
    for (int i = 0; i < 20; ++i) {
        const auto img = synth::random_image(5, 5, rng, 1, 255);
        const auto got = central_moments(img);
        const auto want = oracle::central_moments(img);
        c.expect(rel_close(got.mass(), want.m00, 1e-12), "mass");
        for (int p = 0; p <= 3; ++p) {
            for (int q = 0; p + q <= 3; ++q) {
                // First-order central moments are zero up to rounding; compare
                // them on the scale of mass * extent instead of relatively.
                const bool ok = p + q == 1
                                    ? std::abs(got(p, q) - want.mu.at({p, q})) <= 1e-12 * want.m00 * 5.0
                                    : rel_close(got(p, q), want.mu.at({p, q}), 1e-12);
                c.expect(ok, "mu" + std::to_string(p) + std::to_string(q));
            }
        }
        for (int m = 0; m <= 3; ++m) {
            for (int n = 0; m + n <= 3; ++n) {
                const auto map = local_moments(img, m, n, MomentWindow{1, 1});
                const auto ref = oracle::local_moments(img, m, n, 1, 1);
                for (std::size_t k = 0; k < ref.size(); ++k) {
                    c.expect(rel_close(map.values()[k], ref[k], 1e-12) || map.values()[k] == ref[k],
                             "M" + std::to_string(m) + std::to_string(n));
                }
            }
        }
    }
    return "20 random 8x8 LBP/GMLBP exact; 20 random 5x5 central/local moments within 1e-12";
}

std::string ac6(Check& c) {
    std::vector<GrayImage> images = {synth::gaussian_blob(32), synth::gaussian_blob(25)};
    std::mt19937 rng(107);
    for (int i = 0; i < 8; ++i) images.push_back(synth::random_image(12, 10, rng));
    for (const auto& img : images) {
        const auto h = hu_moments(img);
        const auto moved = hu_moments(synth::zero_pad(img, 5, 2, 1, 7));
        const auto turned = hu_moments(synth::rotate90(img));
        const auto mirrored = hu_moments(synth::flip_horizontal(img));
        for (int k = 0; k < 7; ++k) {
            c.expect(rel_close(h[k], moved[k], 1e-12), "translation M" + std::to_string(k + 1));
            c.expect(rel_close(std::abs(h[k]), std::abs(turned[k]), 1e-9), "rotation M" + std::to_string(k + 1));
        }
        for (int k = 0; k < 6; ++k) c.expect(rel_close(h[k], mirrored[k], 1e-9), "mirror M" + std::to_string(k + 1));
        c.expect(rel_close(h[6], -mirrored[6], 1e-9), "mirror M7 sign");
    }
    const auto blob = synth::gaussian_blob(40);
    const auto a = hu_moments(blob);
    const auto b = hu_moments(synth::block_replicate(blob, 2));
    double worst = 0.0;
    for (int k = 0; k < 7; ++k) {
        const double rel = std::abs(a[k] - b[k]) / std::abs(a[k]);
        worst = std::max(worst, rel);
        c.expect(rel <= 0.05, "scale M" + std::to_string(k + 1) + " off by " + std::to_string(rel));
    }
    return "translation, rotation, mirror on 10 images; 2x scale worst " + std::to_string(worst * 100.0) + "%";
}

std::string ac7(Check& c, const SeparableDataset& data) {
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 64);
    for (int i = 0; i < 1000; ++i) {
        const int d = dim(rng);
        std::vector<double> x(d), y(d);
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = i % 10 == 0 ? 0.0 : u(rng);
        const double dxy = d1_distance(x, y);
        c.expect(dxy >= 0.0, "negative distance");
        c.expect(dxy == d1_distance(y, x), "asymmetric distance");
        c.expect(d1_distance(x, x) == 0.0, "non-zero self distance");
    }
    std::size_t checked = 0;
    for (auto mode : {FeatureMode::Lbp, FeatureMode::Gmlbp, FeatureMode::Hu, FeatureMode::Combined}) {
        const auto manifest = load_manifest(synth::slurp(data.manifest));
        const auto index = build_index(manifest, mode, {{}, data.manifest.parent_path()});
        for (const auto& e : index.entries()) {
            const auto r = query(index, e.features, 1, e.image_id);
            c.expect(r.size() == 1 && r[0].image_id == e.image_id && r[0].distance == 0.0,
                     std::string(to_string(mode)) + " self rank for " + e.image_id);
            ++checked;
        }
    }
    return "1000 random pairs; rank-1 self-retrieval for " + std::to_string(checked) + " queries";
}

std::string ac8(Check& c, const SeparableDataset& data) {
    const auto d = [&](const std::string& name) { return (data.dir / name).string(); };
    const auto m = data.manifest.string();
    for (const char* mode : {"lbp", "combined"}) {
        const std::string mo = mode;
        c.expect(run_cli({"index", "--manifest", m, "--out", d(mo + "1.idx"), "--mode", mode, "--threads", "4"}) == 0,
                 mo + " index #1");
        c.expect(run_cli({"index", "--manifest", m, "--out", d(mo + "2.idx"), "--mode", mode, "--threads", "1"}) == 0,
                 mo + " index #2");
        const std::string bytes = synth::slurp(d(mo + "1.idx"));
        c.expect(!bytes.empty() && bytes == synth::slurp(d(mo + "2.idx")), mo + " index files differ");

        const auto loaded = load_index(fs::path(d(mo + "1.idx")));
        save_index(loaded, fs::path(d(mo + "3.idx")));
        c.expect(load_index(fs::path(d(mo + "3.idx"))) == loaded, mo + " save/load equality");
        c.expect(synth::slurp(d(mo + "3.idx")) == bytes, mo + " re-saved bytes differ");
        const auto manifest = load_manifest(synth::slurp(data.manifest));
        c.expect(loaded == build_index(manifest, parse_feature_mode(mode), {{}, data.manifest.parent_path()}),
                 mo + " loaded index differs from a fresh build");

        for (int run = 1; run <= 2; ++run) {
            const auto r = std::to_string(run);
            c.expect(run_cli({"eval", "--index", d(mo + "1.idx"), "--out", d(mo + "s" + r + ".csv"), "--groups-out",
                              d(mo + "g" + r + ".csv"), "--threads", run == 1 ? "3" : "1"}) == 0,
                     mo + " eval #" + r);
        }
        c.expect(synth::slurp(d(mo + "s1.csv")) == synth::slurp(d(mo + "s2.csv")), mo + " summary CSVs differ");
        c.expect(synth::slurp(d(mo + "g1.csv")) == synth::slurp(d(mo + "g2.csv")), mo + " group CSVs differ");
    }
    return "index x2 byte-identical, save/load round trip, eval x2 byte-identical CSVs (lbp, combined)";
}

std::string ac9(Check& c, const SeparableDataset& data) {
    const auto manifest = load_manifest(synth::slurp(data.manifest));
    std::string detail;
    for (auto mode : {FeatureMode::Lbp, FeatureMode::Hu}) {
        const auto index = build_index(manifest, mode, {{}, data.manifest.parent_path()});
        const auto report = evaluate(index, one_to(index.size()));
        double worst = 0.0;
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& row = report.rows[i];
            if (i > 0) c.expect(row.arr >= report.rows[i - 1].arr, "ARR decreases at n=" + std::to_string(row.n));
            std::map<std::string, std::pair<double, double>> sums;
            std::map<std::string, int> counts;
            for (const auto& q : row.queries) {
                sums[q.group_label].first += q.precision_percent;
                sums[q.group_label].second += q.recall;
                ++counts[q.group_label];
            }
            double arp = 0.0, arr = 0.0;
            for (const auto& g : row.groups) {
                const double gp = sums[g.group_label].first / counts[g.group_label];
                const double gr = sums[g.group_label].second / counts[g.group_label];
                worst = std::max({worst, std::abs(gp - g.gp_percent) / std::max(1.0, gp),
                                  std::abs(gr - g.gr) / std::max(1.0, gr)});
                arp += gp;
                arr += gr;
            }
            arp /= static_cast<double>(row.groups.size());
            arr /= static_cast<double>(row.groups.size());
            worst = std::max({worst, std::abs(arp - row.arp_percent) / std::max(1.0, arp),
                              std::abs(arr - row.arr) / std::max(1.0, arr)});
        }
        c.expect(worst <= 1e-12, std::string(to_string(mode)) + " recomputation off by " + std::to_string(worst));
        c.expect(report.rows.back().arr == 1.0, std::string(to_string(mode)) + " ARR(|DB|) = " +
                                                    std::to_string(report.rows.back().arr));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s worst recompute diff %.1e", to_string(mode).data(), worst);
        detail += std::string(detail.empty() ? "" : "; ") + buf;
    }
    return "ARR monotone over n=1..40, ARR(40) == 1; " + detail;
}

}  // namespace

int main() {
    SeparableDataset data;
    const std::vector<std::pair<std::string, std::function<std::string(Check&)>>> criteria = {
        {"AC1", ac1},
        {"AC2", ac2},
        {"AC3", ac3},
        {"AC4", [&](Check& c) { return ac4(c, data); }},
        {"AC5", ac5},
        {"AC6", ac6},
        {"AC7", [&](Check& c) { return ac7(c, data); }},
        {"AC8", [&](Check& c) { return ac8(c, data); }},
        {"AC9", [&](Check& c) { return ac9(c, data); }},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Check check;
        std::string detail;
        try {
            detail = fn(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const bool ok = check.ok();
        failed += ok ? 0 : 1;
        std::printf("%s %s  %s [%s]\n", name.c_str(), ok ? "PASS" : "FAIL", detail.c_str(), check.summary().c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
