#include "ellipboot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <utility>

#include "json.hpp"

namespace ellipboot {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a_fold(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xFFu;
        h *= 1099511628211ULL;
    }
    return h;
}

// Stream id for trial t of a (distribution, n) cell. RngStream::derive
// avalanches the result, so the composition only needs to be injective in
// practice, not uniform.
std::uint64_t trial_stream(const std::string& dist, int n, long t) {
    return fnv1a_fold(fnv1a_fold(fnv1a(dist), static_cast<std::uint64_t>(n)),
                      static_cast<std::uint64_t>(t));
}

struct MethodOutcome {
    bool ok = false;
    bool covered = false;
    double sq_radius = 0.0;
    double vol = 0.0;
};

Ellipsoid build_method(const Sample& s, Method m, double alpha, int B, int C,
                       const SeedSpec& seed) {
    switch (m) {
        case Method::BP: return build_bp(s, alpha, B, seed);
        case Method::BT: return build_bt(s, alpha, B, seed);
        case Method::SBP: return build_sbp(s, alpha, B, seed);
        case Method::AN: return build_an(s, alpha, B, seed);
        case Method::RBP: return build_rbp(s, alpha, B, C, seed);
    }
    throw std::invalid_argument("run_study: unknown method");
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.6g", v);
    return buf;
}

}  // namespace

void validate(const StudyConfig& cfg) {
    if (cfg.distributions.empty()) {
        throw std::invalid_argument("config: distributions must be non-empty");
    }
    if (cfg.sample_sizes.empty()) {
        throw std::invalid_argument("config: sample_sizes must be non-empty");
    }
    for (const std::string& d : cfg.distributions) {
        const MixtureSpec spec = builtin(d);  // unknown names throw here
        for (int n : cfg.sample_sizes) {
            if (n < spec.p + 2) {
                throw std::invalid_argument("config: sample size " + std::to_string(n) +
                                            " is below p + 2 for distribution " + d);
            }
        }
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw std::invalid_argument("config: alpha must lie in (0, 1)");
    }
    if (cfg.methods.empty()) throw std::invalid_argument("config: methods must be non-empty");
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be at least 1");
    if (cfg.B < 100) throw std::invalid_argument("config: B must be at least 100");
    const bool wants_rbp =
        std::find(cfg.methods.begin(), cfg.methods.end(), Method::RBP) != cfg.methods.end();
    if (wants_rbp && cfg.C < 100) {
        throw std::invalid_argument("config: C must be at least 100 when RBP is requested");
    }
    if (cfg.workers < 1) throw std::invalid_argument("config: workers must be at least 1");
    if (cfg.output_format != "csv" && cfg.output_format != "json") {
        throw std::invalid_argument("config: output_format must be csv or json");
    }
}

CoverageReport run_study(const StudyConfig& cfg) {
    validate(cfg);

    struct Cell {
        std::string dist;
        MixtureSpec spec;
        Vector mean;
        int n;
    };
    std::vector<Cell> cells;
    for (const std::string& d : cfg.distributions) {
        MixtureSpec spec = builtin(d);
        Vector mu = true_mean(spec);
        for (int n : cfg.sample_sizes) cells.push_back({d, spec, mu, n});
    }

    const std::size_t m = cfg.methods.size();
    const long trials = cfg.trials;
    const long total = static_cast<long>(cells.size()) * trials;
    // One preallocated slot per (trial, method); workers write disjoint slots
    // and aggregation walks them in trial order, so the result does not
    // depend on scheduling.
    std::vector<MethodOutcome> slots(static_cast<std::size_t>(total) * m);

    std::atomic<long> cursor{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    const auto work = [&]() {
        for (;;) {
            const long i = cursor.fetch_add(1, std::memory_order_relaxed);
            if (i >= total) return;
            const Cell& cell = cells[static_cast<std::size_t>(i / trials)];
            const long t = i % trials;
            try {
                const SeedSpec seed{cfg.master_seed, trial_stream(cell.dist, cell.n, t)};
                const Sample s = draw(cell.spec, cell.n, seed);
                for (std::size_t k = 0; k < m; ++k) {
                    MethodOutcome& out = slots[static_cast<std::size_t>(i) * m + k];
                    try {
                        const Ellipsoid e =
                            build_method(s, cfg.methods[k], cfg.alpha, cfg.B, cfg.C, seed);
                        out.covered = contains(e, cell.mean);
                        out.sq_radius = e.sq_radius;
                        out.vol = volume(e);
                        out.ok = true;
                    } catch (const NumericError&) {
                        out.ok = false;
                    }
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const long want = std::min<long>(cfg.workers, total);
    if (want <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(want));
        for (long w = 0; w < want; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    CoverageReport rep;
    rep.rows.reserve(cells.size() * m);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        for (std::size_t k = 0; k < m; ++k) {
            long hits = 0;
            long fails = 0;
            double sum_r2 = 0.0;
            double sum_vol = 0.0;
            for (long t = 0; t < trials; ++t) {
                const MethodOutcome& o =
                    slots[(static_cast<std::size_t>(ci) * trials + static_cast<std::size_t>(t)) * m + k];
                if (!o.ok) {
                    ++fails;
                    continue;
                }
                if (o.covered) ++hits;
                sum_r2 += o.sq_radius;
                sum_vol += o.vol;
            }
            const long used = trials - fails;
            CoverageRow row;
            row.distribution = cells[ci].dist;
            row.n = cells[ci].n;
            row.method = cfg.methods[k];
            row.alpha = cfg.alpha;
            row.trials = cfg.trials;
            row.coverage = used > 0 ? static_cast<double>(hits) / static_cast<double>(used) : 0.0;
            row.mc_se = used > 0
                            ? std::sqrt(row.coverage * (1.0 - row.coverage) /
                                        static_cast<double>(used))
                            : 0.0;
            row.avg_sq_radius = used > 0 ? sum_r2 / static_cast<double>(used) : 0.0;
            row.avg_volume = used > 0 ? sum_vol / static_cast<double>(used) : 0.0;
            row.failure_count = fails;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

std::string report_to_csv(const CoverageReport& r) {
    std::string out =
        "distribution,n,method,alpha,trials,coverage,mc_se,avg_sq_radius,avg_volume,"
        "failure_count\n";
    for (const CoverageRow& row : r.rows) {
        out += row.distribution;
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += method_name(row.method);
        out += ',';
        out += fmt6(row.alpha);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += fmt6(row.coverage);
        out += ',';
        out += fmt6(row.mc_se);
        out += ',';
        out += fmt6(row.avg_sq_radius);
        out += ',';
        out += fmt6(row.avg_volume);
        out += ',';
        out += std::to_string(row.failure_count);
        out += '\n';
    }
    return out;
}

std::string report_to_json(const CoverageReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CoverageRow& row : r.rows) {
        rows.push_back({{"distribution", row.distribution},
                        {"n", row.n},
                        {"method", std::string(method_name(row.method))},
                        {"alpha", row.alpha},
                        {"trials", row.trials},
                        {"coverage", row.coverage},
                        {"mc_se", row.mc_se},
                        {"avg_sq_radius", row.avg_sq_radius},
                        {"avg_volume", row.avg_volume},
                        {"failure_count", row.failure_count}});
    }
    const nlohmann::json doc{{"rows", std::move(rows)}};
    return doc.dump(2) + "\n";
}

CoverageReport report_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    CoverageReport rep;
    for (const nlohmann::json& jr : doc.at("rows")) {
        CoverageRow row;
        row.distribution = jr.at("distribution").get<std::string>();
        row.n = jr.at("n").get<int>();
        row.method = method_from_name(jr.at("method").get<std::string>());
        row.alpha = jr.at("alpha").get<double>();
        row.trials = jr.at("trials").get<int>();
        row.coverage = jr.at("coverage").get<double>();
        row.mc_se = jr.at("mc_se").get<double>();
        row.avg_sq_radius = jr.at("avg_sq_radius").get<double>();
        row.avg_volume = jr.at("avg_volume").get<double>();
        row.failure_count = jr.at("failure_count").get<long>();
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

void emit_report(const CoverageReport& r, const std::string& format, const std::string& path) {
    std::string text;
    if (format == "csv") {
        text = report_to_csv(r);
    } else if (format == "json") {
        text = report_to_json(r);
        const CoverageReport back = report_from_json(text);
        if (report_to_json(back) != text) {
            throw std::runtime_error("emit_report: json round-trip check failed");
        }
    } else {
        throw std::invalid_argument("emit_report: format must be csv or json");
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("emit_report: cannot open '" + path + "' for writing");
    }
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("emit_report: write to '" + path + "' failed");
}

StudyConfig config_from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config: top-level JSON must be an object");
    static const char* known[] = {"distributions", "sample_sizes", "alpha",       "methods",
                                  "trials",        "B",            "C",           "master_seed",
                                  "workers",       "output_path",  "output_format"};
    for (const auto& item : j.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return item.key() == k;
            }) == std::end(known)) {
            throw std::invalid_argument("config: unknown field '" + item.key() + "'");
        }
    }
    StudyConfig cfg;
    if (j.contains("distributions")) {
        cfg.distributions = j.at("distributions").get<std::vector<std::string>>();
    }
    if (j.contains("sample_sizes")) {
        cfg.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
    }
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const nlohmann::json& s : j.at("methods")) {
            cfg.methods.push_back(method_from_name(s.get<std::string>()));
        }
    }
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("B")) cfg.B = j.at("B").get<int>();
    if (j.contains("C")) cfg.C = j.at("C").get<int>();
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("output_format")) {
        cfg.output_format = j.at("output_format").get<std::string>();
    }
    return cfg;
}

StudyConfig config_from_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("config: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return config_from_json_text(buf.str());
}

}  // namespace ellipboot
