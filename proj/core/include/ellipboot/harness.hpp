#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellipboot/mixtures.hpp"
#include "ellipboot/regions.hpp"

namespace ellipboot {

// Monte Carlo coverage/volume study over a (distribution, n, method) grid at
// one confidence level.
struct StudyConfig {
    std::vector<std::string> distributions;  // catalog names
    std::vector<int> sample_sizes;
    double alpha = 0.90;
    std::vector<Method> methods;
    int trials = 2000;
    int B = 1000;
    int C = 500;  // RBP inner resamples
    std::uint64_t master_seed = 0;
    int workers = 1;
    std::string output_path;
    std::string output_format = "csv";  // "csv" or "json"
};

// Throws std::invalid_argument naming the first violated constraint; resolves
// every distribution name against the catalog, so bad names fail before any
// work starts.
void validate(const StudyConfig& cfg);

struct CoverageRow {
    std::string distribution;
    int n = 0;
    Method method = Method::BP;
    double alpha = 0.0;
    int trials = 0;  // attempted; trials - failure_count entered the averages
    double coverage = 0.0;
    double mc_se = 0.0;
    double avg_sq_radius = 0.0;
    double avg_volume = 0.0;
    long failure_count = 0;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;
};

// Runs the full grid. Each trial t of a (dist, n) cell draws its sample and
// builds every requested region from the stream (master_seed, dist, n, t),
// so the report is bit-identical across runs, worker counts, and scheduling.
// A method throwing a numeric error in a trial increments that row's
// failure_count and is excluded from its averages; mc_se is
// sqrt(coverage (1 - coverage) / k) with k the trials averaged.
CoverageReport run_study(const StudyConfig& cfg);

// format "csv" or "json". CSV: fixed header, one row per cell, 6 significant
// digits. JSON: {"rows": [...]} mirroring CoverageRow field names; the text
// is parsed back before writing as an internal consistency check. IO errors
// are reported with the path.
void emit_report(const CoverageReport& r, const std::string& format,
                 const std::string& path);

std::string report_to_csv(const CoverageReport& r);
std::string report_to_json(const CoverageReport& r);
CoverageReport report_from_json(const std::string& text);

// Reads a StudyConfig from JSON with the same field names as the struct;
// absent fields keep their defaults.
StudyConfig config_from_json_text(const std::string& text);
StudyConfig config_from_json_file(const std::string& path);

}  // namespace ellipboot
