#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/alcc_core.hpp"
#include "core/lcc_baseline.hpp"
#include "core/polyfun.hpp"

namespace alcc {

enum class Protocol { alcc, lcc };
enum class DataDistribution { standard_normal, uniform };
enum class StragglerPolicy { none, fixed_set, random_set };

Protocol protocol_from_string(const std::string& name);
std::string to_string(Protocol p);
DataDistribution distribution_from_string(const std::string& name);
std::string to_string(DataDistribution d);
StragglerPolicy stragglers_from_string(const std::string& name);
std::string to_string(StragglerPolicy s);

// Flat experiment description; every field maps 1:1 to a config key so file
// values and key=value overrides compose trivially. The polynomial degree is
// taken from the function itself.
struct ExperimentConfig {
    std::string protocol = "alcc";
    std::size_t k = 1;
    std::size_t t = 0;
    std::size_t s = 0;
    std::size_t m_total = 1; // m' = k * m rows overall
    std::size_t n = 1;

    // analog protocol
    double beta = 1.5;
    double sigma_n = 0.0;
    double theta = 3.0;
    double r = 0.0; // 0: use the realized max |x| of each trial's data

    // finite-field baseline
    std::uint64_t p = 0; // 0: largest prime whose square fits `bits`
    std::uint32_t bits = 64;
    double delta = 0.0; // 0: overflow criterion at equality for realized r
    std::string mode = "modular";

    std::string function = "gram"; // preset name, or inline function JSON
    std::string distribution = "standard_normal";
    std::string stragglers = "none";
    std::vector<std::uint32_t> straggler_indices;
    std::uint64_t straggler_seed = 0; // 0: derived from seed
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    int threads = 1;

    // Raises a config error naming the offending key.
    void validate() const;
    PolyFn make_function() const;
};

struct TrialResult {
    double e_rel = 0.0;
    double imag_residue_max = 0.0; // analog only
    bool overflow_flag = false;    // field baseline only
    double realized_r = 0.0;
    double delta_used = 0.0; // field baseline only
    double encode_seconds = 0.0;
    double eval_seconds = 0.0;
    double decode_seconds = 0.0;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;
    double e_rel_mean = 0.0;
    double neg_log10_e_rel = 0.0; // of the mean
    double imag_residue_max = 0.0;
    bool overflow_flag = false;
    double encode_seconds = 0.0;
    double eval_seconds = 0.0;
    double decode_seconds = 0.0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class SweepAxis { m_total, beta, bits, sigma_n, p };
SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis a);

// One run_experiment per value, in order; each cell gets fresh data through
// a seed derived from (seed, cell index).
std::vector<ExperimentResult> sweep(const ExperimentConfig& tmpl, SweepAxis axis,
                                    const std::vector<double>& values);

// Deterministic result tables: no wall times, 17-significant-digit floats.
std::string run_csv(const ExperimentResult& res);
std::string sweep_csv(SweepAxis axis, const std::vector<double>& values,
                      const std::vector<ExperimentResult>& results);

// Full effective config + seed + library version, for exact re-runs.
std::string run_manifest_json(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

} // namespace alcc
