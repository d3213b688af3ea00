#include "alcc/alcc.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/accuracy_bounds.hpp"
#include "core/alcc_core.hpp"
#include "core/errors.hpp"
#include "core/field.hpp"
#include "core/polyfun.hpp"
#include "core/privacy_bounds.hpp"
#include "core/rng.hpp"
#include "core/selftest.hpp"
#include "core/share_io.hpp"
#include "core/simulator.hpp"
#include "core/version.hpp"

struct alcc_params {
    alcc::AlccParams p;
};
struct alcc_polyfn {
    alcc::PolyFn f;
    explicit alcc_polyfn(alcc::PolyFn g) : f(std::move(g)) {}
};
struct alcc_batch {
    std::vector<alcc::RMatrix> blocks;
};
struct alcc_shares {
    alcc::ShareSet s;
};
struct alcc_evals {
    alcc::EvalSet e;
};

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

thread_local std::string g_last_error;

alcc_status map_code(alcc::errc c) {
    switch (c) {
        case alcc::errc::ok: return ALCC_OK;
        case alcc::errc::invalid_argument: return ALCC_ERR_INVALID_ARGUMENT;
        case alcc::errc::config: return ALCC_ERR_CONFIG;
        case alcc::errc::dimension_mismatch: return ALCC_ERR_DIMENSION;
        case alcc::errc::data_out_of_range: return ALCC_ERR_DATA_RANGE;
        case alcc::errc::singular_system: return ALCC_ERR_SINGULAR;
        case alcc::errc::insufficient_workers: return ALCC_ERR_INSUFFICIENT_WORKERS;
        case alcc::errc::duplicate_index: return ALCC_ERR_DUPLICATE_INDEX;
        case alcc::errc::io: return ALCC_ERR_IO;
        case alcc::errc::nonfinite: return ALCC_ERR_NONFINITE;
        case alcc::errc::runtime: return ALCC_ERR_RUNTIME;
    }
    return ALCC_ERR_RUNTIME;
}

template <typename F>
alcc_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const alcc::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ALCC_ERR_RUNTIME;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ALCC_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown failure";
        return ALCC_ERR_RUNTIME;
    }
}

void require(const void* ptr, const char* name) {
    if (!ptr) alcc::fail(alcc::errc::invalid_argument, std::string("null argument: ") + name);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json parse_object(const char* text, const char* what) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        alcc::fail(alcc::errc::config, std::string(what) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) alcc::fail(alcc::errc::config, std::string(what) + ": expected a JSON object");
    return j;
}

std::uint64_t as_u64(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    alcc::fail(alcc::errc::config, key + ": expected a nonnegative integer");
}

double as_double(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    alcc::fail(alcc::errc::config, key + ": expected a number");
}

alcc::AlccParams params_from_json(const char* text) {
    alcc::AlccParams p;
    json j = parse_object(text, "params");
    for (const auto& [key, value] : j.items()) {
        if (key == "k") p.k = static_cast<std::size_t>(as_u64(value, key));
        else if (key == "t") p.t = static_cast<std::size_t>(as_u64(value, key));
        else if (key == "s") p.s = static_cast<std::size_t>(as_u64(value, key));
        else if (key == "degree") p.degree = static_cast<std::uint32_t>(as_u64(value, key));
        else if (key == "beta") p.beta = as_double(value, key);
        else if (key == "sigma_n") p.sigma_n = as_double(value, key);
        else if (key == "theta") p.theta = as_double(value, key);
        else if (key == "r") p.r = as_double(value, key);
        else if (key == "m") p.m = static_cast<std::size_t>(as_u64(value, key));
        else if (key == "n") p.n = static_cast<std::size_t>(as_u64(value, key));
        else if (key == "seed") p.seed = as_u64(value, key);
        else alcc::fail(alcc::errc::config, "unknown params key: " + key);
    }
    p.validate();
    return p;
}

alcc::ExperimentConfig config_from_text(const char* text) {
    if (!text || !*text) return alcc::ExperimentConfig{};
    return alcc::config_from_json(text);
}

} // namespace

extern "C" {

const char* alcc_version(void) { return alcc::kLibraryVersion; }

const char* alcc_last_error(void) { return g_last_error.c_str(); }

void alcc_string_free(char* s) { std::free(s); }

alcc_status alcc_selftest(char** report_out) {
    return guarded([&]() -> alcc_status {
        alcc::SelftestResult res = alcc::run_selftest();
        if (report_out) *report_out = dup_string(res.report);
        if (!res.ok()) {
            g_last_error = "selftest failures: " + std::to_string(res.failed);
            return ALCC_ERR_RUNTIME;
        }
        return ALCC_OK;
    });
}

alcc_status alcc_params_create_json(const char* text, alcc_params** out) {
    return guarded([&]() -> alcc_status {
        require(text, "json");
        require(out, "out");
        auto p = new alcc_params{params_from_json(text)};
        *out = p;
        return ALCC_OK;
    });
}

void alcc_params_free(alcc_params* p) { delete p; }

alcc_status alcc_params_workers(const alcc_params* p, uint32_t* out) {
    return guarded([&]() -> alcc_status {
        require(p, "params");
        require(out, "out");
        *out = static_cast<uint32_t>(p->p.workers());
        return ALCC_OK;
    });
}

alcc_status alcc_polyfn_create(const char* preset_or_json, alcc_polyfn** out) {
    return guarded([&]() -> alcc_status {
        require(preset_or_json, "preset_or_json");
        require(out, "out");
        std::string text(preset_or_json);
        std::size_t first = text.find_first_not_of(" \t\r\n");
        alcc::PolyFn f = (first != std::string::npos && text[first] == '{')
                             ? alcc::PolyFn::from_json(text)
                             : alcc::PolyFn::preset(text);
        *out = new alcc_polyfn(std::move(f));
        return ALCC_OK;
    });
}

void alcc_polyfn_free(alcc_polyfn* f) { delete f; }

alcc_status alcc_polyfn_bounds(const alcc_polyfn* f, size_t in_rows, size_t in_cols,
                               uint32_t* degree_out, double* growth_out,
                               double* coeff_sum_out) {
    return guarded([&]() -> alcc_status {
        require(f, "polyfn");
        auto bd = f->f.degree_and_bounds(in_rows, in_cols);
        if (degree_out) *degree_out = bd.degree;
        if (growth_out) *growth_out = bd.c;
        if (coeff_sum_out) *coeff_sum_out = bd.s_a;
        return ALCC_OK;
    });
}

alcc_status alcc_batch_create(size_t blocks, size_t rows, size_t cols, alcc_batch** out) {
    return guarded([&]() -> alcc_status {
        require(out, "out");
        if (blocks == 0 || rows == 0 || cols == 0)
            alcc::fail(alcc::errc::invalid_argument, "batch dimensions must be positive");
        auto b = new alcc_batch;
        b->blocks.assign(blocks, alcc::RMatrix(rows, cols));
        *out = b;
        return ALCC_OK;
    });
}

alcc_status alcc_batch_sample(size_t blocks, size_t rows, size_t cols,
                              const char* distribution, double radius, uint64_t seed,
                              alcc_batch** out) {
    return guarded([&]() -> alcc_status {
        require(distribution, "distribution");
        require(out, "out");
        if (blocks == 0 || rows == 0 || cols == 0)
            alcc::fail(alcc::errc::invalid_argument, "batch dimensions must be positive");
        alcc::DataDistribution dist = alcc::distribution_from_string(distribution);
        if (dist == alcc::DataDistribution::uniform && !(radius > 0.0))
            alcc::fail(alcc::errc::config, "radius: must be positive for a uniform draw");
        // Trial-0 seed derivation and data salt match the simulator, so a
        // batch sampled here equals the data of a single-trial run with this
        // seed.
        std::mt19937_64 rng(alcc::mix_seed(alcc::mix_seed(seed, 0), 0x64617461ull));
        auto b = new alcc_batch;
        b->blocks.reserve(blocks);
        for (size_t i = 0; i < blocks; ++i) {
            if (dist == alcc::DataDistribution::standard_normal)
                b->blocks.push_back(alcc::sample_standard_normal(rows, cols, rng));
            else
                b->blocks.push_back(alcc::sample_uniform(rows, cols, -radius, radius, rng));
        }
        *out = b;
        return ALCC_OK;
    });
}

size_t alcc_batch_blocks(const alcc_batch* b) { return b ? b->blocks.size() : 0; }

size_t alcc_batch_rows(const alcc_batch* b) {
    return (b && !b->blocks.empty()) ? b->blocks.front().rows() : 0;
}

size_t alcc_batch_cols(const alcc_batch* b) {
    return (b && !b->blocks.empty()) ? b->blocks.front().cols() : 0;
}

alcc_status alcc_batch_set_block(alcc_batch* b, size_t index, const double* row_major,
                                 size_t len) {
    return guarded([&]() -> alcc_status {
        require(b, "batch");
        require(row_major, "row_major");
        if (index >= b->blocks.size())
            alcc::fail(alcc::errc::invalid_argument, "block index out of range");
        alcc::RMatrix& m = b->blocks[index];
        if (len != m.size())
            alcc::fail(alcc::errc::dimension_mismatch, "block payload length mismatch");
        std::memcpy(m.data(), row_major, len * sizeof(double));
        return ALCC_OK;
    });
}

alcc_status alcc_batch_get_block(const alcc_batch* b, size_t index, double* out, size_t len) {
    return guarded([&]() -> alcc_status {
        require(b, "batch");
        require(out, "out");
        if (index >= b->blocks.size())
            alcc::fail(alcc::errc::invalid_argument, "block index out of range");
        const alcc::RMatrix& m = b->blocks[index];
        if (len != m.size())
            alcc::fail(alcc::errc::dimension_mismatch, "block payload length mismatch");
        std::memcpy(out, m.data(), len * sizeof(double));
        return ALCC_OK;
    });
}

void alcc_batch_free(alcc_batch* b) { delete b; }

alcc_status alcc_encode(const alcc_params* p, const alcc_batch* data, alcc_shares** out) {
    return guarded([&]() -> alcc_status {
        require(p, "params");
        require(data, "batch");
        require(out, "out");
        *out = new alcc_shares{alcc::encode(p->p, data->blocks)};
        return ALCC_OK;
    });
}

size_t alcc_shares_count(const alcc_shares* s) { return s ? s->s.shares.size() : 0; }

alcc_status alcc_shares_save(const alcc_shares* s, const char* path) {
    return guarded([&]() -> alcc_status {
        require(s, "shares");
        require(path, "path");
        alcc::save_shares(s->s, path);
        return ALCC_OK;
    });
}

alcc_status alcc_shares_load(const char* path, alcc_shares** out) {
    return guarded([&]() -> alcc_status {
        require(path, "path");
        require(out, "out");
        *out = new alcc_shares{alcc::load_shares(path)};
        return ALCC_OK;
    });
}

void alcc_shares_free(alcc_shares* s) { delete s; }

alcc_status alcc_eval_shares(const alcc_polyfn* f, const alcc_shares* s, alcc_evals** out) {
    return guarded([&]() -> alcc_status {
        require(f, "polyfn");
        require(s, "shares");
        require(out, "out");
        auto dims = f->f.output_dims(s->s.m, s->s.n);
        alcc::EvalSet ev;
        ev.rows = dims.first;
        ev.cols = dims.second;
        ev.poly_degree = f->f.degree_and_bounds(s->s.m, s->s.n).degree;
        ev.results.reserve(s->s.shares.size());
        for (const auto& [idx, share] : s->s.shares)
            ev.results.emplace_back(idx, alcc::worker_eval(f->f, share));
        *out = new alcc_evals{std::move(ev)};
        return ALCC_OK;
    });
}

alcc_status alcc_evals_from_shares(const alcc_shares* s, uint32_t poly_degree,
                                   alcc_evals** out) {
    return guarded([&]() -> alcc_status {
        require(s, "shares");
        require(out, "out");
        if (poly_degree == 0)
            alcc::fail(alcc::errc::invalid_argument, "poly_degree must be at least 1");
        alcc::EvalSet ev;
        ev.rows = s->s.m;
        ev.cols = s->s.n;
        ev.poly_degree = poly_degree;
        ev.results = s->s.shares;
        *out = new alcc_evals{std::move(ev)};
        return ALCC_OK;
    });
}

alcc_status alcc_evals_drop_worker(alcc_evals* e, uint32_t worker_index) {
    return guarded([&]() -> alcc_status {
        require(e, "evals");
        auto& res = e->e.results;
        auto it = std::find_if(res.begin(), res.end(),
                               [&](const auto& pr) { return pr.first == worker_index; });
        if (it == res.end())
            alcc::fail(alcc::errc::invalid_argument, "worker index not present");
        res.erase(it);
        return ALCC_OK;
    });
}

size_t alcc_evals_count(const alcc_evals* e) { return e ? e->e.results.size() : 0; }

void alcc_evals_free(alcc_evals* e) { delete e; }

alcc_status alcc_decode(const alcc_params* p, const alcc_evals* e, int use_all_evals,
                        alcc_batch** blocks_out, double* max_imag_residue_out) {
    return guarded([&]() -> alcc_status {
        require(p, "params");
        require(e, "evals");
        require(blocks_out, "blocks_out");
        alcc::DecodeResult dec = alcc::decode(p->p, e->e, use_all_evals != 0);
        auto b = new alcc_batch{std::move(dec.blocks)};
        *blocks_out = b;
        if (max_imag_residue_out) *max_imag_residue_out = dec.max_imag_residue;
        return ALCC_OK;
    });
}

alcc_status alcc_privacy_report_json(const alcc_params* p, const char* search_json,
                                     char** out) {
    return guarded([&]() -> alcc_status {
        require(p, "params");
        require(out, "out");
        alcc::SubsetSearchSpec search;
        if (search_json && *search_json) {
            json j = parse_object(search_json, "search");
            for (const auto& [key, value] : j.items()) {
                if (key == "exhaustive_cap")
                    search.exhaustive_cap = static_cast<std::size_t>(as_u64(value, key));
                else if (key == "sample_count")
                    search.sample_count = static_cast<std::size_t>(as_u64(value, key));
                else if (key == "seed") search.seed = as_u64(value, key);
                else alcc::fail(alcc::errc::config, "unknown search key: " + key);
            }
        }
        alcc::PrivacyReport rep = alcc::mis_bound(p->p, search);
        ordered_json j;
        j["eta_c_bound"] = rep.eta_c_bound;
        j["eta_s_bound"] = rep.eta_s_bound;
        j["eta_c_trace_bound"] = rep.eta_c_trace_bound;
        j["worst_subset"] = rep.worst_subset;
        j["subsets_examined"] = rep.subsets_examined;
        j["exhaustive"] = rep.exhaustive;
        j["d_mean_bound"] = alcc::d_mean_bound(p->p);
        try {
            j["eta_s_truncated"] = alcc::truncated_ds_bound(p->p, rep.eta_s_bound);
        } catch (const alcc::Error&) {
            j["eta_s_truncated"] = nullptr; // truncation level too small for the bound
        }
        *out = dup_string(j.dump(2));
        return ALCC_OK;
    });
}

alcc_status alcc_accuracy_report_json(const alcc_params* p, const alcc_polyfn* f,
                                      const uint32_t* non_stragglers, size_t count,
                                      uint32_t bits, char** out) {
    return guarded([&]() -> alcc_status {
        require(p, "params");
        require(f, "polyfn");
        require(out, "out");
        std::vector<std::uint32_t> present;
        if (non_stragglers) {
            present.assign(non_stragglers, non_stragglers + count);
        } else {
            present.resize(p->p.workers());
            std::iota(present.begin(), present.end(), 0u);
        }
        alcc::AccuracyReport rep = alcc::alcc_error_bound(p->p, f->f, present, bits);
        ordered_json j;
        j["alcc_upper_bound"] = rep.alcc_upper_bound;
        j["alcc_upper_bound_loose"] = rep.alcc_upper_bound_loose;
        j["beta_bar"] = rep.beta_bar;
        j["kappa_b"] = rep.kappa_b;
        j["lambda_min"] = rep.lambda_min;
        j["bits"] = rep.bits;
        j["mantissa_bits"] = rep.mantissa_bits;
        *out = dup_string(j.dump(2));
        return ALCC_OK;
    });
}

alcc_status alcc_lcc_delta_bounds_json(uint32_t degree, double coeff_sum, double radius,
                                       uint32_t bits, char** out) {
    return guarded([&]() -> alcc_status {
        require(out, "out");
        alcc::LccDeltaBounds b = alcc::lcc_error_lower_bounds(degree, coeff_sum, radius, bits);
        ordered_json j;
        j["modular"] = b.modular;
        j["integer_once"] = b.integer_once;
        *out = dup_string(j.dump(2));
        return ALCC_OK;
    });
}

alcc_status alcc_largest_prime_at_most(uint64_t limit, uint64_t* out) {
    return guarded([&]() -> alcc_status {
        require(out, "out");
        *out = alcc::field::largest_prime_at_most(limit);
        return ALCC_OK;
    });
}

alcc_status alcc_config_normalize_json(const char* config_json,
                                       const char* const* overrides, size_t override_count,
                                       char** out) {
    return guarded([&]() -> alcc_status {
        require(out, "out");
        if (override_count > 0) require(overrides, "overrides");
        alcc::ExperimentConfig cfg = config_from_text(config_json);
        for (size_t i = 0; i < override_count; ++i) {
            require(overrides[i], "override");
            std::string kv(overrides[i]);
            std::size_t eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                alcc::fail(alcc::errc::config, "override must be key=value: " + kv);
            alcc::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();
        *out = dup_string(alcc::config_to_json(cfg));
        return ALCC_OK;
    });
}

alcc_status alcc_experiment_run_json(const char* config_json, char** out) {
    return guarded([&]() -> alcc_status {
        require(config_json, "config_json");
        require(out, "out");
        alcc::ExperimentConfig cfg = alcc::config_from_json(config_json);
        cfg.validate();
        alcc::ExperimentResult res = alcc::run_experiment(cfg);
        ordered_json j;
        j["version"] = alcc::kLibraryVersion;
        j["config"] = ordered_json::parse(alcc::config_to_json(cfg));
        ordered_json r;
        r["e_rel_mean"] = res.e_rel_mean;
        r["neg_log10_e_rel"] = res.neg_log10_e_rel;
        r["imag_residue_max"] = res.imag_residue_max;
        r["overflow_flag"] = res.overflow_flag;
        r["encode_seconds"] = res.encode_seconds;
        r["eval_seconds"] = res.eval_seconds;
        r["decode_seconds"] = res.decode_seconds;
        ordered_json trials = ordered_json::array();
        for (const auto& t : res.trials) {
            ordered_json tj;
            tj["e_rel"] = t.e_rel;
            tj["imag_residue_max"] = t.imag_residue_max;
            tj["overflow_flag"] = t.overflow_flag;
            tj["realized_r"] = t.realized_r;
            tj["delta_used"] = t.delta_used;
            tj["encode_seconds"] = t.encode_seconds;
            tj["eval_seconds"] = t.eval_seconds;
            tj["decode_seconds"] = t.decode_seconds;
            trials.push_back(std::move(tj));
        }
        r["trials"] = std::move(trials);
        j["result"] = std::move(r);
        *out = dup_string(j.dump(2));
        return ALCC_OK;
    });
}

alcc_status alcc_experiment_run_csv(const char* config_json, char** out) {
    return guarded([&]() -> alcc_status {
        require(config_json, "config_json");
        require(out, "out");
        alcc::ExperimentConfig cfg = alcc::config_from_json(config_json);
        cfg.validate();
        alcc::ExperimentResult res = alcc::run_experiment(cfg);
        *out = dup_string(alcc::run_csv(res));
        return ALCC_OK;
    });
}

alcc_status alcc_experiment_sweep_csv(const char* config_json, const char* axis,
                                      const double* values, size_t count, char** out) {
    return guarded([&]() -> alcc_status {
        require(config_json, "config_json");
        require(axis, "axis");
        require(out, "out");
        if (count == 0) alcc::fail(alcc::errc::config, "values: sweep needs at least one value");
        require(values, "values");
        alcc::ExperimentConfig cfg = alcc::config_from_json(config_json);
        alcc::SweepAxis ax = alcc::sweep_axis_from_string(axis);
        std::vector<double> vals(values, values + count);
        std::vector<alcc::ExperimentResult> results = alcc::sweep(cfg, ax, vals);
        *out = dup_string(alcc::sweep_csv(ax, vals, results));
        return ALCC_OK;
    });
}

alcc_status alcc_experiment_manifest_json(const char* config_json, char** out) {
    return guarded([&]() -> alcc_status {
        require(config_json, "config_json");
        require(out, "out");
        alcc::ExperimentConfig cfg = alcc::config_from_json(config_json);
        cfg.validate();
        *out = dup_string(alcc::run_manifest_json(cfg));
        return ALCC_OK;
    });
}

} // extern "C"
