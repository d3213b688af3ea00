#include "core/simulator.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <thread>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/version.hpp"

namespace alcc {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kDataSalt = 0x64617461ull;
constexpr std::uint64_t kStragglerSalt = 0x73747267ull;
constexpr std::uint64_t kCellSalt = 0x63656c6cull;
constexpr std::size_t kSlabRows = 4096;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Fixed worker-to-thread striding; every task writes only its own slot, so
// results do not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t nt = std::min<std::size_t>(std::max(threads, 1), count);
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += nt) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace

Protocol protocol_from_string(const std::string& name) {
    if (name == "alcc") return Protocol::alcc;
    if (name == "lcc") return Protocol::lcc;
    fail(errc::config, "protocol: expected \"alcc\" or \"lcc\", got \"" + name + "\"");
}

std::string to_string(Protocol p) { return p == Protocol::alcc ? "alcc" : "lcc"; }

DataDistribution distribution_from_string(const std::string& name) {
    if (name == "standard_normal") return DataDistribution::standard_normal;
    if (name == "uniform") return DataDistribution::uniform;
    fail(errc::config,
         "distribution: expected \"standard_normal\" or \"uniform\", got \"" + name + "\"");
}

std::string to_string(DataDistribution d) {
    return d == DataDistribution::standard_normal ? "standard_normal" : "uniform";
}

StragglerPolicy stragglers_from_string(const std::string& name) {
    if (name == "none") return StragglerPolicy::none;
    if (name == "fixed") return StragglerPolicy::fixed_set;
    if (name == "random") return StragglerPolicy::random_set;
    fail(errc::config, "stragglers: expected \"none\", \"fixed\" or \"random\", got \"" + name + "\"");
}

std::string to_string(StragglerPolicy s) {
    switch (s) {
    case StragglerPolicy::none: return "none";
    case StragglerPolicy::fixed_set: return "fixed";
    default: return "random";
    }
}

PolyFn ExperimentConfig::make_function() const {
    try {
        if (!function.empty() && function.front() == '{') return PolyFn::from_json(function);
        return PolyFn::preset(function);
    } catch (const Error& e) {
        fail(errc::config, std::string("function: ") + e.what());
    }
}

void ExperimentConfig::validate() const {
    const Protocol proto = protocol_from_string(protocol);
    if (k < 1) fail(errc::config, "k: must be at least 1");
    if (m_total < k || m_total % k != 0)
        fail(errc::config, "m_total: must be a positive multiple of k");
    if (n < 1) fail(errc::config, "n: must be at least 1");
    if (trials < 1) fail(errc::config, "trials: must be at least 1");
    if (threads < 1) fail(errc::config, "threads: must be at least 1");

    const PolyFn f = make_function();
    const std::size_t m = m_total / k;
    const auto fb = f.degree_and_bounds(m, n);
    if (fb.degree < 1) fail(errc::config, "function: degree must be at least 1");

    const DataDistribution dist = distribution_from_string(distribution);
    if (dist == DataDistribution::uniform && !(r > 0.0))
        fail(errc::config, "r: uniform data needs a positive bound");
    if (r < 0.0 || !std::isfinite(r)) fail(errc::config, "r: must be finite and nonnegative");

    const std::size_t nworkers = (k + t - 1) * fb.degree + s + 1;
    const StragglerPolicy sp = stragglers_from_string(stragglers);
    if (sp == StragglerPolicy::fixed_set) {
        if (straggler_indices.size() > s)
            fail(errc::config, "straggler_indices: more stragglers than s allows");
        std::vector<std::uint32_t> sorted = straggler_indices;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] >= nworkers)
                fail(errc::config, "straggler_indices: worker index out of range");
            if (i > 0 && sorted[i] == sorted[i - 1])
                fail(errc::config, "straggler_indices: duplicate worker index");
        }
    }

    if (proto == Protocol::alcc) {
        if (!(beta > 0.0)) fail(errc::config, "beta: must be positive");
        if (sigma_n < 0.0 || !std::isfinite(sigma_n))
            fail(errc::config, "sigma_n: must be finite and nonnegative");
        if (!(theta > 0.0)) fail(errc::config, "theta: must be positive");
    } else {
        if (bits < 2 || bits > 64) fail(errc::config, "bits: must be in [2, 64]");
        if (delta < 0.0 || !std::isfinite(delta)) fail(errc::config, "delta: must be finite and nonnegative");
        const LccMode md = lcc_mode_from_string(mode);
        std::uint64_t pp = p;
        if (pp == 0) {
            if (md != LccMode::modular)
                fail(errc::config, "p: must be given explicitly in integer_once mode");
        } else {
            if (!field::is_prime(pp)) fail(errc::config, "p: must be prime");
            const std::size_t kt = k + t;
            if (pp < kt + nworkers + 1)
                fail(errc::config, "p: too small for the interpolation and evaluation points");
            const unsigned __int128 cap =
                bits == 64 ? ((unsigned __int128)1 << 64) : ((unsigned __int128)1 << bits);
            if (md == LccMode::modular && (unsigned __int128)pp * pp > cap)
                fail(errc::config, "p: square exceeds the word size in modular mode");
            if (md == LccMode::integer_once && (unsigned __int128)pp > cap)
                fail(errc::config, "p: exceeds the word size");
        }
    }
}

namespace {

std::vector<RMatrix> make_blocks(const ExperimentConfig& cfg, std::size_t m,
                                 std::uint64_t trial_seed) {
    std::mt19937_64 rng(mix_seed(trial_seed, kDataSalt));
    std::vector<RMatrix> blocks;
    blocks.reserve(cfg.k);
    const DataDistribution dist = distribution_from_string(cfg.distribution);
    for (std::size_t i = 0; i < cfg.k; ++i) {
        if (dist == DataDistribution::standard_normal)
            blocks.push_back(sample_standard_normal(m, cfg.n, rng));
        else
            blocks.push_back(sample_uniform(m, cfg.n, -cfg.r, cfg.r, rng));
    }
    return blocks;
}

std::vector<std::uint32_t> choose_stragglers(const ExperimentConfig& cfg, std::size_t nworkers,
                                             std::size_t trial) {
    const StragglerPolicy sp = stragglers_from_string(cfg.stragglers);
    if (sp == StragglerPolicy::none) return {};
    if (sp == StragglerPolicy::fixed_set) {
        auto out = cfg.straggler_indices;
        std::sort(out.begin(), out.end());
        return out;
    }
    const std::uint64_t policy_seed =
        cfg.straggler_seed ? cfg.straggler_seed : mix_seed(cfg.seed, kStragglerSalt);
    std::mt19937_64 rng(mix_seed(policy_seed, trial));
    std::vector<std::uint32_t> all(nworkers);
    for (std::size_t i = 0; i < nworkers; ++i) all[i] = static_cast<std::uint32_t>(i);
    // Partial Fisher-Yates: the first s slots become the straggler set.
    const std::size_t count = std::min(cfg.s, nworkers);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(
                                      sample_uniform_residue(rng, nworkers - i));
        std::swap(all[i], all[j]);
    }
    std::vector<std::uint32_t> out(all.begin(), all.begin() + count);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> available_workers(std::size_t nworkers,
                                             const std::vector<std::uint32_t>& stragglers) {
    std::vector<std::uint32_t> avail;
    avail.reserve(nworkers - stragglers.size());
    std::size_t si = 0;
    for (std::size_t i = 0; i < nworkers; ++i) {
        if (si < stragglers.size() && stragglers[si] == i) {
            ++si;
            continue;
        }
        avail.push_back(static_cast<std::uint32_t>(i));
    }
    return avail;
}

double realized_max_abs(const std::vector<RMatrix>& blocks) {
    double r = 0.0;
    for (const auto& b : blocks) r = std::max(r, b.max_abs());
    return r;
}

RMatrix gram_reference(const std::vector<RMatrix>& blocks) {
    RMatrix ref(blocks[0].cols(), blocks[0].cols());
    for (const auto& b : blocks) gram_accumulate(ref, b);
    return ref;
}

double ratio_or_limit(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

// Gram metric compares the summed result; anything else compares the
// concatenation of the per-block results.
double relative_error(const ExperimentConfig& cfg, const PolyFn& f,
                      const std::vector<RMatrix>& blocks,
                      const std::vector<RMatrix>& decoded) {
    if (cfg.function == "gram") {
        const RMatrix ref = gram_reference(blocks);
        RMatrix sum(ref.rows(), ref.cols());
        for (const auto& d : decoded) sum.add_scaled(d, 1.0);
        return ratio_or_limit(frobenius_distance(sum, ref), ref.frobenius());
    }
    double num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const RMatrix ref = real_part(f.eval(to_complex(blocks[i])));
        const double d = frobenius_distance(decoded[i], ref);
        const double nr = ref.frobenius();
        num2 += d * d;
        den2 += nr * nr;
    }
    return ratio_or_limit(std::sqrt(num2), std::sqrt(den2));
}

TrialResult run_alcc_trial(const ExperimentConfig& cfg, const PolyFn& f,
                           const PolyFn::Bounds& fb, const std::vector<RMatrix>& blocks,
                           const std::vector<std::uint32_t>& avail, std::uint64_t trial_seed) {
    const std::size_t m = cfg.m_total / cfg.k;
    TrialResult tr;
    tr.realized_r = realized_max_abs(blocks);

    AlccParams P;
    P.k = cfg.k;
    P.t = cfg.t;
    P.s = cfg.s;
    P.degree = fb.degree;
    P.beta = cfg.beta;
    P.sigma_n = cfg.sigma_n;
    P.theta = cfg.theta;
    P.r = cfg.r > 0.0 ? cfg.r : (tr.realized_r > 0.0 ? tr.realized_r : 1.0);
    P.m = m;
    P.n = cfg.n;
    P.seed = trial_seed;
    P.validate();

    const auto [orows, ocols] = f.output_dims(m, cfg.n);
    EvalSet es;
    es.rows = orows;
    es.cols = ocols;
    es.poly_degree = fb.degree;
    es.results.resize(avail.size());

    if (cfg.function == "gram") {
        // Slab-streamed fused encode+eval: shares are built a row slab at a
        // time and folded straight into each worker's Gram accumulator, so no
        // full share matrix is ever materialized.
        for (const auto& b : blocks) {
            if (!b.all_finite()) fail(errc::nonfinite, "encode: nonfinite data entry");
            if (b.max_abs() > P.r) fail(errc::data_out_of_range, "data out of range");
        }
        Stopwatch wall;
        std::vector<CMatrix> noise;
        if (P.t > 0) {
            std::mt19937_64 rng(mix_seed(P.seed, 0x6e6f697365ull));
            const ComplexGaussianSpec spec{P.sigma_n / std::sqrt(static_cast<double>(P.t)),
                                           P.theta};
            for (std::size_t j = 0; j < P.t; ++j)
                noise.push_back(sample_truncated_complex_gaussian(spec, m, cfg.n, rng));
        }
        tr.encode_seconds += wall.seconds();

        const auto alphas = P.alpha_points();
        std::vector<CMatrix> accs(avail.size(), CMatrix(cfg.n, cfg.n));
        for (std::size_t row0 = 0; row0 < m; row0 += kSlabRows) {
            const std::size_t rows = std::min(kSlabRows, m - row0);
            Stopwatch enc;
            std::vector<CMatrix> slab;
            slab.reserve(P.points());
            for (const auto& b : blocks) {
                CMatrix c(rows, cfg.n);
                const double* src = b.data() + row0 * cfg.n;
                for (std::size_t e = 0; e < rows * cfg.n; ++e) c.data()[e] = cplx(src[e], 0.0);
                slab.push_back(std::move(c));
            }
            for (const auto& nz : noise) {
                CMatrix c(rows, cfg.n);
                std::memcpy(c.data(), nz.data() + row0 * cfg.n, rows * cfg.n * sizeof(cplx));
                slab.push_back(std::move(c));
            }
            const auto coeffs = encode_coefficient_stack(P, slab);
            slab.clear();
            tr.encode_seconds += enc.seconds();

            Stopwatch ev;
            parallel_for(avail.size(), cfg.threads, [&](std::size_t a) {
                const CMatrix share = horner_share(coeffs, alphas[avail[a]]);
                gram_accumulate(accs[a], share);
            });
            tr.eval_seconds += ev.seconds();
        }
        for (std::size_t a = 0; a < avail.size(); ++a)
            es.results[a] = {avail[a], std::move(accs[a])};
    } else {
        Stopwatch enc;
        const ShareSet shares = encode(P, blocks);
        tr.encode_seconds = enc.seconds();

        Stopwatch ev;
        parallel_for(avail.size(), cfg.threads, [&](std::size_t a) {
            const auto& [idx, share] = shares.shares[avail[a]];
            es.results[a] = {idx, worker_eval(f, share)};
        });
        tr.eval_seconds = ev.seconds();
    }

    Stopwatch dec;
    DecodeResult dr = decode(P, es);
    tr.decode_seconds = dec.seconds();
    tr.imag_residue_max = dr.max_imag_residue;
    tr.e_rel = relative_error(cfg, f, blocks, dr.blocks);
    return tr;
}

TrialResult run_lcc_trial(const ExperimentConfig& cfg, const PolyFn& f,
                          const PolyFn::Bounds& fb, const std::vector<RMatrix>& blocks,
                          const std::vector<std::uint32_t>& avail, std::uint64_t trial_seed) {
    const std::size_t m = cfg.m_total / cfg.k;
    TrialResult tr;
    tr.realized_r = realized_max_abs(blocks);
    const double r_used = cfg.r > 0.0 ? cfg.r : (tr.realized_r > 0.0 ? tr.realized_r : 1.0);

    LccParams P;
    P.k = cfg.k;
    P.t = cfg.t;
    P.s = cfg.s;
    P.degree = fb.degree;
    P.p = cfg.p != 0 ? cfg.p : lcc_modular_prime(cfg.bits);
    P.bits = cfg.bits;
    P.mode = lcc_mode_from_string(cfg.mode);
    P.m = m;
    P.n = cfg.n;
    P.seed = trial_seed;
    if (cfg.delta > 0.0) {
        P.delta = cfg.delta;
    } else {
        // Overflow criterion at equality: (s_a/d)(r/d)^D = p/2.
        const double d = static_cast<double>(fb.degree);
        P.delta = std::exp((std::log(2.0) + std::log(fb.s_a) + d * std::log(r_used) -
                            std::log(static_cast<double>(P.p))) /
                           (d + 1.0));
    }
    P.validate();
    tr.delta_used = P.delta;
    tr.overflow_flag = lcc_overflow_predicted(P, fb, r_used);

    const auto [orows, ocols] = f.output_dims(m, cfg.n);
    LccEvalSet es;
    es.rows = orows;
    es.cols = ocols;
    es.poly_degree = fb.degree;
    es.results.resize(avail.size());

    if (cfg.function == "gram") {
        Stopwatch enc0;
        bool input_overflow = false;
        std::vector<FMatrix> noise;
        if (P.t > 0) {
            std::mt19937_64 rng(mix_seed(P.seed, 0x6e6f697365ull));
            for (std::size_t j = 0; j < P.t; ++j) {
                FMatrix nz(m, cfg.n);
                for (std::size_t e = 0; e < nz.size(); ++e)
                    nz.data()[e] = sample_uniform_residue(rng, P.p);
                noise.push_back(std::move(nz));
            }
        }
        std::vector<std::vector<field::u64>> weights(avail.size());
        for (std::size_t a = 0; a < avail.size(); ++a)
            weights[a] = lcc_worker_weights(P, avail[a]);
        tr.encode_seconds += enc0.seconds();

        std::vector<FMatrix> accs(avail.size(), FMatrix(cfg.n, cfg.n));
        for (std::size_t row0 = 0; row0 < m; row0 += kSlabRows) {
            const std::size_t rows = std::min(kSlabRows, m - row0);
            Stopwatch enc;
            std::vector<FMatrix> slab;
            slab.reserve(P.points());
            for (const auto& b : blocks) {
                FMatrix q(rows, cfg.n);
                const double* src = b.data() + row0 * cfg.n;
                for (std::size_t e = 0; e < rows * cfg.n; ++e)
                    q.data()[e] = quantize_value(src[e], P.delta, P.p, input_overflow);
                slab.push_back(std::move(q));
            }
            for (const auto& nz : noise) {
                FMatrix c(rows, cfg.n);
                std::memcpy(c.data(), nz.data() + row0 * cfg.n,
                            rows * cfg.n * sizeof(field::u64));
                slab.push_back(std::move(c));
            }
            std::vector<const FMatrix*> ptrs(slab.size());
            for (std::size_t j = 0; j < slab.size(); ++j) ptrs[j] = &slab[j];
            tr.encode_seconds += enc.seconds();

            Stopwatch ev;
            parallel_for(avail.size(), cfg.threads, [&](std::size_t a) {
                const FMatrix share = lcc_combine(ptrs, weights[a], P.p);
                lcc_gram_accumulate(P, accs[a], share);
            });
            tr.eval_seconds += ev.seconds();
        }
        for (std::size_t a = 0; a < avail.size(); ++a) {
            lcc_finalize_eval(P, accs[a]);
            es.results[a] = {avail[a], std::move(accs[a])};
        }
        tr.overflow_flag = tr.overflow_flag || input_overflow;
    } else {
        Stopwatch enc;
        const LccShareSet shares = lcc_encode(P, blocks);
        tr.encode_seconds = enc.seconds();
        tr.overflow_flag = tr.overflow_flag || shares.input_overflow;

        Stopwatch ev;
        parallel_for(avail.size(), cfg.threads, [&](std::size_t a) {
            const auto& [idx, share] = shares.shares[avail[a]];
            es.results[a] = {idx, lcc_worker_eval(P, f, share)};
        });
        tr.eval_seconds = ev.seconds();
    }

    Stopwatch dec;
    const std::vector<RMatrix> decoded = lcc_decode(P, es);
    tr.decode_seconds = dec.seconds();
    tr.e_rel = relative_error(cfg, f, blocks, decoded);
    return tr;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Protocol proto = protocol_from_string(cfg.protocol);
    const PolyFn f = cfg.make_function();
    const std::size_t m = cfg.m_total / cfg.k;
    const auto fb = f.degree_and_bounds(m, cfg.n);
    const std::size_t nworkers = (cfg.k + cfg.t - 1) * fb.degree + cfg.s + 1;

    ExperimentResult out;
    out.trials.reserve(cfg.trials);
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t trial_seed = mix_seed(cfg.seed, trial);
        const auto blocks = make_blocks(cfg, m, trial_seed);
        const auto stragglers = choose_stragglers(cfg, nworkers, trial);
        const auto avail = available_workers(nworkers, stragglers);
        TrialResult tr = proto == Protocol::alcc
                             ? run_alcc_trial(cfg, f, fb, blocks, avail, trial_seed)
                             : run_lcc_trial(cfg, f, fb, blocks, avail, trial_seed);
        out.e_rel_mean += tr.e_rel;
        out.imag_residue_max = std::max(out.imag_residue_max, tr.imag_residue_max);
        out.overflow_flag = out.overflow_flag || tr.overflow_flag;
        out.encode_seconds += tr.encode_seconds;
        out.eval_seconds += tr.eval_seconds;
        out.decode_seconds += tr.decode_seconds;
        out.trials.push_back(std::move(tr));
    }
    out.e_rel_mean /= static_cast<double>(cfg.trials);
    out.neg_log10_e_rel = out.e_rel_mean > 0.0 ? -std::log10(out.e_rel_mean)
                                               : std::numeric_limits<double>::infinity();
    return out;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "m_total") return SweepAxis::m_total;
    if (name == "beta") return SweepAxis::beta;
    if (name == "bits") return SweepAxis::bits;
    if (name == "sigma_n") return SweepAxis::sigma_n;
    if (name == "p") return SweepAxis::p;
    fail(errc::config, "axis: expected m_total, beta, bits, sigma_n or p, got \"" + name + "\"");
}

std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::m_total: return "m_total";
    case SweepAxis::beta: return "beta";
    case SweepAxis::bits: return "bits";
    case SweepAxis::sigma_n: return "sigma_n";
    default: return "p";
    }
}

std::vector<ExperimentResult> sweep(const ExperimentConfig& tmpl, SweepAxis axis,
                                    const std::vector<double>& values) {
    if (values.empty()) fail(errc::config, "values: sweep needs at least one value");
    const Protocol proto = protocol_from_string(tmpl.protocol);
    const bool alcc_axis = axis == SweepAxis::beta || axis == SweepAxis::sigma_n;
    const bool lcc_axis = axis == SweepAxis::bits || axis == SweepAxis::p;
    if (alcc_axis && proto != Protocol::alcc)
        fail(errc::config, "axis: " + to_string(axis) + " applies to the alcc protocol only");
    if (lcc_axis && proto != Protocol::lcc)
        fail(errc::config, "axis: " + to_string(axis) + " applies to the lcc protocol only");

    std::vector<ExperimentResult> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ExperimentConfig cfg = tmpl;
        const double v = values[i];
        switch (axis) {
        case SweepAxis::m_total:
            if (!(v > 0.0) || v != std::nearbyint(v))
                fail(errc::config, "values: m_total entries must be positive integers");
            cfg.m_total = static_cast<std::size_t>(v);
            break;
        case SweepAxis::beta:
            cfg.beta = v;
            break;
        case SweepAxis::bits:
            if (!(v > 0.0) || v != std::nearbyint(v))
                fail(errc::config, "values: bits entries must be positive integers");
            cfg.bits = static_cast<std::uint32_t>(v);
            break;
        case SweepAxis::sigma_n:
            cfg.sigma_n = v;
            break;
        case SweepAxis::p:
            if (!(v > 0.0) || v != std::nearbyint(v))
                fail(errc::config, "values: p entries must be positive integers");
            cfg.p = static_cast<std::uint64_t>(v);
            break;
        }
        cfg.seed = mix_seed(mix_seed(tmpl.seed, kCellSalt), i);
        out.push_back(run_experiment(cfg));
    }
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

} // namespace

std::string run_csv(const ExperimentResult& res) {
    std::string out = "trial,e_rel,neg_log10_e_rel,imag_residue_max,overflow_flag\n";
    for (std::size_t i = 0; i < res.trials.size(); ++i) {
        const auto& tr = res.trials[i];
        const double nl = tr.e_rel > 0.0 ? -std::log10(tr.e_rel)
                                         : std::numeric_limits<double>::infinity();
        out += std::to_string(i) + "," + fmt_double(tr.e_rel) + "," + fmt_double(nl) + "," +
               fmt_double(tr.imag_residue_max) + "," + (tr.overflow_flag ? "1" : "0") + "\n";
    }
    out += "mean," + fmt_double(res.e_rel_mean) + "," + fmt_double(res.neg_log10_e_rel) + "," +
           fmt_double(res.imag_residue_max) + "," + (res.overflow_flag ? "1" : "0") + "\n";
    return out;
}

std::string sweep_csv(SweepAxis axis, const std::vector<double>& values,
                      const std::vector<ExperimentResult>& results) {
    if (values.size() != results.size())
        fail(errc::invalid_argument, "sweep csv: value and result counts differ");
    const bool integral_axis =
        axis == SweepAxis::m_total || axis == SweepAxis::bits || axis == SweepAxis::p;
    std::string out =
        to_string(axis) + ",e_rel,neg_log10_e_rel,imag_residue_max,overflow_flag\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (integral_axis)
            out += std::to_string(static_cast<std::uint64_t>(values[i]));
        else
            out += fmt_double(values[i]);
        out += "," + fmt_double(r.e_rel_mean) + "," + fmt_double(r.neg_log10_e_rel) + "," +
               fmt_double(r.imag_residue_max) + "," + (r.overflow_flag ? "1" : "0") + "\n";
    }
    return out;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["protocol"] = cfg.protocol;
    j["k"] = cfg.k;
    j["t"] = cfg.t;
    j["s"] = cfg.s;
    j["m_total"] = cfg.m_total;
    j["n"] = cfg.n;
    j["beta"] = cfg.beta;
    j["sigma_n"] = cfg.sigma_n;
    j["theta"] = cfg.theta;
    j["r"] = cfg.r;
    j["p"] = cfg.p;
    j["bits"] = cfg.bits;
    j["delta"] = cfg.delta;
    j["mode"] = cfg.mode;
    j["function"] = cfg.function;
    j["distribution"] = cfg.distribution;
    j["stragglers"] = cfg.stragglers;
    j["straggler_indices"] = cfg.straggler_indices;
    j["straggler_seed"] = cfg.straggler_seed;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

std::string run_manifest_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["version"] = kLibraryVersion;
    j["config"] = ordered_json::parse(config_to_json(cfg));
    return j.dump(2);
}

namespace {

[[noreturn]] void bad_key_type(const std::string& key, const char* want) {
    fail(errc::config, key + ": expected " + want);
}

std::uint64_t as_u64(const ordered_json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        bad_key_type(key, "a nonnegative integer");
    return v.get<std::uint64_t>();
}

double as_double(const ordered_json& v, const std::string& key) {
    if (!v.is_number()) bad_key_type(key, "a number");
    return v.get<double>();
}

std::string as_string(const ordered_json& v, const std::string& key) {
    if (!v.is_string()) bad_key_type(key, "a string");
    return v.get<std::string>();
}

} // namespace

ExperimentConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        fail(errc::config, std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(errc::config, "config: top level must be an object");

    ExperimentConfig cfg;
    for (const auto& [key, v] : j.items()) {
        if (key == "protocol") cfg.protocol = as_string(v, key);
        else if (key == "k") cfg.k = as_u64(v, key);
        else if (key == "t") cfg.t = as_u64(v, key);
        else if (key == "s") cfg.s = as_u64(v, key);
        else if (key == "m_total") cfg.m_total = as_u64(v, key);
        else if (key == "n") cfg.n = as_u64(v, key);
        else if (key == "beta") cfg.beta = as_double(v, key);
        else if (key == "sigma_n") cfg.sigma_n = as_double(v, key);
        else if (key == "theta") cfg.theta = as_double(v, key);
        else if (key == "r") cfg.r = as_double(v, key);
        else if (key == "p") cfg.p = as_u64(v, key);
        else if (key == "bits") cfg.bits = static_cast<std::uint32_t>(as_u64(v, key));
        else if (key == "delta") cfg.delta = as_double(v, key);
        else if (key == "mode") cfg.mode = as_string(v, key);
        else if (key == "function") cfg.function = as_string(v, key);
        else if (key == "distribution") cfg.distribution = as_string(v, key);
        else if (key == "stragglers") cfg.stragglers = as_string(v, key);
        else if (key == "straggler_indices") {
            if (!v.is_array()) bad_key_type(key, "an array of worker indices");
            cfg.straggler_indices.clear();
            for (const auto& e : v)
                cfg.straggler_indices.push_back(static_cast<std::uint32_t>(as_u64(e, key)));
        } else if (key == "straggler_seed") cfg.straggler_seed = as_u64(v, key);
        else if (key == "trials") cfg.trials = as_u64(v, key);
        else if (key == "seed") cfg.seed = as_u64(v, key);
        else if (key == "threads") {
            if (!v.is_number_integer()) bad_key_type(key, "an integer");
            cfg.threads = v.get<int>();
        } else fail(errc::config, "unknown config key: " + key);
    }
    return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto parse_u64 = [&](const std::string& s) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (errno != 0 || end == s.c_str() || *end != '\0' || s.find('-') != std::string::npos)
            bad_key_type(key, "a nonnegative integer");
        return static_cast<std::uint64_t>(v);
    };
    auto parse_double = [&](const std::string& s) {
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') bad_key_type(key, "a number");
        return v;
    };

    if (key == "protocol") cfg.protocol = value;
    else if (key == "k") cfg.k = parse_u64(value);
    else if (key == "t") cfg.t = parse_u64(value);
    else if (key == "s") cfg.s = parse_u64(value);
    else if (key == "m_total") cfg.m_total = parse_u64(value);
    else if (key == "n") cfg.n = parse_u64(value);
    else if (key == "beta") cfg.beta = parse_double(value);
    else if (key == "sigma_n") cfg.sigma_n = parse_double(value);
    else if (key == "theta") cfg.theta = parse_double(value);
    else if (key == "r") cfg.r = parse_double(value);
    else if (key == "p") cfg.p = parse_u64(value);
    else if (key == "bits") cfg.bits = static_cast<std::uint32_t>(parse_u64(value));
    else if (key == "delta") cfg.delta = parse_double(value);
    else if (key == "mode") cfg.mode = value;
    else if (key == "function") cfg.function = value;
    else if (key == "distribution") cfg.distribution = value;
    else if (key == "stragglers") cfg.stragglers = value;
    else if (key == "straggler_indices") {
        cfg.straggler_indices.clear();
        std::size_t pos = 0;
        while (pos <= value.size() && !value.empty()) {
            const std::size_t comma = value.find(',', pos);
            const std::string item = value.substr(pos, comma == std::string::npos
                                                           ? std::string::npos
                                                           : comma - pos);
            cfg.straggler_indices.push_back(static_cast<std::uint32_t>(parse_u64(item)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    } else if (key == "straggler_seed") cfg.straggler_seed = parse_u64(value);
    else if (key == "trials") cfg.trials = parse_u64(value);
    else if (key == "seed") cfg.seed = parse_u64(value);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_u64(value));
    else fail(errc::config, "unknown config key: " + key);
}

} // namespace alcc
