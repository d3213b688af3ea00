#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <alcc/alcc.h>

namespace {

using ordered_json = nlohmann::ordered_json;

// Config mistakes exit 2, everything else that fails exits 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ToolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OwnedStr {
    char* p = nullptr;
    OwnedStr() = default;
    OwnedStr(const OwnedStr&) = delete;
    OwnedStr& operator=(const OwnedStr&) = delete;
    ~OwnedStr() { alcc_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
};

using ParamsHandle = Handle<alcc_params, alcc_params_free>;
using PolyfnHandle = Handle<alcc_polyfn, alcc_polyfn_free>;
using BatchHandle = Handle<alcc_batch, alcc_batch_free>;
using SharesHandle = Handle<alcc_shares, alcc_shares_free>;
using EvalsHandle = Handle<alcc_evals, alcc_evals_free>;

void check(alcc_status st) {
    if (st == ALCC_OK) return;
    std::string msg = alcc_last_error();
    if (msg.empty()) msg = "library call failed";
    if (st == ALCC_ERR_CONFIG) throw ConfigError(msg);
    throw ToolError(msg);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ToolError("cannot write " + path);
    out << content;
    if (!out) throw ToolError("write failed: " + path);
}

double parse_double(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end == s.c_str() || *end != '\0')
        throw ConfigError(what + ": not a number: " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    if (s.empty() || s[0] == '-') throw ConfigError(what + ": not a nonnegative integer: " + s);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end == s.c_str() || *end != '\0')
        throw ConfigError(what + ": not a nonnegative integer: " + s);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(s, ','))
        if (!part.empty()) out.push_back(parse_double(part, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

// "lo:hi:step" additive grid, endpoints inclusive up to rounding slack.
std::vector<double> parse_linear_range(const std::string& s, const std::string& what) {
    auto parts = split(s, ':');
    if (parts.size() != 3) throw ConfigError(what + ": expected lo:hi:step");
    double lo = parse_double(parts[0], what);
    double hi = parse_double(parts[1], what);
    double step = parse_double(parts[2], what);
    if (!(step > 0.0) || hi < lo) throw ConfigError(what + ": expected lo <= hi and step > 0");
    std::vector<double> out;
    for (double v = lo; v <= hi + step * 1e-9; v += step) out.push_back(std::min(v, hi));
    return out;
}

// "lo:hi:factor" multiplicative grid.
std::vector<double> parse_geometric_range(const std::string& s, const std::string& what) {
    auto parts = split(s, ':');
    if (parts.size() != 3) throw ConfigError(what + ": expected lo:hi:factor");
    double lo = parse_double(parts[0], what);
    double hi = parse_double(parts[1], what);
    double factor = parse_double(parts[2], what);
    if (!(lo > 0.0) || !(factor > 1.0) || hi < lo)
        throw ConfigError(what + ": expected 0 < lo <= hi and factor > 1");
    std::vector<double> out;
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= factor) out.push_back(v);
    return out;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    int threads = 0;
    bool as_json = false;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path, "JSON config file");
    sub->add_option("--set", o.sets, "key=value override, repeatable")
        ->take_all()
        ->expected(-1);
    sub->add_option("--out", o.out_dir, "directory for result files");
    o.seed_opt = sub->add_option("--seed", o.seed, "seed override");
    o.threads_opt = sub->add_option("--threads", o.threads, "worker thread count");
    auto* j = sub->add_flag("--json", o.as_json, "emit JSON instead of CSV");
    auto* c = sub->add_flag("--csv", "emit CSV (default)");
    j->excludes(c);
}

int effective_threads(const CommonOpts& o) {
    if (o.threads_opt && o.threads_opt->count() > 0) return o.threads;
    if (const char* env = std::getenv("ALCC_THREADS")) {
        std::string v(env);
        if (!v.empty()) return static_cast<int>(parse_u64(v, "ALCC_THREADS"));
    }
    return 0; // leave the config value alone
}

std::string normalized_config(const CommonOpts& o) {
    std::string base;
    if (!o.config_path.empty()) base = read_file(o.config_path);
    std::vector<std::string> overrides = o.sets;
    if (o.seed_opt && o.seed_opt->count() > 0)
        overrides.push_back("seed=" + std::to_string(o.seed));
    int threads = effective_threads(o);
    if (threads > 0) overrides.push_back("threads=" + std::to_string(threads));
    std::vector<const char*> ptrs;
    ptrs.reserve(overrides.size());
    for (const auto& s : overrides) ptrs.push_back(s.c_str());
    OwnedStr out;
    check(alcc_config_normalize_json(base.empty() ? nullptr : base.c_str(), ptrs.data(),
                                     ptrs.size(), &out.p));
    return out.str();
}

std::string out_path(const CommonOpts& o, const std::string& name) {
    if (o.out_dir.empty()) return name;
    std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

void maybe_write(const CommonOpts& o, const std::string& name, const std::string& content) {
    if (o.out_dir.empty()) return;
    write_file(out_path(o, name), content);
}

ordered_json parse_json(const std::string& text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ToolError(what + ": " + e.what());
    }
}

double jnum(const ordered_json& j, const std::string& key) {
    if (!j.contains(key)) throw ToolError("missing field: " + key);
    return j.at(key).get<double>();
}

// Fields the subcommands pick out of a normalized config.
struct CfgView {
    ordered_json j;
    std::uint64_t u(const std::string& key) const { return j.at(key).get<std::uint64_t>(); }
    double d(const std::string& key) const { return j.at(key).get<double>(); }
    std::string s(const std::string& key) const { return j.at(key).get<std::string>(); }
};

// Builds the protocol parameter JSON a bounds call needs from an experiment
// config, reading the polynomial degree off the configured function.
std::string params_json_from_config(const CfgView& c, std::uint32_t degree,
                                    std::optional<double> beta = {},
                                    std::optional<double> sigma_n = {}) {
    ordered_json p;
    p["k"] = c.u("k");
    p["t"] = c.u("t");
    p["s"] = c.u("s");
    p["degree"] = degree;
    p["beta"] = beta ? *beta : c.d("beta");
    p["sigma_n"] = sigma_n ? *sigma_n : c.d("sigma_n");
    p["theta"] = c.d("theta");
    p["r"] = c.d("r");
    p["m"] = c.u("m_total") / std::max<std::uint64_t>(c.u("k"), 1);
    p["n"] = c.u("n");
    p["seed"] = c.u("seed");
    return p.dump();
}

std::uint32_t function_degree(const CfgView& c) {
    PolyfnHandle f;
    check(alcc_polyfn_create(c.s("function").c_str(), &f.p));
    std::uint32_t degree = 1;
    std::uint64_t m = c.u("m_total") / std::max<std::uint64_t>(c.u("k"), 1);
    check(alcc_polyfn_bounds(f.p, m, c.u("n"), &degree, nullptr, nullptr));
    return degree;
}

int cmd_selftest(const CommonOpts& o) {
    OwnedStr report;
    alcc_status st = alcc_selftest(&report.p);
    std::cout << report.str();
    maybe_write(o, "selftest.txt", report.str());
    return st == ALCC_OK ? 0 : 1;
}

int cmd_run(const CommonOpts& o) {
    std::string cfg = normalized_config(o);
    if (!o.out_dir.empty()) {
        OwnedStr mf;
        check(alcc_experiment_manifest_json(cfg.c_str(), &mf.p));
        write_file(out_path(o, "manifest.json"), mf.str());
    }
    OwnedStr out;
    if (o.as_json) {
        check(alcc_experiment_run_json(cfg.c_str(), &out.p));
        std::cout << out.str() << "\n";
        maybe_write(o, "run.json", out.str());
    } else {
        check(alcc_experiment_run_csv(cfg.c_str(), &out.p));
        std::cout << out.str();
        maybe_write(o, "run.csv", out.str());
    }
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& axis, const std::string& values_text) {
    std::vector<double> values = parse_doubles(values_text, "--values");
    std::string cfg = normalized_config(o);
    OwnedStr csv;
    check(alcc_experiment_sweep_csv(cfg.c_str(), axis.c_str(), values.data(), values.size(),
                                    &csv.p));
    std::cout << csv.str();
    maybe_write(o, "sweep.csv", csv.str());
    if (!o.out_dir.empty()) {
        OwnedStr mf;
        check(alcc_experiment_manifest_json(cfg.c_str(), &mf.p));
        ordered_json m = parse_json(mf.str(), "manifest");
        m["sweep"] = ordered_json{{"axis", axis}, {"values", values}};
        write_file(out_path(o, "manifest.json"), m.dump(2));
    }
    return 0;
}

int cmd_encode(const CommonOpts& o, const std::string& shares_name) {
    std::string cfg_text = normalized_config(o);
    CfgView c{parse_json(cfg_text, "config")};
    if (c.s("protocol") != "alcc")
        throw ConfigError("protocol: encode writes analog share files only");
    const std::uint64_t k = c.u("k"), n = c.u("n");
    const std::uint64_t m = c.u("m_total") / k;
    const std::uint64_t seed = c.u("seed");

    BatchHandle batch;
    check(alcc_batch_sample(k, m, n, c.s("distribution").c_str(), c.d("r"), seed, &batch.p));

    double r = c.d("r");
    if (!(r > 0.0)) {
        // Mirror the simulator: an unset bound becomes the realized data
        // maximum (1.0 for an all-zero batch).
        std::vector<double> buf(m * n);
        double mx = 0.0;
        for (std::uint64_t bidx = 0; bidx < k; ++bidx) {
            check(alcc_batch_get_block(batch.p, bidx, buf.data(), buf.size()));
            for (double v : buf) mx = std::max(mx, std::abs(v));
        }
        r = mx > 0.0 ? mx : 1.0;
    }

    std::uint32_t degree = function_degree(c);
    ordered_json pj;
    pj["k"] = k;
    pj["t"] = c.u("t");
    pj["s"] = c.u("s");
    pj["degree"] = degree;
    pj["beta"] = c.d("beta");
    pj["sigma_n"] = c.d("sigma_n");
    pj["theta"] = c.d("theta");
    pj["r"] = r;
    pj["m"] = m;
    pj["n"] = n;
    pj["seed"] = seed;
    ParamsHandle params;
    check(alcc_params_create_json(pj.dump().c_str(), &params.p));

    SharesHandle shares;
    check(alcc_encode(params.p, batch.p, &shares.p));
    std::string path = out_path(o, shares_name);
    check(alcc_shares_save(shares.p, path.c_str()));

    OwnedStr mf;
    check(alcc_experiment_manifest_json(cfg_text.c_str(), &mf.p));
    ordered_json m_out = parse_json(mf.str(), "manifest");
    m_out["encode"] = ordered_json{{"shares_file", shares_name},
                                   {"share_count", alcc_shares_count(shares.p)},
                                   {"params", parse_json(pj.dump(), "params")}};
    write_file(out_path(o, "manifest.json"), m_out.dump(2));

    std::cout << "wrote " << alcc_shares_count(shares.p) << " shares to " << path << "\n";
    return 0;
}

int cmd_decode(const CommonOpts& o, const std::string& in_path) {
    std::string cfg_text = normalized_config(o);
    CfgView c{parse_json(cfg_text, "config")};
    if (c.s("protocol") != "alcc")
        throw ConfigError("protocol: decode reads analog share files only");

    SharesHandle shares;
    check(alcc_shares_load(in_path.c_str(), &shares.p));

    std::uint32_t degree = function_degree(c);
    EvalsHandle evals;
    check(alcc_evals_from_shares(shares.p, degree, &evals.p));
    if (c.s("stragglers") == "fixed")
        for (const auto& idx : c.j.at("straggler_indices"))
            check(alcc_evals_drop_worker(evals.p, idx.get<std::uint32_t>()));

    double r = c.d("r");
    ParamsHandle params;
    check(alcc_params_create_json(
        params_json_from_config(CfgView{[&] {
                                    ordered_json tmp = c.j;
                                    if (!(r > 0.0)) tmp["r"] = 1.0; // bound unused in decoding
                                    return tmp;
                                }()},
                                degree)
            .c_str(),
        &params.p));

    BatchHandle blocks;
    double imag = 0.0;
    check(alcc_decode(params.p, evals.p, 0, &blocks.p, &imag));

    const std::size_t nb = alcc_batch_blocks(blocks.p);
    const std::size_t rows = alcc_batch_rows(blocks.p);
    const std::size_t cols = alcc_batch_cols(blocks.p);
    std::string csv = "block,row,col,value\n";
    std::vector<double> buf(rows * cols);
    for (std::size_t bidx = 0; bidx < nb; ++bidx) {
        check(alcc_batch_get_block(blocks.p, bidx, buf.data(), buf.size()));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                csv += std::to_string(bidx) + "," + std::to_string(i) + "," +
                       std::to_string(j) + "," + fmt(buf[i * cols + j]) + "\n";
    }
    std::cout << csv;
    maybe_write(o, "decoded.csv", csv);
    std::cerr << "max imaginary residue " << fmt(imag) << "\n";
    return 0;
}

int cmd_privacy(const CommonOpts& o, const std::string& beta_sweep,
                const std::string& sigma_sweep) {
    std::string cfg_text = normalized_config(o);
    CfgView c{parse_json(cfg_text, "config")};
    if (!(c.d("r") > 0.0)) throw ConfigError("r: must be positive for privacy bounds");
    std::uint32_t degree = function_degree(c);

    auto report_row = [&](const std::string& params_json) -> ordered_json {
        ParamsHandle params;
        check(alcc_params_create_json(params_json.c_str(), &params.p));
        OwnedStr rep;
        check(alcc_privacy_report_json(params.p, nullptr, &rep.p));
        return parse_json(rep.str(), "privacy report");
    };

    if (o.as_json && beta_sweep.empty() && sigma_sweep.empty()) {
        ordered_json rep = report_row(params_json_from_config(c, degree));
        std::cout << rep.dump(2) << "\n";
        maybe_write(o, "privacy.json", rep.dump(2));
        return 0;
    }

    std::string axis = "beta";
    std::vector<double> values;
    if (!beta_sweep.empty() && !sigma_sweep.empty())
        throw ConfigError("--beta-sweep: cannot combine with --sigma-sweep");
    if (!sigma_sweep.empty()) {
        axis = "sigma_n";
        values = parse_geometric_range(sigma_sweep, "--sigma-sweep");
    } else if (!beta_sweep.empty()) {
        values = parse_linear_range(beta_sweep, "--beta-sweep");
    } else {
        values = {c.d("beta")};
    }

    std::string csv =
        axis + ",eta_c_bound,eta_s_bound,eta_c_trace_bound,d_mean_bound,eta_s_truncated\n";
    for (double v : values) {
        std::string pj = axis == "beta"
                             ? params_json_from_config(c, degree, v, std::nullopt)
                             : params_json_from_config(c, degree, std::nullopt, v);
        ordered_json rep = report_row(pj);
        const auto& trunc = rep.at("eta_s_truncated");
        csv += fmt(v) + "," + fmt(jnum(rep, "eta_c_bound")) + "," +
               fmt(jnum(rep, "eta_s_bound")) + "," + fmt(jnum(rep, "eta_c_trace_bound")) + "," +
               fmt(jnum(rep, "d_mean_bound")) + "," +
               (trunc.is_null() ? std::string("nan") : fmt(trunc.get<double>())) + "\n";
    }
    std::cout << csv;
    maybe_write(o, "privacy.csv", csv);
    return 0;
}

int cmd_accuracy(const CommonOpts& o, const std::string& bits_sweep) {
    std::string cfg_text = normalized_config(o);
    CfgView c{parse_json(cfg_text, "config")};
    if (!(c.d("r") > 0.0)) throw ConfigError("r: must be positive for accuracy bounds");

    PolyfnHandle f;
    check(alcc_polyfn_create(c.s("function").c_str(), &f.p));
    std::uint32_t degree = 1;
    double s_a = 1.0;
    std::uint64_t m = c.u("m_total") / std::max<std::uint64_t>(c.u("k"), 1);
    check(alcc_polyfn_bounds(f.p, m, c.u("n"), &degree, nullptr, &s_a));

    ParamsHandle params;
    check(alcc_params_create_json(params_json_from_config(c, degree).c_str(), &params.p));

    // A fixed straggler set shrinks the available-worker list the bound uses.
    std::vector<std::uint32_t> present;
    const std::uint32_t* present_ptr = nullptr;
    std::size_t present_count = 0;
    if (c.s("stragglers") == "fixed" && !c.j.at("straggler_indices").empty()) {
        std::uint32_t nw = 0;
        check(alcc_params_workers(params.p, &nw));
        std::vector<bool> drop(nw, false);
        for (const auto& idx : c.j.at("straggler_indices")) {
            std::uint32_t v = idx.get<std::uint32_t>();
            if (v < nw) drop[v] = true;
        }
        for (std::uint32_t i = 0; i < nw; ++i)
            if (!drop[i]) present.push_back(i);
        present_ptr = present.data();
        present_count = present.size();
    }

    std::vector<std::uint64_t> bits_list;
    if (!bits_sweep.empty()) {
        for (double v : parse_linear_range(bits_sweep, "--bits-sweep"))
            bits_list.push_back(static_cast<std::uint64_t>(v));
    } else {
        bits_list.push_back(c.u("bits"));
    }

    auto reports = [&](std::uint64_t bits) {
        OwnedStr rep;
        check(alcc_accuracy_report_json(params.p, f.p, present_ptr, present_count,
                                        static_cast<std::uint32_t>(bits), &rep.p));
        OwnedStr lcc;
        check(alcc_lcc_delta_bounds_json(degree, s_a, c.d("r"),
                                         static_cast<std::uint32_t>(bits), &lcc.p));
        return std::make_pair(parse_json(rep.str(), "accuracy report"),
                              parse_json(lcc.str(), "delta bounds"));
    };

    if (o.as_json && bits_sweep.empty()) {
        auto [rep, lcc] = reports(bits_list[0]);
        ordered_json out;
        out["alcc"] = rep;
        out["lcc_delta"] = lcc;
        std::cout << out.dump(2) << "\n";
        maybe_write(o, "accuracy.json", out.dump(2));
        return 0;
    }

    std::string csv =
        "bits,alcc_upper_bound,alcc_upper_bound_loose,lcc_delta_modular,"
        "lcc_delta_integer_once,beta_bar,kappa_b,lambda_min\n";
    for (std::uint64_t bits : bits_list) {
        auto [rep, lcc] = reports(bits);
        csv += std::to_string(bits) + "," + fmt(jnum(rep, "alcc_upper_bound")) + "," +
               fmt(jnum(rep, "alcc_upper_bound_loose")) + "," + fmt(jnum(lcc, "modular")) +
               "," + fmt(jnum(lcc, "integer_once")) + "," + fmt(jnum(rep, "beta_bar")) + "," +
               fmt(jnum(rep, "kappa_b")) + "," + fmt(jnum(rep, "lambda_min")) + "\n";
    }
    std::cout << csv;
    maybe_write(o, "accuracy.csv", csv);
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& m_grid_text,
                const std::string& betas_text, const std::string& exps_text, double delta) {
    std::vector<double> m_grid = parse_doubles(m_grid_text, "--m-grid");
    std::vector<double> betas = parse_doubles(betas_text, "--alcc-betas");
    std::vector<double> exps = parse_doubles(exps_text, "--p-exponents");

    // Pinned comparison setup; user --set overrides win because they are
    // applied after these.
    const std::vector<std::string> base = {
        "k=5",       "t=3",          "s=0",
        "n=100",     "sigma_n=1e6",  "function=gram",
        "trials=1",  "m_total=" + std::to_string(static_cast<std::uint64_t>(m_grid[0])),
        "mode=modular", "bits=64",
    };

    auto curve_config = [&](const std::vector<std::string>& curve) {
        CommonOpts local = o;
        std::vector<std::string> sets = base;
        sets.insert(sets.end(), curve.begin(), curve.end());
        sets.insert(sets.end(), o.sets.begin(), o.sets.end());
        local.sets = std::move(sets);
        return normalized_config(local);
    };

    struct Curve {
        std::string label;
        std::string config;
    };
    std::vector<Curve> curves;
    for (double b : betas) {
        std::ostringstream label;
        label << "alcc_beta_" << b;
        curves.push_back({label.str(), curve_config({"protocol=alcc", "beta=" + fmt(b)})});
    }
    for (double e : exps) {
        auto bits = static_cast<std::uint32_t>(e);
        if (bits < 2 || bits > 62) throw ConfigError("--p-exponents: expected exponents in [2, 62]");
        std::uint64_t prime = 0;
        check(alcc_largest_prime_at_most(1ull << bits, &prime));
        curves.push_back({"lcc_p_2pow" + std::to_string(bits),
                          curve_config({"protocol=lcc", "p=" + std::to_string(prime),
                                        "delta=" + fmt(delta)})});
    }

    std::string csv = "curve,m_total,e_rel,neg_log10_e_rel,imag_residue_max,overflow_flag\n";
    ordered_json manifest;
    manifest["version"] = alcc_version();
    manifest["sweep"] = ordered_json{{"axis", "m_total"}, {"values", m_grid}};
    ordered_json curve_list = ordered_json::array();
    for (const auto& curve : curves) {
        OwnedStr part;
        check(alcc_experiment_sweep_csv(curve.config.c_str(), "m_total", m_grid.data(),
                                        m_grid.size(), &part.p));
        std::istringstream lines(part.str());
        std::string line;
        std::getline(lines, line); // drop the per-curve header
        while (std::getline(lines, line))
            if (!line.empty()) csv += curve.label + "," + line + "\n";
        curve_list.push_back(ordered_json{
            {"label", curve.label},
            {"config", parse_json(curve.config, "config")},
        });
    }
    manifest["curves"] = std::move(curve_list);

    std::cout << csv;
    maybe_write(o, "compare_lcc.csv", csv);
    if (!o.out_dir.empty()) write_file(out_path(o, "manifest.json"), manifest.dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analog coded computing toolkit"};
    app.require_subcommand(1);

    CommonOpts run_o, sweep_o, enc_o, dec_o, priv_o, acc_o, cmp_o, self_o;

    auto* run_cmd = app.add_subcommand("run", "run one experiment");
    add_common(run_cmd, run_o);

    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment per axis value");
    add_common(sweep_cmd, sweep_o);
    std::string sweep_axis;
    std::string sweep_values;
    sweep_cmd->add_option("--axis", sweep_axis, "m_total | beta | bits | sigma_n | p")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")->required();

    auto* enc_cmd = app.add_subcommand("encode", "draw a batch and write its shares");
    add_common(enc_cmd, enc_o);
    std::string shares_name = "shares.bin";
    enc_cmd->add_option("--shares-file", shares_name, "share file name inside --out");

    auto* dec_cmd = app.add_subcommand("decode", "decode a share file as worker results");
    add_common(dec_cmd, dec_o);
    std::string dec_in;
    dec_cmd->add_option("--in", dec_in, "share file to decode")->required();

    auto* priv_cmd = app.add_subcommand("privacy-bounds", "collusion leakage bounds");
    add_common(priv_cmd, priv_o);
    std::string beta_sweep, sigma_sweep;
    priv_cmd->add_option("--beta-sweep", beta_sweep, "lo:hi:step over the support radius");
    priv_cmd->add_option("--sigma-sweep", sigma_sweep, "lo:hi:factor over the noise level");

    auto* acc_cmd = app.add_subcommand("accuracy-bounds", "floating-point error bounds");
    add_common(acc_cmd, acc_o);
    std::string bits_sweep;
    acc_cmd->add_option("--bits-sweep", bits_sweep, "lo:hi:step over the word size");

    auto* cmp_cmd = app.add_subcommand("compare-lcc", "paired analog vs fixed-point sweep");
    add_common(cmp_cmd, cmp_o);
    std::string m_grid =
        "10000,20000,30000,40000,60000,80000,120000,160000,240000,320000";
    std::string alcc_betas = "1.5,2";
    std::string p_exponents = "25,26,28";
    double cmp_delta = 0.02;
    cmp_cmd->add_option("--m-grid", m_grid, "total row counts to sweep");
    cmp_cmd->add_option("--alcc-betas", alcc_betas, "analog support radii");
    cmp_cmd->add_option("--p-exponents", p_exponents, "field moduli as powers of two");
    cmp_cmd->add_option("--delta", cmp_delta, "fixed-point quantization step");

    auto* self_cmd = app.add_subcommand("selftest", "run the built-in battery");
    add_common(self_cmd, self_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        if (dynamic_cast<const CLI::ExtrasError*>(&e) ||
            dynamic_cast<const CLI::RequiredError*>(&e))
            std::cerr << app.help();
        return 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_o);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_o, sweep_axis, sweep_values);
        if (enc_cmd->parsed()) return cmd_encode(enc_o, shares_name);
        if (dec_cmd->parsed()) return cmd_decode(dec_o, dec_in);
        if (priv_cmd->parsed()) return cmd_privacy(priv_o, beta_sweep, sigma_sweep);
        if (acc_cmd->parsed()) return cmd_accuracy(acc_o, bits_sweep);
        if (cmp_cmd->parsed())
            return cmd_compare(cmp_o, m_grid, alcc_betas, p_exponents, cmp_delta);
        if (self_cmd->parsed()) return cmd_selftest(self_o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
