#include "core/lcc_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace alcc {

using field::u64;

LccMode lcc_mode_from_string(const std::string& name) {
    if (name == "modular") return LccMode::modular;
    if (name == "integer_once") return LccMode::integer_once;
    fail(errc::config, "mode: expected \"modular\" or \"integer_once\", got \"" + name + "\"");
}

std::string to_string(LccMode mode) {
    return mode == LccMode::modular ? "modular" : "integer_once";
}

void LccParams::validate() const {
    if (k < 1) fail(errc::invalid_argument, "params: k must be at least 1");
    if (degree < 1) fail(errc::invalid_argument, "params: degree must be at least 1");
    if (m < 1 || n < 1) fail(errc::invalid_argument, "params: block shape must be nonempty");
    if (!(delta > 0.0) || !std::isfinite(delta))
        fail(errc::invalid_argument, "params: delta must be positive and finite");
    if (bits < 2 || bits > 64) fail(errc::invalid_argument, "params: bits must be in [2, 64]");
    if (!field::is_prime(p)) fail(errc::invalid_argument, "params: p must be prime");
    // All k+t interpolation nodes and N evaluation points must be distinct
    // nonzero field elements.
    if (p < points() + workers() + 1)
        fail(errc::invalid_argument, "params: p must be at least k+t+N+1");
    const unsigned __int128 cap =
        bits == 64 ? (unsigned __int128)1 << 64 : (unsigned __int128)1 << bits;
    if (mode == LccMode::modular) {
        if ((unsigned __int128)p * p > cap)
            fail(errc::config, "params: p^2 must fit the word size in modular mode");
    } else {
        if ((unsigned __int128)p > cap)
            fail(errc::config, "params: p must fit the word size");
    }
}

std::uint64_t LccParams::fingerprint() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "lcc;k=%zu;t=%zu;s=%zu;d=%u;p=%llu;bits=%u;delta=%.17g;mode=%s;m=%zu;n=%zu;seed=%llu",
                  k, t, s, degree, static_cast<unsigned long long>(p), bits, delta,
                  to_string(mode).c_str(), m, n, static_cast<unsigned long long>(seed));
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char* c = buf; *c; ++c) {
        h ^= static_cast<unsigned char>(*c);
        h *= 0x100000001b3ull;
    }
    return h;
}

u64 quantize_value(double x, double delta, u64 p, bool& input_overflow) {
    if (!std::isfinite(x)) fail(errc::nonfinite, "quantize: non-finite value");
    const double q = std::round(x / delta);
    if (std::abs(q) < 9.0e18) {
        const long long iq = static_cast<long long>(q);
        const u64 aq = static_cast<u64>(iq < 0 ? -iq : iq);
        if ((unsigned __int128)aq * 2 >= p) input_overflow = true;
        const u64 v = aq % p;
        return iq < 0 && v != 0 ? p - v : v;
    }
    // Far past any representable range; alias deterministically.
    input_overflow = true;
    double rem = std::fmod(q, static_cast<double>(p));
    if (rem < 0.0) rem += static_cast<double>(p);
    const u64 v = static_cast<u64>(rem);
    return v >= p ? v % p : v;
}

FMatrix quantize_matrix(const RMatrix& x, double delta, u64 p, bool& input_overflow) {
    FMatrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i)
        out.data()[i] = quantize_value(x.data()[i], delta, p, input_overflow);
    return out;
}

double lift_signed(u64 v, u64 p) {
    v %= p;
    return v > p / 2 ? static_cast<double>(v) - static_cast<double>(p) : static_cast<double>(v);
}

// Lagrange weight of node j taken at z over the given distinct nodes.
static u64 lagrange_weight(const std::vector<u64>& nodes, std::size_t j, u64 z, u64 p) {
    u64 num = 1, den = 1;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
        if (b == j) continue;
        num = field::mulmod(num, field::submod(z % p, nodes[b] % p, p), p);
        den = field::mulmod(den, field::submod(nodes[j] % p, nodes[b] % p, p), p);
    }
    return field::mulmod(num, field::invmod(den, p), p);
}

// out = sum_j w[j] * blocks[j], all entries reduced mod p on return.
// Callers guarantee block entries are already reduced.
static void weighted_sum(FMatrix& out, const std::vector<u64>& w,
                         const std::vector<const FMatrix*>& blocks, u64 p) {
    const std::size_t chunk = field::lazy_chunk_terms(p);
    const std::size_t nb = w.size();
    const bool wide = (unsigned __int128)(p - 1) * (p - 1) > (unsigned __int128)UINT64_MAX;
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        u64 acc = 0;
        if (wide) {
            for (std::size_t j = 0; j < nb; ++j)
                acc = field::addmod(acc, field::mulmod(w[j], blocks[j]->data()[idx], p), p);
        } else {
            std::size_t pending = 0;
            for (std::size_t j = 0; j < nb; ++j) {
                acc += w[j] * blocks[j]->data()[idx];
                if (++pending == chunk) {
                    acc %= p;
                    pending = 0;
                }
            }
            acc %= p;
        }
        out.data()[idx] = acc;
    }
}

LccShareSet lcc_encode(const LccParams& P, const std::vector<RMatrix>& blocks) {
    P.validate();
    if (blocks.size() != P.k)
        fail(errc::dimension_mismatch, "encode: expected exactly k data blocks");
    for (const auto& b : blocks) {
        if (b.rows() != P.m || b.cols() != P.n)
            fail(errc::dimension_mismatch, "encode: block shape differs from params");
        if (!b.all_finite()) fail(errc::nonfinite, "encode: non-finite data entry");
    }

    const std::size_t kt = P.points();
    bool input_overflow = false;
    std::vector<FMatrix> w;
    w.reserve(kt);
    for (const auto& b : blocks) w.push_back(quantize_matrix(b, P.delta, P.p, input_overflow));

    std::mt19937_64 rng(mix_seed(P.seed, 0x6e6f697365ull));
    for (std::size_t j = P.k; j < kt; ++j) {
        FMatrix noise(P.m, P.n);
        for (std::size_t idx = 0; idx < noise.size(); ++idx)
            noise.data()[idx] = sample_uniform_residue(rng, P.p);
        w.push_back(std::move(noise));
    }

    std::vector<u64> nodes(kt);
    for (std::size_t j = 0; j < kt; ++j) nodes[j] = P.beta_point(j);
    std::vector<const FMatrix*> ptrs(kt);
    for (std::size_t j = 0; j < kt; ++j) ptrs[j] = &w[j];

    LccShareSet out;
    out.fingerprint = P.fingerprint();
    out.m = P.m;
    out.n = P.n;
    out.input_overflow = input_overflow;
    out.shares.reserve(P.workers());
    std::vector<u64> weights(kt);
    for (std::size_t i = 0; i < P.workers(); ++i) {
        for (std::size_t j = 0; j < kt; ++j)
            weights[j] = lagrange_weight(nodes, j, P.alpha_point(i), P.p);
        FMatrix share(P.m, P.n);
        weighted_sum(share, weights, ptrs, P.p);
        out.shares.emplace_back(static_cast<std::uint32_t>(i), std::move(share));
    }
    return out;
}

namespace {

// Shared-degree recursion that also vets the tree for field evaluation:
// integer coefficients only, no constant matrix factors, additions must
// join terms of equal degree so one delta power rescales the result.
std::uint32_t vet_tree(const PolyFn::Node& nd) {
    switch (nd.op) {
    case PolyFn::Op::input:
        return 1;
    case PolyFn::Op::transpose:
        return vet_tree(nd.args[0]);
    case PolyFn::Op::scale:
        if (std::nearbyint(nd.factor) != nd.factor || std::abs(nd.factor) >= 9.0e15)
            fail(errc::config, "finite-field baseline requires integer coefficients");
        return vet_tree(nd.args[0]);
    case PolyFn::Op::add: {
        const std::uint32_t a = vet_tree(nd.args[0]);
        const std::uint32_t b = vet_tree(nd.args[1]);
        if (a != b) fail(errc::config, "finite-field baseline requires a homogeneous polynomial");
        return a;
    }
    case PolyFn::Op::matmul:
        return vet_tree(nd.args[0]) + vet_tree(nd.args[1]);
    case PolyFn::Op::const_mul:
        fail(errc::config, "finite-field baseline does not support constant matrix factors");
    }
    fail(errc::runtime, "unreachable expression op");
}

struct FieldEval {
    u64 p;
    u64 mask;
    bool modular;

    u64 add(u64 a, u64 b) const { return modular ? field::addmod(a, b, p) : (a + b) & mask; }

    FMatrix transpose(const FMatrix& a) const {
        FMatrix out(a.cols(), a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
        return out;
    }

    FMatrix matmul(const FMatrix& a, const FMatrix& b) const {
        if (a.cols() != b.rows()) fail(errc::dimension_mismatch, "matmul: inner dims differ");
        FMatrix out(a.rows(), b.cols());
        const std::size_t q = a.cols(), c = b.cols();
        if (modular) {
            const std::size_t chunk = field::lazy_chunk_terms(p);
            for (std::size_t i = 0; i < a.rows(); ++i) {
                u64* row = out.data() + i * c;
                std::size_t pending = 0;
                for (std::size_t l = 0; l < q; ++l) {
                    const u64 av = a(i, l);
                    const u64* brow = b.data() + l * c;
                    for (std::size_t j = 0; j < c; ++j) row[j] += av * brow[j];
                    if (++pending == chunk || l + 1 == q) {
                        for (std::size_t j = 0; j < c; ++j) row[j] %= p;
                        pending = 0;
                    }
                }
            }
        } else {
            for (std::size_t i = 0; i < a.rows(); ++i) {
                u64* row = out.data() + i * c;
                for (std::size_t l = 0; l < q; ++l) {
                    const u64 av = a(i, l);
                    const u64* brow = b.data() + l * c;
                    for (std::size_t j = 0; j < c; ++j) row[j] = (row[j] + av * brow[j]) & mask;
                }
            }
        }
        return out;
    }

    FMatrix scale(const FMatrix& a, double factor) const {
        const long long f = static_cast<long long>(factor);
        FMatrix out(a.rows(), a.cols());
        if (modular) {
            const u64 af = static_cast<u64>(f < 0 ? -f : f) % p;
            const u64 s = f < 0 && af != 0 ? p - af : af;
            for (std::size_t i = 0; i < a.size(); ++i)
                out.data()[i] = field::mulmod(s, a.data()[i], p);
        } else {
            const u64 s = static_cast<u64>(f) & mask; // two's complement wrap
            for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = (s * a.data()[i]) & mask;
        }
        return out;
    }

    FMatrix eval(const PolyFn::Node& nd, const FMatrix& x) const {
        switch (nd.op) {
        case PolyFn::Op::input:
            return x;
        case PolyFn::Op::transpose:
            return transpose(eval(nd.args[0], x));
        case PolyFn::Op::scale:
            return scale(eval(nd.args[0], x), nd.factor);
        case PolyFn::Op::add: {
            FMatrix a = eval(nd.args[0], x);
            const FMatrix b = eval(nd.args[1], x);
            if (a.rows() != b.rows() || a.cols() != b.cols())
                fail(errc::dimension_mismatch, "add: shape mismatch");
            for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = add(a.data()[i], b.data()[i]);
            return a;
        }
        case PolyFn::Op::matmul:
            return matmul(eval(nd.args[0], x), eval(nd.args[1], x));
        case PolyFn::Op::const_mul:
            fail(errc::config, "finite-field baseline does not support constant matrix factors");
        }
        fail(errc::runtime, "unreachable expression op");
    }
};

} // namespace

FMatrix lcc_worker_eval(const LccParams& P, const PolyFn& f, const FMatrix& share) {
    P.validate();
    if (!f.is_tree())
        fail(errc::config, "finite-field baseline requires a matrix expression tree");
    if (share.rows() != P.m || share.cols() != P.n)
        fail(errc::dimension_mismatch, "worker eval: share shape differs from params");
    const std::uint32_t deg = vet_tree(f.tree());
    if (deg != P.degree)
        fail(errc::invalid_argument, "worker eval: function degree differs from params degree");

    FieldEval ev;
    ev.p = P.p;
    ev.mask = P.bits == 64 ? UINT64_MAX : (u64{1} << P.bits) - 1;
    ev.modular = P.mode == LccMode::modular;
    FMatrix out = ev.eval(f.tree(), share);
    if (!ev.modular) {
        // The single reduction of the reduce-once machine model.
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] %= P.p;
    }
    return out;
}

std::vector<RMatrix> lcc_decode(const LccParams& P, const LccEvalSet& evals) {
    P.validate();
    if (evals.poly_degree != P.degree)
        fail(errc::invalid_argument, "decode: evaluation degree differs from params degree");

    std::vector<std::pair<std::uint32_t, const FMatrix*>> got;
    got.reserve(evals.results.size());
    for (const auto& [idx, mat] : evals.results) {
        if (idx >= P.workers()) fail(errc::invalid_argument, "decode: worker index out of range");
        if (mat.rows() != evals.rows || mat.cols() != evals.cols)
            fail(errc::dimension_mismatch, "decode: evaluation shape mismatch");
        for (std::size_t i = 0; i < mat.size(); ++i)
            if (mat.data()[i] >= P.p)
                fail(errc::invalid_argument, "decode: evaluation entry not reduced mod p");
        got.emplace_back(idx, &mat);
    }
    std::sort(got.begin(), got.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < got.size(); ++i)
        if (got[i].first == got[i - 1].first)
            fail(errc::duplicate_index, "decode: duplicate worker index");

    const std::size_t need = P.dtilde() + 1;
    if (got.size() < need) fail(errc::insufficient_workers, "insufficient workers");
    got.resize(need);

    std::vector<u64> nodes(need);
    std::vector<const FMatrix*> ptrs(need);
    for (std::size_t a = 0; a < need; ++a) {
        nodes[a] = P.alpha_point(got[a].first);
        ptrs[a] = got[a].second;
    }

    const double rescale = std::pow(P.delta, static_cast<double>(P.degree));
    std::vector<RMatrix> out;
    out.reserve(P.k);
    std::vector<u64> weights(need);
    FMatrix acc(evals.rows, evals.cols);
    for (std::size_t j = 0; j < P.k; ++j) {
        for (std::size_t a = 0; a < need; ++a)
            weights[a] = lagrange_weight(nodes, a, P.beta_point(j), P.p);
        weighted_sum(acc, weights, ptrs, P.p);
        RMatrix block(evals.rows, evals.cols);
        for (std::size_t i = 0; i < acc.size(); ++i)
            block.data()[i] = lift_signed(acc.data()[i], P.p) * rescale;
        out.push_back(std::move(block));
    }
    return out;
}

std::vector<u64> lcc_worker_weights(const LccParams& P, std::size_t worker) {
    if (worker >= P.workers()) fail(errc::invalid_argument, "worker weights: index out of range");
    const std::size_t kt = P.points();
    std::vector<u64> nodes(kt);
    for (std::size_t j = 0; j < kt; ++j) nodes[j] = P.beta_point(j);
    std::vector<u64> w(kt);
    for (std::size_t j = 0; j < kt; ++j)
        w[j] = lagrange_weight(nodes, j, P.alpha_point(worker), P.p);
    return w;
}

FMatrix lcc_combine(const std::vector<const FMatrix*>& blocks,
                    const std::vector<u64>& weights, u64 p) {
    if (blocks.empty() || blocks.size() != weights.size())
        fail(errc::dimension_mismatch, "combine: weight count differs from block count");
    for (const auto* b : blocks)
        if (b->rows() != blocks[0]->rows() || b->cols() != blocks[0]->cols())
            fail(errc::dimension_mismatch, "combine: block shapes differ");
    FMatrix out(blocks[0]->rows(), blocks[0]->cols());
    weighted_sum(out, weights, blocks, p);
    return out;
}

void lcc_gram_accumulate(const LccParams& P, FMatrix& acc, const FMatrix& x) {
    const std::size_t m = x.rows(), n = x.cols();
    if (acc.rows() != n || acc.cols() != n)
        fail(errc::dimension_mismatch, "gram accumulate: bad output shape");
    if (P.mode == LccMode::modular) {
        const std::size_t chunk = field::lazy_chunk_terms(P.p);
        std::size_t pending = 0;
        for (std::size_t l = 0; l < m; ++l) {
            const u64* row = x.data() + l * n;
            for (std::size_t i = 0; i < n; ++i) {
                const u64 v = row[i];
                u64* out = acc.data() + i * n;
                for (std::size_t j = i; j < n; ++j) out[j] += v * row[j];
            }
            if (++pending == chunk || l + 1 == m) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i; j < n; ++j) acc(i, j) %= P.p;
                pending = 0;
            }
        }
    } else {
        const u64 mask = P.bits == 64 ? UINT64_MAX : (u64{1} << P.bits) - 1;
        for (std::size_t l = 0; l < m; ++l) {
            const u64* row = x.data() + l * n;
            for (std::size_t i = 0; i < n; ++i) {
                const u64 v = row[i];
                u64* out = acc.data() + i * n;
                for (std::size_t j = i; j < n; ++j) out[j] = (out[j] + v * row[j]) & mask;
            }
        }
    }
    // Upper triangle carries the state; keep the mirror in step.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) acc(j, i) = acc(i, j);
}

void lcc_finalize_eval(const LccParams& P, FMatrix& acc) {
    if (P.mode == LccMode::modular) return;
    for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] %= P.p;
}

bool lcc_overflow_predicted(const LccParams& P, const PolyFn::Bounds& fb, double r) {
    if (!(fb.s_a > 0.0) || !(r > 0.0))
        fail(errc::invalid_argument, "overflow predicate: s_a and r must be positive");
    const double d = static_cast<double>(P.degree);
    const double lhs = std::log(fb.s_a) + d * std::log(r) - (d + 1.0) * std::log(P.delta);
    const double rhs = std::log(static_cast<double>(P.p)) - std::log(2.0);
    return lhs > rhs;
}

bool lcc_capacity_ok(const LccParams& P, const PolyFn::Bounds& fb) {
    const double b = static_cast<double>(P.bits);
    if (P.mode == LccMode::modular) return 2.0 * std::log2(static_cast<double>(P.p)) <= b;
    if (!(fb.s_a > 0.0)) fail(errc::invalid_argument, "capacity: s_a must be positive");
    const double lhs = std::log2(fb.s_a) - std::log2(P.delta) +
                       static_cast<double>(P.degree) * std::log2(static_cast<double>(P.p));
    return lhs <= b;
}

field::u64 lcc_modular_prime(std::uint32_t bits) {
    if (bits < 4 || bits > 64)
        fail(errc::invalid_argument, "modular prime: bits must be in [4, 64]");
    const unsigned __int128 cap = (unsigned __int128)1 << bits;
    u64 root = static_cast<u64>(std::sqrt(std::ldexp(1.0, static_cast<int>(bits))));
    while ((unsigned __int128)root * root > cap) --root;
    while ((unsigned __int128)(root + 1) * (root + 1) <= cap) ++root;
    return field::largest_prime_at_most(root);
}

} // namespace alcc

