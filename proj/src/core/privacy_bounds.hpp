#pragma once

#include <cstdint>
#include <vector>

#include "core/alcc_core.hpp"

namespace alcc {

// Mixing matrices seen by a colluding worker subset T of size t: L carries
// the Lagrange basis values at the colluders' evaluation points for the k
// data slots, Ltilde the same for the t noise slots.
struct CollusionContext {
    std::vector<std::uint32_t> subset;
    CMatrix L;      // t x k
    CMatrix Ltilde; // t x t
};

struct SubsetSearchSpec {
    // Exhaustive when C(N, t) fits the cap, otherwise a seeded random sample.
    std::size_t exhaustive_cap = 100000;
    std::size_t sample_count = 20000;
    std::uint64_t seed = 1;
};

struct PrivacyReport {
    double eta_c_bound = 0.0;        // bits, log-det form
    double eta_s_bound = 0.0;        // bits, sqrt(2 * eta_c)
    double eta_c_trace_bound = 0.0;  // bits, small-signal trace form
    std::vector<std::uint32_t> worst_subset;
    std::size_t subsets_examined = 0;
    bool exhaustive = true;
};

CollusionContext collusion_context(const AlccParams& p, const std::vector<std::uint32_t>& subset);

// Worst-case mutual-information leakage bound over colluding subsets:
// max_T log2 det(I + (r^2 t / sigma_n^2) * inv(Sigma~_T) Sigma_T), evaluated
// through the whitened spectrum so tiny and huge signal-to-noise ratios both
// stay accurate. Also reports the trace relaxation of the same quantity.
PrivacyReport mis_bound(const AlccParams& p, const SubsetSearchSpec& search = {});

double ds_bound_from(double eta_c_bits);

// Mean-distance bound for a share entry: (k r / (k+t)) * sum_l (1/beta)^l.
double d_mean_bound(const AlccParams& p);

// Distinguishing-security bound adjusted for truncated noise:
// (eta_s + (2 exp(-(theta - dbar sqrt(t)/sigma_n)^2 / 2))^t) / w with
// w = (1 - 2 exp(-theta^2/2))^t.
double truncated_ds_bound(const AlccParams& p, double eta_s_bits);

} // namespace alcc
