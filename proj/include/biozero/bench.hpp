#ifndef BIOZERO_BENCH_HPP_
#define BIOZERO_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biozero/ledger.hpp"
#include "biozero/synth.hpp"

namespace biozero {

struct BenchConfig {
    std::vector<size_t> n_values = {16, 64, 128, 256, 512};
    size_t trials = 5;
    uint64_t seed = 1;
    uint32_t feature_bits = 8;
    uint32_t range_bits = 32;
    uint64_t epsilon = 10000;
    ProofMode mode = ProofMode::Repaired;
};

struct BenchRecord {
    size_t n = 0;
    size_t trial = 0;
    double commit_layer_ms = 0;  // commitments + challenge + relation proof
    double range_gen_ms = 0;     // distance opening + range proof
    double prove_ms = 0;
    double verify_ms = 0;
    double total_ms = 0;
    size_t gamma_bytes = 0;
    size_t pi_bytes = 0;
    CostReport cost;
    ProofMode mode = ProofMode::Repaired;
};

/// Scaling-shape checks over a sweep, the property form of the paper's
/// figure-3 study: proof size constant in N, package size exactly affine in
/// N, verifier op counts constant (range stage) and linear (commitment
/// stages), range generation time flat while the commitment layer grows.
struct ScalingSummary {
    bool pi_constant = false;
    bool gamma_affine_exact = false;
    bool stage6_ops_constant = false;
    double stage35_linear_max_rel_dev = 0.0;
    bool stage35_linear_ok = false;
    double range_time_spread = 0.0;  // (max-min)/min over per-N medians
    bool range_time_ok = false;
    bool commit_time_monotonic = false;

    bool all_ok() const {
        return pi_constant && gamma_affine_exact && stage6_ops_constant && stage35_linear_ok &&
               range_time_ok && commit_time_monotonic;
    }
};

namespace bench {

std::vector<BenchRecord> run(const GroupParams& params, const BenchConfig& cfg);

void write_csv(std::ostream& os, const BenchConfig& cfg, const std::vector<BenchRecord>& records);

/// Medians over trials per N, then the shape assertions. The timing
/// thresholds are fixed: range-time spread < 20%, stage 3-5 op counts within
/// 5% of the best affine fit.
ScalingSummary summarize(const std::vector<BenchRecord>& records);

std::string summary_report(const ScalingSummary& s);

}  // namespace bench

}  // namespace biozero

#endif  // BIOZERO_BENCH_HPP_
