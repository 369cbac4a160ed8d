#include <doctest.h>

#include <sstream>

#include "biozero/bench.hpp"

using namespace biozero;

namespace {
const GroupParams& production() {
    static GroupParams params = GroupParams::setup(GroupProfile::Production);
    return params;
}
}  // namespace

TEST_CASE("small sweep reproduces the structural scaling shapes") {
    BenchConfig cfg;
    cfg.n_values = {4, 8, 16};
    cfg.trials = 1;
    cfg.seed = 5;
    cfg.range_bits = 8;
    cfg.epsilon = 200;
    auto records = bench::run(production(), cfg);
    REQUIRE(records.size() == 3);

    ScalingSummary s = bench::summarize(records);
    CHECK(s.pi_constant);
    CHECK(s.gamma_affine_exact);
    CHECK(s.stage6_ops_constant);
    CHECK(s.stage35_linear_ok);
    // timing shapes are asserted in the acceptance suite over the full sweep

    // |Gamma| grows with N, |pi| does not.
    CHECK(records[0].gamma_bytes < records[2].gamma_bytes);
    CHECK(records[0].pi_bytes == records[2].pi_bytes);
}

TEST_CASE("csv output is schema-versioned and deterministic in non-timing columns") {
    BenchConfig cfg;
    cfg.n_values = {4};
    cfg.trials = 2;
    cfg.seed = 9;
    cfg.range_bits = 8;
    cfg.epsilon = 100;
    auto r1 = bench::run(production(), cfg);
    auto r2 = bench::run(production(), cfg);

    std::ostringstream a, b;
    bench::write_csv(a, cfg, r1);
    bench::write_csv(b, cfg, r2);

    auto strip_timing = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) {
            // columns 6..10 are wall-clock times; drop them
            std::string kept;
            size_t field = 0, start = 0;
            for (size_t i = 0; i <= line.size(); ++i) {
                if (i == line.size() || line[i] == ',') {
                    if (field < 6 || field > 10) kept += line.substr(start, i - start) + ",";
                    ++field;
                    start = i + 1;
                }
            }
            out += kept + "\n";
        }
        return out;
    };
    CHECK(a.str().rfind("# biozero-bench v1", 0) == 0);
    CHECK(strip_timing(a.str()) == strip_timing(b.str()));
}

TEST_CASE("paper-faithful mode runs the same pipeline") {
    BenchConfig cfg;
    cfg.n_values = {4};
    cfg.trials = 1;
    cfg.seed = 11;
    cfg.range_bits = 8;
    cfg.epsilon = 100;
    cfg.mode = ProofMode::PaperFaithful;
    auto records = bench::run(production(), cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].mode == ProofMode::PaperFaithful);
}
