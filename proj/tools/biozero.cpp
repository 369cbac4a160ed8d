// biozero: command-line front end for the protocol.
//
// Exit codes: 0 = pass, 1 = fail verdict (rejected proof, failed replay check,
// failed scaling assertion), 2 = usage or I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "biozero/bench.hpp"
#include "biozero/ledger.hpp"
#include "biozero/synth.hpp"

using namespace biozero;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path);
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(f)),
                                std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!f) throw UsageError("short write to " + path);
}

GroupProfile parse_profile(const std::string& name) {
    if (name == "toy") return GroupProfile::Toy;
    if (name == "production") return GroupProfile::Production;
    throw UsageError("unknown profile '" + name + "' (expected toy or production)");
}

std::string default_profile() {
    const char* env = std::getenv("BIOZERO_PROFILE");
    return env && *env ? env : "production";
}

GroupParams load_params(const std::string& path) {
    auto bytes = read_file(path);
    if (bytes.size() < 6 || bytes[0] != 'B' || bytes[1] != 'Z' || bytes[2] != 'P' ||
        bytes[3] != 'R' || bytes[4] != 1) {
        throw UsageError("not a biozero params file: " + path);
    }
    GroupProfile profile = GroupProfile(bytes[5]);
    if (profile != GroupProfile::Toy && profile != GroupProfile::Production) {
        throw UsageError("unknown profile in params file");
    }
    GroupParams params = GroupParams::setup(profile);
    if (params.canonical_encoding() != bytes) {
        throw UsageError("params file does not match the built-in profile constants");
    }
    return params;
}

RangeKeys load_keys(const std::string& path, const GroupParams& params) {
    RangeKeys keys = RangeKeys::deserialize(read_file(path));
    Digest expect = sha256(params.canonical_encoding());
    if (keys.pk.params_digest != expect) {
        throw UsageError("range keys were generated for different group parameters");
    }
    return keys;
}

BiometricVector read_features(const std::string& path, uint32_t feature_bits) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open feature file " + path);
    BiometricVector v;
    v.feature_bits = feature_bits;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        try {
            v.values.push_back(uint32_t(std::stoul(line.substr(start))));
        } catch (const std::exception&) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": not an integer");
        }
    }
    return v;
}

Ledger load_or_create_ledger(const GroupParams& params, const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) return Ledger(params);
    probe.close();
    return Ledger::load(params, path);
}

uint64_t pick_nonce(const std::string& nonce_arg, const Ledger* ledger,
                    std::span<const uint8_t> id) {
    if (nonce_arg != "auto") return std::stoull(nonce_arg);
    if (ledger) {
        if (const RegistryEntry* entry = ledger->find(id); entry && entry->last_nonce) {
            return *entry->last_nonce + 1;
        }
    }
    return 0;
}

void print_cost(const CostReport& cost) {
    OpCounts total = cost.total();
    OpCounts s35 = cost.stages_3_to_5();
    const OpCounts& s6 = cost.stage(Stage::Range);
    std::cout << "cost: exp=" << total.exp << " mul=" << total.mul << " hash=" << total.hash
              << " (stages 3-5: exp=" << s35.exp << ", stage 6: exp=" << s6.exp << ")\n";
}

int run(int argc, char** argv) {
    CLI::App app{"BioZero decentralized biometric authentication"};
    app.require_subcommand(1);

    // --- setup ---------------------------------------------------------
    auto* setup = app.add_subcommand("setup", "write group parameters and range keys");
    std::string setup_params = "params.bin", setup_keys = "keys.bin";
    std::string setup_profile = default_profile();
    uint32_t setup_bits = 32;
    setup->add_option("--params", setup_params, "output path for group parameters");
    setup->add_option("--keys", setup_keys, "output path for range keys");
    setup->add_option("--profile", setup_profile, "group profile: toy or production");
    setup->add_option("--bits", setup_bits, "range-proof domain bit length L");

    // --- register ------------------------------------------------------
    auto* reg = app.add_subcommand("register", "enroll an identity on the ledger");
    std::string reg_params, reg_ledger, reg_id, reg_features, reg_out;
    uint32_t reg_m = 8;
    uint64_t reg_seed = 0;
    bool reg_seeded = false;
    reg->add_option("--params", reg_params)->required();
    reg->add_option("--ledger", reg_ledger)->required();
    reg->add_option("--id", reg_id)->required();
    reg->add_option("--features", reg_features, "text file, one integer per line")->required();
    reg->add_option("--out", reg_out, "output path for the secret registration record")
        ->required();
    reg->add_option("-m,--feature-bits", reg_m, "feature quantization bits");
    reg->add_option("--seed", reg_seed, "seed for deterministic blinding factors");

    // --- prove ---------------------------------------------------------
    auto* prove = app.add_subcommand("prove", "generate an authentication proof");
    std::string pr_params, pr_keys, pr_record, pr_features, pr_out, pr_ledger;
    std::string pr_nonce = "auto", pr_mode = "repaired";
    uint64_t pr_epsilon = 0, pr_seed = 0;
    bool pr_seeded = false, pr_force = false;
    prove->add_option("--params", pr_params)->required();
    prove->add_option("--keys", pr_keys)->required();
    prove->add_option("--record", pr_record, "registration record (secret side)")->required();
    prove->add_option("--features", pr_features, "probe feature file")->required();
    prove->add_option("--epsilon", pr_epsilon, "match threshold")->required();
    prove->add_option("--out", pr_out)->required();
    prove->add_option("--ledger", pr_ledger, "ledger used to pick the next nonce");
    prove->add_option("--nonce", pr_nonce, "explicit nonce, or 'auto' (= last accepted + 1)");
    prove->add_option("--mode", pr_mode, "repaired | paper-faithful");
    prove->add_option("--seed", pr_seed);
    prove->add_flag("--force-negative-test", pr_force,
                    "bypass the d < epsilon guard (testing only)");

    // --- verify --------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "apply a proof to the ledger");
    std::string vf_params, vf_keys, vf_ledger, vf_proof;
    uint64_t vf_epsilon = 0;
    verify->add_option("--params", vf_params)->required();
    verify->add_option("--keys", vf_keys)->required();
    verify->add_option("--ledger", vf_ledger)->required();
    verify->add_option("--epsilon", vf_epsilon)->required();
    verify->add_option("--proof", vf_proof)->required();

    // --- reverify-log ----------------------------------------------------
    auto* reverify = app.add_subcommand("reverify-log", "replay and re-check the event log");
    std::string rv_params, rv_keys, rv_ledger;
    uint64_t rv_epsilon = 0;
    reverify->add_option("--params", rv_params)->required();
    reverify->add_option("--keys", rv_keys)->required();
    reverify->add_option("--ledger", rv_ledger)->required();
    reverify->add_option("--epsilon", rv_epsilon)->required();

    // --- bench ---------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "run the scaling sweep");
    std::string bn_out = "bench.csv", bn_ns = "16,64,128,256,512", bn_mode = "repaired";
    std::string bn_profile = default_profile();
    uint64_t bn_seed = 1, bn_epsilon = 10000;
    uint32_t bn_trials = 5, bn_bits = 32, bn_m = 8;
    bench_cmd->add_option("--out", bn_out, "CSV output path");
    bench_cmd->add_option("--ns", bn_ns, "comma-separated vector lengths");
    bench_cmd->add_option("--trials", bn_trials);
    bench_cmd->add_option("--seed", bn_seed);
    bench_cmd->add_option("--epsilon", bn_epsilon);
    bench_cmd->add_option("--bits", bn_bits, "range-proof domain bit length");
    bench_cmd->add_option("-m,--feature-bits", bn_m);
    bench_cmd->add_option("--mode", bn_mode, "repaired | paper-faithful");
    bench_cmd->add_option("--profile", bn_profile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
    }
    reg_seeded = reg->count("--seed") > 0;
    pr_seeded = prove->count("--seed") > 0;

    if (setup->parsed()) {
        GroupParams params = GroupParams::setup(parse_profile(setup_profile));
        write_file(setup_params, params.canonical_encoding());
        RangeKeys keys = rangeproof::setup(params, setup_bits);
        write_file(setup_keys, keys.serialize());
        std::cout << "wrote " << setup_params << " (" << setup_profile << ") and " << setup_keys
                  << " (L=" << setup_bits << ")\n";
        return 0;
    }

    if (reg->parsed()) {
        GroupParams params = load_params(reg_params);
        BiometricVector f0 = read_features(reg_features, reg_m);
        Rng rng = reg_seeded ? Rng(reg_seed) : Rng::nondeterministic();
        std::vector<uint8_t> id(reg_id.begin(), reg_id.end());
        RegistrationRecord rec = protocol::register_user(params, id, f0, rng);
        Ledger ledger = load_or_create_ledger(params, reg_ledger);
        ledger.register_identity(id, rec.c0);
        ledger.save(reg_ledger);
        write_file(reg_out, rec.serialize(params));
        std::cout << "registered id '" << reg_id << "' with N=" << f0.size() << "\n";
        return 0;
    }

    if (prove->parsed()) {
        GroupParams params = load_params(pr_params);
        RangeKeys keys = load_keys(pr_keys, params);
        RegistrationRecord rec = RegistrationRecord::deserialize(params, read_file(pr_record));
        BiometricVector f1 = read_features(pr_features, rec.feature_bits);
        std::optional<Ledger> ledger;
        if (!pr_ledger.empty()) ledger = Ledger::load(params, pr_ledger);
        uint64_t nonce = pick_nonce(pr_nonce, ledger ? &*ledger : nullptr, rec.id);
        Rng rng = pr_seeded ? Rng(pr_seed) : Rng::nondeterministic();
        ProofMode mode = pr_mode == "paper-faithful" ? ProofMode::PaperFaithful
                                                     : ProofMode::Repaired;

        uint64_t d = protocol::compute_distance(
            BiometricVector{rec.f0, rec.feature_bits}, f1);
        AuthProof gamma;
        if (d >= pr_epsilon) {
            if (!pr_force) {
                std::cerr << "refusing to prove: distance " << d << " >= epsilon " << pr_epsilon
                          << " (use --force-negative-test to generate anyway)\n";
                return 2;
            }
            gamma = protocol::testing::force_generate_auth_proof(params, keys, rec, f1, nonce,
                                                                 pr_epsilon, rng, mode);
        } else {
            gamma = protocol::generate_auth_proof(params, keys, rec, f1, nonce, pr_epsilon, rng,
                                                  mode);
        }
        write_file(pr_out, protocol::serialize_auth_proof(params, gamma));
        std::cout << "wrote proof for nonce " << nonce << " (d=" << d << ")\n";
        return 0;
    }

    if (verify->parsed()) {
        GroupParams params = load_params(vf_params);
        RangeKeys keys = load_keys(vf_keys, params);
        Ledger ledger = Ledger::load(params, vf_ledger);
        VerifyOutcome out =
            ledger.verify_auth(keys, params.scalar_from_u64(vf_epsilon), read_file(vf_proof));
        ledger.save(vf_ledger);
        if (out.pass) {
            std::cout << "pass\n";
        } else {
            std::cout << "fail stage=" << stage_name(out.failed_stage) << " ("
                      << out.diagnostic << ")\n";
        }
        print_cost(out.cost);
        return out.pass ? 0 : 1;
    }

    if (reverify->parsed()) {
        GroupParams params = load_params(rv_params);
        RangeKeys keys = load_keys(rv_keys, params);
        Ledger ledger = Ledger::load(params, rv_ledger);
        auto results = ledger.reverify_log(keys, params.scalar_from_u64(rv_epsilon));
        size_t mismatches = 0;
        for (const auto& r : results) {
            std::cout << "event " << r.seq << ": " << (r.matches ? "ok" : "MISMATCH") << " ("
                      << r.note << ")\n";
            if (!r.matches) ++mismatches;
        }
        std::cout << results.size() << " events, " << mismatches << " mismatches\n";
        return mismatches == 0 ? 0 : 1;
    }

    if (bench_cmd->parsed()) {
        GroupParams params = GroupParams::setup(parse_profile(bn_profile));
        BenchConfig cfg;
        cfg.n_values.clear();
        std::stringstream ss(bn_ns);
        for (std::string tok; std::getline(ss, tok, ',');) {
            if (!tok.empty()) cfg.n_values.push_back(std::stoul(tok));
        }
        if (cfg.n_values.empty()) throw UsageError("--ns must name at least one vector length");
        cfg.trials = bn_trials;
        cfg.seed = bn_seed;
        cfg.epsilon = bn_epsilon;
        cfg.range_bits = bn_bits;
        cfg.feature_bits = bn_m;
        cfg.mode = bn_mode == "paper-faithful" ? ProofMode::PaperFaithful : ProofMode::Repaired;

        auto records = bench::run(params, cfg);
        std::ofstream csv(bn_out, std::ios::trunc);
        if (!csv) throw UsageError("cannot open " + bn_out);
        bench::write_csv(csv, cfg, records);
        ScalingSummary summary = bench::summarize(records);
        std::cout << bench::summary_report(summary);
        std::cout << "wrote " << records.size() << " records to " << bn_out << "\n";
        return summary.all_ok() ? 0 : 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
