// Python bindings for the main protocol operations. Big integers cross the
// boundary as ordinary python ints; proofs and state files as bytes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "biozero/bench.hpp"
#include "biozero/ledger.hpp"
#include "biozero/synth.hpp"
#include "biozero/transcript.hpp"

namespace py = pybind11;
using namespace biozero;

namespace {

py::int_ to_py(const mpz_class& v) {
    std::string dec = v.get_str(10);
    PyObject* obj = PyLong_FromString(dec.c_str(), nullptr, 10);
    if (!obj) throw py::error_already_set();
    return py::reinterpret_steal<py::int_>(obj);
}

mpz_class from_py(const py::int_& v) {
    std::string dec = py::cast<std::string>(py::str(v));
    return mpz_class(dec, 10);
}

std::vector<uint8_t> from_bytes(const py::bytes& b) {
    std::string s = b;
    return std::vector<uint8_t>(s.begin(), s.end());
}

py::bytes to_bytes(std::span<const uint8_t> v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

struct PyParams {
    std::shared_ptr<GroupParams> p;
};

struct PyKeys {
    RangeKeys keys;
};

struct PyRecord {
    RegistrationRecord rec;
};

struct PyLedger {
    std::shared_ptr<GroupParams> params;
    std::unique_ptr<Ledger> ledger;
};

PyParams setup_group(const std::string& profile) {
    if (profile == "toy") {
        return PyParams{std::make_shared<GroupParams>(GroupParams::setup(GroupProfile::Toy))};
    }
    if (profile == "production") {
        return PyParams{
            std::make_shared<GroupParams>(GroupParams::setup(GroupProfile::Production))};
    }
    throw std::invalid_argument("profile must be 'toy' or 'production'");
}

CommitmentVector vec_from_ints(const std::vector<py::int_>& xs) {
    CommitmentVector v;
    v.reserve(xs.size());
    for (const auto& x : xs) v.push_back(Commitment{GroupElement(from_py(x)), std::nullopt});
    return v;
}

ProofMode mode_from_name(const std::string& mode) {
    if (mode == "repaired") return ProofMode::Repaired;
    if (mode == "paper-faithful") return ProofMode::PaperFaithful;
    throw std::invalid_argument("mode must be 'repaired' or 'paper-faithful'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "BioZero biometric authentication protocol (C++ core)";

    py::class_<PyParams>(m, "GroupParams")
        .def_property_readonly("p", [](const PyParams& s) { return to_py(s.p->p()); })
        .def_property_readonly("q", [](const PyParams& s) { return to_py(s.p->q()); })
        .def_property_readonly("g", [](const PyParams& s) { return to_py(s.p->g().value); })
        .def_property_readonly("h", [](const PyParams& s) { return to_py(s.p->h().value); })
        .def_property_readonly("element_bytes",
                               [](const PyParams& s) { return s.p->element_bytes(); })
        .def_property_readonly("scalar_bytes",
                               [](const PyParams& s) { return s.p->scalar_bytes(); })
        .def("exp",
             [](const PyParams& s, const py::int_& base, const py::int_& k) {
                 return to_py(
                     s.p->exp(GroupElement(from_py(base)), s.p->reduce(from_py(k))).value);
             })
        .def("mul",
             [](const PyParams& s, const py::int_& a, const py::int_& b) {
                 return to_py(
                     s.p->mul(GroupElement(from_py(a)), GroupElement(from_py(b))).value);
             })
        .def("inv", [](const PyParams& s, const py::int_& a) {
            return to_py(s.p->inv(GroupElement(from_py(a))).value);
        });

    m.def("setup_group", &setup_group, py::arg("profile"));

    m.def(
        "commit",
        [](const PyParams& s, const py::int_& f, const py::int_& r) {
            Opening o{s.p->reduce(from_py(f)), s.p->reduce(from_py(r))};
            return to_py(pedersen::commit(*s.p, o).element.value);
        },
        py::arg("params"), py::arg("f"), py::arg("r"),
        "Pedersen commitment g^f h^r under the default bases");

    m.def("commit_add", [](const PyParams& s, const py::int_& a, const py::int_& b) {
        Commitment ca{GroupElement(from_py(a)), std::nullopt};
        Commitment cb{GroupElement(from_py(b)), std::nullopt};
        return to_py(pedersen::add(*s.p, ca, cb).element.value);
    });
    m.def("commit_sub", [](const PyParams& s, const py::int_& a, const py::int_& b) {
        Commitment ca{GroupElement(from_py(a)), std::nullopt};
        Commitment cb{GroupElement(from_py(b)), std::nullopt};
        return to_py(pedersen::sub(*s.p, ca, cb).element.value);
    });
    m.def("commit_scale", [](const PyParams& s, const py::int_& a, const py::int_& k) {
        Commitment ca{GroupElement(from_py(a)), std::nullopt};
        return to_py(pedersen::scale(*s.p, ca, s.p->reduce(from_py(k))).element.value);
    });
    m.def("verify_opening",
          [](const PyParams& s, const py::int_& c, const py::int_& f, const py::int_& r) {
              Commitment cc{GroupElement(from_py(c)), std::nullopt};
              return pedersen::verify_opening(
                  *s.p, cc, Opening{s.p->reduce(from_py(f)), s.p->reduce(from_py(r))});
          });

    m.def(
        "derive_challenge",
        [](const PyParams& s, const std::vector<py::int_>& c0, const std::vector<py::int_>& c1,
           const std::vector<py::int_>& c00, const std::vector<py::int_>& c11,
           const std::vector<py::int_>& c01, const std::vector<py::int_>& alpha1,
           const std::vector<py::int_>& alpha2, const std::vector<py::int_>& beta1,
           const std::vector<py::int_>& beta2, const std::vector<py::int_>& beta3,
           const py::bytes& id, uint64_t nonce) {
            AuthRelationFirstMessage first;
            if (alpha1.size() != alpha2.size() || alpha1.size() != beta1.size() ||
                alpha1.size() != beta2.size() || alpha1.size() != beta3.size()) {
                throw std::invalid_argument("first-message vectors must share one length");
            }
            for (size_t i = 0; i < alpha1.size(); ++i) {
                first.entries.push_back({GroupElement(from_py(alpha1[i])),
                                         GroupElement(from_py(alpha2[i])),
                                         GroupElement(from_py(beta1[i])),
                                         GroupElement(from_py(beta2[i])),
                                         GroupElement(from_py(beta3[i]))});
            }
            Challenge e = transcript::derive_challenge(
                *s.p, vec_from_ints(c0), vec_from_ints(c1), vec_from_ints(c00),
                vec_from_ints(c11), vec_from_ints(c01), first, from_bytes(id), nonce);
            return to_py(e.e.value);
        },
        "Fiat-Shamir challenge over the full transcript: the five commitment "
        "vectors, the relation-proof first messages, the id and the nonce");

    py::class_<PyKeys>(m, "RangeKeys")
        .def_property_readonly("bits", [](const PyKeys& k) { return k.keys.bits; })
        .def("serialize", [](const PyKeys& k) { return to_bytes(k.keys.serialize()); })
        .def_static("deserialize", [](const py::bytes& b) {
            return PyKeys{RangeKeys::deserialize(from_bytes(b))};
        });

    m.def(
        "setup_range_keys",
        [](const PyParams& s, uint32_t bits) { return PyKeys{rangeproof::setup(*s.p, bits)}; },
        py::arg("params"), py::arg("bits"));

    py::class_<PyRecord>(m, "RegistrationRecord")
        .def_property_readonly("id",
                               [](const PyRecord& r) { return to_bytes(r.rec.id); })
        .def_property_readonly("features",
                               [](const PyRecord& r) { return r.rec.f0; })
        .def_property_readonly("commitments",
                               [](const PyRecord& r) {
                                   std::vector<py::int_> out;
                                   for (const auto& c : r.rec.c0)
                                       out.push_back(to_py(c.element.value));
                                   return out;
                               })
        .def("serialize",
             [](const PyRecord& r, const PyParams& s) { return to_bytes(r.rec.serialize(*s.p)); })
        .def_static("deserialize", [](const PyParams& s, const py::bytes& b) {
            return PyRecord{RegistrationRecord::deserialize(*s.p, from_bytes(b))};
        });

    m.def(
        "register_user",
        [](const PyParams& s, const py::bytes& id, const std::vector<uint32_t>& features,
           uint32_t feature_bits, uint64_t seed) {
            Rng rng(seed);
            return PyRecord{
                protocol::register_user(*s.p, from_bytes(id),
                                        BiometricVector{features, feature_bits}, rng)};
        },
        py::arg("params"), py::arg("id"), py::arg("features"), py::arg("feature_bits") = 8,
        py::arg("seed"));

    m.def(
        "generate_auth_proof",
        [](const PyParams& s, const PyKeys& keys, const PyRecord& rec,
           const std::vector<uint32_t>& probe, uint64_t nonce, uint64_t epsilon, uint64_t seed,
           const std::string& mode, bool force) {
            Rng rng(seed);
            BiometricVector f1{probe, rec.rec.feature_bits};
            AuthProof gamma =
                force ? protocol::testing::force_generate_auth_proof(
                            *s.p, keys.keys, rec.rec, f1, nonce, epsilon, rng,
                            mode_from_name(mode))
                      : protocol::generate_auth_proof(*s.p, keys.keys, rec.rec, f1, nonce,
                                                      epsilon, rng, mode_from_name(mode));
            return to_bytes(protocol::serialize_auth_proof(*s.p, gamma));
        },
        py::arg("params"), py::arg("keys"), py::arg("record"), py::arg("probe"),
        py::arg("nonce"), py::arg("epsilon"), py::arg("seed"), py::arg("mode") = "repaired",
        py::arg("force") = false);

    m.def("compute_distance", [](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        return protocol::compute_distance(BiometricVector{a, 31}, BiometricVector{b, 31});
    });

    m.def(
        "synth_features",
        [](uint64_t seed, size_t n, uint32_t feature_bits, std::optional<uint64_t> target) {
            SynthPair pair = synth_features(seed, n, feature_bits, target);
            return py::make_tuple(pair.f0.values, pair.f1.values, pair.achieved_distance);
        },
        py::arg("seed"), py::arg("n"), py::arg("feature_bits") = 8,
        py::arg("target") = std::nullopt);

    py::class_<PyLedger>(m, "Ledger")
        .def(py::init([](const PyParams& s) {
            auto ledger = std::make_unique<Ledger>(*s.p);
            return PyLedger{s.p, std::move(ledger)};
        }))
        .def("register_identity",
             [](PyLedger& l, const py::bytes& id, const std::vector<py::int_>& c0) {
                 l.ledger->register_identity(from_bytes(id), vec_from_ints(c0));
             })
        .def("verify_auth",
             [](PyLedger& l, const PyKeys& keys, uint64_t epsilon, const py::bytes& gamma) {
                 VerifyOutcome out = l.ledger->verify_auth(
                     keys.keys, l.params->scalar_from_u64(epsilon), from_bytes(gamma));
                 OpCounts total = out.cost.total();
                 py::dict d;
                 d["pass"] = out.pass;
                 d["stage"] = std::string(stage_name(out.failed_stage));
                 d["diagnostic"] = out.diagnostic;
                 d["cost"] = py::dict(py::arg("exp") = total.exp, py::arg("mul") = total.mul,
                                      py::arg("hash") = total.hash);
                 return d;
             })
        .def("last_nonce",
             [](const PyLedger& l, const py::bytes& id) -> std::optional<uint64_t> {
                 const RegistryEntry* e = l.ledger->find(from_bytes(id));
                 if (!e) return std::nullopt;
                 return e->last_nonce;
             })
        .def("event_count", [](const PyLedger& l) { return l.ledger->events().size(); })
        .def("serialize", [](const PyLedger& l) { return to_bytes(l.ledger->serialize()); })
        .def("reverify_log",
             [](const PyLedger& l, const PyKeys& keys, uint64_t epsilon) {
                 auto results =
                     l.ledger->reverify_log(keys.keys, l.params->scalar_from_u64(epsilon));
                 size_t mismatches = 0;
                 for (const auto& r : results) {
                     if (!r.matches) ++mismatches;
                 }
                 return py::make_tuple(results.size(), mismatches);
             })
        .def_static("deserialize", [](const PyParams& s, const py::bytes& b) {
            auto ledger =
                std::make_unique<Ledger>(Ledger::deserialize(*s.p, from_bytes(b)));
            return PyLedger{s.p, std::move(ledger)};
        });
}
