#include "biozero/pedersen.hpp"

#include <stdexcept>

namespace biozero::pedersen {

namespace {

bool same_bases(const GroupParams& params, const Commitment& a, const Commitment& b) {
    const auto def = std::make_pair(params.g(), params.h());
    const auto& ba = a.bases ? *a.bases : def;
    const auto& bb = b.bases ? *b.bases : def;
    return ba.first == bb.first && ba.second == bb.second;
}

}  // namespace

Commitment commit(const GroupParams& params, const Opening& opening) {
    return Commitment{params.dual_exp_gh(opening.f, opening.r), std::nullopt};
}

Commitment commit(const GroupParams& params, const Opening& opening,
                  const GroupElement& base_g, const GroupElement& base_h) {
    if (base_g == params.g() && base_h == params.h()) return commit(params, opening);
    return Commitment{params.dual_exp(base_g, opening.f, base_h, opening.r),
                      std::make_pair(base_g, base_h)};
}

GroupElement commit_value_vartime(const GroupParams& params, const Scalar& f, const Scalar& r) {
    return params.dual_exp_gh_vartime(f, r);
}

GroupElement commit_value_vartime(const GroupParams& params, const Scalar& f, const Scalar& r,
                                  const GroupElement& base_g, const GroupElement& base_h) {
    return params.mul(params.exp_vartime(base_g, f), params.exp_vartime(base_h, r));
}

Commitment add(const GroupParams& params, const Commitment& a, const Commitment& b) {
    if (!same_bases(params, a, b)) {
        throw std::invalid_argument("homomorphic add on commitments with different bases");
    }
    return Commitment{params.mul(a.element, b.element), a.bases};
}

Commitment sub(const GroupParams& params, const Commitment& a, const Commitment& b) {
    if (!same_bases(params, a, b)) {
        throw std::invalid_argument("homomorphic sub on commitments with different bases");
    }
    return Commitment{params.mul(a.element, params.inv(b.element)), a.bases};
}

Commitment scale(const GroupParams& params, const Commitment& a, const Scalar& k) {
    return Commitment{params.exp_vartime(a.element, k), a.bases};
}

bool verify_opening(const GroupParams& params, const Commitment& c, const Opening& opening) {
    if (c.bases) {
        return commit(params, opening, c.bases->first, c.bases->second).element == c.element;
    }
    return commit(params, opening).element == c.element;
}

}  // namespace biozero::pedersen
