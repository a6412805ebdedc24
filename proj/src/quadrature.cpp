#include "aa/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace aa::quad {

namespace {

Rule16 build_rule() {
    using gauss = boost::math::quadrature::gauss<double, 16>;
    const auto& x = gauss::abscissa();
    const auto& w = gauss::weights();
    Rule16 r{};
    // Boost stores the 8 non-negative nodes of the symmetric rule.
    for (std::size_t i = 0; i < 8; ++i) {
        r.nodes[7 - i] = -x[i];
        r.weights[7 - i] = w[i];
        r.nodes[8 + i] = x[i];
        r.weights[8 + i] = w[i];
    }
    return r;
}

}  // namespace

const Rule16& gauss_legendre16() {
    static const Rule16 rule = build_rule();
    return rule;
}

}  // namespace aa::quad
