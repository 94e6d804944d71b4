#include <doctest.h>

#include <cmath>

#include "symcalc/json_io.hpp"
#include "symcalc/kernels.hpp"

using namespace symcalc;

namespace {

void check_fields(const Certificate &c)
{
    for (double v : {c.tail_bound, c.lipschitz_bound, c.curvature_bound, c.third_order_bound, c.rounding_bound,
                     c.slack}) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    CHECK(c.certified() == (c.margin > 0.0));
}

} // namespace

TEST_CASE("certified radii")
{
    const auto two = certify_positivity({KernelKind::LPrime, 2, 60}, 0.5406);
    CHECK(two.certified());
    check_fields(two);
    const auto three = certify_positivity({KernelKind::LPrime, 3, 60}, 0.39);
    CHECK(three.certified());
    check_fields(three);
    const auto l2 = certify_positivity({KernelKind::L, 2, 60}, 0.3);
    CHECK(l2.certified());
    check_fields(l2);
}

TEST_CASE("large radius is not certified")
{
    const auto c = certify_positivity({KernelKind::LPrime, 2, 60}, 0.95);
    CHECK_FALSE(c.certified());
    CHECK(c.margin <= 0.0);
    check_fields(c);
}

TEST_CASE("recheck round trip")
{
    const auto c = certify_positivity({KernelKind::LPrime, 2, 40}, 0.5);
    const auto back = certificate_from_json(parse_json(to_json(c).dump()));
    CHECK(recheck_certificate(back));
    auto tampered = back;
    tampered.margin += 1e-3;
    CHECK_FALSE(recheck_certificate(tampered));
}

TEST_CASE("threads do not change certificates")
{
    CertifyOptions one;
    CertifyOptions four;
    four.threads = 4;
    const auto a = certify_positivity({KernelKind::LPrime, 3, 40}, 0.3, one);
    const auto b = certify_positivity({KernelKind::LPrime, 3, 40}, 0.3, four);
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("invalid requests")
{
    CHECK_THROWS_AS(certify_positivity({KernelKind::J, 2, 60}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(certify_positivity({KernelKind::L, 2, 60}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(certify_positivity({KernelKind::L, 2, 60}, -0.1), std::invalid_argument);
}
