#include <doctest.h>

#include <functional>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "crossing/closedform.hpp"
#include "crossing/errors.hpp"
#include "crossing/laplace.hpp"

using namespace crossing;

namespace {

struct Pair {
    Transform f;
    std::function<double(double)> original;
};

std::vector<Pair> known_pairs() {
    std::vector<Pair> out;
    for (double a : {0.5, 1.0, 2.0, 3.0})
        out.push_back({[a](cplx s) { return 1.0 / (s + a); }, [a](double t) { return std::exp(-a * t); }});
    for (int k : {2, 3, 4})
        out.push_back({[k](cplx s) { return 1.0 / (s * std::pow(s + 1.0, k)); },
                       [k](double t) { return boost::math::gamma_p(static_cast<double>(k), t); }});
    for (int n : {1, 2, 3})
        out.push_back({[n](cplx s) { return std::tgamma(n + 1.0) / std::pow(s + 1.0, n + 1); },
                       [n](double t) { return std::pow(t, n) * std::exp(-t); }});
    for (double w : {0.5, 1.0})
        out.push_back({[w](cplx s) { return w / ((s + 1.0) * (s + 1.0) + w * w); },
                       [w](double t) { return std::exp(-t) * std::sin(w * t); }});
    out.push_back({[](cplx s) { return 1.0 / s; }, [](double) { return 1.0; }});
    out.push_back({[](cplx s) { return 1.0 / (s * s); }, [](double t) { return t; }});
    out.push_back({[](cplx s) { return 1.0 / ((s + 1.0) * (s + 2.0)); },
                   [](double t) { return std::exp(-t) - std::exp(-2 * t); }});
    out.push_back({[](cplx s) { return s / ((s + 1.0) * (s + 1.0)); }, [](double t) { return (1 - t) * std::exp(-t); }});
    out.push_back({[](cplx s) { return 1.0 / (s * (s + 0.5)); }, [](double t) { return 2.0 * (1 - std::exp(-0.5 * t)); }});
    out.push_back({[](cplx s) { return (s + 2.0) / ((s + 1.0) * (s + 3.0)); },
                   [](double t) { return 0.5 * (std::exp(-t) + std::exp(-3 * t)); }});
    out.push_back({[](cplx s) { return 1.0 / std::pow(s + 0.5, 3); },
                   [](double t) { return 0.5 * t * t * std::exp(-0.5 * t); }});
    out.push_back({[](cplx s) { return 1.0 / (s * (s + 1.0) * (s + 2.0)); },
                   [](double t) { return 0.5 - std::exp(-t) + 0.5 * std::exp(-2 * t); }});
    return out;
}

}  // namespace

TEST_CASE("weights") {
    const auto V = stehfest_weights(8);
    CHECK(V.size() == 8);
    double sum = 0.0;
    for (double v : V) sum += v;
    CHECK(std::abs(sum) < 1e-9);
    CHECK_THROWS_AS((void)stehfest_weights(7), ArgumentError);
}

TEST_CASE("spot values") {
    CHECK(invert([](cplx s) { return 1.0 / s; }, 5.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(invert([](cplx s) { return 1.0 / (s + 1.0); }, 1.0) - std::exp(-1.0)) < 1e-6);
    CHECK(std::abs(invert_talbot([](cplx s) { return 1.0 / (s + 1.0); }, 1.0, 32) - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("known pairs") {
    InversionConfig talbot;
    talbot.method = InversionMethod::Talbot;
    const auto pairs = known_pairs();
    CHECK(pairs.size() == 20);
    double worst_talbot = 0.0, worst_default = 0.0;
    for (const auto& p : pairs)
        for (double t : {0.1, 0.3, 1.0, 2.5, 5.0, 10.0}) {
            worst_talbot = std::max(worst_talbot, std::abs(invert(p.f, t, talbot) - p.original(t)));
            worst_default = std::max(worst_default, std::abs(invert(p.f, t) - p.original(t)));
        }
    CHECK(worst_talbot <= 1e-7);
    CHECK(worst_default <= 1e-4);
}

TEST_CASE("extended precision round trip") {
    const SpecialModel m(1.0, 0.5, 1.0, 3);
    const double inv = invert_gaver_stehfest_hp(
        [&](const HighPrecision& th) { return g1_star_special<HighPrecision>(m, th, HighPrecision(0.5)); }, 1.0);
    CHECK(inv == doctest::Approx(ev_v_anu_before(m, 0.5, 1.0).real()).epsilon(1e-6));
}

TEST_CASE("survival curves") {
    const Transform lst = [](cplx th) { return 1.0 / (1.0 + th); };
    const auto s = survival_curve(lst, {0.0, 1.0, 2.0, 4.0});
    CHECK(s[0] == 1.0);
    CHECK(s[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1] + 1e-6);
    CHECK(survival_curve(lst, {0.0}, 0.25)[0] == 0.75);
    CHECK_THROWS_AS((void)survival_curve(lst, {-1.0}), ArgumentError);
}

TEST_CASE("failures") {
    CHECK_THROWS_AS((void)invert([](cplx) { return cplx{NAN, 0.0}; }, 1.0), InversionError);
    CHECK_THROWS_AS((void)invert([](cplx s) { return 1.0 / s; }, 0.0), ArgumentError);
    InversionConfig cfg;
    cfg.terms = 20;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    // A transform that rejects the left half plane keeps the Gaver-Stehfest value.
    const Transform picky = [](cplx s) {
        if (s.real() < 0.0) throw ArgumentError("left half plane");
        return 1.0 / (s * std::pow(s + 1.0, 6));
    };
    CHECK(std::isfinite(invert(picky, 3.0)));
}
