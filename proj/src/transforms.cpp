#include "crossing/transforms.hpp"

#include <cmath>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"

namespace crossing {

namespace {

constexpr double kContractionMargin = 1e-12;

void require_time(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ArgumentError("time argument must be finite and nonnegative");
}

}  // namespace

cplx phi(const ProcessModel& model, cplx z, double s) {
    require_time(s);
    const cplx g = model.marks().pgf(z);
    return std::exp(model.lambda() * s * (g - 1.0));
}

cplx psi(const ProcessModel& model, const ConvolutionSpec& spec) {
    require_time(spec.horizon);
    if (spec.theta.real() < -kDomainSlack) throw ArgumentError("psi: theta has negative real part");
    const double lam = model.lambda();
    const double d = spec.horizon;
    const cplx gb = model.marks().pgf(spec.b_arg);
    const cplx gc = model.marks().pgf(spec.c_arg);
    // φ(c,δ) ∫_0^δ e^{-Dt} dt with D = θ + λg(c) - λg(b)
    const cplx D = spec.theta + lam * gc - lam * gb;
    return std::exp(-lam * (1.0 - gc) * d) * d * exprel(-D * d);
}

cplx gamma(const ProcessModel& model, Epoch which, cplx z, cplx theta) {
    if (theta.real() < -kDomainSlack) throw ArgumentError("gamma: theta has negative real part");
    const cplx g = model.marks().pgf(z);
    const TimeLaw& law = model.observations().law(which);
    if (law.kind() == TimeLaw::Kind::Zero) return 1.0;
    return law.lst_unchecked(theta + model.lambda() - model.lambda() * g);
}

bool gamma_is_contractive(const ProcessModel&, cplx z, cplx theta) {
    return std::abs(z) < 1.0 - kContractionMargin || theta.real() > kContractionMargin;
}

void require_contractive(const ProcessModel& model, cplx z, cplx theta) {
    if (!gamma_is_contractive(model, z, theta))
        throw DivergentSeriesError("geometric series over gamma diverges: |z| = 1 and Re theta = 0");
}

cplx f1_star(const ProcessModel& model, const TimeLaw& t_law, const TimeLaw& delta_law, const TransformArgs& args) {
    args.validate();
    const cplx uv = args.u * args.v;
    const cplx e1 = model.exponent(uv, args.w);
    const cplx e2 = model.exponent(uv * args.y, args.theta + args.w);
    return t_law.slope(e1, e2) * delta_law.lst_unchecked(model.exponent(args.v, args.x));
}

cplx f2_star(const ProcessModel& model, const TimeLaw& t_law, const TimeLaw& delta_law, const TransformArgs& args) {
    args.validate();
    const cplx uvy = args.u * args.v * args.y;
    const cplx e1 = model.exponent(args.v, args.x);
    const cplx e2 = model.exponent(args.v * args.y, args.theta + args.x);
    return t_law.lst_unchecked(model.exponent(uvy, args.theta + args.w)) * delta_law.slope(e1, e2);
}

}  // namespace crossing
