#pragma once

#include "crossing/model.hpp"

namespace crossing {

/// Arguments of the damped convolution ψ(b, c, δ) = ∫_0^δ e^{-θt} φ(b,t) φ(c,δ-t) dt.
struct ConvolutionSpec {
    cplx b_arg{1.0};
    cplx c_arg{1.0};
    cplx theta{0.0};
    double horizon = 0.0;
};

/// φ(z, s) = E[z^{A(s)}] = exp(λ s (g(z) - 1)).
[[nodiscard]] cplx phi(const ProcessModel& model, cplx z, double s);

/// ψ(b, c, δ) in closed form.
[[nodiscard]] cplx psi(const ProcessModel& model, const ConvolutionSpec& spec);

/// γ(z, θ) = L(θ + λ - λ g(z)), or γ₀ with the initial law.
[[nodiscard]] cplx gamma(const ProcessModel& model, Epoch which, cplx z, cplx theta);

/// True when the geometric series Σ γ(z,θ)^j may be summed.
[[nodiscard]] bool gamma_is_contractive(const ProcessModel& model, cplx z, cplx theta);
void require_contractive(const ProcessModel& model, cplx z, cplx theta);

/// Laplace transforms in t of the two-epoch functionals F₁ (t < T) and F₂ (T ≤ t < T+Δ)
/// for independent random times T and Δ.
[[nodiscard]] cplx f1_star(const ProcessModel& model, const TimeLaw& t_law, const TimeLaw& delta_law,
                           const TransformArgs& args);
[[nodiscard]] cplx f2_star(const ProcessModel& model, const TimeLaw& t_law, const TimeLaw& delta_law,
                           const TransformArgs& args);

}  // namespace crossing
