#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint/stepper/runge_kutta_cash_karp54.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

namespace systolic::numerics {

struct OdeSpec {
    double tol = 1e-10;
    double max_step = 0.05;
    std::size_t max_steps = 1'000'000;

    void validate() const {
        if (!(tol > 0.0) || !(max_step > 0.0) || max_steps == 0)
            throw std::invalid_argument("OdeSpec: tolerance, max_step and max_steps must be positive");
    }
};

template <std::size_t N>
struct FlowResult {
    std::array<double, N> state{};
    double error_estimate = 0.0;  // sum of local error estimates of accepted steps
    std::size_t steps = 0;
    bool ok = true;
    std::string failure;
};

/**
 * Flows `field` (dx/dt = field(x, t)) from `start` for `time` (either sign)
 * with an embedded Cash-Karp 5(4) pair under a standard step-size controller.
 * Fails explicitly on step-count exhaustion, step underflow or non-finite state.
 */
template <std::size_t N, class Field>
FlowResult<N> ode_flow(Field&& field, const std::array<double, N>& start, double time, const OdeSpec& spec = {}) {
    using State = std::array<double, N>;
    spec.validate();
    FlowResult<N> out;
    out.state = start;
    if (time == 0.0) return out;

    boost::numeric::odeint::runge_kutta_cash_karp54<State> stepper;
    const auto sys = [&](const State& x, State& dxdt, double t) { dxdt = field(x, t); };

    const double dir = time > 0.0 ? 1.0 : -1.0;
    const double total = std::abs(time);
    double done = 0.0;
    double h = std::min(spec.max_step, total);
    State x = start;
    while (done < total) {
        if (out.steps >= spec.max_steps) {
            out.ok = false;
            out.failure = "step budget exhausted";
            break;
        }
        const double remaining = total - done;
        const bool last = h >= remaining;
        const double step = last ? remaining : h;
        State trial = x;
        State err{};
        stepper.do_step(sys, trial, dir * done, dir * step, err);
        double ratio = 0.0;
        double err_abs = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            if (!std::isfinite(trial[i])) finite = false;
            const double scale = spec.tol * (1.0 + std::abs(x[i]));
            ratio = std::max(ratio, std::abs(err[i]) / scale);
            err_abs = std::max(err_abs, std::abs(err[i]));
        }
        if (!finite) {
            out.ok = false;
            out.failure = "non-finite state";
            break;
        }
        if (ratio <= 1.0) {
            x = trial;
            done = last ? total : done + step;
            out.error_estimate += err_abs;
            ++out.steps;
            const double grow = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            h = std::min(spec.max_step, step * std::clamp(grow, 0.2, 5.0));
        } else {
            h = step * std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 0.9);
            if (h < 1e-14 * std::max(1.0, total)) {
                out.ok = false;
                out.failure = "step size underflow";
                break;
            }
        }
    }
    out.state = x;
    return out;
}

/**
 * Fixed-step Runge-Kutta-Fehlberg 7(8) flow with `steps` equal steps. The
 * result is a smooth function of the start point, which adaptive step
 * selection does not guarantee.
 */
template <std::size_t N, class Field>
std::array<double, N> ode_flow_fixed(Field&& field, const std::array<double, N>& start, double time,
                                     std::size_t steps) {
    using State = std::array<double, N>;
    if (steps == 0) throw std::invalid_argument("ode_flow_fixed: need at least one step");
    State x = start;
    if (time == 0.0) return x;
    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
    const auto sys = [&](const State& s, State& dsdt, double t) { dsdt = field(s, t); };
    const double h = time / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) stepper.do_step(sys, x, h * static_cast<double>(i), h);
    for (double v : x)
        if (!std::isfinite(v)) throw std::runtime_error("ode_flow_fixed: non-finite state");
    return x;
}

}  // namespace systolic::numerics
