#pragma once

#include <cstddef>

#include "baird/env.hpp"

namespace baird {

// Root mean squared value error, states weighted uniformly. Since the behavior
// stationary distribution is uniform this is also the mu-weighted error.
double rmsve(const Vec8& theta);

// (A theta + b)^T C^+ (A theta + b) with C^+ the pseudo-inverse held by the model.
double mspbe(const Vec8& theta, const ExactModel& model);

// Norm of the expected update, squared: ||A theta + b||^2.
double neu(const Vec8& theta, const ExactModel& model);

// Expected TD error of each state under the target policy:
// delta(s) = gamma * phi(7)^T theta - phi(s)^T theta.
Vec7 per_state_td_errors(const Vec8& theta, double gamma);

// Values phi(s)^T theta of the seven states.
Vec7 state_values(const Vec8& theta);

// How well the helper predicts the per-state TD errors:
// sqrt(mean_s (delta(theta, s) - phi(s)^T w)^2).
double rmsre(const Vec8& w, const Vec8& theta, double gamma);

// ||C w - (A theta + b)||, distance of w from the helper's fixed-point equation.
double ode_loss(const Vec8& w, const Vec8& theta, const ExactModel& model);

struct ContractionRate {
    double rate = 1.0;
    // False when the rate is <= 0, i.e. the step is too large for the
    // update along phi7 to be a contraction.
    bool contracting = true;
};

// Factor by which repeated RG updates on the state-7 solid transition shrink
// the phi7 component of theta: 1 - alpha * rho * (1 - gamma)^2 * ||phi7||^2.
ContractionRate contraction_rate(double alpha, double gamma, const Vec8& phi7, double rho = 1.0);

struct MetricsRecord {
    std::size_t step = 0;
    double rmsve = 0.0;
    double mspbe = 0.0;
    double neu = 0.0;
    double rmsre = 0.0;
    double ode_loss = 0.0;
    Vec7 td_err = Vec7::Zero();
    Vec7 values = Vec7::Zero();
    double td_target = 0.0;  // gamma * v(7), shared by every state
    Vec8 theta = Vec8::Zero();
    Vec8 w = Vec8::Zero();
};

MetricsRecord snapshot(const Vec8& theta, const Vec8& w, std::size_t step, const ExactModel& model);

}  // namespace baird
