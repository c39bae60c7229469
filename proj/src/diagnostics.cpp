#include "baird/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace baird {

Vec7 state_values(const Vec8& theta) {
    return feature_matrix() * theta;
}

double rmsve(const Vec8& theta) {
    const Vec7 err = state_values(theta) - true_values();
    return std::sqrt(err.squaredNorm() / kNumStates);
}

double mspbe(const Vec8& theta, const ExactModel& model) {
    const Vec8 r = model.A * theta + model.b;
    return std::max(0.0, r.dot(model.C_pinv * r));
}

double neu(const Vec8& theta, const ExactModel& model) {
    return (model.A * theta + model.b).squaredNorm();
}

Vec7 per_state_td_errors(const Vec8& theta, double gamma) {
    const Vec7 v = state_values(theta);
    return Vec7::Constant(gamma * v(kLowerState - 1)) - v;
}

double rmsre(const Vec8& w, const Vec8& theta, double gamma) {
    const Vec7 resid = per_state_td_errors(theta, gamma) - feature_matrix() * w;
    return std::sqrt(resid.squaredNorm() / kNumStates);
}

double ode_loss(const Vec8& w, const Vec8& theta, const ExactModel& model) {
    return (model.C * w - (model.A * theta + model.b)).norm();
}

ContractionRate contraction_rate(double alpha, double gamma, const Vec8& phi7, double rho) {
    const double g = 1.0 - gamma;
    const double rate = 1.0 - alpha * rho * g * g * phi7.squaredNorm();
    return {rate, rate > 0.0};
}

MetricsRecord snapshot(const Vec8& theta, const Vec8& w, std::size_t step, const ExactModel& model) {
    MetricsRecord rec;
    rec.step = step;
    rec.theta = theta;
    rec.w = w;
    rec.values = state_values(theta);
    rec.td_target = model.gamma * rec.values(kLowerState - 1);
    rec.td_err = Vec7::Constant(rec.td_target) - rec.values;
    rec.rmsve = rmsve(theta);
    rec.mspbe = mspbe(theta, model);
    rec.neu = neu(theta, model);
    rec.rmsre = rmsre(w, theta, model.gamma);
    rec.ode_loss = ode_loss(w, theta, model);
    return rec;
}

}  // namespace baird
