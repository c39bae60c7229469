#include "baird/algorithms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace baird {

namespace {

constexpr std::pair<Algorithm, std::string_view> kNames[] = {
    {Algorithm::td0, "td0"},   {Algorithm::tdc, "tdc"},   {Algorithm::gtd, "gtd"},
    {Algorithm::gtd2, "gtd2"}, {Algorithm::tdrc, "tdrc"}, {Algorithm::rg, "rg"},
    {Algorithm::impression_gtd, "impression_gtd"},
};

LearnerState advanced(const LearnerState& st, Vec8 theta, Vec8 w) {
    return LearnerState{std::move(theta), std::move(w), st.t + 1};
}

}  // namespace

std::string_view to_string(Algorithm a) {
    for (const auto& [algo, name] : kNames) {
        if (algo == a) return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (const auto& [algo, n] : kNames) {
        if (n == name) return algo;
    }
    throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> algos = [] {
        std::vector<Algorithm> v;
        for (const auto& entry : kNames) v.push_back(entry.first);
        return v;
    }();
    return algos;
}

double td_error(const Transition& tr, const Vec8& theta, double gamma) {
    return tr.r + gamma * tr.phi_next.dot(theta) - tr.phi.dot(theta);
}

LearnerState td0_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma) {
    const double delta = td_error(tr, st.theta, gamma);
    return advanced(st, st.theta + sz.alpha * tr.rho * delta * tr.phi, st.w);
}

LearnerState tdc_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma) {
    const double delta = td_error(tr, st.theta, gamma);
    const double pred = tr.phi.dot(st.w);
    Vec8 theta = st.theta + sz.alpha * tr.rho * (delta * tr.phi - gamma * pred * tr.phi_next);
    Vec8 w = st.w + sz.beta * tr.rho * (delta - pred) * tr.phi;
    return advanced(st, std::move(theta), std::move(w));
}

LearnerState gtd_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma) {
    const double delta = td_error(tr, st.theta, gamma);
    const double pred = tr.phi.dot(st.w);
    Vec8 theta = st.theta + sz.alpha * tr.rho * pred * (tr.phi - gamma * tr.phi_next);
    Vec8 w = st.w + sz.beta * tr.rho * (delta * tr.phi - st.w);
    return advanced(st, std::move(theta), std::move(w));
}

LearnerState gtd2_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma) {
    const double delta = td_error(tr, st.theta, gamma);
    const double pred = tr.phi.dot(st.w);
    Vec8 theta = st.theta + sz.alpha * tr.rho * pred * (tr.phi - gamma * tr.phi_next);
    Vec8 w = st.w + sz.beta * tr.rho * (delta - pred) * tr.phi;
    return advanced(st, std::move(theta), std::move(w));
}

LearnerState tdrc_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma) {
    const double delta = td_error(tr, st.theta, gamma);
    const double pred = tr.phi.dot(st.w);
    Vec8 theta = st.theta + sz.alpha * tr.rho * (delta * tr.phi - gamma * pred * tr.phi_next);
    // The decay term is not rho-scaled, so w shrinks on every step.
    Vec8 w = st.w + sz.eta * sz.alpha * (tr.rho * (delta - pred) * tr.phi - sz.reg * st.w);
    return advanced(st, std::move(theta), std::move(w));
}

LearnerState rg_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma) {
    const double delta = td_error(tr, st.theta, gamma);
    return advanced(st, st.theta - sz.alpha * tr.rho * delta * (gamma * tr.phi_next - tr.phi), st.w);
}

LearnerState step(Algorithm algo, const LearnerState& st, const Transition& tr, const StepSizes& sz,
                  double gamma) {
    switch (algo) {
        case Algorithm::td0: return td0_step(st, tr, sz, gamma);
        case Algorithm::tdc: return tdc_step(st, tr, sz, gamma);
        case Algorithm::gtd: return gtd_step(st, tr, sz, gamma);
        case Algorithm::gtd2: return gtd2_step(st, tr, sz, gamma);
        case Algorithm::tdrc: return tdrc_step(st, tr, sz, gamma);
        case Algorithm::rg: return rg_step(st, tr, sz, gamma);
        case Algorithm::impression_gtd: break;
    }
    throw std::invalid_argument("impression_gtd needs a replay buffer; use impression_gtd_step");
}

ReplayBuffer::ReplayBuffer(std::optional<std::size_t> capacity) : capacity_(capacity) {
    if (capacity_ && *capacity_ == 0) throw std::domain_error("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& tr) {
    items_.push_back(tr);
    if (capacity_ && items_.size() > *capacity_) items_.pop_front();
}

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, Rng& rng) {
    if (n > size) {
        throw std::domain_error("cannot sample " + std::to_string(n) + " items from " + std::to_string(size));
    }
    std::vector<std::size_t> picked;
    picked.reserve(n);
    std::unordered_set<std::size_t> seen;
    for (std::size_t j = size - n; j < size; ++j) {
        const std::size_t t = uniform_index(rng, j + 1);
        const std::size_t chosen = seen.contains(t) ? j : t;
        seen.insert(chosen);
        picked.push_back(chosen);
    }
    for (std::size_t i = n; i > 1; --i) {
        std::swap(picked[i - 1], picked[uniform_index(rng, i)]);
    }
    return picked;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    std::vector<Transition> out;
    out.reserve(n);
    for (std::size_t i : sample_indices(items_.size(), n, rng)) out.push_back(items_[i]);
    return out;
}

LinearEstimate estimate_linear_system(const std::vector<Transition>& batch, double gamma) {
    LinearEstimate est;
    if (batch.empty()) return est;
    for (const auto& tr : batch) {
        est.A += tr.rho * tr.phi * (gamma * tr.phi_next - tr.phi).transpose();
        est.b += tr.rho * tr.r * tr.phi;
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    est.A *= inv;
    est.b *= inv;
    return est;
}

std::optional<LearnerState> impression_gtd_step(const LearnerState& st, const ReplayBuffer& buffer,
                                                 const StepSizes& sz, std::size_t batch, double gamma,
                                                 Rng& rng) {
    if (batch == 0) throw std::domain_error("batch size must be positive");
    if (buffer.size() < 2 * batch) return std::nullopt;
    std::vector<Transition> both = buffer.sample(2 * batch, rng);
    const std::vector<Transition> first(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(batch));
    const std::vector<Transition> second(both.begin() + static_cast<std::ptrdiff_t>(batch), both.end());
    const LinearEstimate e1 = estimate_linear_system(first, gamma);
    const LinearEstimate e2 = estimate_linear_system(second, gamma);
    const Vec8 grad = e1.A.transpose() * (e2.A * st.theta + e2.b);
    return advanced(st, st.theta - sz.alpha * grad, st.w);
}

}  // namespace baird
