#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "baird/env.hpp"

namespace baird {

enum class Algorithm { td0, tdc, gtd, gtd2, tdrc, rg, impression_gtd };

std::string_view to_string(Algorithm a);
// Throws std::invalid_argument on unknown names.
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

struct LearnerState {
    Vec8 theta = Vec8::Zero();  // main iterator
    Vec8 w = Vec8::Zero();      // helper iterator
    std::size_t t = 0;
};

struct StepSizes {
    double alpha = 0.0;
    double beta = 0.0;
    double eta = 1.0;  // helper-to-main step ratio (TDRC)
    double reg = 0.0;  // l2 factor on the helper (TDRC)
};

// r + gamma * phi'^T theta - phi^T theta
double td_error(const Transition& tr, const Vec8& theta, double gamma);

// Every step below reads the pre-update (theta, w) for both iterators and scales
// the whole per-transition update by rho, so dashed transitions are no-ops
// (except TDRC's helper decay).
LearnerState td0_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma);
LearnerState tdc_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma);
LearnerState gtd_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma);
LearnerState gtd2_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma);
LearnerState tdrc_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma);
LearnerState rg_step(const LearnerState& st, const Transition& tr, const StepSizes& sz, double gamma);

// Dispatch for the six per-transition algorithms. impression_gtd is rejected
// with std::invalid_argument since it needs a buffer.
LearnerState step(Algorithm algo, const LearnerState& st, const Transition& tr, const StepSizes& sz,
                  double gamma);

// FIFO store of transitions; evicts the oldest entry past capacity.
class ReplayBuffer {
public:
    // nullopt capacity means unbounded.
    explicit ReplayBuffer(std::optional<std::size_t> capacity = std::nullopt);

    void push(const Transition& tr);
    std::size_t size() const { return items_.size(); }
    std::optional<std::size_t> capacity() const { return capacity_; }
    const Transition& operator[](std::size_t i) const { return items_[i]; }
    const std::deque<Transition>& items() const { return items_; }

    // n distinct entries in uniformly random order. Throws std::domain_error if n > size().
    std::vector<Transition> sample(std::size_t n, Rng& rng) const;

private:
    std::optional<std::size_t> capacity_;
    std::deque<Transition> items_;
};

// n distinct indices from [0, size) in uniformly random order (Floyd's
// algorithm followed by a shuffle).
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, Rng& rng);

// Sample estimates over a set of transitions:
// A_hat = mean rho * phi (gamma phi' - phi)^T, b_hat = mean rho * r * phi.
struct LinearEstimate {
    Mat8 A = Mat8::Zero();
    Vec8 b = Vec8::Zero();
};
LinearEstimate estimate_linear_system(const std::vector<Transition>& batch, double gamma);

// Two disjoint uniform mini-batches B1, B2 of size `batch`;
// theta' = theta - alpha * A1^T (A2 theta + b2). Returns nullopt while the
// buffer holds fewer than 2 * batch transitions.
std::optional<LearnerState> impression_gtd_step(const LearnerState& st, const ReplayBuffer& buffer,
                                                 const StepSizes& sz, std::size_t batch, double gamma,
                                                 Rng& rng);

}  // namespace baird
