#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "baird/rng.hpp"

namespace baird {

inline constexpr int kNumStates = 7;
inline constexpr int kNumFeatures = 8;
// The lower state; every solid arrow leads here.
inline constexpr int kLowerState = 7;

using Vec8 = Eigen::Matrix<double, kNumFeatures, 1>;
using Mat8 = Eigen::Matrix<double, kNumFeatures, kNumFeatures>;
using Vec7 = Eigen::Matrix<double, kNumStates, 1>;
using Mat7 = Eigen::Matrix<double, kNumStates, kNumStates>;
using FeatureMatrix = Eigen::Matrix<double, kNumStates, kNumFeatures>;

enum class Action : std::uint8_t { solid, dashed };

inline constexpr double kBehaviorSolidProb = 1.0 / 7.0;
inline constexpr double kTargetSolidProb = 1.0;

std::string_view to_string(Action a);

// States are numbered 1..7. Throws std::domain_error on anything else.
void check_state(int s);

// Row s (1-based) of the feature matrix: 2*e_s + e_8 for s <= 6, e_7 + 2*e_8 for s = 7.
Vec8 feature_vector(int s);

// The full 7x8 feature matrix; rank 7.
const FeatureMatrix& feature_matrix();

// pi(a) / b(a): 7 for solid, 0 for dashed.
double importance_ratio(Action a);

// Probability the behavior policy picks `a` (state independent).
double behavior_prob(Action a);

struct Transition {
    int s = 1;
    Action action = Action::solid;
    int s_next = kLowerState;
    double r = 0.0;
    Vec8 phi = Vec8::Zero();
    Vec8 phi_next = Vec8::Zero();
    double rho = 0.0;
};

// Fills every derived field of a transition from (s, action, s_next).
Transition make_transition(int s, Action action, int s_next);

// One behavior-policy step from s. Solid w.p. 1/7 (to state 7), otherwise
// dashed to one of the upper states 1..6 uniformly.
template <class URBG>
Transition sample_transition(int s, URBG& rng) {
    check_state(s);
    const double u = uniform01(rng);
    if (u < kBehaviorSolidProb) {
        return make_transition(s, Action::solid, kLowerState);
    }
    const int next = 1 + static_cast<int>(uniform_index(rng, 6));
    return make_transition(s, Action::dashed, next);
}

// Behavior-policy transition kernel P[s][s'] (0-based indices).
Mat7 behavior_kernel();

// Unique stationary distribution of the behavior chain.
Vec7 stationary_distribution();

// Closed-form expectations under the stationary behavior distribution with
// rho correction, which equal the target-policy expectations.
struct ExactModel {
    double gamma = 0.9;
    Mat8 A = Mat8::Zero();
    Vec8 b = Vec8::Zero();
    Mat8 C = Mat8::Zero();
    Vec7 mu = Vec7::Zero();
    // Moore-Penrose pseudo-inverse of C (relative eigenvalue cutoff 1e-10).
    Mat8 C_pinv = Mat8::Zero();
};

ExactModel exact_model(double gamma);

// True values of the target policy: all zero.
Vec7 true_values();

// Numerical rank with singular values below rel_tol * sigma_max treated as zero.
int numerical_rank(const Mat8& m, double rel_tol = 1e-10);

// Pseudo-inverse of a symmetric positive semidefinite matrix by eigendecomposition.
Mat8 psd_pseudo_inverse(const Mat8& m, double rel_cutoff = 1e-10);

// Runs the behavior chain continuously from a uniformly random start state.
class BairdChain {
public:
    explicit BairdChain(Rng& rng) : rng_(&rng), state_(1 + static_cast<int>(uniform_index(rng, kNumStates))) {}

    int state() const { return state_; }

    Transition step() {
        Transition tr = sample_transition(state_, *rng_);
        state_ = tr.s_next;
        return tr;
    }

private:
    Rng* rng_;
    int state_;
};

}  // namespace baird
