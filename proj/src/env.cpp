#include "baird/env.hpp"

#include <string>

namespace baird {

std::string_view to_string(Action a) {
    return a == Action::solid ? "solid" : "dashed";
}

void check_state(int s) {
    if (s < 1 || s > kNumStates) {
        throw std::domain_error("state id out of range [1, 7]: " + std::to_string(s));
    }
}

namespace {

FeatureMatrix build_features() {
    FeatureMatrix phi = FeatureMatrix::Zero();
    for (int s = 0; s < 6; ++s) {
        phi(s, s) = 2.0;
        phi(s, 7) = 1.0;
    }
    phi(6, 6) = 1.0;
    phi(6, 7) = 2.0;
    return phi;
}

}  // namespace

const FeatureMatrix& feature_matrix() {
    static const FeatureMatrix phi = build_features();
    return phi;
}

Vec8 feature_vector(int s) {
    check_state(s);
    return feature_matrix().row(s - 1).transpose();
}

double behavior_prob(Action a) {
    return a == Action::solid ? kBehaviorSolidProb : 1.0 - kBehaviorSolidProb;
}

double importance_ratio(Action a) {
    const double target = a == Action::solid ? kTargetSolidProb : 1.0 - kTargetSolidProb;
    return target / behavior_prob(a);
}

Transition make_transition(int s, Action action, int s_next) {
    check_state(s);
    check_state(s_next);
    if (action == Action::solid && s_next != kLowerState) {
        throw std::domain_error("solid arrow must lead to state 7");
    }
    if (action == Action::dashed && s_next == kLowerState) {
        throw std::domain_error("dashed arrow must lead to an upper state");
    }
    Transition tr;
    tr.s = s;
    tr.action = action;
    tr.s_next = s_next;
    tr.r = 0.0;
    tr.phi = feature_vector(s);
    tr.phi_next = feature_vector(s_next);
    tr.rho = importance_ratio(action);
    return tr;
}

Mat7 behavior_kernel() {
    Mat7 p = Mat7::Zero();
    const double up = (1.0 - kBehaviorSolidProb) / 6.0;
    for (int s = 0; s < kNumStates; ++s) {
        for (int j = 0; j < 6; ++j) p(s, j) = up;
        p(s, 6) = kBehaviorSolidProb;
    }
    return p;
}

Vec7 stationary_distribution() {
    // Stack (P^T - I) mu = 0 with sum(mu) = 1 and solve in the least-squares sense.
    const Mat7 p = behavior_kernel();
    Eigen::Matrix<double, kNumStates + 1, kNumStates> sys;
    sys.topRows<kNumStates>() = p.transpose() - Mat7::Identity();
    sys.row(kNumStates).setOnes();
    Eigen::Matrix<double, kNumStates + 1, 1> rhs = Eigen::Matrix<double, kNumStates + 1, 1>::Zero();
    rhs(kNumStates) = 1.0;
    Vec7 mu = sys.colPivHouseholderQr().solve(rhs);
    return mu / mu.sum();
}

Mat8 psd_pseudo_inverse(const Mat8& m, double rel_cutoff) {
    Eigen::SelfAdjointEigenSolver<Mat8> eig(m);
    const Vec8& lambda = eig.eigenvalues();
    const double cutoff = rel_cutoff * lambda.cwiseAbs().maxCoeff();
    Vec8 inv = Vec8::Zero();
    for (int i = 0; i < kNumFeatures; ++i) {
        if (lambda(i) > cutoff) inv(i) = 1.0 / lambda(i);
    }
    const Mat8& v = eig.eigenvectors();
    return v * inv.asDiagonal() * v.transpose();
}

int numerical_rank(const Mat8& m, double rel_tol) {
    Eigen::JacobiSVD<Mat8> svd(m);
    const Vec8& sv = svd.singularValues();
    const double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (int i = 0; i < kNumFeatures; ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return rank;
}

ExactModel exact_model(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::domain_error("gamma must lie in [0, 1)");
    }
    ExactModel m;
    m.gamma = gamma;
    m.mu = stationary_distribution();
    // Under the target policy the next state is always 7.
    const Vec8 phi7 = feature_vector(kLowerState);
    for (int s = 1; s <= kNumStates; ++s) {
        const Vec8 phi = feature_vector(s);
        const double w = m.mu(s - 1);
        m.A += w * phi * (gamma * phi7 - phi).transpose();
        m.C += w * phi * phi.transpose();
    }
    m.b.setZero();
    m.C_pinv = psd_pseudo_inverse(m.C);
    return m;
}

Vec7 true_values() {
    return Vec7::Zero();
}

}  // namespace baird
