#include <doctest.h>

#include <cmath>

#include "baird/algorithms.hpp"
#include "baird/diagnostics.hpp"

using namespace baird;

namespace {

constexpr double kGamma = 0.9;

Vec8 theta0() {
    Vec8 t = Vec8::Ones();
    t(6) = 10.0;
    return t;
}

Vec8 random_vec(Rng& rng, double scale) {
    Vec8 v;
    for (int i = 0; i < 8; ++i) v(i) = scale * (2.0 * uniform01(rng) - 1.0);
    return v;
}

// Null vector shared by A and C: Phi z = 0.
Vec8 shared_null_vector() {
    Eigen::FullPivLU<FeatureMatrix> lu(feature_matrix());
    Vec8 z = lu.kernel().col(0);
    return z / z.norm();
}

// Independent MSPBE oracle: solve C x = A theta restricted to range(C) = span of
// the feature rows, x = Phi^T y, by least squares on the 8x7 system.
double mspbe_oracle(const Vec8& theta, const ExactModel& m) {
    const Vec8 r = m.A * theta + m.b;
    const Eigen::Matrix<double, 8, 7> basis = feature_matrix().transpose();
    const Eigen::Matrix<double, 8, 7> sys = m.C * basis;
    const Eigen::Matrix<double, 7, 1> y = sys.colPivHouseholderQr().solve(r);
    return r.dot(basis * y);
}

}  // namespace

TEST_CASE("rmsve") {
    CHECK(rmsve(Vec8::Zero()) == 0.0);
    CHECK(rmsve(theta0()) == doctest::Approx(std::sqrt(198.0 / 7.0)).epsilon(1e-14));
    CHECK(rmsve(theta0()) == doctest::Approx(5.3183).epsilon(1e-4));
    Vec8 e8 = Vec8::Zero();
    e8(7) = 1.0;
    CHECK(rmsve(e8) == doctest::Approx(std::sqrt(10.0 / 7.0)).epsilon(1e-14));
}

TEST_CASE("mspbe") {
    const ExactModel m = exact_model(kGamma);
    CHECK(mspbe(Vec8::Zero(), m) == 0.0);

    Vec8 e7 = Vec8::Zero();
    e7(6) = 1.0;
    CHECK(std::abs(mspbe(e7, m) - mspbe_oracle(e7, m)) < 1e-10);

    Rng rng(1);
    const Vec8 z = shared_null_vector();
    CHECK((m.C * z).norm() < 1e-12);
    CHECK((m.A * z).norm() < 1e-12);
    for (int i = 0; i < 50; ++i) {
        const Vec8 theta = random_vec(rng, 10.0);
        const double v = mspbe(theta, m);
        CHECK(v >= 0.0);
        CHECK(std::abs(v - mspbe_oracle(theta, m)) < 1e-10 * std::max(1.0, v));
        CHECK(std::abs(mspbe(theta + 3.0 * z, m) - v) < 1e-10 * std::max(1.0, v));
    }
}

TEST_CASE("property: mspbe vanishes exactly when neu does") {
    const ExactModel m = exact_model(kGamma);
    Rng rng(2);
    const Vec8 z = shared_null_vector();
    for (int i = 0; i < 100; ++i) {
        // Half the samples are pure null-space directions (A theta = 0).
        const Vec8 theta = i % 2 == 0 ? random_vec(rng, 10.0) : (2.0 * uniform01(rng) - 1.0) * 10.0 * z;
        const bool neu_zero = std::sqrt(neu(theta, m)) < 1e-8;
        const bool mspbe_zero = mspbe(theta, m) < 1e-14;
        CHECK(neu_zero == mspbe_zero);
    }
}

TEST_CASE("neu") {
    const ExactModel m = exact_model(kGamma);
    CHECK(neu(Vec8::Zero(), m) == 0.0);
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec8 theta = random_vec(rng, 5.0);
        CHECK(neu(theta, m) >= 0.0);
        CHECK(neu(2.5 * theta, m) == doctest::Approx(6.25 * neu(theta, m)).epsilon(1e-12));
        const Vec8 analytic = 2.0 * m.A.transpose() * (m.A * theta + m.b);
        Vec8 fd;
        const double h = 1e-6;
        for (int i = 0; i < 8; ++i) {
            Vec8 e = Vec8::Zero();
            e(i) = h;
            fd(i) = (neu(theta + e, m) - neu(theta - e, m)) / (2 * h);
        }
        CHECK((fd - analytic).norm() / analytic.norm() < 1e-6);
    }
}

TEST_CASE("per-state TD errors") {
    CHECK(per_state_td_errors(Vec8::Zero(), kGamma).isZero(0.0));
    const Vec7 d = per_state_td_errors(theta0(), kGamma);
    for (int s = 0; s < 6; ++s) CHECK(d(s) == doctest::Approx(7.8).epsilon(1e-14));
    CHECK(d(6) == doctest::Approx(-1.2).epsilon(1e-14));

    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const Vec8 theta = random_vec(rng, 5.0);
        const Vec7 v = state_values(theta);
        const Vec7 td = per_state_td_errors(theta, kGamma);
        for (int s = 0; s < 6; ++s) CHECK(std::abs(td(s) - (kGamma * v(6) - v(s))) < 1e-13);
    }
}

TEST_CASE("rmsre") {
    CHECK(rmsre(Vec8::Zero(), Vec8::Zero(), kGamma) == 0.0);
    CHECK(rmsre(Vec8::Zero(), theta0(), kGamma) ==
          doctest::Approx(std::sqrt((6 * 7.8 * 7.8 + 1.2 * 1.2) / 7.0)).epsilon(1e-14));
    CHECK(rmsre(Vec8::Zero(), theta0(), kGamma) == doctest::Approx(7.2356).epsilon(1e-4));

    // Least-squares fit of delta onto the features is exact (rank 7, 7 targets).
    const Vec7 targets = per_state_td_errors(theta0(), kGamma);
    const Vec8 w = feature_matrix().completeOrthogonalDecomposition().solve(targets);
    CHECK((feature_matrix() * w - targets).norm() < 1e-10);
    CHECK(rmsre(w, theta0(), kGamma) < 1e-10);
}

TEST_CASE("ode loss") {
    const ExactModel m = exact_model(kGamma);
    CHECK(ode_loss(Vec8::Zero(), Vec8::Zero(), m) == 0.0);
    CHECK(ode_loss(Vec8::Zero(), theta0(), m) == doctest::Approx(std::sqrt(neu(theta0(), m))).epsilon(1e-14));

    Rng rng(5);
    const Vec8 z = shared_null_vector();
    for (int i = 0; i < 50; ++i) {
        const Vec8 theta = random_vec(rng, 10.0);
        const Vec8 w = m.C_pinv * (m.A * theta + m.b);
        CHECK(ode_loss(w, theta, m) < 1e-10);
        // Relay break: helper loss is zero while NEU is not.
        if (neu(theta, m) > 1.0) CHECK(ode_loss(w, theta, m) < 1e-10);
        const Vec8 w2 = random_vec(rng, 3.0);
        CHECK(std::abs(ode_loss(w2 + z, theta, m) - ode_loss(w2, theta, m)) < 1e-12);
    }
}

TEST_CASE("contraction rate") {
    const Vec8 phi7 = feature_vector(7);
    const ContractionRate r = contraction_rate(0.005, kGamma, phi7, 1.0);
    CHECK(std::abs(r.rate - 0.99975) < 1e-12);
    CHECK(r.contracting);
    CHECK(contraction_rate(0.0, kGamma, phi7).rate == 1.0);
    CHECK_FALSE(contraction_rate(100.0, kGamma, phi7, 7.0).contracting);

    // Closed form against simulated RG updates on the state-7 solid transition.
    for (double rho : {1.0, 7.0}) {
        Transition tr = make_transition(7, Action::solid, 7);
        tr.rho = rho;
        const double alpha = 0.005;
        const double rate = contraction_rate(alpha, kGamma, phi7, rho).rate;
        const Vec8 unit = phi7 / phi7.norm();
        LearnerState st{theta0(), Vec8::Zero(), 0};
        const double c0 = unit.dot(st.theta);
        const Vec8 orth0 = st.theta - c0 * unit;
        double worst = 0.0;
        for (int t = 1; t <= 2000; ++t) {
            st = rg_step(st, tr, StepSizes{alpha, 0, 1, 0}, kGamma);
            worst = std::max(worst, std::abs(unit.dot(st.theta) - std::pow(rate, t) * c0));
        }
        CHECK(worst < 1e-9);
        CHECK(((st.theta - unit.dot(st.theta) * unit) - orth0).norm() < 1e-9);
    }
}

TEST_CASE("snapshot") {
    const ExactModel m = exact_model(kGamma);
    const MetricsRecord zero = snapshot(Vec8::Zero(), Vec8::Zero(), 42, m);
    CHECK(zero.step == 42);
    CHECK(zero.rmsve == 0.0);
    CHECK(zero.mspbe == 0.0);
    CHECK(zero.neu == 0.0);
    CHECK(zero.rmsre == 0.0);
    CHECK(zero.ode_loss == 0.0);
    CHECK(zero.td_err.isZero(0.0));

    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        const Vec8 theta = random_vec(rng, 5.0);
        const Vec8 w = random_vec(rng, 5.0);
        const MetricsRecord rec = snapshot(theta, w, 0, m);
        for (int s = 0; s < 7; ++s) CHECK(rec.td_err(s) == rec.td_target - rec.values(s));
        CHECK(rec.rmsre == rmsre(w, theta, kGamma));
        CHECK(rec.rmsve == rmsve(theta));
        CHECK(rec.mspbe == mspbe(theta, m));
        CHECK(rec.ode_loss == ode_loss(w, theta, m));
        CHECK(rec.rmsve == doctest::Approx(std::sqrt(rec.values.squaredNorm() / 7.0)).epsilon(1e-14));
        const MetricsRecord again = snapshot(theta, w, 0, m);
        CHECK(again.neu == rec.neu);
    }
}
