#include "baird/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "baird/algorithms.hpp"
#include "baird/diagnostics.hpp"
#include "baird/env.hpp"

namespace baird {

namespace {

template <class F>
CheckResult check(std::string name, F&& body) {
    CheckResult r;
    r.name = std::move(name);
    try {
        std::ostringstream detail;
        r.passed = body(detail);
        r.detail = detail.str();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    return r;
}

Vec8 random_vec(Rng& rng, double scale) {
    Vec8 v;
    for (int i = 0; i < kNumFeatures; ++i) v(i) = scale * (2.0 * uniform01(rng) - 1.0);
    return v;
}

Transition random_transition(Rng& rng) {
    const int s = 1 + static_cast<int>(uniform_index(rng, kNumStates));
    return sample_transition(s, rng);
}

}  // namespace

std::vector<CheckResult> run_selfcheck(unsigned long long seed) {
    Rng rng(seed);
    const double gamma = 0.9;
    const ExactModel model = exact_model(gamma);
    const StepSizes sizes{0.01, 0.05, 1.0, 1.0};
    std::vector<CheckResult> out;

    out.push_back(check("model ranks and spectrum", [&](std::ostream& d) {
        const int ra = numerical_rank(model.A);
        const int rc = numerical_rank(model.C);
        Eigen::SelfAdjointEigenSolver<Mat8> eig(model.C);
        const double smallest_nonzero = eig.eigenvalues()(1);
        d << "rank(A)=" << ra << " rank(C)=" << rc << " second eigenvalue of C=" << smallest_nonzero;
        return ra == 7 && rc == 7 && model.b.isZero(0.0) && smallest_nonzero > 1e-3;
    }));

    out.push_back(check("stationary distribution", [&](std::ostream& d) {
        const Vec7 mu = stationary_distribution();
        const double resid = (mu.transpose() * behavior_kernel() - mu.transpose()).cwiseAbs().maxCoeff();
        const double dev = (mu - Vec7::Constant(1.0 / 7.0)).cwiseAbs().maxCoeff();
        d << "stationarity residual=" << resid << " max deviation from uniform=" << dev;
        return resid < 1e-12 && dev < 1e-12 && std::abs(mu.sum() - 1.0) < 1e-12;
    }));

    out.push_back(check("zero fixed point", [&](std::ostream& d) {
        ReplayBuffer buf;
        for (int i = 0; i < 40; ++i) buf.push(random_transition(rng));
        for (int i = 0; i < 200; ++i) {
            const Transition tr = random_transition(rng);
            for (Algorithm a : all_algorithms()) {
                const LearnerState zero;
                LearnerState next = a == Algorithm::impression_gtd
                                        ? *impression_gtd_step(zero, buf, sizes, 10, gamma, rng)
                                        : step(a, zero, tr, sizes, gamma);
                if (!next.theta.isZero(0.0) || !next.w.isZero(0.0)) {
                    d << to_string(a) << " moved away from zero";
                    return false;
                }
            }
        }
        return true;
    }));

    out.push_back(check("rho gating on dashed transitions", [&](std::ostream& d) {
        for (int i = 0; i < 200; ++i) {
            const int s = 1 + static_cast<int>(uniform_index(rng, kNumStates));
            const Transition tr = make_transition(s, Action::dashed, 1 + static_cast<int>(uniform_index(rng, 6)));
            const LearnerState st{random_vec(rng, 5.0), random_vec(rng, 5.0), 0};
            for (Algorithm a : all_algorithms()) {
                if (a == Algorithm::impression_gtd) continue;
                const LearnerState next = step(a, st, tr, sizes, gamma);
                if (next.theta != st.theta) {
                    d << to_string(a) << " changed theta on a dashed transition";
                    return false;
                }
            }
            const LearnerState rc = tdrc_step(st, tr, sizes, gamma);
            const Vec8 expect = (1.0 - sizes.eta * sizes.alpha * sizes.reg) * st.w;
            if ((rc.w - expect).cwiseAbs().maxCoeff() > 1e-12) {
                d << "tdrc helper decay mismatch";
                return false;
            }
        }
        return true;
    }));

    out.push_back(check("TDC reduces to RG when the helper is exact", [&](std::ostream& d) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Transition tr = random_transition(rng);
            const Vec8 theta = random_vec(rng, 10.0);
            const double delta = td_error(tr, theta, gamma);
            const LearnerState st{theta, tr.phi * (delta / tr.phi.squaredNorm()), 0};
            const Vec8 a = tdc_step(st, tr, sizes, gamma).theta;
            const Vec8 b = rg_step(st, tr, sizes, gamma).theta;
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        }
        d << "max |tdc - rg| = " << worst;
        return worst < 1e-14;
    }));

    out.push_back(check("A theta lies in range(C)", [&](std::ostream& d) {
        double worst = 0.0;
        const Mat8 proj = Mat8::Identity() - model.C * model.C_pinv;
        for (int i = 0; i < 100; ++i) {
            const Vec8 theta = random_vec(rng, 10.0);
            worst = std::max(worst, (proj * (model.A * theta + model.b)).norm());
        }
        d << "max residual = " << worst;
        return worst < 1e-10;
    }));

    out.push_back(check("contraction rate", [&](std::ostream& d) {
        const ContractionRate cr = contraction_rate(0.005, gamma, feature_vector(7), 1.0);
        d << "rate = " << cr.rate;
        return std::abs(cr.rate - 0.99975) < 1e-12 && cr.contracting;
    }));

    out.push_back(check("Monte-Carlo A and C", [&](std::ostream& d) {
        Rng mc(seed + 1);
        BairdChain chain(mc);
        Mat8 a = Mat8::Zero();
        Mat8 c = Mat8::Zero();
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const Transition tr = chain.step();
            a += tr.rho * tr.phi * (gamma * tr.phi_next - tr.phi).transpose();
            c += tr.phi * tr.phi.transpose();
        }
        a /= n;
        c /= n;
        const double ea = (a - model.A).cwiseAbs().maxCoeff();
        const double ec = (c - model.C).cwiseAbs().maxCoeff();
        d << "max |A_mc - A| = " << ea << ", max |C_mc - C| = " << ec;
        // Worst entry of A has a sampling sd near 0.0125 at this n.
        return ea < 0.07 && ec < 0.07;
    }));

    return out;
}

}  // namespace baird
