#include "uft/sinkhorn.hpp"

#include <cmath>
#include <string>

#include "uft/parallel.hpp"

namespace uft {

namespace {

void check_inputs(const CostMatrix& C, const MassVector& alpha,
                  const MassVector& beta) {
    if (C.rows() != alpha.size() || C.cols() != beta.size()) {
        throw DimensionMismatch("cost is " + std::to_string(C.rows()) + "x" +
                                std::to_string(C.cols()) + " but masses are " +
                                std::to_string(alpha.size()) + " / " +
                                std::to_string(beta.size()));
    }
    if ((alpha.mass.array() < 0).any() || (beta.mass.array() < 0).any()) {
        throw InvalidSpec("masses must be nonnegative");
    }
    if (!(alpha.total() > 0) || !(beta.total() > 0)) {
        throw InvalidSpec("total mass must be positive");
    }
    if (!C.cost.allFinite() || !alpha.mass.allFinite() ||
        !beta.mass.allFinite()) {
        throw NonFiniteValue("non-finite solver input");
    }
}

// lse over (w - col) for one row/column of the scaled cost; t is scratch
inline double lse_shifted(const Eigen::ArrayXd& w,
                          const Eigen::Ref<const Vector>& col,
                          Eigen::ArrayXd& t) {
    t = w - col.array();
    double m = t.maxCoeff();
    if (!std::isfinite(m)) return m;
    // terms below exp(-708) vanish against the unit max term; clamping keeps
    // Eigen's exp on its fast vectorized path
    double s = (t - m).max(-708.0).exp().sum();
    return m + std::log(s);
}

// Change in the plan-affecting part of the duals across one sweep. The plan
// depends on u_i + v_j only, so the (u+c, v-c) direction is ignored: we
// compare mean-centered u and v plus the combined mean shift.
struct SweepDelta {
    double centered_u = 0.0;
    double centered_v = 0.0;
    double mean_sum = 0.0;
    double raw_u = 0.0;  ///< max |du| including the gauge direction

    double max() const {
        return std::max({centered_u, centered_v, mean_sum});
    }
};

class SweepEngine {
  public:
    SweepEngine(const CostMatrix& C, const MassVector& alpha,
                const MassVector& beta, int threads)
        : threads_(threads),
          log_alpha_(alpha.mass.array().log()),
          log_beta_(beta.mass.array().log()),
          cost_(&C.cost) {}

    void set_eta(double eta) {
        eta_ = eta;
        scaled_ = *cost_ / eta;               // column j contiguous, v-update
        scaled_t_ = scaled_.transpose();      // column i contiguous, u-update
    }

    // one full sweep of exact coordinate maximization at the current eta
    SweepDelta sweep(Vector& u, Vector& v, double coef, Vector& u_scratch,
                     Vector& v_scratch) const {
        double mean_before = u.mean() + v.mean();

        Eigen::ArrayXd wv = log_beta_ + v.array() / eta_;
        parallel_for(u.size(), threads_, [&](Eigen::Index b, Eigen::Index e) {
            Eigen::ArrayXd t(wv.size());
            for (Eigen::Index i = b; i < e; ++i) {
                u_scratch[i] = -coef * lse_shifted(wv, scaled_t_.col(i), t);
            }
        });
        double mu_old = u.mean(), mu_new = u_scratch.mean();
        SweepDelta delta;
        delta.raw_u = (u_scratch - u).cwiseAbs().maxCoeff();
        delta.centered_u = ((u_scratch.array() - mu_new) - (u.array() - mu_old))
                               .abs()
                               .maxCoeff();
        u.swap(u_scratch);

        Eigen::ArrayXd wu = log_alpha_ + u.array() / eta_;
        parallel_for(v.size(), threads_, [&](Eigen::Index b, Eigen::Index e) {
            Eigen::ArrayXd t(wu.size());
            for (Eigen::Index j = b; j < e; ++j) {
                v_scratch[j] = -coef * lse_shifted(wu, scaled_.col(j), t);
            }
        });
        double mv_old = v.mean(), mv_new = v_scratch.mean();
        delta.centered_v = ((v_scratch.array() - mv_new) - (v.array() - mv_old))
                               .abs()
                               .maxCoeff();
        v.swap(v_scratch);

        delta.mean_sum = std::abs(u.mean() + v.mean() - mean_before);
        return delta;
    }

    void half_sweep_u(Vector& u, const Vector& v, double coef,
                      Vector& u_scratch) const {
        Eigen::ArrayXd wv = log_beta_ + v.array() / eta_;
        parallel_for(u.size(), threads_, [&](Eigen::Index b, Eigen::Index e) {
            Eigen::ArrayXd t(wv.size());
            for (Eigen::Index i = b; i < e; ++i) {
                u_scratch[i] = -coef * lse_shifted(wv, scaled_t_.col(i), t);
            }
        });
        u.swap(u_scratch);
    }

  private:
    int threads_;
    double eta_ = 1.0;
    Eigen::ArrayXd log_alpha_;
    Eigen::ArrayXd log_beta_;
    const Matrix* cost_;
    Matrix scaled_;
    Matrix scaled_t_;
};

TransportSolution solve_core(const CostMatrix& C, const MassVector& alpha,
                             const MassVector& beta, const SolverOptions& opts,
                             bool balanced) {
    check_inputs(C, alpha, beta);
    if (!(opts.eta > 0) || !(opts.tau > 0) || opts.max_iters < 1 ||
        !(opts.tol > 0)) {
        throw InvalidSpec("solver options out of range");
    }

    const double eta = opts.eta;
    const double dual_tau = balanced ? kBalancedTau : opts.tau;
    // tightened for balanced so the converged flag implies the 1e-6 marginal
    // bound regardless of eta
    const double tol = balanced ? std::min(opts.tol, 1e-7 * eta) : opts.tol;

    SweepEngine engine(C, alpha, beta, opts.threads);

    TransportSolution sol;
    sol.u = Vector::Zero(C.rows());
    sol.v = Vector::Zero(C.cols());
    Vector u_scratch(C.rows()), v_scratch(C.cols());

    // warm start for the balanced solver: anneal eta downward to skip the
    // slow small-eta transient; each stage runs to a loose stage tolerance
    if (balanced && eta < 1.0) {
        double stage_eta = 1.0;
        while (stage_eta > eta * 1.01 && sol.iters < opts.max_iters) {
            engine.set_eta(stage_eta);
            double stage_tol = 1e-3 * stage_eta;
            for (int s = 0; s < 500 && sol.iters < opts.max_iters; ++s) {
                SweepDelta d = engine.sweep(sol.u, sol.v, stage_eta, u_scratch,
                                            v_scratch);
                ++sol.iters;
                if (d.max() < stage_tol) break;
            }
            stage_eta /= 2.0;
        }
    }

    engine.set_eta(eta);
    const double coef = balanced ? eta : opts.tau * eta / (opts.tau + eta);
    // balanced fallback: when small-eta dual changes crawl along a direction
    // that barely moves the marginals, declare convergence once the implied
    // marginal violation sits safely below the 1e-6 * total mass guarantee
    const double phi_tol =
        balanced ? 7e-7 * alpha.total() / beta.mass.maxCoeff() : 0.0;
    while (sol.iters < opts.max_iters) {
        SweepDelta d = engine.sweep(sol.u, sol.v, coef, u_scratch, v_scratch);
        ++sol.iters;
        if (!sol.u.allFinite() || !sol.v.allFinite()) {
            throw NonFiniteDual(
                "dual potentials left the finite range (eta too small for the "
                "cost scale?)");
        }
        if (opts.track_duals) {
            sol.dual_history.push_back(
                dual_objective(sol.u, sol.v, C, alpha, beta, eta, dual_tau));
        }
        if (d.max() < tol ||
            (balanced && std::expm1(d.raw_u / eta) < phi_tol)) {
            sol.converged = true;
            break;
        }
    }

    if (balanced) {
        // one more u half-update makes the row marginals exact
        engine.half_sweep_u(sol.u, sol.v, coef, u_scratch);
        // gauge: center u at mean zero, shift v oppositely (plan unchanged)
        double c = sol.u.mean();
        sol.u.array() -= c;
        sol.v.array() += c;
    }

    sol.plan = plan_from_duals(sol.u, sol.v, C, alpha, beta, eta);
    sol.dual = dual_objective(sol.u, sol.v, C, alpha, beta, eta, dual_tau);
    sol.primal = primal_objective(sol.plan, C, alpha, beta, eta, dual_tau);
    return sol;
}

}  // namespace

TransportSolution solve_balanced(const CostMatrix& C, const MassVector& alpha,
                                 const MassVector& beta,
                                 const SolverOptions& opts) {
    check_inputs(C, alpha, beta);
    double at = alpha.total(), bt = beta.total();
    if (std::abs(at - bt) > 1e-9 * std::max(at, bt)) {
        throw UnbalancedInput("mass totals differ: " + std::to_string(at) +
                              " vs " + std::to_string(bt));
    }
    return solve_core(C, alpha, beta, opts, /*balanced=*/true);
}

TransportSolution solve_unbalanced(const CostMatrix& C, const MassVector& alpha,
                                   const MassVector& beta,
                                   const SolverOptions& opts) {
    return solve_core(C, alpha, beta, opts, /*balanced=*/false);
}

Matrix plan_from_duals(const Vector& u, const Vector& v, const CostMatrix& C,
                       const MassVector& alpha, const MassVector& beta,
                       double eta) {
    if (u.size() != C.rows() || v.size() != C.cols() ||
        alpha.size() != C.rows() || beta.size() != C.cols()) {
        throw DimensionMismatch("plan_from_duals: inconsistent shapes");
    }
    Eigen::ArrayXd lu = alpha.mass.array().log() + u.array() / eta;
    Eigen::ArrayXd lv = beta.mass.array().log() + v.array() / eta;
    Matrix T(C.rows(), C.cols());
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
        T.col(j) = (lu + lv[j] - C.cost.col(j).array() / eta).exp();
    }
    return T;
}

double dual_objective(const Vector& u, const Vector& v, const CostMatrix& C,
                      const MassVector& alpha, const MassVector& beta,
                      double eta, double tau) {
    Eigen::ArrayXd lu = alpha.mass.array().log() + u.array() / eta;
    Eigen::ArrayXd lv = beta.mass.array().log() + v.array() / eta;
    // log sum_ij alpha_i beta_j exp((u_i + v_j - C_ij)/eta), fully log-domain
    Vector row_lse(C.rows());
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        Eigen::ArrayXd t = lu[i] + lv - C.cost.row(i).transpose().array() / eta;
        double m = t.maxCoeff();
        row_lse[i] = std::isfinite(m) ? m + std::log((t - m).exp().sum()) : m;
    }
    double m = row_lse.maxCoeff();
    double log_s =
        std::isfinite(m)
            ? m + std::log((row_lse.array() - m).exp().sum())
            : m;
    double s = std::exp(log_s);

    double obj;
    if (std::isinf(tau)) {
        obj = u.dot(alpha.mass) + v.dot(beta.mass) - eta * s;
    } else {
        double fstar = tau * (((-u.array()) / tau).exp() * alpha.mass.array())
                                 .sum() -
                       alpha.total();
        double gstar = tau * (((-v.array()) / tau).exp() * beta.mass.array())
                                 .sum() -
                       beta.total();
        obj = -fstar - gstar - eta * s;
    }
    if (!std::isfinite(obj)) {
        throw NonFiniteValue("dual objective is not finite");
    }
    return obj;
}

double kl_divergence(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("kl_divergence: length mismatch");
    }
    double kl = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > 0) kl += a[i] * std::log(a[i] / b[i]) - a[i] + b[i];
        else kl += b[i];  // 0 log 0 = 0
    }
    return kl;
}

double primal_objective(const Matrix& T, const CostMatrix& C,
                        const MassVector& alpha, const MassVector& beta,
                        double eta, double tau) {
    if (T.rows() != C.rows() || T.cols() != C.cols()) {
        throw DimensionMismatch("primal_objective: plan/cost shape mismatch");
    }
    if ((T.array() < 0).any()) {
        throw NegativePlanEntry("plan has a negative entry");
    }
    double transport = (C.cost.array() * T.array()).sum();
    double neg_entropy =
        (T.array() > 0).select(T.array() * T.array().log(), 0.0).sum();
    double obj = transport + eta * neg_entropy;
    if (!std::isinf(tau)) {
        Vector r = T.rowwise().sum();
        Vector c = T.colwise().sum();
        obj += tau * (kl_divergence(r, alpha.mass) + kl_divergence(c, beta.mass));
    }
    return obj;
}

}  // namespace uft
