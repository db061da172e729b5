#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uft/io.hpp"
#include "uft/losses.hpp"
#include "uft/measures.hpp"
#include "uft/oracle.hpp"
#include "uft/seace.hpp"
#include "uft/sinkhorn.hpp"
#include "uft/synth.hpp"
#include "uft/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitVerifyFailed = 3;

uft::Matrix load_features(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        return uft::read_csv_features(path).data;
    }
    return uft::read_matrix(path);
}

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream out;
    for (size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    return out.str();
}

std::vector<int> split_ints(const std::string& s) {
    std::istringstream in(s);
    std::vector<int> v;
    int x;
    while (in >> x) v.push_back(x);
    return v;
}

void add_solver_flags(CLI::App* cmd, uft::SolverOptions& opts) {
    cmd->add_option("--eta", opts.eta, "entropic coefficient");
    cmd->add_option("--tau", opts.tau, "marginal-relaxation coefficient");
    cmd->add_option("--max-iters", opts.max_iters, "iteration cap");
    cmd->add_option("--tol", opts.tol, "dual-change stopping threshold");
    cmd->add_option("--threads", opts.threads, "row-reduction threads");
}

void write_solution(const std::string& out_path,
                    const uft::TransportSolution& sol) {
    uft::write_matrix(out_path, sol.plan);
    uft::Vector row = sol.plan.rowwise().sum();
    uft::Vector col = sol.plan.colwise().sum();
    uft::write_sidecar(
        out_path + ".meta",
        {{"iters", std::to_string(sol.iters)},
         {"converged", sol.converged ? "true" : "false"},
         {"primal", uft::format_double(sol.primal)},
         {"dual", uft::format_double(sol.dual)},
         {"total_mass", uft::format_double(sol.plan.sum())},
         {"row_marginal_sum", uft::format_double(row.sum())},
         {"col_marginal_sum", uft::format_double(col.sum())}});
}

std::string report_block(const std::string& name,
                         const uft::MatchingReport& r) {
    std::ostringstream out;
    out << name << ".many_to_one_rate: " << uft::format_double(r.many_to_one_rate)
        << "\n"
        << name << ".outlier_leakage: " << uft::format_double(r.outlier_leakage)
        << "\n"
        << name << ".accuracy: " << uft::format_double(r.accuracy) << "\n";
    return out.str();
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("UFT_SEED");
    if (!raw || !*raw) return std::nullopt;
    return std::strtoull(raw, nullptr, 10);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unbalanced feature transport toolkit"};
    app.set_config("--config", "", "key=value configuration file");
    app.require_subcommand(1);

    // ---- gen ----
    uft::SynthSpec spec;
    std::string gen_out = "synth";
    auto* gen = app.add_subcommand("gen", "generate a synthetic feature pair");
    gen->add_option("--n", spec.n, "points per side");
    gen->add_option("--d", spec.d, "feature dimension");
    gen->add_option("--k", spec.k, "cluster count");
    gen->add_option("--outlier-frac", spec.outlier_frac, "outlier fraction");
    gen->add_option("--spread", spec.spread, "within-cluster spread");
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("-o,--output", gen_out, "output path prefix");

    // ---- solve / solve-balanced ----
    struct SolveArgs {
        std::string cost, alpha, beta, out = "plan.uft";
        uft::SolverOptions opts;
    } solve_args, bal_args;
    auto add_solve_common = [](CLI::App* cmd, SolveArgs& a) {
        cmd->add_option("--cost", a.cost, "cost tensor file")->required();
        cmd->add_option("--alpha", a.alpha, "source mass tensor (default: ones)");
        cmd->add_option("--beta", a.beta, "target mass tensor (default: ones)");
        cmd->add_option("-o,--output", a.out, "plan output file");
        add_solver_flags(cmd, a.opts);
    };
    auto* solve = app.add_subcommand("solve", "unbalanced entropic OT solve");
    add_solve_common(solve, solve_args);
    auto* solveb =
        app.add_subcommand("solve-balanced", "balanced entropic OT solve");
    add_solve_common(solveb, bal_args);

    // ---- align ----
    struct AlignArgs {
        std::string x, z, pyramid, out = "aligned";
        uft::SolverOptions opts;
    } align_args;
    auto* align = app.add_subcommand(
        "align", "mass estimation, UOT solve, and multi-stage warping");
    align->add_option("--x", align_args.x, "conditional features (.uft or .csv)")
        ->required();
    align->add_option("--z", align_args.z, "exemplar features (.uft or .csv)")
        ->required();
    align->add_option("--pyramid", align_args.pyramid,
                      "exemplar pyramid manifest (default: single level)");
    align->add_option("-o,--output", align_args.out, "output path prefix");
    add_solver_flags(align, align_args.opts);

    // ---- compare ----
    struct CompareArgs {
        bool use_gen = false;
        uft::SynthSpec spec;
        std::string x, z, labels, out = "compare_report.txt";
        uft::SolverOptions opts;
    } cmp_args;
    cmp_args.spec.n = 60;
    cmp_args.spec.k = 3;
    cmp_args.spec.outlier_frac = 0.1;
    auto* compare = app.add_subcommand(
        "compare", "cosine vs balanced OT vs UOT matching reports");
    compare->add_flag("--gen", cmp_args.use_gen,
                      "generate the labeled pair in-line");
    compare->add_option("--n", cmp_args.spec.n, "points per side (with --gen)");
    compare->add_option("--d", cmp_args.spec.d, "feature dimension (with --gen)");
    compare->add_option("--k", cmp_args.spec.k, "cluster count (with --gen)");
    compare->add_option("--outlier-frac", cmp_args.spec.outlier_frac,
                        "outlier fraction (with --gen)");
    compare->add_option("--spread", cmp_args.spec.spread,
                        "within-cluster spread (with --gen)");
    compare->add_option("--seed", cmp_args.spec.seed, "generator seed");
    compare->add_option("--x", cmp_args.x, "conditional features file");
    compare->add_option("--z", cmp_args.z, "exemplar features file");
    compare->add_option("--labels", cmp_args.labels, "labels sidecar file");
    compare->add_option("-o,--output", cmp_args.out, "report output file");
    add_solver_flags(compare, cmp_args.opts);

    // ---- seace ----
    struct SeaceArgs {
        std::string x, x_act, gamma_z, mu_z, l_act;
        std::string affine1_w, affine1_b, affine2_w, affine2_b;
        bool raw_attention = false;
        std::string out = "seace_out.uft";
    } seace_args;
    auto* seace = app.add_subcommand(
        "seace", "semantic-activation denormalization of an activation map");
    seace->add_option("--x", seace_args.x, "conditional features")->required();
    seace->add_option("--x-act", seace_args.x_act, "conditional activation")
        ->required();
    seace->add_option("--gamma-z", seace_args.gamma_z, "exemplar gamma map")
        ->required();
    seace->add_option("--mu-z", seace_args.mu_z, "exemplar mu map")->required();
    seace->add_option("--l-act", seace_args.l_act, "translation activation")
        ->required();
    seace->add_option("--affine1-w", seace_args.affine1_w, "gamma head weight");
    seace->add_option("--affine1-b", seace_args.affine1_b, "gamma head bias");
    seace->add_option("--affine2-w", seace_args.affine2_w, "mu head weight");
    seace->add_option("--affine2-b", seace_args.affine2_b, "mu head bias");
    seace->add_flag("--raw-attention", seace_args.raw_attention,
                    "skip the softmax on the semantic-activation matrix");
    seace->add_option("-o,--output", seace_args.out, "output tensor file");

    // ---- verify ----
    uft::VerifyOptions verify_opts;
    auto* verify =
        app.add_subcommand("verify", "run the seeded oracle cross-check suite");
    verify->add_option("--n", verify_opts.n, "assignment instance size");
    verify->add_option("--trials", verify_opts.trials, "assignment trials");
    verify->add_option("--seed", verify_opts.seed, "suite seed");
    verify->add_option("--threads", verify_opts.threads, "solver threads");
    verify
        ->add_flag("--inject-fault", verify_opts.inject_fault,
                   "corrupt the solver output (negative control)")
        ->group("");  // hidden test hook

    CLI11_PARSE(app, argc, argv);

    try {
        if (auto s = env_seed()) {
            spec.seed = *s;
            cmp_args.spec.seed = *s;
            verify_opts.seed = *s;
        }

        if (gen->parsed()) {
            uft::ClusteredPair pair = uft::gen_clustered_pair(spec);
            uft::write_matrix(gen_out + "_X.uft", pair.X.data);
            uft::write_matrix(gen_out + "_Z.uft", pair.Z.data);
            std::vector<int> mask(pair.outlier_mask_z.begin(),
                                  pair.outlier_mask_z.end());
            uft::write_sidecar(gen_out + "_labels.txt",
                               {{"labels_x", join_ints(pair.labels_x)},
                                {"labels_z", join_ints(pair.labels_z)},
                                {"outlier_mask_z", join_ints(mask)}});
            std::cout << "wrote " << gen_out << "_X.uft, " << gen_out
                      << "_Z.uft, " << gen_out << "_labels.txt\n";
            return kExitOk;
        }

        if (solve->parsed() || solveb->parsed()) {
            SolveArgs& a = solve->parsed() ? solve_args : bal_args;
            uft::CostMatrix C{uft::read_matrix(a.cost)};
            uft::MassVector alpha{a.alpha.empty()
                                      ? uft::Vector::Ones(C.rows()).eval()
                                      : uft::read_vector(a.alpha)};
            uft::MassVector beta{a.beta.empty()
                                     ? uft::Vector::Ones(C.cols()).eval()
                                     : uft::read_vector(a.beta)};
            uft::TransportSolution sol =
                solve->parsed() ? uft::solve_unbalanced(C, alpha, beta, a.opts)
                                : uft::solve_balanced(C, alpha, beta, a.opts);
            write_solution(a.out, sol);
            std::cout << "plan written to " << a.out << " (iters " << sol.iters
                      << ", converged " << (sol.converged ? "true" : "false")
                      << ", primal " << uft::format_double(sol.primal) << ")\n";
            return sol.converged ? kExitOk : kExitNotConverged;
        }

        if (align->parsed()) {
            uft::FeatureSet X{load_features(align_args.x)};
            uft::FeatureSet Z{load_features(align_args.z)};
            auto [alpha, beta] = uft::compute_masses(X, Z);
            uft::CostMatrix C = uft::cosine_cost_matrix(X, Z);
            uft::TransportSolution sol =
                uft::solve_unbalanced(C, alpha, beta, align_args.opts);

            uft::FeaturePyramid pyramid;
            if (!align_args.pyramid.empty()) {
                pyramid = uft::read_pyramid(align_args.pyramid);
            } else {
                pyramid.base_h = int(Z.n());
                pyramid.base_w = 1;
                pyramid.levels.push_back(
                    uft::FeatureMap{Z.data, int(Z.n()), 1});
            }
            uft::FeaturePyramid warped =
                uft::multi_stage_transport(sol.plan, pyramid);
            double cyc = uft::cycle_loss(sol.plan, Z);
            uft::write_pyramid(align_args.out + "_pyramid.txt", warped);
            uft::write_sidecar(align_args.out + "_meta.txt",
                               {{"cycle_loss", uft::format_double(cyc)},
                                {"iters", std::to_string(sol.iters)},
                                {"converged", sol.converged ? "true" : "false"},
                                {"primal", uft::format_double(sol.primal)}});
            std::cout << "cycle_loss: " << uft::format_double(cyc) << "\n";
            return sol.converged ? kExitOk : kExitNotConverged;
        }

        if (compare->parsed()) {
            uft::ClusteredPair pair;
            if (cmp_args.use_gen || cmp_args.x.empty()) {
                pair = uft::gen_clustered_pair(cmp_args.spec);
            } else {
                pair.X.data = load_features(cmp_args.x);
                pair.Z.data = load_features(cmp_args.z);
                for (const auto& [key, value] :
                     uft::read_sidecar(cmp_args.labels)) {
                    if (key == "labels_x") pair.labels_x = split_ints(value);
                    if (key == "labels_z") pair.labels_z = split_ints(value);
                    if (key == "outlier_mask_z") {
                        for (int v : split_ints(value)) {
                            pair.outlier_mask_z.push_back(v != 0);
                        }
                    }
                }
            }

            uft::CostMatrix C = uft::cosine_cost_matrix(pair.X, pair.Z);
            auto [alpha, beta] = uft::compute_masses(pair.X, pair.Z);

            std::vector<int> cos_match =
                uft::argmax_match_cosine(pair.X, pair.Z);
            // a cosine match carries no plan mass; report leakage through a
            // unit-mass pseudo-plan on the matched entries
            uft::Matrix cos_plan =
                uft::Matrix::Zero(pair.X.n(), pair.Z.n());
            for (size_t i = 0; i < cos_match.size(); ++i) {
                cos_plan(Eigen::Index(i), cos_match[i]) = 1.0;
            }
            uft::MatchingReport cos_report =
                uft::matching_report(cos_match, pair.labels_x, pair.labels_z,
                                     cos_plan, pair.outlier_mask_z);

            // plain-OT baseline: uniform masses, no relevance weighting
            uft::MassVector uni{uft::Vector::Ones(pair.X.n())};
            uft::TransportSolution bal =
                uft::solve_balanced(C, uni, uni, cmp_args.opts);
            uft::MatchingReport bal_report = uft::matching_report(
                uft::argmax_match_plan(bal.plan), pair.labels_x, pair.labels_z,
                bal.plan, pair.outlier_mask_z);

            uft::TransportSolution uot =
                uft::solve_unbalanced(C, alpha, beta, cmp_args.opts);
            uft::MatchingReport uot_report = uft::matching_report(
                uft::argmax_match_plan(uot.plan), pair.labels_x, pair.labels_z,
                uot.plan, pair.outlier_mask_z);

            bool leak_ok = uot_report.outlier_leakage <
                           bal_report.outlier_leakage ||
                           bal_report.outlier_leakage == 0.0;
            bool m2o_ok = cos_report.many_to_one_rate >=
                          uot_report.many_to_one_rate;

            std::ostringstream report;
            report << report_block("cosine", cos_report)
                   << report_block("balanced_ot", bal_report)
                   << report_block("uot", uot_report)
                   << "leakage_uot_below_balanced: "
                   << (leak_ok ? "pass" : "fail") << "\n"
                   << "many_to_one_cosine_at_least_uot: "
                   << (m2o_ok ? "pass" : "fail") << "\n";
            std::cout << report.str();
            std::ofstream out(cmp_args.out);
            if (!out) throw uft::IoError("cannot write " + cmp_args.out);
            out << report.str();
            return kExitOk;
        }

        if (seace->parsed()) {
            uft::FeatureSet X{load_features(seace_args.x)};
            uft::ActivationMap x_act{uft::read_matrix(seace_args.x_act)};
            uft::ModulationPair mods{uft::read_matrix(seace_args.gamma_z),
                                     uft::read_matrix(seace_args.mu_z)};
            uft::ActivationMap l_act{uft::read_matrix(seace_args.l_act)};
            Eigen::Index c = x_act.channels();
            uft::AffineMap a1 = uft::AffineMap::identity(c);
            uft::AffineMap a2 = uft::AffineMap::identity(c);
            if (!seace_args.affine1_w.empty())
                a1.weight = uft::read_matrix(seace_args.affine1_w);
            if (!seace_args.affine1_b.empty())
                a1.bias = uft::read_vector(seace_args.affine1_b);
            if (!seace_args.affine2_w.empty())
                a2.weight = uft::read_matrix(seace_args.affine2_w);
            if (!seace_args.affine2_b.empty())
                a2.bias = uft::read_vector(seace_args.affine2_b);
            uft::ActivationMap out = uft::seace_pipeline(
                X, x_act, mods, l_act, a1, a2, !seace_args.raw_attention);
            uft::write_matrix(seace_args.out, out.data);
            std::cout << "denormalized activation written to " << seace_args.out
                      << "\n";
            return kExitOk;
        }

        if (verify->parsed()) {
            std::vector<uft::CheckResult> checks =
                uft::run_verification(verify_opts);
            const uft::CheckResult* first_fail = nullptr;
            for (const auto& check : checks) {
                std::cout << (check.passed ? "PASS " : "FAIL ") << check.name
                          << ": " << check.detail << "\n";
                if (!check.passed && !first_fail) first_fail = &check;
            }
            if (first_fail) {
                std::cerr << "verification failed: " << first_fail->name
                          << "\n";
                return kExitVerifyFailed;
            }
            return kExitOk;
        }
    } catch (const uft::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
