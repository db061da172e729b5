#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uft/alignment.hpp"
#include "uft/losses.hpp"
#include "uft/measures.hpp"
#include "uft/oracle.hpp"
#include "uft/seace.hpp"
#include "uft/sinkhorn.hpp"
#include "uft/synth.hpp"

namespace py = pybind11;
using namespace uft;

PYBIND11_MODULE(_core, m) {
    m.doc() = "unbalanced entropic optimal transport for feature alignment";

    py::register_exception<Error>(m, "UftError");

    py::class_<SolverOptions>(m, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("eta", &SolverOptions::eta)
        .def_readwrite("tau", &SolverOptions::tau)
        .def_readwrite("max_iters", &SolverOptions::max_iters)
        .def_readwrite("tol", &SolverOptions::tol)
        .def_readwrite("threads", &SolverOptions::threads)
        .def_readwrite("track_duals", &SolverOptions::track_duals);

    py::class_<TransportSolution>(m, "TransportSolution")
        .def_readonly("plan", &TransportSolution::plan)
        .def_readonly("u", &TransportSolution::u)
        .def_readonly("v", &TransportSolution::v)
        .def_readonly("iters", &TransportSolution::iters)
        .def_readonly("converged", &TransportSolution::converged)
        .def_readonly("primal", &TransportSolution::primal)
        .def_readonly("dual", &TransportSolution::dual)
        .def_readonly("dual_history", &TransportSolution::dual_history);

    py::class_<MatchingReport>(m, "MatchingReport")
        .def_readonly("many_to_one_rate", &MatchingReport::many_to_one_rate)
        .def_readonly("outlier_leakage", &MatchingReport::outlier_leakage)
        .def_readonly("accuracy", &MatchingReport::accuracy);

    m.def("cosine_cost_matrix",
          [](const Matrix& x, const Matrix& z) {
              return cosine_cost_matrix(FeatureSet{x}, FeatureSet{z}).cost;
          },
          py::arg("x"), py::arg("z"));

    m.def("compute_masses",
          [](const Matrix& x, const Matrix& z) {
              auto [a, b] = compute_masses(FeatureSet{x}, FeatureSet{z});
              return py::make_tuple(a.mass, b.mass);
          },
          py::arg("x"), py::arg("z"));

    m.def("solve_balanced",
          [](const Matrix& c, const Vector& alpha, const Vector& beta,
             const SolverOptions& opts) {
              return solve_balanced(CostMatrix{c}, MassVector{alpha},
                                    MassVector{beta}, opts);
          },
          py::arg("cost"), py::arg("alpha"), py::arg("beta"),
          py::arg("options") = SolverOptions{});

    m.def("solve_unbalanced",
          [](const Matrix& c, const Vector& alpha, const Vector& beta,
             const SolverOptions& opts) {
              return solve_unbalanced(CostMatrix{c}, MassVector{alpha},
                                      MassVector{beta}, opts);
          },
          py::arg("cost"), py::arg("alpha"), py::arg("beta"),
          py::arg("options") = SolverOptions{});

    m.def("plan_from_duals",
          [](const Vector& u, const Vector& v, const Matrix& c,
             const Vector& alpha, const Vector& beta, double eta) {
              return plan_from_duals(u, v, CostMatrix{c}, MassVector{alpha},
                                     MassVector{beta}, eta);
          },
          py::arg("u"), py::arg("v"), py::arg("cost"), py::arg("alpha"),
          py::arg("beta"), py::arg("eta"));

    m.def("primal_objective",
          [](const Matrix& t, const Matrix& c, const Vector& alpha,
             const Vector& beta, double eta, double tau) {
              return primal_objective(t, CostMatrix{c}, MassVector{alpha},
                                      MassVector{beta}, eta, tau);
          },
          py::arg("plan"), py::arg("cost"), py::arg("alpha"), py::arg("beta"),
          py::arg("eta"), py::arg("tau"));

    m.def("dual_objective",
          [](const Vector& u, const Vector& v, const Matrix& c,
             const Vector& alpha, const Vector& beta, double eta, double tau) {
              return dual_objective(u, v, CostMatrix{c}, MassVector{alpha},
                                    MassVector{beta}, eta, tau);
          },
          py::arg("u"), py::arg("v"), py::arg("cost"), py::arg("alpha"),
          py::arg("beta"), py::arg("eta"), py::arg("tau"));

    m.def("brute_force_assignment",
          [](const Matrix& c) {
              AssignmentResult r = brute_force_assignment(CostMatrix{c});
              return py::make_tuple(r.permutation, r.cost);
          },
          py::arg("cost"));

    m.def("uot_projected_gradient",
          [](const Matrix& c, const Vector& alpha, const Vector& beta,
             double eta, double tau, int steps, double step_size) {
              return uot_projected_gradient(CostMatrix{c}, MassVector{alpha},
                                            MassVector{beta}, eta, tau, steps,
                                            step_size);
          },
          py::arg("cost"), py::arg("alpha"), py::arg("beta"), py::arg("eta"),
          py::arg("tau"), py::arg("steps") = 5000, py::arg("step_size") = 0.1);

    m.def("barycentric_warp",
          [](const Matrix& t, const Matrix& z) {
              return barycentric_warp(t, FeatureSet{z}).data;
          },
          py::arg("plan"), py::arg("z"));

    m.def("expand_plan",
          [](const Matrix& t, int s) { return expand_plan(t, s); },
          py::arg("plan"), py::arg("scale"));

    m.def("cycle_loss",
          [](const Matrix& t, const Matrix& z) {
              return cycle_loss(t, FeatureSet{z});
          },
          py::arg("plan"), py::arg("z"));

    m.def("semantic_activation_matrix",
          [](const Matrix& x, bool softmax) {
              return semantic_activation_matrix(FeatureSet{x}, softmax);
          },
          py::arg("x"), py::arg("softmax") = true);

    m.def("seace_denormalize",
          [](const Matrix& l_act, const Matrix& gamma, const Matrix& mu) {
              return seace_denormalize(ActivationMap{l_act},
                                       ModulationPair{gamma, mu})
                  .data;
          },
          py::arg("l_act"), py::arg("gamma"), py::arg("mu"));

    m.def("feature_consistency_loss",
          [](const Matrix& a, const Matrix& b) {
              return feature_consistency_loss(FeatureSet{a}, FeatureSet{b});
          },
          py::arg("a"), py::arg("b"));

    m.def("contextual_loss",
          [](const Matrix& z, const Matrix& y, double bandwidth) {
              return contextual_loss(FeatureSet{z}, FeatureSet{y}, bandwidth);
          },
          py::arg("feat_z"), py::arg("feat_y"), py::arg("bandwidth") = 0.5);

    m.def("argmax_match_cosine",
          [](const Matrix& x, const Matrix& z) {
              return argmax_match_cosine(FeatureSet{x}, FeatureSet{z});
          },
          py::arg("x"), py::arg("z"));

    m.def("argmax_match_plan",
          [](const Matrix& t) { return argmax_match_plan(t); },
          py::arg("plan"));

    m.def("matching_report",
          [](const std::vector<int>& match, const std::vector<int>& labels_x,
             const std::vector<int>& labels_z, const Matrix& t,
             const std::vector<bool>& outlier_mask_z) {
              return matching_report(match, labels_x, labels_z, t,
                                     outlier_mask_z);
          },
          py::arg("match"), py::arg("labels_x"), py::arg("labels_z"),
          py::arg("plan"), py::arg("outlier_mask_z"));

    m.def("gen_clustered_pair",
          [](int n, int d, int k, double outlier_frac, double spread,
             std::uint64_t seed) {
              ClusteredPair p =
                  gen_clustered_pair({n, d, k, outlier_frac, spread, seed});
              std::vector<int> mask(p.outlier_mask_z.begin(),
                                    p.outlier_mask_z.end());
              return py::make_tuple(p.X.data, p.Z.data, p.labels_x, p.labels_z,
                                    mask);
          },
          py::arg("n"), py::arg("d"), py::arg("k"),
          py::arg("outlier_frac") = 0.0, py::arg("spread") = 0.1,
          py::arg("seed") = 0);
}
