#pragma once

// Derivative-free Nelder–Mead simplex minimizer with dimension-adaptive
// coefficients (Gao & Han), used for the measurement-basis searches.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

struct NelderMeadOptions {
    std::size_t max_iterations = 2000;
    double f_tol = 1e-8;
    double x_tol = 1e-9;
    double initial_step = 0.5;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
                                    const NelderMeadOptions& opt = {}) {
    const auto n = x0.size();
    NelderMeadResult out;
    if (n == 0) {
        out.x = x0;
        out.value = f(x0);
        out.evaluations = 1;
        out.converged = true;
        return out;
    }
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n) + 1, x0);
    std::vector<double> values(simplex.size());
    for (Eigen::Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i) + 1](i) += opt.initial_step;
    for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = f(simplex[i]);
    out.evaluations = simplex.size();

    std::vector<std::size_t> order(simplex.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        std::vector<Eigen::VectorXd> s2;
        std::vector<double> v2;
        for (auto i : order) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex.swap(s2);
        values.swap(v2);
    };

    sort_simplex();
    const std::size_t worst = simplex.size() - 1;
    for (out.iterations = 0; out.iterations < opt.max_iterations; ++out.iterations) {
        double spread = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            spread = std::max(spread, (simplex[i] - simplex[0]).lpNorm<Eigen::Infinity>());
        }
        if (values[worst] - values[0] <= opt.f_tol && spread <= std::sqrt(opt.f_tol)) {
            out.converged = true;
            break;
        }
        if (spread <= opt.x_tol) {
            out.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < worst; ++i) centroid += simplex[i];
        centroid /= dn;

        const Eigen::VectorXd reflected = centroid + alpha * (centroid - simplex[worst]);
        const double fr = f(reflected);
        ++out.evaluations;
        if (fr < values[0]) {
            const Eigen::VectorXd expanded = centroid + beta * (reflected - centroid);
            const double fe = f(expanded);
            ++out.evaluations;
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if (fr < values[worst - 1]) {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            const bool outside = fr < values[worst];
            const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + gamma * (reflected - centroid))
                                                       : Eigen::VectorXd(centroid - gamma * (centroid - simplex[worst]));
            const double fc = f(contracted);
            ++out.evaluations;
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i] = simplex[0] + delta * (simplex[i] - simplex[0]);
                    values[i] = f(simplex[i]);
                }
                out.evaluations += simplex.size() - 1;
            }
        }
        sort_simplex();
    }
    out.x = simplex[0];
    out.value = values[0];
    return out;
}

}  // namespace qcorr
