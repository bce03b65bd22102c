#include "sawecho/study.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace sawecho {

std::vector<int> budget_grid(int gates_per_iteration, double epsilon, double dense_budget, double max_budget,
                             int tail_points) {
    if (!(epsilon > 0)) throw std::invalid_argument("budget grid needs eps > 0");
    if (!(dense_budget > 0) || !(max_budget >= dense_budget) || tail_points < 0) {
        throw std::invalid_argument("invalid budget grid bounds");
    }
    // t_e = x / (eps^2 n_g) and t_r = t_e / 2.
    const double per_tr = 2 * epsilon * epsilon * gates_per_iteration;
    const int dense_end = std::max(1, static_cast<int>(std::ceil(dense_budget / per_tr)));
    const int last = std::max(dense_end, static_cast<int>(std::ceil(max_budget / per_tr)));
    std::set<int> grid;
    for (int t = 0; t <= dense_end; ++t) grid.insert(t);
    for (int i = 1; i <= tail_points; ++i) {
        grid.insert(dense_end + static_cast<int>(std::lround(double(last - dense_end) * i / tail_points)));
    }
    return {grid.begin(), grid.end()};
}

StudyPoint fit_point(int num_qubits, double epsilon, std::vector<EchoRecord> curve, double threshold) {
    StudyPoint point;
    point.num_qubits = num_qubits;
    point.epsilon = epsilon;
    point.gates_per_iteration = gates_per_iteration(num_qubits);
    point.curve = std::move(curve);

    std::vector<CurvePoint> e, s, f;
    for (const EchoRecord& r : point.curve) {
        e.push_back({double(r.t), r.eof_mean});
        s.push_back({double(r.t), r.entropy_mean});
        f.push_back({double(r.t), r.fidelity_mean});
    }
    try {
        point.threshold = threshold_time(e, threshold);
    } catch (const FitError& err) {
        point.notes.push_back(std::string("threshold: ") + err.what());
    }
    if (num_qubits >= 3) {
        try {
            point.entropy = entropy_rate(s, ergodic_entropy_reference(std::ldexp(1.0, num_qubits)));
        } catch (const std::exception& err) {
            point.notes.push_back(std::string("entropy rate: ") + err.what());
        }
    } else {
        point.notes.push_back("entropy rate: needs N >= 8");
    }
    try {
        point.fidelity = fidelity_rate(f);
        if (epsilon > 0) {
            point.decay_constant = decay_constant(point.fidelity->rate, epsilon, point.gates_per_iteration);
        }
    } catch (const FitError& err) {
        point.notes.push_back(std::string("fidelity rate: ") + err.what());
    }
    return point;
}

namespace {

double geometric_mean(const std::vector<double>& v) {
    if (v.empty()) return FitResult::nan;
    double acc = 0;
    for (double x : v) acc += std::log(x);
    return std::exp(acc / static_cast<double>(v.size()));
}

std::optional<FitResult> try_power_law(const std::vector<CurvePoint>& pts, const std::string& label,
                                       std::vector<std::string>& notes) {
    if (pts.size() < 3) return std::nullopt;
    try {
        return power_law_fit(pts);
    } catch (const FitError& err) {
        notes.push_back(label + ": " + err.what());
        return std::nullopt;
    }
}

}  // namespace

StudySummary summarize(std::vector<StudyPoint> points) {
    StudySummary summary;
    summary.points = std::move(points);

    std::map<int, std::vector<const StudyPoint*>> by_qubits;
    for (const StudyPoint& p : summary.points) by_qubits[p.num_qubits].push_back(&p);

    for (const auto& [nq, group] : by_qubits) {
        std::vector<CurvePoint> te, gamma, frate;
        for (const StudyPoint* p : group) {
            if (!(p->epsilon > 0)) continue;
            if (p->threshold) te.push_back({p->epsilon, p->threshold->t_e_star});
            if (p->entropy && p->entropy->rate > 0) gamma.push_back({p->epsilon, p->entropy->rate});
            if (p->fidelity && p->fidelity->rate > 0) frate.push_back({p->epsilon, p->fidelity->rate});
        }
        StudySummary::EpsilonScan scan{nq, {}, {}, {}};
        const std::string tag = "n_q=" + std::to_string(nq);
        scan.threshold = try_power_law(te, tag + " t_e*(eps)", summary.notes);
        scan.entropy = try_power_law(gamma, tag + " Gamma(eps)", summary.notes);
        scan.fidelity = try_power_law(frate, tag + " rate(eps)", summary.notes);
        if (scan.threshold || scan.entropy || scan.fidelity) summary.epsilon_scans.push_back(scan);
    }

    std::vector<CurvePoint> te_eps2;
    std::vector<double> a_samples, b_samples, c_samples;
    for (const StudyPoint& p : summary.points) {
        if (!(p.epsilon > 0)) continue;
        const double eps2 = p.epsilon * p.epsilon;
        const double nq2 = double(p.num_qubits) * p.num_qubits;
        if (p.threshold) {
            te_eps2.push_back({double(p.num_qubits), p.threshold->t_e_star * eps2});
            a_samples.push_back(p.threshold->t_e_star * nq2 * eps2);
        }
        if (p.entropy && p.entropy->rate > 0) b_samples.push_back(p.entropy->rate / (eps2 * nq2));
        if (p.fidelity && p.decay_constant > 0) c_samples.push_back(p.decay_constant);
    }
    std::set<int> distinct;
    for (const CurvePoint& q : te_eps2) distinct.insert(static_cast<int>(q.t));
    if (distinct.size() >= 3) summary.qubit_scan = try_power_law(te_eps2, "t_e* eps^2 (n_q)", summary.notes);
    summary.a_hat = geometric_mean(a_samples);
    summary.b_hat = geometric_mean(b_samples);
    summary.c_hat = geometric_mean(c_samples);
    return summary;
}

StudySummary run_study(const StudyConfig& config) {
    if (config.qubit_list.empty() || config.epsilon_list.empty()) {
        throw std::invalid_argument("study needs at least one n_q and one epsilon");
    }
    std::vector<StudyPoint> points;
    for (int nq : config.qubit_list) {
        for (double eps : config.epsilon_list) {
            EchoConfig echo;
            echo.num_qubits = nq;
            echo.chaos_k = config.chaos_k;
            echo.theta_offset = config.theta_offset;
            echo.epsilon = eps;
            echo.realizations = config.realizations;
            echo.master_seed = config.master_seed;
            echo.threads = config.threads;
            echo.mode = EchoMode::echo_curve;
            echo.reversal_grid = !config.reversal_grid.empty()
                                     ? config.reversal_grid
                                     : budget_grid(gates_per_iteration(nq), eps, config.dense_budget,
                                                   config.max_budget, config.tail_points);
            EchoResult result = run_echo_curve(echo);
            points.push_back(fit_point(nq, eps, std::move(result.records), config.threshold));
        }
    }
    return summarize(std::move(points));
}

}  // namespace sawecho
