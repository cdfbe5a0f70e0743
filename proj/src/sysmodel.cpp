#include "gse/sysmodel.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gse/rng.hpp"

namespace gse {

void NonlinearDiscreteSystem::check() const {
    if (Eigen::Index(f.comps.size()) != n())
        throw dimension_error("system: f must map the state to itself");
    if (C.cols() != n()) throw dimension_error("system: C column count != n");
    if (W.dim() != n()) throw dimension_error("system: W dimension != n");
    if (V.dim() != r()) throw dimension_error("system: V dimension != r");
}

Eigen::VectorXd step_truth(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    return sys.f.eval_point(x, u) + w;
}

Eigen::VectorXd measure(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& v) {
    return sys.C * x + v;
}

namespace {

Eigen::VectorXd draw_box(Rng& rng, const IntervalVector& box) {
    Eigen::VectorXd v(box.dim());
    for (Eigen::Index i = 0; i < box.dim(); ++i) v[i] = rng.uniform(box.lo[i], box.hi[i]);
    return v;
}

Trajectory simulate_impl(const NonlinearDiscreteSystem& sys, Rng& rng, const Eigen::VectorXd& x0,
                         const std::vector<Eigen::VectorXd>& u_seq, int steps,
                         std::uint64_t seed) {
    sys.check();
    if (int(u_seq.size()) < steps) throw std::invalid_argument("simulate: input sequence too short");
    Trajectory t;
    t.seed = seed;
    t.states.push_back(x0);
    t.measurements.push_back(measure(sys, x0, draw_box(rng, sys.V)));
    for (int k = 0; k < steps; ++k) {
        const Eigen::VectorXd w = draw_box(rng, sys.W);
        Eigen::VectorXd next;
        try {
            next = step_truth(sys, t.states.back(), u_seq[size_t(k)], w);
        } catch (const domain_error& e) {
            throw domain_error("simulate: step " + std::to_string(k) + ": " + e.what());
        }
        t.states.push_back(next);
        t.inputs.push_back(u_seq[size_t(k)]);
        t.measurements.push_back(measure(sys, next, draw_box(rng, sys.V)));
    }
    return t;
}

}  // namespace

Trajectory simulate(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x0,
                    const std::vector<Eigen::VectorXd>& u_seq, int steps, std::uint64_t seed) {
    Rng rng(seed);
    return simulate_impl(sys, rng, x0, u_seq, steps, seed);
}

Trajectory simulate(const NonlinearDiscreteSystem& sys, const IntervalVector& R0,
                    const std::vector<Eigen::VectorXd>& u_seq, int steps, std::uint64_t seed) {
    Rng rng(seed);
    const Eigen::VectorXd x0 = draw_box(rng, R0);
    return simulate_impl(sys, rng, x0, u_seq, steps, seed);
}

void save_trajectory_csv(const Trajectory& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_trajectory_csv: cannot open " + path);
    char buf[32];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    };
    for (size_t k = 0; k < t.states.size(); ++k) {
        out << k;
        for (Eigen::Index i = 0; i < t.states[k].size(); ++i) put(t.states[k][i]);
        if (k < t.inputs.size())
            for (Eigen::Index i = 0; i < t.inputs[k].size(); ++i) put(t.inputs[k][i]);
        else if (!t.inputs.empty())
            for (Eigen::Index i = 0; i < t.inputs[0].size(); ++i) out << ",";
        for (Eigen::Index i = 0; i < t.measurements[k].size(); ++i) put(t.measurements[k][i]);
        out << '\n';
    }
}

Trajectory load_trajectory_csv(const std::string& path, Eigen::Index n, Eigen::Index m,
                               Eigen::Index r) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_trajectory_csv: cannot open " + path);
    Trajectory t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (Eigen::Index(cells.size()) < 1 + n + r)
            throw std::runtime_error("load_trajectory_csv: short row");
        size_t pos = 1;
        Eigen::VectorXd x(n), u(m), y(r);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = std::stod(cells[pos++]);
        bool has_u = m > 0 && !cells[pos].empty();
        for (Eigen::Index i = 0; i < m; ++i) {
            u[i] = has_u ? std::stod(cells[pos]) : 0.0;
            ++pos;
        }
        for (Eigen::Index i = 0; i < r; ++i) y[i] = std::stod(cells[pos++]);
        t.states.push_back(x);
        if (has_u) t.inputs.push_back(u);
        t.measurements.push_back(y);
    }
    // m == 0 systems carry empty input vectors for every transition
    if (m == 0) t.inputs.assign(t.states.size() - 1, Eigen::VectorXd(0));
    return t;
}

namespace {

bool consistent(const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y) {
    const Eigen::VectorXd v = y - sys.C * x;
    return sys.V.contains(v, 1e-12);
}

std::vector<Eigen::VectorXd> grid_box(const IntervalVector& box, double res) {
    std::vector<Eigen::VectorXd> pts;
    if (box.dim() == 1) {
        for (double a = box.lo[0]; a <= box.hi[0] + 1e-12; a += res) {
            Eigen::VectorXd p(1);
            p << std::min(a, box.hi[0]);
            pts.push_back(p);
        }
        return pts;
    }
    for (double a = box.lo[0]; a <= box.hi[0] + 1e-12; a += res)
        for (double b = box.lo[1]; b <= box.hi[1] + 1e-12; b += res) {
            Eigen::VectorXd p(2);
            p << std::min(a, box.hi[0]), std::min(b, box.hi[1]);
            pts.push_back(p);
        }
    return pts;
}

std::vector<Eigen::VectorXd> disturbance_samples(const IntervalVector& W) {
    std::vector<Eigen::VectorXd> ws;
    ws.push_back(W.mid());
    const Eigen::Index n = W.dim();
    for (size_t mask = 0; mask < (size_t(1) << size_t(n)); ++mask) {
        Eigen::VectorXd w(n);
        for (Eigen::Index j = 0; j < n; ++j) w[j] = (mask >> j) & 1 ? W.hi[j] : W.lo[j];
        ws.push_back(w);
    }
    return ws;
}

}  // namespace

std::vector<Eigen::VectorXd> initial_consistent_cloud(const NonlinearDiscreteSystem& sys,
                                                      const IntervalVector& R0,
                                                      const Eigen::VectorXd& y0, double gridRes) {
    if (R0.dim() > 2) throw std::invalid_argument("oracle: only defined for n <= 2");
    std::vector<Eigen::VectorXd> out;
    for (const auto& p : grid_box(R0, gridRes))
        if (consistent(sys, p, y0)) out.push_back(p);
    return out;
}

std::vector<Eigen::VectorXd> consistent_set_oracle(const NonlinearDiscreteSystem& sys,
                                                   const std::vector<Eigen::VectorXd>& cloud_prev,
                                                   const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& y) {
    if (sys.n() > 2) throw std::invalid_argument("oracle: only defined for n <= 2");
    const auto ws = disturbance_samples(sys.W);
    std::vector<Eigen::VectorXd> out;
    out.reserve(cloud_prev.size());
    for (const auto& xp : cloud_prev) {
        const Eigen::VectorXd base = sys.f.eval_point(xp, u);
        for (const auto& w : ws) {
            const Eigen::VectorXd x = base + w;
            if (consistent(sys, x, y)) out.push_back(x);
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> consistent_set_oracle(const NonlinearDiscreteSystem& sys,
                                                   const SetValue& S_prev,
                                                   const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& y, double gridRes) {
    if (sys.n() > 2) throw std::invalid_argument("oracle: only defined for n <= 2");
    std::vector<Eigen::VectorXd> members;
    for (const auto& p : grid_box(interval_hull(S_prev), gridRes))
        if (contains_point(S_prev, p, 1e-9)) members.push_back(p);
    return consistent_set_oracle(sys, members, u, y);
}

}  // namespace gse
