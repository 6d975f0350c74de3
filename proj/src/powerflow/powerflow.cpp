#include "gridqls/powerflow/powerflow.hpp"

#include <cmath>
#include <stdexcept>

#include "gridqls/error.hpp"

namespace gridqls::powerflow {

namespace {

constexpr cplx kJ{0.0, 1.0};

bool has_generator(const PowerFlowCase &c, int bus_id) {
    for (const auto &g : c.generators) {
        if (g.in_service && g.bus == bus_id) {
            return true;
        }
    }
    return false;
}

CVector complex_voltage(const BusState &s) {
    CVector v(s.vm.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = std::polar(s.vm(i), s.va(i));
    }
    return v;
}

RMatrix select(const RMatrix &m, const std::vector<std::size_t> &rows, const std::vector<std::size_t> &cols) {
    RMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(i, j) = m(rows[i], cols[j]);
        }
    }
    return out;
}

std::vector<std::string> labels(const PowerFlowCase &c, const std::vector<std::size_t> &idx, const char *prefix) {
    std::vector<std::string> out;
    for (auto i : idx) {
        out.push_back(std::string(prefix) + ":" + std::to_string(c.buses[i].id));
    }
    return out;
}

double inf_norm(const RVector &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

CMatrix build_ybus(const PowerFlowCase &c) {
    const auto n = static_cast<Eigen::Index>(c.buses.size());
    CMatrix y = CMatrix::Zero(n, n);
    for (const auto &br : c.branches) {
        if (!br.in_service) {
            continue;
        }
        if (br.r == 0.0 && br.x == 0.0) {
            throw std::invalid_argument("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                                        " has zero impedance");
        }
        const cplx ys = 1.0 / cplx{br.r, br.x};
        const cplx tap = std::polar(br.ratio == 0.0 ? 1.0 : br.ratio, br.angle);
        const cplx ytt = ys + kJ * (br.b / 2.0);
        const auto f = static_cast<Eigen::Index>(c.bus_index(br.from));
        const auto t = static_cast<Eigen::Index>(c.bus_index(br.to));
        y(f, f) += ytt / std::norm(tap);
        y(t, t) += ytt;
        y(f, t) += -ys / std::conj(tap);
        y(t, f) += -ys / tap;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, i) += cplx{c.buses[i].gs, c.buses[i].bs};
    }
    return y;
}

BusClasses classify_buses(const PowerFlowCase &c) {
    BusClasses bc;
    bc.slack = c.slack_index();
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
        const auto &b = c.buses[i];
        if (b.type == BusType::Slack || b.type == BusType::Isolated) {
            continue;
        }
        if (b.type == BusType::PV && has_generator(c, b.id)) {
            bc.pv.push_back(i);
        } else {
            bc.pq.push_back(i);
        }
        bc.pvpq.push_back(i);
    }
    return bc;
}

BusState flat_start(const PowerFlowCase &c) {
    const auto n = static_cast<Eigen::Index>(c.buses.size());
    BusState s{RVector::Ones(n), RVector::Zero(n)};
    const BusClasses bc = classify_buses(c);
    s.va(static_cast<Eigen::Index>(bc.slack)) = c.buses[bc.slack].va;
    for (const auto &g : c.generators) {
        if (!g.in_service) {
            continue;
        }
        const auto i = c.bus_index(g.bus);
        const auto type = c.buses[i].type;
        if (type == BusType::Slack || type == BusType::PV) {
            s.vm(static_cast<Eigen::Index>(i)) = g.vg;
        }
    }
    return s;
}

CVector scheduled_injection(const PowerFlowCase &c) {
    CVector s(c.buses.size());
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
        s(i) = -cplx{c.buses[i].pd, c.buses[i].qd};
    }
    for (const auto &g : c.generators) {
        if (g.in_service) {
            s(c.bus_index(g.bus)) += cplx{g.pg, g.qg};
        }
    }
    return s;
}

CVector calculated_injection(const CMatrix &ybus, const BusState &s) {
    const CVector v = complex_voltage(s);
    return v.cwiseProduct((ybus * v).conjugate());
}

RVector mismatch(const PowerFlowCase &c, const BusState &s) {
    const BusClasses bc = classify_buses(c);
    const CVector d = scheduled_injection(c) - calculated_injection(build_ybus(c), s);
    RVector out(bc.pvpq.size() + bc.pq.size());
    for (std::size_t i = 0; i < bc.pvpq.size(); ++i) {
        out(i) = d(bc.pvpq[i]).real();
    }
    for (std::size_t i = 0; i < bc.pq.size(); ++i) {
        out(bc.pvpq.size() + i) = d(bc.pq[i]).imag();
    }
    return out;
}

LinearStep jacobian(const PowerFlowCase &c, const BusState &s) {
    const BusClasses bc = classify_buses(c);
    const CMatrix y = build_ybus(c);
    const CVector v = complex_voltage(s);
    const CVector ibus = y * v;
    CVector vnorm(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        vnorm(i) = v(i) / std::abs(v(i));
    }
    const CMatrix dva = kJ * v.asDiagonal() * (CMatrix(ibus.asDiagonal()) - y * v.asDiagonal()).conjugate();
    const CMatrix dvm = v.asDiagonal() * (y * vnorm.asDiagonal()).conjugate() +
                        CMatrix(ibus.conjugate().asDiagonal()) * vnorm.asDiagonal();
    const RMatrix dva_re = dva.real(), dva_im = dva.imag(), dvm_re = dvm.real(), dvm_im = dvm.imag();

    const auto a = static_cast<Eigen::Index>(bc.pvpq.size());
    const auto q = static_cast<Eigen::Index>(bc.pq.size());
    LinearStep step;
    step.matrix.resize(a + q, a + q);
    step.matrix.topLeftCorner(a, a) = select(dva_re, bc.pvpq, bc.pvpq);
    step.matrix.topRightCorner(a, q) = select(dvm_re, bc.pvpq, bc.pq);
    step.matrix.bottomLeftCorner(q, a) = select(dva_im, bc.pq, bc.pvpq);
    step.matrix.bottomRightCorner(q, q) = select(dvm_im, bc.pq, bc.pq);
    step.rhs = mismatch(c, s);
    step.variable_labels = labels(c, bc.pvpq, "theta");
    const auto vm_labels = labels(c, bc.pq, "vm");
    step.variable_labels.insert(step.variable_labels.end(), vm_labels.begin(), vm_labels.end());
    return step;
}

LinearStep bprime_system(const PowerFlowCase &c, const BusState &s) {
    PowerFlowCase xb = c;
    for (auto &b : xb.buses) {
        b.gs = 0.0;
        b.bs = 0.0;
    }
    for (auto &br : xb.branches) {
        br.r = 0.0;
        br.b = 0.0;
        br.ratio = 1.0;
        br.angle = 0.0;
    }
    const BusClasses bc = classify_buses(c);
    LinearStep step;
    step.matrix = select(RMatrix(-build_ybus(xb).imag()), bc.pvpq, bc.pvpq);
    const RVector mis = mismatch(c, s);
    step.rhs.resize(bc.pvpq.size());
    for (std::size_t i = 0; i < bc.pvpq.size(); ++i) {
        step.rhs(i) = mis(i) / s.vm(bc.pvpq[i]);
    }
    step.variable_labels = labels(c, bc.pvpq, "theta");
    return step;
}

LinearStep bdoubleprime_system(const PowerFlowCase &c, const BusState &s) {
    PowerFlowCase xb = c;
    for (auto &br : xb.branches) {
        br.angle = 0.0;
    }
    const BusClasses bc = classify_buses(c);
    LinearStep step;
    step.matrix = select(RMatrix(-build_ybus(xb).imag()), bc.pq, bc.pq);
    const RVector mis = mismatch(c, s);
    step.rhs.resize(bc.pq.size());
    for (std::size_t i = 0; i < bc.pq.size(); ++i) {
        step.rhs(i) = mis(bc.pvpq.size() + i) / s.vm(bc.pq[i]);
    }
    step.variable_labels = labels(c, bc.pq, "vm");
    return step;
}

namespace {

RVector solve_step(const LinearStep &step, const PowerFlowOptions &options, StepRecord record,
                   std::vector<StepRecord> &records) {
    record.dimension = static_cast<std::size_t>(step.matrix.rows());
    RVector dx;
    if (step.rhs.size() == 0 || step.rhs.cwiseAbs().maxCoeff() == 0.0) {
        // Nothing to correct; HHL cannot encode a zero vector anyway.
        dx = RVector::Zero(step.rhs.size());
        records.push_back(std::move(record));
        return dx;
    }
    const CMatrix a = step.matrix.cast<cplx>();
    const CVector b = step.rhs.cast<cplx>();
    if (options.solver == Solver::Classical) {
        record.condition_number = prep::condition_number(a);
        Eigen::FullPivLU<RMatrix> lu(step.matrix);
        if (!lu.isInvertible()) {
            throw SingularMatrixError(record.label + " matrix is singular");
        }
        dx = lu.solve(step.rhs);
    } else {
        auto res = hhl::solve_linear(a, b, options.hhl);
        record.condition_number = res.original_condition_number;
        dx = res.x.real();
        record.hhl = std::move(res);
    }
    records.push_back(std::move(record));
    return dx;
}

} // namespace

PowerFlowResult solve_powerflow(const PowerFlowCase &c, const PowerFlowOptions &options) {
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    const BusClasses bc = classify_buses(c);
    PowerFlowResult r;
    r.state = flat_start(c);

    auto check = [&]() {
        const double m = inf_norm(mismatch(c, r.state));
        r.mismatch_history.push_back(m);
        r.final_mismatch = m;
        r.converged = m < options.tol;
        return r.converged;
    };
    auto record = [&](const char *label) {
        StepRecord s;
        s.iteration = r.iterations;
        s.label = label;
        s.mismatch_before = r.final_mismatch;
        return s;
    };

    if (check()) {
        return r;
    }
    while (r.iterations < options.max_iter) {
        ++r.iterations;
        if (options.variant == Variant::Newton) {
            const LinearStep step = jacobian(c, r.state);
            const RVector dx = solve_step(step, options, record("J"), r.steps);
            for (std::size_t i = 0; i < bc.pvpq.size(); ++i) {
                r.state.va(bc.pvpq[i]) += dx(i);
            }
            for (std::size_t i = 0; i < bc.pq.size(); ++i) {
                r.state.vm(bc.pq[i]) += dx(bc.pvpq.size() + i);
            }
            if (check()) {
                return r;
            }
        } else {
            const LinearStep p = bprime_system(c, r.state);
            const RVector dva = solve_step(p, options, record("B'"), r.steps);
            for (std::size_t i = 0; i < bc.pvpq.size(); ++i) {
                r.state.va(bc.pvpq[i]) += dva(i);
            }
            if (check()) {
                return r;
            }
            const LinearStep q = bdoubleprime_system(c, r.state);
            const RVector dvm = solve_step(q, options, record("B''"), r.steps);
            for (std::size_t i = 0; i < bc.pq.size(); ++i) {
                r.state.vm(bc.pq[i]) += dvm(i);
            }
            if (check()) {
                return r;
            }
        }
    }
    throw ConvergenceError("power flow did not converge in " + std::to_string(options.max_iter) +
                               " iterations (mismatch " + std::to_string(r.final_mismatch) + ")",
                           r.iterations, r.final_mismatch);
}

std::string to_string(Solver s) { return s == Solver::Classical ? "classical" : "hhl"; }
std::string to_string(Variant v) { return v == Variant::Newton ? "newton" : "fast_decoupled"; }

} // namespace gridqls::powerflow
