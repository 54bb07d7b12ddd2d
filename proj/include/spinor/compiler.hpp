#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/propagator.hpp"
#include "spinor/sequence.hpp"

namespace spinor {

/// One spin group as the engine models it: a 2x2 ensemble at a common field.
struct CompiledDomain {
    std::string name;
    std::size_t spins = 1;
    std::array<double, 3> omega{0.0, 0.0, 0.0};  ///< ambient rad/s, no gradients
    std::array<double, 3> position_m{0.0, 0.0, 0.0};
    double k_rest = 0.0;
    double weight = 1.0;  ///< fraction of the ensemble population
};

/// One compiled timeline window. fields[d] is the full field seen by domain d
/// during the window, with every gradient shift active from its event onward
/// already folded into omega_z. RF payload applies only when rf is set.
struct CompiledOp {
    EventKind kind = EventKind::delay;
    double start = 0.0;
    double duration = 0.0;
    std::vector<FieldParams> fields;
    bool rf = false;
    bool resonant = false;
    double carrier = 0.0;
    double omega1 = 0.0;
    double phase = 0.0;
    int rf_domain = -1;  ///< -1 = all domains
    std::size_t n = 0;   ///< acquire only
    double dt = 0.0;     ///< acquire only
};

struct CompiledSequence {
    PhysicalConstants constants;
    std::vector<CompiledDomain> domains;
    std::vector<CompiledOp> ops;
    EnsembleDecl ensemble;
    bool ensemble_set = false;
    double duration = 0.0;

    [[nodiscard]] const CompiledOp* acquire_op() const {
        for (const CompiledOp& op : ops)
            if (op.kind == EventKind::acquire) return &op;
        return nullptr;
    }

    /// Flip angle accumulated by every pulse that ends before time t.
    [[nodiscard]] double flip_angle_before(double t) const {
        double theta = 0.0;
        for (const CompiledOp& op : ops)
            if (op.rf && op.start < t) theta += op.omega1 * op.duration;
        return theta;
    }
};

/// Lower a parsed program onto per-domain evolution windows. Gradients act
/// as persistent frequency shifts: from a gradient event onward each
/// domain's omega_z carries -gamma * G * position[axis]. Overlapping events
/// (possible only in hand-built ASTs; the parser emits a serial timeline)
/// are not modeled and raise UnsupportedCombination.
[[nodiscard]] inline CompiledSequence compile_sequence(const SequenceProgram& p) {
    CompiledSequence c;
    c.constants = PhysicalConstants{p.gamma, hbar_si};
    c.ensemble = p.ensemble;
    c.ensemble_set = p.ensemble_set;

    if (p.domains.empty()) {
        CompiledDomain d;
        d.name = "main";
        d.omega = {0.0, 0.0, p.b0_omega};
        d.k_rest = p.rest_k;
        d.weight = 1.0;
        c.domains.push_back(d);
    } else {
        double total_spins = 0.0;
        for (const DomainDecl& d : p.domains) total_spins += static_cast<double>(d.spins);
        for (const DomainDecl& src : p.domains) {
            CompiledDomain d;
            d.name = src.name;
            d.spins = src.spins;
            d.omega = src.omega;
            d.position_m = src.position_m;
            d.k_rest = src.k_set ? src.k_rest : p.rest_k;
            d.weight = static_cast<double>(src.spins) / total_spins;
            c.domains.push_back(d);
        }
    }

    const std::size_t nd = c.domains.size();
    std::vector<double> shift(nd, 0.0);  // accumulated gradient shift, rad/s
    double prev_end = 0.0;
    bool prev_rf = false;
    for (const SeqEvent& e : p.events) {
        const double tol = 1e-12 * std::max(1.0, std::abs(prev_end));
        if (e.start < prev_end - tol) {
            const bool rf_involved = prev_rf || e.kind == EventKind::rf_pulse;
            throw UnsupportedCombination(
                rf_involved ? "simultaneous RF and other events are not modeled"
                            : "overlapping timeline events are not modeled");
        }

        if (e.kind == EventKind::gradient) {
            // the shift turns on at the event start and stays on
            for (std::size_t d = 0; d < nd; ++d) {
                if (!e.gradient.domain.empty() && c.domains[d].name != e.gradient.domain)
                    continue;
                shift[d] += -p.gamma * e.gradient.strength *
                            c.domains[d].position_m[static_cast<std::size_t>(e.gradient.axis)];
            }
        }

        CompiledOp op;
        op.kind = e.kind;
        op.start = e.start;
        op.duration = e.duration;
        op.fields.resize(nd);
        for (std::size_t d = 0; d < nd; ++d) {
            FieldParams f;
            f.omega_x = c.domains[d].omega[0];
            f.omega_y = c.domains[d].omega[1];
            f.omega_z = c.domains[d].omega[2] + shift[d];
            f.k_rest = c.domains[d].k_rest;
            op.fields[d] = f;
        }
        if (e.kind == EventKind::rf_pulse) {
            op.rf = true;
            op.resonant = e.pulse.resonant;
            op.carrier = e.pulse.carrier;
            op.omega1 = e.pulse.omega1;
            op.phase = e.pulse.phase;
            if (!e.pulse.domain.empty()) {
                op.rf_domain = -1;
                for (std::size_t d = 0; d < nd; ++d)
                    if (c.domains[d].name == e.pulse.domain)
                        op.rf_domain = static_cast<int>(d);
                if (op.rf_domain < 0)
                    throw UndeclaredDomain("domain '" + e.pulse.domain + "' is not declared");
            }
        } else if (e.kind == EventKind::acquire) {
            op.n = e.acquire.n;
            op.dt = e.acquire.dt;
        }
        c.ops.push_back(op);
        prev_end = e.start + e.duration;
        prev_rf = e.kind == EventKind::rf_pulse;
    }
    c.duration = prev_end;
    return c;
}

/// The unitary for one domain over a non-RF window of the given length.
[[nodiscard]] inline EvolutionPair ambient_propagator(const FieldParams& f, double t) {
    if (f.omega_x == 0.0 && f.omega_y == 0.0 && f.k_rest == 0.0) {
        EvolutionPair u;
        u.e_part = static_propagator(f.omega_z, t);
        u.r_part = ComplexMatrix::identity(2);
        return u;
    }
    return general_propagator(f, t);
}

/// The unitary for one domain over an RF window. A resonant carrier locks to
/// the domain's precession frequency; a nonzero rest constant switches to
/// the combined-coupling model with the drive split evenly between the
/// transverse components. The pulse phase rotates the drive axis.
[[nodiscard]] inline EvolutionPair pulse_propagator(const CompiledOp& op, const FieldParams& f,
                                                    double t) {
    if (!op.rf) throw Error("pulse_propagator: window carries no RF payload");
    const double carrier = op.resonant ? f.omega_z : op.carrier;
    EvolutionPair u;
    if (f.k_rest == 0.0) {
        u = rf_propagator(carrier, f.omega_z, op.omega1, t);
    } else {
        FieldParams g = f;
        g.omega_x = op.omega1 / std::sqrt(2.0);
        g.omega_y = op.omega1 / std::sqrt(2.0);
        u = general_propagator(g, t);
    }
    if (op.phase != 0.0) {
        const ComplexMatrix turn = rotation_matrix({0.0, 0.0, 1.0}, op.phase);
        const ComplexMatrix back = rotation_matrix({0.0, 0.0, 1.0}, -op.phase);
        u.r_part = mat_mul(mat_mul(back, u.r_part), turn);
    }
    return u;
}

}  // namespace spinor
