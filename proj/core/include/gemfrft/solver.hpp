#ifndef GEMFRFT_SOLVER_HPP
#define GEMFRFT_SOLVER_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gemfrft/grids.hpp"
#include "gemfrft/pulse.hpp"
#include "gemfrft/schedule.hpp"

namespace gemfrft {

// Medium state at one instant: spin coherence S(z), optical coherence
// P(z), field envelope E(z). E is never integrated in time; it is the
// instantaneous solution of dE/dz = i sqrt(d) P with E(0) = e_in.
struct FieldState {
    std::vector<cplx> S;
    std::vector<cplx> P;
    std::vector<cplx> E;

    explicit FieldState(std::size_t n_z = 0)
        : S(n_z, cplx(0.0, 0.0)), P(n_z, cplx(0.0, 0.0)), E(n_z, cplx(0.0, 0.0)) {}
};

// Energy bookkeeping in photon-flux units (|E|^2 per us). Spin and optical
// coherences enter with weight 1/gamma, which is the normalization that
// closes the continuity equation of Eqs. (S, P, E) exactly:
//   d/dt stored = |E(0)|^2 - |E(L)|^2 - decay_rate,
//   stored = (1/gamma) integral (|S|^2 + |P|^2) dz,
//   decay_rate = (1/gamma) integral (2 gamma |P|^2 + 2 gamma_S |S|^2) dz.
struct EnergyLedger {
    double input_energy = 0.0;
    double output_energy = 0.0;
    std::vector<double> time;    // per accepted step
    std::vector<double> stored;  // stored(t)
    std::vector<double> decayed; // cumulative decayed(t)

    double final_stored() const { return stored.empty() ? 0.0 : stored.back(); }
    double final_decayed() const { return decayed.empty() ? 0.0 : decayed.back(); }
    double imbalance() const {
        return input_energy - output_energy - final_stored() - final_decayed();
    }
};

struct SimulationRecord {
    PulseSignal e_out; // field at z = L over the whole run
    std::vector<std::pair<double, FieldState>> snapshots;
    EnergyLedger ledger;
    std::vector<std::string> warnings;
};

struct SolverOptions {
    double dt = 1e-4;            // us; per-stage step is rounded to divide the stage
    SpaceGrid grid{512};
    double ledger_tolerance = 1e-3; // relative to input energy
    bool check_ledger = true;
    double snapshot_stride = 0.0;   // us between snapshots; 0 = stage boundaries only
};

// Cumulative trapezoidal solve of dE/dz = i sqrt(d) P with E(0) = e_in.
std::vector<cplx> integrate_field(std::span<const cplx> P, cplx e_in, double d, double dz);

// One integrating-factor RK4 step of (S, P) from absolute time t to t+dt.
// The stiff diagonal terms -(gamma + i Delta) P and -(gamma_S + i
// delta2(z,t)) S are propagated exactly (the chirp's quadratic phase
// integral in closed form); the coupling terms go through classical RK4 in
// the transformed frame. E is recomputed at every stage evaluation.
// `e_in(t)` supplies the boundary field.
FieldState step(const FieldState& state, const ControlSchedule& schedule,
                const MediumParams& medium, const SpaceGrid& grid, double t, double dt,
                const std::function<cplx(double)>& e_in);

// Integrate a full schedule. The input signal's grid times are absolute
// run times (t = 0 is the start of the first stage); the envelope is
// treated as zero outside its grid. e_out is sampled on the input's dt.
// Throws numerical_failure if the energy ledger fails to close.
SimulationRecord run(const PulseSignal& input, const ControlSchedule& schedule,
                     const MediumParams& medium, const SolverOptions& options = {});

} // namespace gemfrft

#endif
