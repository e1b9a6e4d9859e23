//! Holonomic controlled gates: Hamiltonian builders, π-pulse evolution,
//! logical-gate extraction and the analytic targets they must reproduce.

mod hamiltonian;
mod instance;
mod params;
mod target;

pub use hamiltonian::{
    build_h1, build_h2, build_h3, gate_frame, h1_expr, h2_expr, h3_expr, placement_ancillas, Placement,
};
pub use instance::{
    make_gate, run_gate, FrameMode, GateBuilder, GateInstance, GateKind, GateSettings, Pulse, FULL_FRAME_LIMIT,
};
pub use params::{angle_distance, phase_angles, reduce_angle, Couplings, FredkinParams, GateParams, PhaseAngles};
pub use target::{
    cnot, dressed_c1u_basis, dressed_c1u_evolution, fredkin_bright_dark, pauli_x, permute_logical_operator,
    place_logical_gate, rotation_form, target_c1u, target_c2u, target_fredkin, target_u, target_u_from, toffoli,
};
