//! Ready-to-audit clocks.

pub mod circle;
pub mod clocks;
pub mod instance;
pub mod switch;

pub use circle::{make_circle_clock, sector_block, sector_moment, CircleProbe};
pub use clocks::{make_rabi_clock, make_relaxation_clock, make_spin_rotation_clock};
pub use instance::{ClockInstance, FastPath, ProbePath};
pub use switch::{make_bit_switch, make_bit_switch_with, BitSwitch, SwitchWindow};

/// `(name, parameters, description)` for every constructor.
pub const CATALOG: &[(&str, &str, &str)] = &[
    ("rabi", "bandwidth", "qubit H = (dE/2) sigma_x from |0>, Z readout, horizon pi/dE"),
    ("circle", "k, n_sectors", "k Fourier modes on the circle, arc-sector readout, horizon 2 pi, dE = k - 1"),
    ("relaxation", "rate", "amplitude damping |1> -> |0>, population readout, no entropy cost"),
    ("spin", "k, delta_alpha", "spin k/2 rotated about z, arc-sector readout certifying delta_alpha, dE = k"),
    ("switch", "bandwidth, rate", "dephased qubit switching 1/4 -> 3/4, Z-basis dephasing at the given rate"),
];
