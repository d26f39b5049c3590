//! Vilenkin–Fourier analysis on finite truncations of bounded Vilenkin
//! groups.
//!
//! A bounded Vilenkin group is the product of cyclic groups Z_{m_0} ×
//! Z_{m_1} × … with a bounded radix sequence; truncating after N factors
//! gives a finite group of M_N = m_0·…·m_{N−1} points that carries the
//! whole apparatus exactly: characters ψ_n (the Vilenkin system, Walsh–Paley
//! when every m_k = 2), Dirichlet kernels and partial sums, martingales
//! over the interval filtration, maximal functions, and the atomic Hardy
//! spaces H_p for 0 < p < 1.
//!
//! The crate is organized the way the mathematics is:
//!
//! * [`group`] — the truncated group: mixed-radix scales, points, intervals
//!   I_n(x), and shells I_s∖I_{s+1};
//! * [`system`] — Rademacher functions, the character system ψ_n, and
//!   Dirichlet kernels D_n with their closed forms;
//! * [`transform`] — forward/inverse Vilenkin–Fourier transforms (a naive
//!   quadratic oracle and a factorized fast path), partial sums by
//!   truncation, by kernel convolution, and as an incremental stream;
//! * [`hardy`] — martingales, conditional expectations, maximal functions,
//!   L_p/H_p quasinorms, p-atoms, and atomic synthesis;
//! * [`verify`] — the experiment layer: the weighted maximal operator
//!   S̃*_p, atom tail and nullity estimates, the coefficient-decay ratio
//!   |f̂(n)|/((n+1)^{1/p−1}‖f‖_{H_p}), and the sharpness counterexample
//!   built from Dirichlet-kernel differences;
//! * [`io`] — CSV interchange for grids, spectra, decompositions, and
//!   tabulated growth targets.
//!
//! Everything is deterministic: random inputs come from seeded ChaCha
//! streams, and equal inputs produce bitwise-equal outputs.

pub mod group;
pub mod hardy;
pub mod io;
pub mod system;
pub mod transform;
pub mod verify;

pub use num_complex::Complex64;

pub use group::{GroupError, GroupSpec, Interval, Point, Shell};
pub use hardy::{
    condition, hp_quasinorm, lp_quasinorm, make_atom, synthesize, validate_atom, Atom, AtomCheck,
    AtomicDecomposition, HardyError, Martingale,
};
pub use system::{roots_of_unity, Characters};
pub use transform::{
    forward_fast, forward_naive, incremental_sums, inverse, partial_sum, partial_sum_by_kernel,
    GridFunction, PartialSums, Spectrum,
};
pub use verify::{
    atom_nullity_check, atom_tail_integral, build_counterexample, choose_alphas,
    coefficient_bound_ratio, counterexample_atom, counterexample_coefficients, divergence_ratios,
    hardy_inequality_check, maximal_operator_sp, riemann_lebesgue_probe, run_atom_suite,
    run_bound_suite, run_counterexample, AtomSuiteConfig, AtomSuiteReport, BoundReport,
    BoundSuiteConfig, Certification, CoefficientBound, Counterexample, CounterexampleConfig,
    CounterexampleReport, CounterexampleSpec, HardyCheck, NullityReport, PhiFamily, PhiSpec,
    TailReport, VerifyError,
};
