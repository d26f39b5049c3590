//! Martingales, maximal functions, and the atomic Hardy space H_p.
//!
//! On the truncated group the σ-algebra F_n is generated by the rank-n
//! intervals, so conditioning is plain cell averaging, and the conditional
//! expectations coincide with the scale partial sums: E_n f = S_{M_n} f.
//! A martingale is therefore determined by its finest level — that is how
//! `Martingale` stores one — with the coarser levels derived on demand.
//!
//! The maximal function is f*(x) = max_{0≤n≤N} |f^{(n)}(x)|, the H_p
//! quasinorm is ‖f‖_{H_p} = ‖f*‖_{L_p}, and a p-atom is a function
//! supported on an interval I with zero mean and ‖a‖_∞ ≤ μ(I)^{−1/p};
//! every such atom satisfies ‖a‖_{H_p} ≤ 1. Atomic synthesis maps weights
//! μ_k and atoms a_k to the martingale with levels Σ_k μ_k·S_{M_n} a_k —
//! at finite depth that is simply the martingale generated by Σ_k μ_k·a_k.
//!
//! `make_atom` draws random atoms with a twist worth knowing about: the
//! values are a power-of-two multiple of integers whose sum is adjusted to
//! exactly zero, so every cell average over the full support cancels to an
//! exact floating-point 0, and the maximal function vanishes *identically*
//! off the support rather than merely up to roundoff.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{GroupSpec, Interval};
use crate::system::Characters;
use crate::transform::GridFunction;

/// Validation slack for atoms: the mean may be off by this fraction of the
/// sup bound, and the sup bound itself gets the same relative headroom.
pub const ATOM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum HardyError {
    #[error("exponent p = {0} is not positive")]
    NonPositiveExponent(f64),
    #[error("coefficient index {index} is outside 0..{points}")]
    CoefficientOutOfRange { index: u64, points: u64 },
    #[error("decomposition has {weights} weights but {atoms} atoms")]
    MismatchedDecomposition { weights: usize, atoms: usize },
    #[error("atom {0} disagrees with the decomposition exponent")]
    MixedExponents(usize),
    #[error("atom {0} lives on a different group")]
    MixedGroups(usize),
}

/// Conditional expectation E_n f: the average of f over each rank-n cell,
/// constant on cells. E_0 is the global mean, E_N the identity.
pub fn condition(f: &GridFunction, n: usize) -> GridFunction {
    let spec = f.spec().clone();
    assert!(n <= spec.depth(), "conditioning level {n} out of range");
    let len = f.len();
    let cell = spec.scale(n) as usize;
    let reps = len / cell;
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for q in 0..cell {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..reps {
            acc += f.samples()[q + t * cell];
        }
        let mean = acc / reps as f64;
        for t in 0..reps {
            out[q + t * cell] = mean;
        }
    }
    GridFunction::from_samples(&spec, out)
}

/// A martingale adapted to the interval filtration, stored as its finest
/// level f^{(N)}; coarser levels are conditioned out of it on demand.
#[derive(Debug, Clone)]
pub struct Martingale {
    finest: GridFunction,
}

impl Martingale {
    pub fn from_grid(finest: GridFunction) -> Self {
        Martingale { finest }
    }

    pub fn spec(&self) -> &GroupSpec {
        self.finest.spec()
    }

    pub fn finest(&self) -> &GridFunction {
        &self.finest
    }

    /// f^{(n)} = E_n f^{(N)}.
    pub fn level(&self, n: usize) -> GridFunction {
        condition(&self.finest, n)
    }

    /// The maximal function f* = max_n |f^{(n)}|, returned as a real-valued
    /// grid.
    ///
    /// Each level's cell means are summed directly from the finest samples —
    /// never from coarser means — so a cell whose samples cancel exactly
    /// yields an exact zero instead of inheriting rounded intermediate
    /// divisions. The sweep costs O(M_N·N).
    pub fn maximal(&self) -> GridFunction {
        let spec = self.spec().clone();
        let len = self.finest.len();
        let mut best: Vec<f64> = self.finest.samples().iter().map(|v| v.norm()).collect();
        for n in 0..spec.depth() {
            let cell = spec.scale(n) as usize;
            let reps = len / cell;
            for q in 0..cell {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..reps {
                    acc += self.finest.samples()[q + t * cell];
                }
                let v = (acc / reps as f64).norm();
                for t in 0..reps {
                    let slot = &mut best[q + t * cell];
                    if v > *slot {
                        *slot = v;
                    }
                }
            }
        }
        GridFunction::from_samples(
            &spec,
            best.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// f̂(i) computed from the finest level. Stable in the level index: any
    /// level k with M_k > i gives the same value.
    pub fn coefficient(&self, i: u64) -> Result<Complex64, HardyError> {
        let points = self.spec().points();
        if i >= points {
            return Err(HardyError::CoefficientOutOfRange { index: i, points });
        }
        let chars = Characters::new(self.spec());
        let mut row = vec![Complex64::new(0.0, 0.0); self.finest.len()];
        chars.character_grid(i, &mut row);
        let dot: Complex64 = self
            .finest
            .samples()
            .iter()
            .zip(&row)
            .map(|(v, psi)| v * psi.conj())
            .sum();
        Ok(dot / points as f64)
    }
}

/// ‖g‖_{L_p} = ((1/M_N) Σ_x |g(x)|^p)^{1/p}, a quasinorm for p < 1.
pub fn lp_quasinorm(g: &GridFunction, p: f64) -> Result<f64, HardyError> {
    if p <= 0.0 || !p.is_finite() {
        return Err(HardyError::NonPositiveExponent(p));
    }
    let sum: f64 = g.samples().iter().map(|v| v.norm().powf(p)).sum();
    Ok((sum / g.len() as f64).powf(1.0 / p))
}

/// ‖f‖_{H_p} = ‖f*‖_{L_p}.
pub fn hp_quasinorm(f: &Martingale, p: f64) -> Result<f64, HardyError> {
    lp_quasinorm(&f.maximal(), p)
}

/// A p-atom: supported on `interval`, zero mean, sup bounded by
/// μ(interval)^{−1/p}.
#[derive(Debug, Clone)]
pub struct Atom {
    p: f64,
    interval: Interval,
    values: GridFunction,
}

impl Atom {
    pub fn new(p: f64, interval: Interval, values: GridFunction) -> Self {
        assert!(p > 0.0, "atom exponent must be positive");
        Atom {
            p,
            interval,
            values,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    pub fn spec(&self) -> &GroupSpec {
        self.values.spec()
    }

    /// μ(I)^{−1/p}, the admissible sup bound.
    pub fn sup_bound(&self) -> f64 {
        (self.spec().scale(self.interval.rank()) as f64).powf(1.0 / self.p)
    }
}

/// Diagnostics from [`validate_atom`].
#[derive(Debug, Clone, Copy)]
pub struct AtomCheck {
    pub support_ok: bool,
    pub mean_ok: bool,
    pub sup_ok: bool,
    pub mean_abs: f64,
    pub sup: f64,
    pub sup_bound: f64,
}

impl AtomCheck {
    pub fn is_valid(&self) -> bool {
        self.support_ok && self.mean_ok && self.sup_ok
    }
}

/// Checks the three defining properties: support inside the interval
/// (exactly — off-support samples must be bitwise zero), mean within
/// [`ATOM_TOL`]·bound of zero, and sup within relative [`ATOM_TOL`] of the
/// bound.
pub fn validate_atom(atom: &Atom) -> AtomCheck {
    let spec = atom.spec();
    let interval = atom.interval();
    let zero = Complex64::new(0.0, 0.0);

    let mut mean = Complex64::new(0.0, 0.0);
    let mut sup = 0.0f64;
    let mut support_ok = true;
    let member_step = spec.scale(interval.rank());
    let prefix = interval.prefix_rank(spec);
    for (r, &v) in atom.values().samples().iter().enumerate() {
        if r as u64 % member_step == prefix {
            mean += v;
            sup = sup.max(v.norm());
        } else if v != zero {
            support_ok = false;
        }
    }
    let mean_abs = (mean / atom.values().len() as f64).norm()
        * spec.scale(interval.rank()) as f64; // normalize to the interval, not the group
    let sup_bound = atom.sup_bound();
    AtomCheck {
        support_ok,
        mean_ok: mean_abs <= ATOM_TOL * sup_bound,
        sup_ok: sup <= sup_bound * (1.0 + ATOM_TOL),
        mean_abs,
        sup,
        sup_bound,
    }
}

/// Draws a random p-atom on `interval`, deterministically from `seed`.
///
/// Values are sampled as integers, shifted to an exactly zero sum, and
/// scaled by the largest power of two that keeps the sup within bound —
/// every arithmetic step stays exact in f64, which is what makes the
/// off-support maximal function *exactly* zero downstream.
///
/// A rank-0 interval admits only the zero atom (zero mean forces it), and a
/// rank-N interval likewise (single point); both come back as zero grids.
pub fn make_atom(spec: &GroupSpec, interval: Interval, p: f64, seed: u64) -> Atom {
    assert!(p > 0.0, "atom exponent must be positive");
    let mut values = GridFunction::zeros(spec);
    if interval.rank() == 0 {
        return Atom::new(p, interval, values);
    }

    let members: Vec<u64> = interval.member_ranks(spec).collect();
    let count = members.len() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const RESOLUTION: i64 = 1 << 20;
    let mut draws: Vec<i64> = (0..count)
        .map(|_| rng.gen_range(-RESOLUTION..=RESOLUTION))
        .collect();

    // Shift to an exactly zero integer sum: subtract the floor mean
    // everywhere, then drop the remainder one unit at a time.
    let total: i64 = draws.iter().sum();
    let floor_mean = total.div_euclid(count);
    let remainder = total.rem_euclid(count);
    for d in draws.iter_mut() {
        *d -= floor_mean;
    }
    for d in draws.iter_mut().take(remainder as usize) {
        *d -= 1;
    }
    debug_assert_eq!(draws.iter().sum::<i64>(), 0);

    let peak = draws.iter().map(|d| d.abs()).max().unwrap_or(0);
    if peak > 0 {
        let bound = (spec.scale(interval.rank()) as f64).powf(1.0 / p);
        let mut exponent = (bound / peak as f64).log2().floor();
        // Guard the boundary against log/pow roundoff.
        while peak as f64 * exponent.exp2() > bound {
            exponent -= 1.0;
        }
        let unit = exponent.exp2();
        for (&rank, &d) in members.iter().zip(&draws) {
            values.samples_mut()[rank as usize] = Complex64::new(d as f64 * unit, 0.0);
        }
    }
    Atom::new(p, interval, values)
}

/// Weights μ_k and p-atoms a_k destined for synthesis.
#[derive(Debug, Clone)]
pub struct AtomicDecomposition {
    p: f64,
    weights: Vec<f64>,
    atoms: Vec<Atom>,
}

impl AtomicDecomposition {
    pub fn new(p: f64, weights: Vec<f64>, atoms: Vec<Atom>) -> Result<Self, HardyError> {
        if p <= 0.0 || !p.is_finite() {
            return Err(HardyError::NonPositiveExponent(p));
        }
        if weights.len() != atoms.len() {
            return Err(HardyError::MismatchedDecomposition {
                weights: weights.len(),
                atoms: atoms.len(),
            });
        }
        for (k, atom) in atoms.iter().enumerate() {
            if atom.p() != p {
                return Err(HardyError::MixedExponents(k));
            }
            if k > 0 && atom.spec() != atoms[0].spec() {
                return Err(HardyError::MixedGroups(k));
            }
        }
        Ok(AtomicDecomposition { p, weights, atoms })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Atomic synthesis: the martingale whose level n is Σ_k μ_k·S_{M_n} a_k.
/// At finite depth that is the martingale generated by Σ_k μ_k·a_k.
pub fn synthesize(d: &AtomicDecomposition) -> Martingale {
    assert!(!d.is_empty(), "cannot synthesize an empty decomposition");
    let spec = d.atoms()[0].spec().clone();
    let mut finest = GridFunction::zeros(&spec);
    for (&w, atom) in d.weights().iter().zip(d.atoms()) {
        finest.add_scaled(Complex64::new(w, 0.0), atom.values());
    }
    Martingale::from_grid(finest)
}

/// f̂(i) of a martingale; see [`Martingale::coefficient`].
pub fn martingale_coefficient(f: &Martingale, i: u64) -> Result<Complex64, HardyError> {
    f.coefficient(i)
}
