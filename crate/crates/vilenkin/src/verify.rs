//! Empirical harness for Vilenkin–Fourier coefficient decay and its
//! sharpness.
//!
//! Two experiments drive everything here. The *bound* side measures
//! max_n |f̂(n)|/((n+1)^{1/p−1}·‖f‖_{H_p}) over random single-atom
//! martingales — the ratio that coefficient decay on H_p (0 < p < 1) says
//! is bounded by a constant c_p. Its supporting estimates are checked
//! directly: the weighted maximal operator S̃*_p f = max_n |S_n f|/(n+1)^{1/p−1},
//! nullity S_n a = 0 for n ≤ M_{N_a} on atoms, and the tail integral
//! ∫_{G∖I} (S̃*_p a)^p dμ ≤ λ^{2p}·Σ_{s<N_a} M_s^{p−1} obtained by summing
//! the shell estimate |S_n a| ≤ ‖a‖_∞·μ(I)·λM_s over the complement.
//!
//! The *sharpness* side builds the classical counterexample: given a
//! nondecreasing Φ growing strictly slower than n^{1/p−1}, pick scales
//! α_0 < α_1 < … with (Φ(M_α)/M_α^{1/p−1})^{p/2} geometrically small, set
//!
//!   a_k = (M_{α_k}^{1/p−1}/λ)·(D_{M_{α_k+1}} − D_{M_{α_k}}),
//!   f   = Σ_k (Φ(M_{α_k})/M_{α_k}^{1/p−1})^{1/2} · a_k.
//!
//! Each a_k is a genuine p-atom, f ∈ H_p by the geometric budget, the
//! spectrum of f is constant on the blocks [M_{α_k}, M_{α_k+1}) and zero
//! elsewhere, and ρ_k = f̂(M_{α_k})/Φ(M_{α_k}) increases without bound —
//! so no bound of the form |f̂(n)| ≤ c·Φ(n) can hold.
//!
//! Auxiliary probes: the Hardy-type sum Σ_k |f̂(k)|^p/k^{2−p} against
//! ‖f‖_{H_p}^p, and a windowed Riemann–Lebesgue tail scan.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{GroupSpec, Point};
use crate::hardy::{
    hp_quasinorm, make_atom, validate_atom, Atom, AtomicDecomposition, HardyError, Martingale,
};
use crate::transform::{forward_fast, incremental_sums, GridFunction};

/// Partial sums of an atom below its own scale must vanish to within this
/// fraction of the atom's sup norm.
pub const NULLITY_TOL: f64 = 1e-10;
/// Slack on the unit H_p budget of a single atom.
pub const HP_TOL: f64 = 1e-10;
/// Relative agreement required between numeric and closed-form
/// counterexample coefficients on the blocks.
pub const COEFF_REL_TOL: f64 = 1e-9;
/// Absolute ceiling for counterexample coefficients off the blocks.
pub const OFFBLOCK_ABS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("exponent p = {p} outside required range {range}")]
    ExponentOutOfRange { p: f64, range: &'static str },
    #[error("power growth exponent γ = {0} is negative; Φ must be nondecreasing")]
    DecreasingPower(f64),
    #[error("constant Φ must be positive, got {0}")]
    NonPositiveConstant(f64),
    #[error("tabulated Φ must be nonnegative and nondecreasing (violated at row {0})")]
    NonMonotoneTable(usize),
    #[error("tabulated Φ needs at least one row")]
    EmptyTable,
    #[error("Φ(n) = n^{gamma} does not grow slower than n^(1/p−1) = n^{threshold}")]
    GrowthNotCertified { gamma: f64, threshold: f64 },
    #[error("budget ratio r = {0} must lie strictly between 0 and 1")]
    InvalidBudget(f64),
    #[error("no scale index admits the geometric budget: {0}")]
    NoAdmissibleIndex(String),
    #[error("invalid scale-index sequence: {0}")]
    BadAlphas(String),
    #[error("martingale has zero maximal function; ratios are undefined")]
    ZeroMartingale,
    #[error("coefficient index bound {n_max} is not below the grid size {points}")]
    NMaxTooLarge { n_max: u64, points: u64 },
    #[error("window width must be at least 1")]
    ZeroWindow,
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("need at least 2 blocks to witness growth, got {0}")]
    TooFewBlocks(usize),
    #[error(transparent)]
    Hardy(#[from] HardyError),
}

// ---------------------------------------------------------------------------
// Growth targets Φ

/// The shape of a growth target Φ, evaluated on positive integers.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiFamily {
    /// Φ(n) = n^γ with γ ≥ 0.
    Power { gamma: f64 },
    /// Φ(n) = ln n.
    Log,
    /// Φ(n) = c with c > 0.
    Constant { value: f64 },
    /// Right-continuous step function through `(n, Φ(n))` rows sorted by n;
    /// flat extension outside the tabulated range.
    Tabulated { rows: Vec<(u64, f64)> },
}

/// Outcome of checking that Φ grows strictly slower than n^{1/p−1} along
/// some subsequence — the hypothesis that makes the sharpness construction
/// possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    /// The condition holds analytically for the family.
    Certified,
    /// The family is plausible but the limit condition cannot be decided
    /// from finitely many values; proceed with the attached caveat.
    AcceptedWithWarning(String),
}

/// A growth target Φ paired with the exponent p it will be measured
/// against.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    family: PhiFamily,
    p: f64,
}

impl PhiSpec {
    /// Validates shape constraints (nonnegative, nondecreasing, p ∈ (0,1));
    /// growth certification is a separate concern, see [`Self::certification`].
    pub fn new(family: PhiFamily, p: f64) -> Result<Self, VerifyError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(VerifyError::ExponentOutOfRange { p, range: "(0,1)" });
        }
        match &family {
            PhiFamily::Power { gamma } => {
                if !(*gamma >= 0.0) || !gamma.is_finite() {
                    return Err(VerifyError::DecreasingPower(*gamma));
                }
            }
            PhiFamily::Log => {}
            PhiFamily::Constant { value } => {
                if !(*value > 0.0) || !value.is_finite() {
                    return Err(VerifyError::NonPositiveConstant(*value));
                }
            }
            PhiFamily::Tabulated { rows } => {
                if rows.is_empty() {
                    return Err(VerifyError::EmptyTable);
                }
                for (i, w) in rows.windows(2).enumerate() {
                    if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                        return Err(VerifyError::NonMonotoneTable(i + 1));
                    }
                }
                if rows[0].1 < 0.0 {
                    return Err(VerifyError::NonMonotoneTable(0));
                }
            }
        }
        Ok(PhiSpec { family, p })
    }

    pub fn family(&self) -> &PhiFamily {
        &self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Φ(n) for n ≥ 1.
    pub fn value(&self, n: u64) -> f64 {
        debug_assert!(n >= 1, "Φ is evaluated on positive integers");
        match &self.family {
            PhiFamily::Power { gamma } => (n as f64).powf(*gamma),
            PhiFamily::Log => (n as f64).ln(),
            PhiFamily::Constant { value } => *value,
            PhiFamily::Tabulated { rows } => {
                let mut current = rows[0].1;
                for &(at, phi) in rows {
                    if at <= n {
                        current = phi;
                    } else {
                        break;
                    }
                }
                current
            }
        }
    }

    /// Certifies (or refuses to certify) that n^{1/p−1}/Φ(n) is unbounded.
    ///
    /// Power targets qualify exactly when γ < 1/p − 1; log and constant
    /// targets always do; tabulated targets pass with a warning because a
    /// finite table cannot witness a limit.
    pub fn certification(&self) -> Result<Certification, VerifyError> {
        let threshold = 1.0 / self.p - 1.0;
        match &self.family {
            PhiFamily::Power { gamma } => {
                if *gamma < threshold {
                    Ok(Certification::Certified)
                } else {
                    Err(VerifyError::GrowthNotCertified {
                        gamma: *gamma,
                        threshold,
                    })
                }
            }
            PhiFamily::Log | PhiFamily::Constant { .. } => Ok(Certification::Certified),
            PhiFamily::Tabulated { .. } => Ok(Certification::AcceptedWithWarning(
                "tabulated Φ: monotonicity checked, asymptotic growth not certified".to_string(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Maximal operator, tail estimate, nullity

/// S̃*_p f(x) = max_{1 ≤ n ≤ n_max} |S_n f(x)|/(n+1)^{1/p−1}, streamed in
/// O(n_max·M_N).
pub fn maximal_operator_sp(
    f: &GridFunction,
    p: f64,
    n_max: u64,
) -> Result<GridFunction, VerifyError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(VerifyError::ExponentOutOfRange { p, range: "(0,1)" });
    }
    let spec = f.spec().clone();
    if n_max > spec.points() {
        return Err(VerifyError::NMaxTooLarge {
            n_max,
            points: spec.points(),
        });
    }
    let exponent = 1.0 / p - 1.0;
    let spectrum = forward_fast(f);
    let mut best = vec![0.0f64; f.len()];
    let mut sums = incremental_sums(&spectrum, n_max);
    while let Some((n, running)) = sums.advance() {
        let weight = ((n + 1) as f64).powf(exponent);
        for (slot, v) in best.iter_mut().zip(running) {
            let r = v.norm() / weight;
            if r > *slot {
                *slot = r;
            }
        }
    }
    Ok(GridFunction::from_samples(
        &spec,
        best.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    ))
}

/// The tail integral of an atom and the constant it must stay under.
#[derive(Debug, Clone)]
pub struct TailReport {
    /// ∫ over the complement of the supporting interval of (S̃*_p a)^p dμ.
    pub integral: f64,
    /// Contribution of each shell s < N_a (points first disagreeing with the
    /// base at coordinate s).
    pub per_shell: Vec<f64>,
    /// λ^{2p}·Σ_{s<N_a} M_s^{p−1}, the shell-sum ceiling.
    pub spec_bound: f64,
}

/// Integrates (S̃*_p a)^p over the complement of the atom's interval, shell
/// by shell, and reports it against the closed ceiling.
pub fn atom_tail_integral(a: &Atom, p: f64) -> Result<TailReport, VerifyError> {
    let spec = a.spec().clone();
    let rank = a.interval().rank();
    let star = maximal_operator_sp(a.values(), p, spec.points())?;
    let base = a.interval().base().clone();
    let mut per_shell = vec![0.0f64; rank];
    for r in 0..spec.points() {
        let x = spec.digits(r).expect("rank below M_N");
        if let Some(s) = spec.first_disagreement(&x, &base) {
            if s < rank {
                per_shell[s] += star.value(r).re.powf(p);
            }
        }
    }
    let measure = 1.0 / spec.points() as f64;
    for v in per_shell.iter_mut() {
        *v *= measure;
    }
    let integral = per_shell.iter().sum();
    let lambda = spec.lambda() as f64;
    let spec_bound = lambda.powf(2.0 * p)
        * (0..rank)
            .map(|s| (spec.scale(s) as f64).powf(p - 1.0))
            .sum::<f64>();
    Ok(TailReport {
        integral,
        per_shell,
        spec_bound,
    })
}

/// Whether all partial sums up to the atom's own scale vanish.
#[derive(Debug, Clone, Copy)]
pub struct NullityReport {
    pub ok: bool,
    /// max over n ≤ M_{N_a} and x of |S_n a(x)|.
    pub worst: f64,
    /// [`NULLITY_TOL`]·‖a‖_∞.
    pub threshold: f64,
}

/// An atom is orthogonal to every character below its scale, so S_n a must
/// vanish for n ≤ M_{N_a}; this measures how close to zero the computed
/// sums actually stay.
pub fn atom_nullity_check(a: &Atom) -> NullityReport {
    let spec = a.spec();
    let scale = spec.scale(a.interval().rank());
    let spectrum = forward_fast(a.values());
    let mut worst = 0.0f64;
    let mut sums = incremental_sums(&spectrum, scale);
    while let Some((_, running)) = sums.advance() {
        for v in running {
            worst = worst.max(v.norm());
        }
    }
    let threshold = NULLITY_TOL * a.values().sup_norm();
    NullityReport {
        ok: worst <= threshold,
        worst,
        threshold,
    }
}

// ---------------------------------------------------------------------------
// The coefficient bound

/// One measurement of the normalized coefficient maximum.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientBound {
    /// Index attaining the (n+1)-normalized maximum.
    pub n_star: u64,
    /// max_{0 ≤ n ≤ n_max} |f̂(n)|/((n+1)^{1/p−1}·‖f‖_{H_p}).
    pub ratio: f64,
    /// Same maximum under the n^{1/p−1} normalization, over n ≥ 1.
    pub c_p_ratio: f64,
    pub hp_norm: f64,
}

/// Measures how large |f̂(n)| gets relative to (n+1)^{1/p−1}·‖f‖_{H_p}.
pub fn coefficient_bound_ratio(
    f: &Martingale,
    p: f64,
    n_max: u64,
) -> Result<CoefficientBound, VerifyError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(VerifyError::ExponentOutOfRange { p, range: "(0,1)" });
    }
    let points = f.spec().points();
    if n_max >= points {
        return Err(VerifyError::NMaxTooLarge { n_max, points });
    }
    let hp_norm = hp_quasinorm(f, p)?;
    if hp_norm == 0.0 {
        return Err(VerifyError::ZeroMartingale);
    }
    let exponent = 1.0 / p - 1.0;
    let spectrum = forward_fast(f.finest());
    let mut n_star = 0u64;
    let mut ratio = 0.0f64;
    let mut c_p_ratio = 0.0f64;
    for n in 0..=n_max {
        let magnitude = spectrum.coeff(n).norm();
        let r = magnitude / (((n + 1) as f64).powf(exponent) * hp_norm);
        if r > ratio {
            ratio = r;
            n_star = n;
        }
        if n >= 1 {
            let rt = magnitude / ((n as f64).powf(exponent) * hp_norm);
            c_p_ratio = c_p_ratio.max(rt);
        }
    }
    debug_assert!(ratio.is_finite() && ratio >= 0.0);
    Ok(CoefficientBound {
        n_star,
        ratio,
        c_p_ratio,
        hp_norm,
    })
}

// ---------------------------------------------------------------------------
// The sharpness construction

/// Greedy scale selection for the counterexample: α_k is the smallest index
/// above α_{k−1} (starting at 1) whose series term
/// (Φ(M_α)/M_α^{1/p−1})^{p/2} falls below r^k, so the whole series is
/// dominated by Σ r^k = 1/(1−r).
///
/// Returns as many indices as fit with α_k + 1 ≤ N, capped at `max_terms`;
/// it is an error only when not even the first index exists.
pub fn choose_alphas(
    phi: &PhiSpec,
    spec: &GroupSpec,
    r: f64,
    max_terms: usize,
) -> Result<Vec<usize>, VerifyError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(VerifyError::InvalidBudget(r));
    }
    phi.certification()?;
    let p = phi.p();
    let exponent = 1.0 / p - 1.0;
    let term = |alpha: usize| -> f64 {
        let m_alpha = spec.scale(alpha);
        (phi.value(m_alpha) / (m_alpha as f64).powf(exponent)).powf(p / 2.0)
    };
    let mut alphas = Vec::new();
    let mut next = 1usize;
    for k in 0.. {
        if alphas.len() == max_terms {
            break;
        }
        let budget = r.powi(k);
        let found = (next..spec.depth()).find(|&alpha| term(alpha) <= budget);
        match found {
            Some(alpha) => {
                alphas.push(alpha);
                next = alpha + 1;
            }
            None => break,
        }
    }
    if alphas.is_empty() {
        return Err(VerifyError::NoAdmissibleIndex(format!(
            "no α with 1 ≤ α < {} has series term ≤ 1",
            spec.depth()
        )));
    }
    Ok(alphas)
}

/// Everything needed to build and predict the counterexample martingale:
/// the exponent, the growth target, the selected scales, the normalizer
/// λ = max radix, and the block weights.
#[derive(Debug, Clone)]
pub struct CounterexampleSpec {
    group: GroupSpec,
    phi: PhiSpec,
    alphas: Vec<usize>,
    big_m: f64,
    weights: Vec<f64>,
}

impl CounterexampleSpec {
    pub fn new(
        group: &GroupSpec,
        phi: PhiSpec,
        alphas: Vec<usize>,
    ) -> Result<Self, VerifyError> {
        if alphas.is_empty() {
            return Err(VerifyError::BadAlphas("no scale indices".to_string()));
        }
        if alphas[0] == 0 {
            return Err(VerifyError::BadAlphas(
                "scale indices must start at 1 (the 0th block has no room below it)".to_string(),
            ));
        }
        for w in alphas.windows(2) {
            if w[1] <= w[0] {
                return Err(VerifyError::BadAlphas(format!(
                    "indices must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        let last = *alphas.last().expect("nonempty");
        if last + 1 > group.depth() {
            return Err(VerifyError::BadAlphas(format!(
                "α = {last} needs scale index {} but the group stops at {}",
                last + 1,
                group.depth()
            )));
        }
        let p = phi.p();
        let exponent = 1.0 / p - 1.0;
        let mut weights = Vec::with_capacity(alphas.len());
        for &alpha in &alphas {
            let m_alpha = group.scale(alpha);
            let phi_value = phi.value(m_alpha);
            if !(phi_value > 0.0) {
                return Err(VerifyError::BadAlphas(format!(
                    "Φ(M_{alpha}) = Φ({m_alpha}) = {phi_value} is not positive"
                )));
            }
            weights.push((phi_value / (m_alpha as f64).powf(exponent)).sqrt());
        }
        Ok(CounterexampleSpec {
            group: group.clone(),
            phi,
            alphas,
            big_m: group.lambda() as f64,
            weights,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn p(&self) -> f64 {
        self.phi.p()
    }

    /// Selected scale indices α_0 < α_1 < …
    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    /// The normalizing constant in the atoms — the radix bound λ.
    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    /// Block weights w_k = (Φ(M_{α_k})/M_{α_k}^{1/p−1})^{1/2}.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Σ_k w_k^p — finite by construction, ≤ 1/(1−r) under the greedy
    /// selection with budget r.
    pub fn series_sum(&self) -> f64 {
        let p = self.p();
        self.weights.iter().map(|w| w.powf(p)).sum()
    }

    /// Predicted |f̂(j)| on the k-th block [M_{α_k}, M_{α_k+1}):
    /// (1/λ)·M_{α_k}^{(1/p−1)/2}·Φ(M_{α_k})^{1/2}.
    pub fn closed_coefficient(&self, k: usize) -> f64 {
        let m_alpha = self.group.scale(self.alphas[k]) as f64;
        let exponent = (1.0 / self.p() - 1.0) / 2.0;
        m_alpha.powf(exponent) * self.phi.value(m_alpha as u64).sqrt() / self.big_m
    }

    /// Predicted ρ_k = |f̂(M_{α_k})|/Φ(M_{α_k}).
    pub fn closed_rho(&self, k: usize) -> f64 {
        let m_alpha = self.group.scale(self.alphas[k]) as f64;
        let exponent = 1.0 / self.p() - 1.0;
        (m_alpha.powf(exponent) / self.phi.value(m_alpha as u64)).sqrt() / self.big_m
    }

    /// The half-open coefficient blocks [M_{α_k}, M_{α_k+1}).
    pub fn blocks(&self) -> Vec<(u64, u64)> {
        self.alphas
            .iter()
            .map(|&a| (self.group.scale(a), self.group.scale(a + 1)))
            .collect()
    }
}

/// The k-th building block a_k = (M_{α_k}^{1/p−1}/λ)·(D_{M_{α_k+1}} − D_{M_{α_k}}):
/// a p-atom on I_{α_k}(0), constant on I_{α_k+1}(0) and on the surrounding
/// shell.
pub fn counterexample_atom(cs: &CounterexampleSpec, k: usize) -> Atom {
    let spec = cs.group();
    let alpha = cs.alphas()[k];
    let m_alpha = spec.scale(alpha);
    let m_next = spec.scale(alpha + 1);
    let c = (m_alpha as f64).powf(1.0 / cs.p() - 1.0) / cs.big_m();
    let inner = c * (m_next - m_alpha) as f64;
    let outer = -c * m_alpha as f64;
    let mut values = GridFunction::zeros(spec);
    for rank in (0..spec.points()).step_by(m_alpha as usize) {
        values.samples_mut()[rank as usize] = if rank % m_next == 0 {
            Complex64::new(inner, 0.0)
        } else {
            Complex64::new(outer, 0.0)
        };
    }
    let interval = spec
        .interval(alpha, Point::zero(spec))
        .expect("α below depth");
    Atom::new(cs.p(), interval, values)
}

/// A built counterexample: the martingale, plus the decomposition it came
/// from for inspection and reporting.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub martingale: Martingale,
    pub decomposition: AtomicDecomposition,
}

/// Synthesizes f = Σ_k w_k·a_k from the selected scales.
pub fn build_counterexample(cs: &CounterexampleSpec) -> Counterexample {
    let atoms: Vec<Atom> = (0..cs.alphas().len())
        .map(|k| counterexample_atom(cs, k))
        .collect();
    let decomposition = AtomicDecomposition::new(cs.p(), cs.weights().to_vec(), atoms)
        .expect("weights and atoms are built in lockstep");
    let martingale = crate::hardy::synthesize(&decomposition);
    Counterexample {
        martingale,
        decomposition,
    }
}

/// One block's worth of coefficient comparison.
#[derive(Debug, Clone, Copy)]
pub struct BlockRow {
    pub k: usize,
    pub alpha: usize,
    pub m_alpha: u64,
    /// |f̂(M_{α_k})| from the transform.
    pub coeff_numeric: f64,
    /// The predicted block value.
    pub coeff_closed: f64,
    pub phi_value: f64,
    /// coeff_numeric / phi_value.
    pub rho: f64,
}

/// Block-by-block comparison of the built martingale's spectrum against the
/// closed form, plus the off-block residue and the growth certificate.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub rows: Vec<BlockRow>,
    /// Worst relative deviation |f̂(j) − closed|/closed over every j in
    /// every block.
    pub max_block_rel_err: f64,
    /// Largest |f̂(j)| over every j outside all blocks.
    pub max_offblock_abs: f64,
    /// Whether ρ_k strictly increases in k.
    pub monotone: bool,
    pub series_sum: f64,
}

impl CounterexampleReport {
    /// The construction is accepted when the spectrum matches the closed
    /// form on and off the blocks and the ratios actually grow.
    pub fn ok(&self) -> bool {
        self.max_block_rel_err <= COEFF_REL_TOL
            && self.max_offblock_abs <= OFFBLOCK_ABS_TOL
            && self.monotone
    }
}

/// Compares the computed spectrum of a built counterexample with its
/// predicted block structure.
pub fn counterexample_coefficients(
    f: &Martingale,
    cs: &CounterexampleSpec,
) -> CounterexampleReport {
    let spectrum = forward_fast(f.finest());
    let blocks = cs.blocks();
    let mut rows = Vec::with_capacity(blocks.len());
    let mut max_block_rel_err = 0.0f64;
    for (k, &(lo, hi)) in blocks.iter().enumerate() {
        let closed = cs.closed_coefficient(k);
        for j in lo..hi {
            let err = (spectrum.coeff(j) - closed).norm() / closed;
            max_block_rel_err = max_block_rel_err.max(err);
        }
        let numeric = spectrum.coeff(lo).norm();
        let m_alpha = cs.group().scale(cs.alphas()[k]);
        let phi_value = cs.phi().value(m_alpha);
        rows.push(BlockRow {
            k,
            alpha: cs.alphas()[k],
            m_alpha,
            coeff_numeric: numeric,
            coeff_closed: closed,
            phi_value,
            rho: numeric / phi_value,
        });
    }
    let mut max_offblock_abs = 0.0f64;
    for j in 0..cs.group().points() {
        if blocks.iter().any(|&(lo, hi)| j >= lo && j < hi) {
            continue;
        }
        max_offblock_abs = max_offblock_abs.max(spectrum.coeff(j).norm());
    }
    let monotone = rows.windows(2).all(|w| w[1].rho > w[0].rho);
    CounterexampleReport {
        rows,
        max_block_rel_err,
        max_offblock_abs,
        monotone,
        series_sum: cs.series_sum(),
    }
}

/// The witness sequence ρ_k = |f̂(M_{α_k})|/Φ(M_{α_k}); needs at least two
/// blocks to say anything about growth.
pub fn divergence_ratios(
    f: &Martingale,
    cs: &CounterexampleSpec,
) -> Result<Vec<f64>, VerifyError> {
    if cs.alphas().len() < 2 {
        return Err(VerifyError::TooFewBlocks(cs.alphas().len()));
    }
    let report = counterexample_coefficients(f, cs);
    Ok(report.rows.iter().map(|r| r.rho).collect())
}

// ---------------------------------------------------------------------------
// Auxiliary probes

/// Both sides of the Hardy-type inequality Σ_{k≥1} |f̂(k)|^p/k^{2−p} ≤ c·‖f‖_{H_p}^p.
#[derive(Debug, Clone, Copy)]
pub struct HardyCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// lhs/rhs — the empirical constant.
    pub ratio: f64,
}

pub fn hardy_inequality_check(f: &Martingale, p: f64) -> Result<HardyCheck, VerifyError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(VerifyError::ExponentOutOfRange { p, range: "(0,1]" });
    }
    let rhs = hp_quasinorm(f, p)?.powf(p);
    if rhs == 0.0 {
        return Err(VerifyError::ZeroMartingale);
    }
    let spectrum = forward_fast(f.finest());
    let lhs: f64 = (1..f.spec().points())
        .map(|k| spectrum.coeff(k).norm().powf(p) / (k as f64).powf(2.0 - p))
        .sum();
    Ok(HardyCheck {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}

/// Windowed spectral tail scan: t_j = max{|f̂(n)| : n ∈ [j·w, (j+1)·w)}.
/// For f constant on rank-n₀ cells, every window beyond M_{n₀} is exactly
/// zero — the finite shadow of the Riemann–Lebesgue lemma.
pub fn riemann_lebesgue_probe(f: &GridFunction, window: u64) -> Result<Vec<f64>, VerifyError> {
    if window == 0 {
        return Err(VerifyError::ZeroWindow);
    }
    let spectrum = forward_fast(f);
    let points = f.spec().points();
    let count = points.div_ceil(window);
    let mut maxima = Vec::with_capacity(count as usize);
    for j in 0..count {
        let lo = j * window;
        let hi = ((j + 1) * window).min(points);
        let t = (lo..hi)
            .map(|n| spectrum.coeff(n).norm())
            .fold(0.0, f64::max);
        maxima.push(t);
    }
    Ok(maxima)
}

// ---------------------------------------------------------------------------
// Suite drivers

/// Configuration for a batch of random-atom checks.
#[derive(Debug, Clone)]
pub struct AtomSuiteConfig {
    pub group: GroupSpec,
    /// Exponents cycled across trials.
    pub ps: Vec<f64>,
    /// Interval ranks N_a cycled across trials.
    pub ranks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// When set, trial 0 is replaced by a deliberate non-atom (constant on
    /// its interval) as a negative control; the suite must then fail.
    pub inject_non_atom: bool,
}

/// Everything measured about one random atom.
#[derive(Debug, Clone)]
pub struct AtomTrial {
    pub trial: usize,
    pub p: f64,
    pub rank: usize,
    pub valid: bool,
    pub nullity: NullityReport,
    pub hp_norm: f64,
    pub tail: TailReport,
    /// Largest maximal-function value off the supporting interval — must be
    /// exactly zero for a genuine atom.
    pub off_support_max: f64,
}

impl AtomTrial {
    pub fn ok(&self) -> bool {
        self.valid
            && self.nullity.ok
            && self.hp_norm <= 1.0 + HP_TOL
            && self.tail.integral <= self.tail.spec_bound
            && self.off_support_max == 0.0
    }
}

#[derive(Debug, Clone)]
pub struct AtomSuiteReport {
    pub trials: Vec<AtomTrial>,
    pub max_tail: f64,
    pub max_spec_bound: f64,
    pub all_ok: bool,
}

/// Runs `trials` random atoms through the full battery: validity, nullity,
/// unit H_p budget, tail integral, and exact off-support vanishing of the
/// maximal function. Trial t draws from stream t of the seed, so runs are
/// reproducible and order-independent.
pub fn run_atom_suite(cfg: &AtomSuiteConfig) -> Result<AtomSuiteReport, VerifyError> {
    if cfg.trials == 0 {
        return Err(VerifyError::ZeroTrials);
    }
    let spec = &cfg.group;
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(t as u64);
        let p = cfg.ps[t % cfg.ps.len()];
        let rank = cfg.ranks[(t / cfg.ps.len()) % cfg.ranks.len()];
        let base = spec
            .digits(rng.gen_range(0..spec.points()))
            .expect("rank below M_N");
        let interval = spec.interval(rank, base).expect("rank within depth");
        let atom = if cfg.inject_non_atom && t == 0 {
            let level = (spec.scale(rank) as f64).powf(1.0 / p);
            let mut values = GridFunction::zeros(spec);
            for r in interval.member_ranks(spec) {
                values.samples_mut()[r as usize] = Complex64::new(level, 0.0);
            }
            Atom::new(p, interval, values)
        } else {
            make_atom(spec, interval, p, rng.gen())
        };

        let valid = validate_atom(&atom).is_valid();
        let nullity = atom_nullity_check(&atom);
        let martingale = Martingale::from_grid(atom.values().clone());
        let hp_norm = hp_quasinorm(&martingale, p)?;
        let tail = atom_tail_integral(&atom, p)?;
        let star = martingale.maximal();
        let mut off_support_max = 0.0f64;
        for r in 0..spec.points() {
            let x = spec.digits(r).expect("rank below M_N");
            if !atom.interval().contains(&x) {
                off_support_max = off_support_max.max(star.value(r).re);
            }
        }
        trials.push(AtomTrial {
            trial: t,
            p,
            rank,
            valid,
            nullity,
            hp_norm,
            tail,
            off_support_max,
        });
    }
    let max_tail = trials.iter().map(|t| t.tail.integral).fold(0.0, f64::max);
    let max_spec_bound = trials
        .iter()
        .map(|t| t.tail.spec_bound)
        .fold(0.0, f64::max);
    let all_ok = trials.iter().all(AtomTrial::ok);
    Ok(AtomSuiteReport {
        trials,
        max_tail,
        max_spec_bound,
        all_ok,
    })
}

/// Configuration for a batch of coefficient-bound measurements on random
/// single-atom martingales.
#[derive(Debug, Clone)]
pub struct BoundSuiteConfig {
    pub group: GroupSpec,
    pub p: f64,
    /// Interval rank of the generating atoms; `None` draws the rank
    /// uniformly from 1..N per trial. Mixed ranks keep the sampled geometry
    /// comparable across truncation depths — a fixed rank drifts toward
    /// coarser relative support as N grows, which skews depth sweeps.
    pub atom_rank: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Highest coefficient index scanned; `None` means all of them.
    pub n_max: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundRow {
    pub trial: usize,
    pub p: f64,
    pub depth: usize,
    pub n_star: u64,
    pub ratio: f64,
    pub c_p_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    /// max over trials of the (n+1)-normalized ratio.
    pub max_ratio: f64,
    /// max over trials of the n-normalized ratio — the empirical c_p.
    pub empirical_c_p: f64,
}

/// Measures the normalized coefficient maximum across random single-atom
/// martingales. Stream-per-trial seeding as in [`run_atom_suite`].
pub fn run_bound_suite(cfg: &BoundSuiteConfig) -> Result<BoundReport, VerifyError> {
    if cfg.trials == 0 {
        return Err(VerifyError::ZeroTrials);
    }
    let spec = &cfg.group;
    let n_max = match cfg.n_max {
        Some(n) => n,
        None => spec.points() - 1,
    };
    let mut rows = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(t as u64);
        let martingale = loop {
            let rank = match cfg.atom_rank {
                Some(r) => r,
                None => rng.gen_range(1..spec.depth()),
            };
            let base = spec
                .digits(rng.gen_range(0..spec.points()))
                .expect("rank below M_N");
            let interval = spec.interval(rank, base).expect("rank within depth");
            let atom = make_atom(spec, interval, cfg.p, rng.gen());
            if atom.values().sup_norm() > 0.0 {
                break Martingale::from_grid(atom.values().clone());
            }
        };
        let bound = coefficient_bound_ratio(&martingale, cfg.p, n_max)?;
        assert!(bound.ratio.is_finite() && bound.ratio >= 0.0);
        rows.push(BoundRow {
            trial: t,
            p: cfg.p,
            depth: spec.depth(),
            n_star: bound.n_star,
            ratio: bound.ratio,
            c_p_ratio: bound.c_p_ratio,
        });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let empirical_c_p = rows.iter().map(|r| r.c_p_ratio).fold(0.0, f64::max);
    Ok(BoundReport {
        rows,
        max_ratio,
        empirical_c_p,
    })
}

/// Configuration for one end-to-end sharpness run.
#[derive(Debug, Clone)]
pub struct CounterexampleConfig {
    pub group: GroupSpec,
    pub phi: PhiSpec,
    /// Geometric budget ratio for the scale selection.
    pub budget: f64,
    pub max_terms: usize,
}

/// Full sharpness pipeline: select scales, build the martingale, compare
/// its spectrum with the closed form.
pub fn run_counterexample(
    cfg: &CounterexampleConfig,
) -> Result<(CounterexampleSpec, Counterexample, CounterexampleReport), VerifyError> {
    let alphas = choose_alphas(&cfg.phi, &cfg.group, cfg.budget, cfg.max_terms)?;
    let cs = CounterexampleSpec::new(&cfg.group, cfg.phi.clone(), alphas)?;
    let built = build_counterexample(&cs);
    let report = counterexample_coefficients(&built.martingale, &cs);
    Ok((cs, built, report))
}
