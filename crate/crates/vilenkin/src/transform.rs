//! Discrete Vilenkin–Fourier transforms and partial sums.
//!
//! A `GridFunction` samples a function on all M_N points of the truncated
//! group, indexed by rank; a `Spectrum` holds its coefficients
//! f̂(k) = (1/M_N) Σ_x f(x)·conj(ψ_k(x)). Synthesis is unweighted:
//! f(x) = Σ_k f̂(k)·ψ_k(x).
//!
//! `forward_naive` is the O(M_N²) reference oracle straight from the
//! definition. `forward_fast` exploits the product structure instead: the
//! transform factors into one small DFT of length m_k along every coordinate
//! axis (cost O(M_N·Σ m_k)). The per-axis kernels are direct O(m²) sums —
//! with bounded radices there is nothing to gain from splitting them
//! further — so no reordering pass is ever needed: output digit k_j simply
//! replaces input digit x_j in place.
//!
//! Partial sums S_n f = Σ_{k<n} f̂(k)ψ_k come three ways: by truncating the
//! spectrum and inverting, by convolving with the Dirichlet kernel
//! (S_n f(x) = (1/M_N) Σ_t f(t)·D_n(x ⊖ t), the O(M_N²) cross-check), and as
//! a stream S_1, S_2, … where each step adds one term f̂(n)ψ_n in amortized
//! O(M_N) work. The streaming form is what the maximal-operator sweeps use.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::group::GroupSpec;
use crate::system::Characters;

/// Ceiling on materialized grid sizes. Group specs may describe much larger
/// truncations (the scale table alone is cheap); sampling them is refused
/// loudly instead of attempting a multi-gigabyte allocation.
pub const MAX_GRID_POINTS: u64 = 1 << 28;

fn grid_len(spec: &GroupSpec) -> usize {
    let points = spec.points();
    assert!(
        points <= MAX_GRID_POINTS,
        "grid with {points} points exceeds the materialization limit {MAX_GRID_POINTS}"
    );
    points as usize
}

/// Samples of a function on the truncated group, indexed by rank.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GroupSpec,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(spec: &GroupSpec) -> Self {
        GridFunction {
            spec: spec.clone(),
            samples: vec![Complex64::new(0.0, 0.0); grid_len(spec)],
        }
    }

    pub fn constant(spec: &GroupSpec, value: Complex64) -> Self {
        GridFunction {
            spec: spec.clone(),
            samples: vec![value; grid_len(spec)],
        }
    }

    pub fn from_samples(spec: &GroupSpec, samples: Vec<Complex64>) -> Self {
        assert_eq!(
            samples.len(),
            grid_len(spec),
            "sample count must equal M_N"
        );
        GridFunction {
            spec: spec.clone(),
            samples,
        }
    }

    pub fn from_fn(spec: &GroupSpec, mut f: impl FnMut(u64) -> Complex64) -> Self {
        GridFunction {
            spec: spec.clone(),
            samples: (0..grid_len(spec) as u64).map(|r| f(r)).collect(),
        }
    }

    /// The character ψ_n sampled over the grid.
    pub fn character(chars: &Characters, n: u64) -> Self {
        let mut g = GridFunction::zeros(chars.spec());
        chars.character_grid(n, &mut g.samples);
        g
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn value(&self, rank: u64) -> Complex64 {
        self.samples[rank as usize]
    }

    /// (1/M_N) Σ_x f(x) — the integral against normalized counting measure.
    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// self += c·other.
    pub fn add_scaled(&mut self, c: Complex64, other: &GridFunction) {
        assert_eq!(self.spec, other.spec, "grids live on different groups");
        for (a, b) in self.samples.iter_mut().zip(&other.samples) {
            *a += c * b;
        }
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in &mut self.samples {
            *a *= c;
        }
    }
}

/// Vilenkin–Fourier coefficients f̂(0), …, f̂(M_N − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    spec: GroupSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_coeffs(spec: &GroupSpec, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(
            coeffs.len(),
            grid_len(spec),
            "coefficient count must equal M_N"
        );
        Spectrum {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u64) -> Complex64 {
        self.coeffs[k as usize]
    }

    /// Σ_k |f̂(k)|², the spectral side of the Plancherel identity.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Reference transform: the definitional double loop, one character row at a
/// time. Quadratic in M_N; exists to check `forward_fast` and for nothing
/// else performance-wise.
pub fn forward_naive(f: &GridFunction) -> Spectrum {
    let spec = f.spec.clone();
    let chars = Characters::new(&spec);
    let len = f.len();
    let weight = 1.0 / len as f64;
    let mut row = vec![Complex64::new(0.0, 0.0); len];
    let coeffs = (0..len as u64)
        .map(|k| {
            chars.character_grid(k, &mut row);
            let dot: Complex64 = f
                .samples
                .iter()
                .zip(&row)
                .map(|(v, psi)| v * psi.conj())
                .sum();
            dot * weight
        })
        .collect();
    Spectrum { spec, coeffs }
}

#[derive(Clone, Copy)]
enum Direction {
    Analysis,  // conj(ψ) weights, exp(−2πi·/m)
    Synthesis, // ψ weights, exp(+2πi·/m)
}

/// One small direct DFT along every coordinate axis, in place.
fn dft_axes(spec: &GroupSpec, data: &mut [Complex64], direction: Direction) {
    let max_radix = spec.lambda() as usize;
    let mut twiddles = vec![Complex64::new(0.0, 0.0); max_radix];
    let mut lane = vec![Complex64::new(0.0, 0.0); max_radix];
    for axis in 0..spec.depth() {
        let m = spec.radix(axis) as usize;
        let stride = spec.scale(axis) as usize;
        let block = spec.scale(axis + 1) as usize;
        let sign = match direction {
            Direction::Analysis => -1.0,
            Direction::Synthesis => 1.0,
        };
        for (u, t) in twiddles.iter_mut().enumerate().take(m) {
            *t = Complex64::from_polar(1.0, sign * TAU * u as f64 / m as f64);
        }
        for chunk in data.chunks_mut(block) {
            for offset in 0..stride {
                for u in 0..m {
                    lane[u] = chunk[offset + u * stride];
                }
                for t in 0..m {
                    let mut acc = lane[0];
                    for (u, &value) in lane.iter().enumerate().take(m).skip(1) {
                        acc += value * twiddles[(t * u) % m];
                    }
                    chunk[offset + t * stride] = acc;
                }
            }
        }
    }
}

/// Factorized transform: axis-by-axis small DFTs, O(M_N·Σ m_k).
pub fn forward_fast(f: &GridFunction) -> Spectrum {
    let spec = f.spec.clone();
    let mut data = f.samples.clone();
    dft_axes(&spec, &mut data, Direction::Analysis);
    let weight = 1.0 / data.len() as f64;
    for v in &mut data {
        *v *= weight;
    }
    Spectrum { spec, coeffs: data }
}

/// Unweighted synthesis f(x) = Σ_k f̂(k)·ψ_k(x).
pub fn inverse(s: &Spectrum) -> GridFunction {
    let spec = s.spec.clone();
    let mut data = s.coeffs.clone();
    dft_axes(&spec, &mut data, Direction::Synthesis);
    GridFunction {
        spec,
        samples: data,
    }
}

/// S_n f for 0 ≤ n ≤ M_N, by zeroing the coefficients at and above n and
/// inverting. S_0 is identically zero; S_{M_N} reproduces the function.
pub fn partial_sum(s: &Spectrum, n: u64) -> GridFunction {
    assert!(n <= s.len() as u64, "partial-sum order {n} out of range");
    let mut truncated = s.coeffs.clone();
    for c in truncated.iter_mut().skip(n as usize) {
        *c = Complex64::new(0.0, 0.0);
    }
    inverse(&Spectrum {
        spec: s.spec.clone(),
        coeffs: truncated,
    })
}

/// S_n f by kernel convolution: S_n f(x) = (1/M_N) Σ_t f(t)·D_n(x ⊖ t).
///
/// Quadratic; this is the cross-check for [`partial_sum`], not a fast path.
pub fn partial_sum_by_kernel(f: &GridFunction, n: u64) -> GridFunction {
    let spec = f.spec.clone();
    assert!(n <= spec.points(), "partial-sum order {n} out of range");
    if n == 0 {
        return GridFunction::zeros(&spec);
    }
    let chars = Characters::new(&spec);
    let len = f.len();
    // Kernel values by rank, then digit tables so the difference x ⊖ t can
    // be ranked without rebuilding points in the inner loop.
    let kernel: Vec<Complex64> = (0..len as u64)
        .map(|r| chars.dirichlet_closed(n, &spec.digits(r).expect("rank in range")))
        .collect();
    let digit_table: Vec<Vec<u32>> = (0..len as u64)
        .map(|r| spec.digits(r).expect("rank in range").digits().to_vec())
        .collect();
    let weight = 1.0 / len as f64;
    let samples = (0..len)
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, value) in f.samples.iter().enumerate() {
                let mut diff_rank = 0u64;
                for (k, scale) in spec.scales()[..spec.depth()].iter().enumerate() {
                    let m = spec.radix(k);
                    let d = (digit_table[x][k] + m - digit_table[t][k]) % m;
                    diff_rank += u64::from(d) * scale;
                }
                acc += value * kernel[diff_rank as usize];
            }
            acc * weight
        })
        .collect();
    GridFunction { spec, samples }
}

/// Streaming partial sums: yields (n, S_n f) for n = 1, …, n_max, adding one
/// term f̂(n−1)·ψ_{n−1} per step.
///
/// The running character ψ_n is updated through the mixed-radix carry chain
/// of n → n+1 — every wrapped digit and the finally incremented digit each
/// contribute one factor r_k — so a step costs amortized O(M_N).
pub struct PartialSums<'a> {
    spectrum: &'a Spectrum,
    roots: Vec<Vec<Complex64>>,
    digits: Vec<u32>,
    psi: Vec<Complex64>,
    running: Vec<Complex64>,
    n: u64,
    n_max: u64,
}

impl<'a> PartialSums<'a> {
    /// `n_max ≤ M_N` is the last partial sum the stream will produce.
    pub fn new(spectrum: &'a Spectrum, n_max: u64) -> Self {
        assert!(
            n_max <= spectrum.len() as u64,
            "stream bound {n_max} out of range"
        );
        let spec = spectrum.spec();
        let len = spectrum.len();
        PartialSums {
            spectrum,
            roots: spec
                .radices()
                .iter()
                .map(|&m| crate::system::roots_of_unity(m))
                .collect(),
            digits: vec![0; spec.depth()],
            psi: vec![Complex64::new(1.0, 0.0); len],
            running: vec![Complex64::new(0.0, 0.0); len],
            n: 0,
            n_max,
        }
    }

    /// The order of the last partial sum yielded.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Adds the next term and returns (n, S_n f), or `None` past n_max.
    pub fn advance(&mut self) -> Option<(u64, &[Complex64])> {
        if self.n >= self.n_max {
            return None;
        }
        let c = self.spectrum.coeffs[self.n as usize];
        if c != Complex64::new(0.0, 0.0) {
            for (r, p) in self.running.iter_mut().zip(&self.psi) {
                *r += c * p;
            }
        }
        self.n += 1;
        if self.n < self.n_max {
            self.step_character();
        }
        Some((self.n, &self.running))
    }

    /// ψ_n → ψ_{n+1}: multiply by r_k for every digit the carry touches.
    fn step_character(&mut self) {
        let spec = self.spectrum.spec();
        for k in 0..spec.depth() {
            self.multiply_axis(k);
            let m = spec.radix(k);
            self.digits[k] += 1;
            if self.digits[k] == m {
                self.digits[k] = 0;
            } else {
                break;
            }
        }
    }

    /// psi[x] *= r_k(x), striped over the digit-k layout.
    fn multiply_axis(&mut self, k: usize) {
        let spec = self.spectrum.spec();
        let m = spec.radix(k) as usize;
        let stride = spec.scale(k) as usize;
        let block = spec.scale(k + 1) as usize;
        for chunk in self.psi.chunks_mut(block) {
            for (u, &factor) in self.roots[k].iter().enumerate().take(m).skip(1) {
                let start = u * stride;
                for v in &mut chunk[start..start + stride] {
                    *v *= factor;
                }
            }
        }
    }
}

/// Convenience constructor for [`PartialSums`].
pub fn incremental_sums(s: &Spectrum, n_max: u64) -> PartialSums<'_> {
    PartialSums::new(s, n_max)
}
