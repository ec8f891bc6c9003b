//! Exponential sums on the circle `R/Z`, major/minor arc systems and their
//! `L^2` quadrature.
//!
//! `S_f(θ) = sum_{n <= N} f(n) e(nθ)` is evaluated either pointwise or on the
//! whole grid `θ = j/M` by one inverse FFT of the zero-padded coefficients.
//! Because `|S_f|^2` is a trigonometric polynomial of degree `< N <= M`, the
//! grid mean `(1/M) sum_j |S_f(j/M)|^2` equals `sum_n |f(n)|^2` exactly, and
//! restricting the sum to grid points inside an arc set is the Riemann-sum
//! approximation of the arc integral.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::format::fmt_num;
use crate::sieve::{divisor_coeff_table, FunctionKind, FunctionTable, SieveContext};

/// Cap on the largest major-arc denominator `K * Q0`.
pub const MAX_ARC_DENOMINATOR: f64 = 1e5;

const REDUCE_CHUNK: usize = 1 << 14;

/// `e(x) = exp(2 pi i x)`, reducing `x` mod 1 first.
pub fn e(x: f64) -> Complex64 {
    let t = 2.0 * PI * x.rem_euclid(1.0);
    Complex64::new(t.cos(), t.sin())
}

/// Distance from `theta` to the nearest integer.
pub fn dist_to_int(theta: f64) -> f64 {
    let r = theta.rem_euclid(1.0);
    r.min(1.0 - r)
}

/// Smooth weight `φ(t) = exp(1 - 1/(4 t (1 - t)))` on `(0, 1)`, zero elsewhere.
///
/// It takes values in `[0, 1]` with maximum 1 at `t = 1/2`, vanishes to all
/// orders at 0 and 1, and has integral `J ≈ 0.60345`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpFunction {
    integral: f64,
}

impl Default for BumpFunction {
    fn default() -> Self {
        Self::new()
    }
}

impl BumpFunction {
    pub fn new() -> Self {
        // trapezoid rule
        let nodes = 20_000;
        let h = 1.0 / nodes as f64;
        let integral = (1..nodes).map(|i| Self::shape(i as f64 * h)).sum::<f64>() * h;
        Self { integral }
    }

    fn shape(t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (4.0 * t * (1.0 - t))).exp()
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        Self::shape(t)
    }

    /// `J = ∫_0^1 φ(t) dt`.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// `φ̂(ξ) = ∫ φ(t) e(-ξ t) dt`, by the trapezoid rule with enough nodes to
    /// resolve the oscillation.
    pub fn fourier_transform(&self, xi: f64) -> Complex64 {
        let nodes = 4096 + 8 * xi.abs().ceil() as usize;
        let h = 1.0 / nodes as f64;
        let sum: Complex64 = (1..nodes)
            .map(|i| {
                let t = i as f64 * h;
                Self::shape(t) * e(-xi * t)
            })
            .sum();
        sum * h
    }
}

fn coefficients(f: &FunctionTable, weight: Option<&BumpFunction>) -> Vec<f64> {
    match weight {
        None => f.values().to_vec(),
        Some(w) => f.weighted(w).values().to_vec(),
    }
}

/// `S_f(θ)` (times `weight(n/N)` when given), summed directly in `O(N)`.
pub fn exp_sum_point(f: &FunctionTable, theta: f64, weight: Option<&BumpFunction>) -> Complex64 {
    let theta = theta.rem_euclid(1.0);
    coefficients(f, weight)
        .iter()
        .enumerate()
        .map(|(i, &c)| c * e((i + 1) as f64 * theta))
        .sum()
}

/// `S_f(j/M)` for `j = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSumGrid {
    n: usize,
    f_kind: FunctionKind,
    values: Vec<Complex64>,
}

/// Evaluates `S_f` on the grid `j/M`, `M >= N`, by an inverse FFT.
pub fn exp_sum_grid(
    f: &FunctionTable,
    m: usize,
    weight: Option<&BumpFunction>,
) -> Result<ExpSumGrid> {
    let n = f.n_max();
    if m < n {
        return invalid(format!("grid size M = {m} is below N = {n}"));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (i, c) in coefficients(f, weight).into_iter().enumerate() {
        // n = M lands on slot 0 since e(M j / M) = 1
        buf[(i + 1) % m].re = c;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    Ok(ExpSumGrid {
        n,
        f_kind: f.kind(),
        values: buf,
    })
}

impl ExpSumGrid {
    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f_kind(&self) -> FunctionKind {
        self.f_kind
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(1/M) sum_j |S(j/M)|^2`.
    pub fn mean_square(&self) -> f64 {
        chunked_sum(&self.values, |_, v| v.norm_sqr()) / self.m() as f64
    }

    /// Binary dump: `M` and `N` as little-endian `u64`, then `M` pairs
    /// `(re, im)` of little-endian `f64`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.m() as u64).to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dump written by [`ExpSumGrid::write_binary`]; the function kind
    /// is not stored and comes back as `custom`.
    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let m = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        if m < n {
            return invalid(format!("grid header has M = {m} < N = {n}"));
        }
        let mut values = Vec::with_capacity(m);
        for _ in 0..m {
            r.read_exact(&mut word)?;
            let re = f64::from_le_bytes(word);
            r.read_exact(&mut word)?;
            let im = f64::from_le_bytes(word);
            values.push(Complex64::new(re, im));
        }
        Ok(Self {
            n,
            f_kind: FunctionKind::Custom,
            values,
        })
    }
}

/// Sum of `term(j, v_j)` in fixed-size chunks reduced in index order.
fn chunked_sum<T: Sync>(values: &[T], term: impl Fn(usize, &T) -> f64 + Sync) -> f64 {
    values
        .par_chunks(REDUCE_CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            chunk
                .iter()
                .enumerate()
                .map(|(i, v)| term(c * REDUCE_CHUNK + i, v))
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// Half-open interval `[left, right)` of `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.right - self.left
    }

    pub fn is_empty(&self) -> bool {
        self.right <= self.left
    }
}

/// Major arcs `𝔐(K, Q0, Q)`: points within `K/(qQ)` of some `a/q` with
/// `q <= K Q0` and `(a, q) = 1`, merged into disjoint sorted intervals of
/// `[0, 1)`. The minor arcs are the complementary gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSystem {
    pub k: f64,
    pub q0: f64,
    pub q: f64,
    /// Largest denominator used, `max(1, floor(K Q0))`.
    pub max_denominator: u64,
    pub major: Vec<Interval>,
    pub total_major_measure: f64,
}

/// Builds the major arcs, walking the Farey sequence of order
/// `max(1, floor(K Q0))` so that the arcs arrive sorted by centre and can be
/// merged with a stack.
pub fn build_arc_system(k: f64, q0: f64, q: f64) -> Result<ArcSystem> {
    if !(k >= 5.0) || !k.is_finite() {
        return invalid(format!("K must be >= 5, got {k}"));
    }
    if !(q > 0.0) || !q.is_finite() {
        return invalid(format!("Q must be positive, got {q}"));
    }
    if !(q0 >= 0.0) || !q0.is_finite() {
        return invalid(format!("Q0 must be nonnegative, got {q0}"));
    }
    let cap = k * q0;
    if cap > MAX_ARC_DENOMINATOR {
        return invalid(format!(
            "K * Q0 = {cap} exceeds the supported maximum {MAX_ARC_DENOMINATOR}"
        ));
    }
    let order = (cap.floor() as u64).max(1);

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut push = |centre: f64, radius: f64| {
        let (mut lo, mut hi) = (centre - radius, centre + radius);
        while let Some(&(l, r)) = merged.last() {
            if r < lo {
                break;
            }
            lo = lo.min(l);
            hi = hi.max(r);
            merged.pop();
        }
        merged.push((lo, hi));
    };
    // Farey sequence of the given order on [0, 1], from 0/1 to 1/1
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, order);
    push(0.0, k / q);
    while c <= order {
        let t = (order + b) / d;
        (a, b, c, d) = (c, d, t * c - a, t * d - b);
        push(a as f64 / b as f64, k / (b as f64 * q));
    }

    // fold onto [0, 1)
    let mut pieces: Vec<Interval> = Vec::with_capacity(merged.len() + 2);
    for (lo, hi) in merged {
        if hi - lo >= 1.0 {
            pieces.clear();
            pieces.push(Interval {
                left: 0.0,
                right: 1.0,
            });
            break;
        }
        let shift = lo.floor();
        let (lo, hi) = (lo - shift, hi - shift);
        if hi > 1.0 {
            pieces.push(Interval {
                left: lo,
                right: 1.0,
            });
            pieces.push(Interval {
                left: 0.0,
                right: hi - 1.0,
            });
        } else {
            pieces.push(Interval {
                left: lo,
                right: hi,
            });
        }
    }
    pieces.retain(|iv| !iv.is_empty());
    pieces.sort_by(|x, y| x.left.total_cmp(&y.left));
    let mut major: Vec<Interval> = Vec::with_capacity(pieces.len());
    for iv in pieces {
        match major.last_mut() {
            Some(last) if iv.left <= last.right => last.right = last.right.max(iv.right),
            _ => major.push(iv),
        }
    }
    let total_major_measure = major.iter().map(Interval::len).sum();
    Ok(ArcSystem {
        k,
        q0,
        q,
        max_denominator: order,
        major,
        total_major_measure,
    })
}

impl ArcSystem {
    /// Whether `θ` (mod 1) lies in the major arcs.
    pub fn contains(&self, theta: f64) -> bool {
        let t = theta.rem_euclid(1.0);
        let idx = self.major.partition_point(|iv| iv.left <= t);
        idx > 0 && t < self.major[idx - 1].right
    }

    /// The gaps between major arcs, i.e. the minor arcs.
    pub fn minor(&self) -> Vec<Interval> {
        let mut gaps = Vec::with_capacity(self.major.len() + 1);
        let mut cursor = 0.0;
        for iv in &self.major {
            if iv.left > cursor {
                gaps.push(Interval {
                    left: cursor,
                    right: iv.left,
                });
            }
            cursor = iv.right;
        }
        if cursor < 1.0 {
            gaps.push(Interval {
                left: cursor,
                right: 1.0,
            });
        }
        gaps
    }

    /// Whether `K sqrt(N log N) <= Q <= N` and `N log N / Q <= Q0 <= Q / K^2`.
    pub fn admissible(&self, n: f64) -> bool {
        let nlogn = n * n.ln();
        self.k * nlogn.sqrt() <= self.q
            && self.q <= n
            && nlogn / self.q <= self.q0
            && self.q0 <= self.q / (self.k * self.k)
    }

    /// Flags grid points `j/M` inside the major arcs.
    pub fn grid_mask(&self, m: usize) -> Vec<bool> {
        let mf = m as f64;
        let first_at_or_after = |x: f64| -> usize {
            let mut j = (x * mf).ceil().max(0.0) as usize;
            while j > 0 && (j - 1) as f64 / mf >= x {
                j -= 1;
            }
            while j < m && (j as f64) / mf < x {
                j += 1;
            }
            j.min(m)
        };
        let mut mask = vec![false; m];
        for iv in &self.major {
            let start = first_at_or_after(iv.left);
            let end = first_at_or_after(iv.right);
            for slot in &mut mask[start..end] {
                *slot = true;
            }
        }
        mask
    }

    /// CSV dump `left,right`, one row per major arc.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "left,right")?;
        for iv in &self.major {
            writeln!(w, "{},{}", fmt_num(iv.left), fmt_num(iv.right))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSet {
    Major,
    Minor,
    Full,
}

/// `L^2` mass of a grid over the major arcs, the minor arcs and the full circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Split {
    pub major: f64,
    pub minor: f64,
    pub full: f64,
}

/// Riemann sums `(1/M) sum_{j/M in set} |S(j/M)|^2` for all three sets.
pub fn l2_split(grid: &ExpSumGrid, arcs: &ArcSystem) -> L2Split {
    let mask = arcs.grid_mask(grid.m());
    let m = grid.m() as f64;
    let values = grid.values();
    let major = chunked_sum(values, |j, v| if mask[j] { v.norm_sqr() } else { 0.0 });
    let minor = chunked_sum(values, |j, v| if mask[j] { 0.0 } else { v.norm_sqr() });
    L2Split {
        major: major / m,
        minor: minor / m,
        full: grid.mean_square(),
    }
}

pub fn l2_over_set(grid: &ExpSumGrid, arcs: &ArcSystem, over: ArcSet) -> f64 {
    if over == ArcSet::Full {
        return grid.mean_square();
    }
    let split = l2_split(grid, arcs);
    match over {
        ArcSet::Major => split.major,
        ArcSet::Minor => split.minor,
        ArcSet::Full => split.full,
    }
}

/// Both sides of the minor-arc Cauchy–Schwarz bound
/// `∫_m |S_f|^2 >= |∫_m S_f conj(G)|^2 / ∫_m |G|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsChainReport {
    /// `∫_m |S_f|^2`.
    pub lhs: f64,
    /// `|∫_m S_f conj(G)|^2`.
    pub cross: f64,
    /// `∫_m |G|^2`.
    pub denom: f64,
}

impl CsChainReport {
    pub fn is_degenerate(&self) -> bool {
        self.denom == 0.0
    }

    /// `cross / denom`, the lower bound for `lhs`; `None` when degenerate.
    pub fn bound(&self) -> Option<f64> {
        (!self.is_degenerate()).then(|| self.cross / self.denom)
    }

    /// `lhs * denom - cross`, nonnegative up to rounding.
    pub fn slack(&self) -> f64 {
        self.lhs * self.denom - self.cross
    }
}

/// Minor-arc Cauchy–Schwarz quantities from two grids of equal size.
pub fn cs_chain_from_grids(
    f_grid: &ExpSumGrid,
    g_grid: &ExpSumGrid,
    arcs: &ArcSystem,
) -> Result<CsChainReport> {
    if f_grid.m() != g_grid.m() {
        return invalid(format!(
            "grid sizes differ: {} vs {}",
            f_grid.m(),
            g_grid.m()
        ));
    }
    let m = f_grid.m();
    let mask = arcs.grid_mask(m);
    let (fv, gv) = (f_grid.values(), g_grid.values());
    let minor = |j: usize| !mask[j];
    let lhs = chunked_sum(fv, |j, v| if minor(j) { v.norm_sqr() } else { 0.0 });
    let denom = chunked_sum(gv, |j, v| if minor(j) { v.norm_sqr() } else { 0.0 });
    let re = chunked_sum(
        fv,
        |j, v| if minor(j) { (v * gv[j].conj()).re } else { 0.0 },
    );
    let im = chunked_sum(
        fv,
        |j, v| if minor(j) { (v * gv[j].conj()).im } else { 0.0 },
    );
    let mf = m as f64;
    Ok(CsChainReport {
        lhs: lhs / mf,
        cross: (re * re + im * im) / (mf * mf),
        denom: denom / mf,
    })
}

/// Cauchy–Schwarz chain for `f` against
/// `G(θ) = sum_n (sum_{r | n, r <= R} g(r)) weight(n/N) e(nθ)`, on a grid of
/// size `m`. `S_f` itself is unweighted.
pub fn cs_chain_report(
    f: &FunctionTable,
    ctx: &SieveContext,
    r_max: usize,
    g: impl Fn(usize) -> f64,
    arcs: &ArcSystem,
    weight: Option<&BumpFunction>,
    m: usize,
) -> Result<CsChainReport> {
    if ctx.n_max() != f.n_max() {
        return invalid(format!(
            "sieve bound {} differs from table length {}",
            ctx.n_max(),
            f.n_max()
        ));
    }
    let g_table = divisor_coeff_table(ctx, r_max, g)?;
    let f_grid = exp_sum_grid(f, m, None)?;
    let g_grid = exp_sum_grid(&g_table, m, weight)?;
    cs_chain_from_grids(&f_grid, &g_grid, arcs)
}

/// `min(N, 1 / (2 ||θ||))`, an exact upper bound for `|sum_{n <= N} e(nθ)|`.
pub fn s1_envelope(theta: f64, n: usize) -> f64 {
    let d = dist_to_int(theta);
    if d == 0.0 {
        return n as f64;
    }
    (n as f64).min(1.0 / (2.0 * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{arithmetic_table, build_sieve};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one(n: usize) -> FunctionTable {
        arithmetic_table(&build_sieve(n).unwrap(), FunctionKind::One).unwrap()
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn point_sums() {
        assert!((exp_sum_point(&one(100), 0.0, None) - Complex64::new(100.0, 0.0)).norm() < 1e-12);
        assert!(exp_sum_point(&one(100), 0.5, None).norm() < 1e-12);
        assert!(exp_sum_point(&one(6), 1.0 / 3.0, None).norm() < 1e-12);
    }

    #[test]
    fn grid_matches_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f =
            FunctionTable::from_fn(512, |_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).unwrap();
        let grid = exp_sum_grid(&f, 1024, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let j = rng.gen_range(0..1024);
            let direct = exp_sum_point(&f, j as f64 / 1024.0, None);
            let diff = (grid.values()[j] - direct).norm();
            assert!(diff <= 1e-9 * direct.norm().max(1.0), "j = {j}: {diff}");
        }
        let ones = exp_sum_grid(&one(300), 300, None).unwrap();
        assert!((ones.values()[0].re - 300.0).abs() < 1e-9);
        assert!(exp_sum_grid(&one(300), 299, None).is_err());
    }

    #[test]
    fn weighted_grid_matches_points() {
        let w = BumpFunction::new();
        let f = one(200);
        let grid = exp_sum_grid(&f, 800, Some(&w)).unwrap();
        for j in [0, 1, 17, 399, 799] {
            let direct = exp_sum_point(&f, j as f64 / 800.0, Some(&w));
            assert!((grid.values()[j] - direct).norm() <= 1e-9 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn binary_dump_round_trip() {
        let ctx = build_sieve(64).unwrap();
        let f = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        let grid = exp_sum_grid(&f, 128, None).unwrap();
        let mut bytes = Vec::new();
        grid.write_binary(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 16 + 128 * 16);
        assert_eq!(&bytes[..8], &128u64.to_le_bytes());
        assert_eq!(&bytes[8..16], &64u64.to_le_bytes());
        let back = ExpSumGrid::read_binary(&bytes[..]).unwrap();
        assert_eq!(back.values(), grid.values());
        assert_eq!(back.n(), 64);
    }

    #[test]
    fn arcs_basic() {
        let arcs = build_arc_system(5.0, 1.0, 100.0).unwrap();
        assert!(arcs.contains(0.0));
        assert!(arcs.contains(0.999));
        assert!(arcs.contains(0.5));
        assert!(!arcs.contains(0.1));
        let bound: f64 = (1..=5u64)
            .map(|q| (1..=q).filter(|&a| gcd(a, q) == 1).count() as f64 * 10.0 / (q as f64 * 100.0))
            .sum();
        assert!(arcs.total_major_measure <= bound + 1e-12);
        assert!(arcs.total_major_measure > 0.0);
        for w in arcs.major.windows(2) {
            assert!(w[0].right < w[1].left);
        }
        assert!(arcs.major.iter().all(|iv| iv.len() > 0.0));
        let minor: f64 = arcs.minor().iter().map(Interval::len).sum();
        assert!((minor + arcs.total_major_measure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn arcs_degenerate_and_errors() {
        let arcs = build_arc_system(5.0, 0.1, 1000.0).unwrap();
        assert_eq!(arcs.max_denominator, 1);
        assert_eq!(arcs.major.len(), 2);
        assert!((arcs.total_major_measure - 0.01).abs() < 1e-15);
        let full = build_arc_system(5.0, 1.0, 2.0).unwrap();
        assert_eq!(
            full.major,
            vec![Interval {
                left: 0.0,
                right: 1.0
            }]
        );
        assert!(full.minor().is_empty());
        assert!(build_arc_system(4.0, 1.0, 10.0).is_err());
        assert!(build_arc_system(5.0, 1e5, 10.0).is_err());
        assert!(build_arc_system(5.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn arcs_match_raw_membership() {
        let (k, q0, q) = (5.0, 3.0, 400.0);
        let arcs = build_arc_system(k, q0, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let theta: f64 = rng.gen();
            let raw = (1..=15u64).any(|den| {
                (0..=den).any(|a| {
                    gcd(a, den) == 1
                        && (theta - a as f64 / den as f64).abs() <= k / (den as f64 * q)
                })
            });
            assert_eq!(arcs.contains(theta), raw, "theta = {theta}");
        }
    }

    #[test]
    fn admissibility_window() {
        let n: f64 = 10_000.0;
        let q = 4000.0;
        let arcs = build_arc_system(5.0, n * n.ln() / q, q).unwrap();
        assert!(arcs.admissible(n));
        let arcs = build_arc_system(5.0, 1.0, q).unwrap();
        assert!(!arcs.admissible(n));
    }

    #[test]
    fn grid_mask_is_half_open() {
        let arcs = ArcSystem {
            k: 5.0,
            q0: 1.0,
            q: 1.0,
            max_denominator: 1,
            major: vec![Interval {
                left: 0.25,
                right: 0.5,
            }],
            total_major_measure: 0.25,
        };
        let mask = arcs.grid_mask(8);
        assert_eq!(
            mask,
            vec![false, false, true, true, false, false, false, false]
        );
    }

    #[test]
    fn parseval_partition() {
        let ctx = build_sieve(1000).unwrap();
        let f = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        let grid = exp_sum_grid(&f, 4000, None).unwrap();
        let arcs = build_arc_system(5.0, 10.0, 300.0).unwrap();
        let split = l2_split(&grid, &arcs);
        let sq = f.sum_of_squares();
        assert!((split.full - sq).abs() <= 1e-9 * sq);
        assert!((split.major + split.minor - split.full).abs() <= 1e-9 * sq);
        assert_eq!(l2_over_set(&grid, &arcs, ArcSet::Minor), split.minor);
        let everything = build_arc_system(5.0, 1.0, 2.0).unwrap();
        assert_eq!(l2_over_set(&grid, &everything, ArcSet::Minor), 0.0);
    }

    #[test]
    fn cs_chain_cases() {
        let n = 512;
        let ctx = build_sieve(n).unwrap();
        let f = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        let arcs = build_arc_system(5.0, 4.0, 200.0).unwrap();
        let w = BumpFunction::new();
        let zero = cs_chain_report(&f, &ctx, 20, |_| 0.0, &arcs, Some(&w), 4 * n).unwrap();
        assert!(zero.is_degenerate());
        assert_eq!(zero.bound(), None);

        let g = |r: usize| if ctx.is_prime(r) { 1.0 } else { 0.0 };
        let report = cs_chain_report(&f, &ctx, 16, g, &arcs, Some(&w), 4 * n).unwrap();
        assert!(report.slack() >= -1e-9 * report.lhs * report.denom);
        assert!(report.bound().unwrap() <= report.lhs);

        let g_coeffs = divisor_coeff_table(&ctx, 16, g).unwrap().weighted(&w);
        let same = cs_chain_report(&g_coeffs, &ctx, 16, g, &arcs, Some(&w), 4 * n).unwrap();
        assert!((same.lhs * same.denom - same.cross).abs() <= 1e-9 * same.cross);
    }

    #[test]
    fn envelope() {
        assert_eq!(s1_envelope(0.0, 50), 50.0);
        assert_eq!(s1_envelope(3.0, 50), 50.0);
        assert_eq!(s1_envelope(0.5, 50), 1.0);
        let f = one(2000);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let theta: f64 = rng.gen();
            assert!(exp_sum_point(&f, theta, None).norm() <= s1_envelope(theta, 2000) + 1e-9);
        }
    }

    #[test]
    fn bump_properties() {
        let w = BumpFunction::new();
        assert!((w.integral() - 0.603450161218937).abs() < 1e-12);
        assert_eq!(w.eval(0.5), 1.0);
        assert_eq!(w.eval(0.0), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        assert_eq!(w.eval(-0.3), 0.0);
        assert!((0..=1000).all(|i| (0.0..=1.0).contains(&w.eval(i as f64 / 1000.0))));
        assert!((w.fourier_transform(0.0).re - w.integral()).abs() < 1e-12);
    }
}
