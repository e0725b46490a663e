//! Chebyshev–Gauss–Lobatto collocation of a stripped problem and the dense
//! generalized eigensolve H u = λ W u.
//!
//! Matrices are built in double-double arithmetic and rounded once. The QZ
//! eigenvalues are then polished by Newton's method on the bordered system
//!
//!   [H − λW  −Wu] [δu]   [−(Hu − λWu)]
//!   [ e_kᵀ     0 ] [δλ] = [     0     ]
//!
//! with the residual evaluated in double-double. Near the interior pole of
//! the tensor operator the rounded matrix entries alone move the eigenvalues
//! by up to 1e-4, far more than the tabulated digits allow.

use crate::error::{Result, SpectrumError};
use crate::field::{dd_pi, dd_sin, split, Dd, Field};
use crate::problem::{Problem, SturmLiouville};
use crate::singular::StrippedProblem;
use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64;

/// Gauss–Lobatto nodes xᵢ = cos(iπ/𝒩), descending from +1 to −1.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    resolution: usize,
    points: Vec<f64>,
    points_dd: Vec<Dd>,
}

impl CollocationGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }
    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn points_dd(&self) -> &[Dd] {
        &self.points_dd
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Smallest resolution accepted by the eigenproblem assembly.
pub const MIN_RESOLUTION: usize = 4;

pub fn gauss_lobatto(resolution: usize) -> Result<CollocationGrid> {
    if resolution < 2 {
        return Err(SpectrumError::InvalidInput(format!("resolution must be at least 2, got {resolution}")));
    }
    let n = resolution;
    // cos(iπ/𝒩) = sin((𝒩 − 2i)π/(2𝒩)) keeps the sine argument in [−π/2, π/2]
    let points_dd: Vec<Dd> = (0..=n)
        .map(|i| {
            if 2 * i == n {
                Dd::from(0.0)
            } else {
                dd_sin(dd_pi() * (n as f64 - 2.0 * i as f64) / (2.0 * n as f64))
            }
        })
        .collect();
    let mut points: Vec<f64> = points_dd.iter().map(|&v| f64::from_dd(v)).collect();
    points[0] = 1.0;
    points[n] = -1.0;
    Ok(CollocationGrid { resolution, points, points_dd })
}

/// Square matrix of double-doubles, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DdMatrix {
    n: usize,
    data: Vec<Dd>,
}

impl DdMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Dd::from(0.0); n * n] }
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> Dd {
        self.data[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Dd) {
        self.data[i * self.n + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Dd] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
    pub fn to_f64(&self) -> Mat<f64> {
        Mat::from_fn(self.n, self.n, |i, j| f64::from_dd(self.get(i, j)))
    }
}

/// First and second Chebyshev differentiation matrices in double-double.
///
/// Off-diagonal entries use the trigonometric form of xᵢ − xⱼ, diagonals are
/// negative row sums, and the second derivative follows the
/// Weideman–Reddy recursion D⁽²⁾ᵢⱼ = 2Zᵢⱼ(cᵢ/cⱼ D⁽¹⁾ᵢᵢ − D⁽¹⁾ᵢⱼ).
pub fn diff_matrices_dd(grid: &CollocationGrid) -> (DdMatrix, DdMatrix) {
    let n = grid.resolution;
    let m = n + 1;
    let pi = dd_pi();
    let half = |k: i64| dd_sin(pi * (k as f64) / (2.0 * n as f64));
    let sum_sin: Vec<Dd> = (0..=2 * n as i64).map(half).collect();
    let diff_sin: Vec<Dd> = (-(n as i64)..=n as i64).map(half).collect();
    let weight = |i: usize| {
        let c = if i == 0 || i == n { 2.0 } else { 1.0 };
        if i.is_multiple_of(2) {
            c
        } else {
            -c
        }
    };
    let mut inv_dx = DdMatrix::zeros(m);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                // xᵢ − xⱼ = −2 sin((i+j)π/2𝒩) sin((i−j)π/2𝒩)
                let d = sum_sin[i + j] * diff_sin[(i as i64 - j as i64 + n as i64) as usize] * -2.0;
                inv_dx.set(i, j, Dd::from(1.0) / d);
            }
        }
    }
    let mut d1 = DdMatrix::zeros(m);
    for i in 0..m {
        let mut diag = Dd::from(0.0);
        for j in 0..m {
            if i != j {
                let v = inv_dx.get(i, j) * (weight(i) / weight(j));
                d1.set(i, j, v);
                diag -= v;
            }
        }
        d1.set(i, i, diag);
    }
    let mut d2 = DdMatrix::zeros(m);
    for i in 0..m {
        let mut diag = Dd::from(0.0);
        let d1ii = d1.get(i, i);
        for j in 0..m {
            if i != j {
                let v = inv_dx.get(i, j) * 2.0 * (d1ii * (weight(i) / weight(j)) - d1.get(i, j));
                d2.set(i, j, v);
                diag -= v;
            }
        }
        d2.set(i, i, diag);
    }
    (d1, d2)
}

/// First-derivative matrix, exact on polynomials of degree ≤ 𝒩.
pub fn diff_matrix(grid: &CollocationGrid) -> Mat<f64> {
    diff_matrices_dd(grid).0.to_f64()
}

/// Second-derivative matrix.
pub fn diff_matrix2(grid: &CollocationGrid) -> Mat<f64> {
    diff_matrices_dd(grid).1.to_f64()
}

/// Collocated operator pair with Robin rows at both ends.
#[derive(Debug, Clone)]
pub struct DiscretizedProblem {
    pub grid: CollocationGrid,
    pub h: Mat<f64>,
    pub w: Mat<f64>,
    h_dd: DdMatrix,
    w_diag_dd: Vec<Dd>,
    pub label: String,
    pub p_left: f64,
    pub p_right: f64,
}

impl DiscretizedProblem {
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    /// Residual Hu − λWu in double-double.
    pub fn residual_dd(&self, u: &[Dd], lambda: Dd) -> Vec<Dd> {
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut s = Dd::from(0.0);
                for (h, uj) in self.h_dd.row(i).iter().zip(u) {
                    if h.hi() != 0.0 {
                        s += *h * *uj;
                    }
                }
                s - lambda * self.w_diag_dd[i] * u[i]
            })
            .collect()
    }
}

/// Rows 1…𝒩−1 collocate u'' + a₁u' + a₀u = λRu; row 0 holds the condition
/// at x = +1 and row 𝒩 the one at x = −1, with λ-free parts in H and
/// λ-linear parts in W.
pub fn assemble<P: Problem>(stripped: &StrippedProblem<P>, resolution: usize) -> Result<DiscretizedProblem> {
    if resolution < MIN_RESOLUTION {
        return Err(SpectrumError::InvalidInput(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    if hits_singular_point(&stripped.problem, resolution) {
        return Err(SpectrumError::InvalidInput(format!(
            "the grid of resolution {resolution} has a node on an interior singular point"
        )));
    }
    let grid = gauss_lobatto(resolution)?;
    let (d1, d2) = diff_matrices_dd(&grid);
    let n = resolution;
    let m = n + 1;
    let mut h = DdMatrix::zeros(m);
    let mut w = vec![Dd::from(0.0); m];
    for i in 1..n {
        let f = stripped.u_form(grid.points_dd[i]);
        if ![f.drift, f.potential, f.weight].iter().all(|&v| f64::from_dd(v).is_finite()) {
            return Err(SpectrumError::InvalidInput(format!(
                "coefficients are singular at the interior node x = {}",
                grid.points[i]
            )));
        }
        for j in 0..m {
            h.set(i, j, d2.get(i, j) + f.drift * d1.get(i, j));
        }
        h.set(i, i, h.get(i, i) + f.potential);
        w[i] = f.weight;
    }
    let (rl, rr) = (stripped.robin_left, stripped.robin_right);
    for j in 0..m {
        h.set(0, j, d1.get(0, j));
        h.set(n, j, d1.get(n, j));
    }
    h.set(0, 0, h.get(0, 0) - rr.c0);
    w[0] = Dd::from(rr.c_lambda);
    h.set(n, n, h.get(n, n) + rl.c0);
    w[n] = Dd::from(-rl.c_lambda);

    let hf = h.to_f64();
    let wf = Mat::from_fn(m, m, |i, j| if i == j { f64::from_dd(w[i]) } else { 0.0 });
    Ok(DiscretizedProblem {
        grid,
        h: hf,
        w: wf,
        h_dd: h,
        w_diag_dd: w,
        label: stripped.problem.label(),
        p_left: stripped.p_left,
        p_right: stripped.p_right,
    })
}

/// One generalized eigenpair as returned by QZ.
#[derive(Debug, Clone)]
pub struct RawPair {
    pub eigenvalue: Complex64,
    pub infinite: bool,
    pub vector: Option<Vec<Complex64>>,
}

/// Magnitude above which a QZ eigenvalue is reported as infinite.
const INFINITE_EIGENVALUE: f64 = 1e14;

fn classify(eigenvalue: Complex64, vector: Option<Vec<Complex64>>) -> RawPair {
    let infinite = !(eigenvalue.re.is_finite() && eigenvalue.im.is_finite()) || eigenvalue.norm() > INFINITE_EIGENVALUE;
    RawPair { eigenvalue, infinite, vector }
}

/// All generalized eigenpairs of (H, W), without inverting W.
///
/// faer's eigenvalue-only QZ path returns NaN on these pencils, so the
/// eigenvectors are always computed and dropped when not requested.
pub fn solve_generalized_matrices(h: &Mat<f64>, w: &Mat<f64>, vectors: bool) -> Result<Vec<RawPair>> {
    let m = h.nrows();
    let evd = h.generalized_eigen(w).map_err(|e| SpectrumError::Solver(format!("{e:?}")))?;
    let (a, b, u) = (evd.S_a(), evd.S_b(), evd.U());
    Ok((0..m)
        .map(|k| {
            let lam = a.column_vector()[k] / b.column_vector()[k];
            let v = vectors.then(|| (0..m).map(|i| u[(i, k)]).collect());
            classify(lam, v)
        })
        .collect())
}

pub fn solve_generalized(dp: &DiscretizedProblem, vectors: bool) -> Result<Vec<RawPair>> {
    solve_generalized_matrices(&dp.h, &dp.w, vectors)
}

/// How the stored eigenfunction was scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    RightEndpoint,
    MaxAbs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// Position in the sorted spectrum at the resolution it was computed at.
    pub overtone: usize,
    pub eigenvalue: f64,
    /// Low-order part of the refined eigenvalue.
    pub eigenvalue_lo: f64,
    /// Values of the regular factor u at the grid points.
    pub u_values: Vec<f64>,
    pub resolution: usize,
    pub converged: bool,
    pub convergence_residual: f64,
    pub imag_discard: f64,
    /// ‖Hu − λWu‖∞ / (‖u‖∞ (1+|λ|)) evaluated in double-double.
    pub residual: f64,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
    pub resolutions: Vec<usize>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.eigenvalue).collect()
    }
}

/// Keeps real, finite eigenvalues below the magnitude cap, ascending.
pub fn filter_spectrum(raw: &[RawPair], realness_tol: f64, magnitude_cap: f64, resolution: usize) -> Vec<EigenPair> {
    let mut out: Vec<EigenPair> = raw
        .iter()
        .filter(|p| !p.infinite)
        .filter(|p| p.eigenvalue.im.abs() <= realness_tol * (1.0 + p.eigenvalue.re.abs()))
        .filter(|p| p.eigenvalue.re.abs() <= magnitude_cap)
        .map(|p| EigenPair {
            overtone: 0,
            eigenvalue: p.eigenvalue.re,
            eigenvalue_lo: 0.0,
            u_values: p.vector.as_ref().map(|v| real_vector(v)).unwrap_or_default(),
            resolution,
            converged: false,
            convergence_residual: f64::NAN,
            imag_discard: p.eigenvalue.im.abs(),
            residual: f64::NAN,
            normalization: Normalization::None,
        })
        .collect();
    out.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    for (i, p) in out.iter_mut().enumerate() {
        p.overtone = i;
    }
    out
}

/// Rotates a complex eigenvector so its largest entry is real and drops the
/// imaginary parts.
fn real_vector(v: &[Complex64]) -> Vec<f64> {
    let k = (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0);
    let pivot = v[k];
    if pivot.norm() == 0.0 {
        return vec![0.0; v.len()];
    }
    v.iter().map(|z| (z / pivot).re).collect()
}

/// Newton refinement of one eigenpair with double-double residuals.
pub fn refine_pair(dp: &DiscretizedProblem, pair: &EigenPair, max_iter: usize) -> EigenPair {
    let m = dp.dim();
    if pair.u_values.len() != m {
        return pair.clone();
    }
    let k = (0..m).max_by(|&a, &b| pair.u_values[a].abs().total_cmp(&pair.u_values[b].abs())).unwrap_or(0);
    let pivot = pair.u_values[k];
    let mut u: Vec<Dd> = pair.u_values.iter().map(|&v| Dd::from(v / pivot)).collect();
    let mut lambda = Dd::from(pair.eigenvalue);
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iter {
        let lam = f64::from_dd(lambda);
        let uf: Vec<f64> = u.iter().map(|&v| f64::from_dd(v)).collect();
        let jac = Mat::from_fn(m + 1, m + 1, |i, j| {
            if i < m && j < m {
                dp.h[(i, j)] - lam * dp.w[(i, j)]
            } else if i < m {
                -dp.w[(i, i)] * uf[i]
            } else if j == k {
                1.0
            } else {
                0.0
            }
        });
        let r = dp.residual_dd(&u, lambda);
        let mut rhs = Mat::from_fn(m + 1, 1, |i, _| if i < m { -f64::from_dd(r[i]) } else { 0.0 });
        let lu = jac.partial_piv_lu();
        lu.solve_in_place(rhs.as_mut());
        let dl = rhs[(m, 0)];
        if !dl.is_finite() {
            break;
        }
        for i in 0..m {
            u[i] += rhs[(i, 0)];
        }
        lambda += dl;
        let step = dl.abs() / (1.0 + lam.abs());
        if step < 1e-24 || step >= last_step {
            break;
        }
        last_step = step;
    }
    let r = dp.residual_dd(&u, lambda);
    let rmax = r.iter().map(|v| v.hi().abs()).fold(0.0, f64::max);
    let umax = u.iter().map(|v| v.hi().abs()).fold(0.0, f64::max);
    let (hi, lo) = split(lambda);
    EigenPair {
        eigenvalue: hi,
        eigenvalue_lo: lo,
        u_values: u.iter().map(|&v| f64::from_dd(v)).collect(),
        residual: rmax / (umax * (1.0 + hi.abs())),
        ..pair.clone()
    }
}

/// Options shared by the single-resolution solve and the convergence scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// |Im λ| ≤ realness_tol·(1+|Re λ|).
    pub realness_tol: f64,
    /// |λ| ≤ cap; `None` means 𝒩².
    pub magnitude_cap: Option<f64>,
    /// Relative change allowed between successive resolutions.
    pub convergence_tol: f64,
    /// Number of lowest eigenpairs to keep; `None` keeps all that pass.
    pub count: Option<usize>,
    /// Polish eigenpairs with double-double Newton steps.
    pub refine: bool,
    /// Compute eigenvectors (required for refinement and export).
    pub vectors: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            realness_tol: 1e-10,
            magnitude_cap: None,
            convergence_tol: 1e-10,
            count: None,
            refine: true,
            vectors: true,
        }
    }
}

/// Filtered and optionally refined eigenpairs at a single resolution.
pub fn spectrum_at<P: Problem>(
    stripped: &StrippedProblem<P>,
    resolution: usize,
    opts: &SolveOptions,
) -> Result<Vec<EigenPair>> {
    let dp = assemble(stripped, resolution)?;
    let vectors = opts.vectors || opts.refine;
    let raw = solve_generalized(&dp, vectors)?;
    let cap = opts.magnitude_cap.unwrap_or((resolution * resolution) as f64);
    let mut pairs = filter_spectrum(&raw, opts.realness_tol, cap, resolution);
    if let Some(c) = opts.count {
        pairs.truncate(c);
    }
    if opts.refine {
        pairs = pairs.iter().map(|p| refine_pair(&dp, p, 8)).collect();
        pairs.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
        pairs.dedup_by(|b, a| (a.eigenvalue - b.eigenvalue).abs() <= 1e-12 * (1.0 + a.eigenvalue.abs()));
        for (i, p) in pairs.iter_mut().enumerate() {
            p.overtone = i;
        }
    }
    Ok(pairs)
}

/// Default resolution ladder {𝒩, 𝒩+25, 𝒩+50}.
pub fn default_resolutions(base: usize) -> Vec<usize> {
    vec![base, base + 25, base + 50]
}

/// True when some node cos(iπ/𝒩) lands on an interior singular point.
pub fn hits_singular_point<P: Problem>(problem: &P, resolution: usize) -> bool {
    let n = resolution as f64;
    problem.interior_singular_points().iter().any(|&x0| {
        // the node nearest to x0 in angle
        let i = (x0.clamp(-1.0, 1.0).acos() * n / std::f64::consts::PI).round();
        ((i * std::f64::consts::PI / n).cos() - x0).abs() < 1e-12
    })
}

/// The default ladder with each rung moved up by one when its grid would
/// touch an interior singular point (for the tensor problem, even 𝒩).
pub fn resolution_ladder<P: Problem>(problem: &P, base: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for mut r in default_resolutions(base) {
        while hits_singular_point(problem, r) || out.last().is_some_and(|&l| r <= l) {
            r += 1;
        }
        out.push(r);
    }
    out
}

/// Eigenpairs stable across the resolution ladder.
///
/// Values are matched between successive resolutions by nearest neighbour
/// within 0.1(1+|λ|). The reported eigenvalue and eigenfunction are those at
/// the first (base) resolution; the higher resolutions only certify them.
pub fn converge<P: Problem>(
    stripped: &StrippedProblem<P>,
    resolutions: &[usize],
    opts: &SolveOptions,
) -> Result<Spectrum> {
    if resolutions.len() < 2 {
        return Err(SpectrumError::InvalidInput("convergence needs at least two resolutions".into()));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectrumError::InvalidInput("resolutions must be strictly ascending".into()));
    }
    let base = spectrum_at(stripped, resolutions[0], opts)?;
    // chains of matched values, one per base pair; None once a chain breaks
    let mut chains: Vec<Option<(f64, f64)>> = base.iter().map(|p| Some((p.eigenvalue, 0.0))).collect();
    for &r in &resolutions[1..] {
        let dp = assemble(stripped, r)?;
        let raw = solve_generalized(&dp, opts.refine)?;
        let cap = opts.magnitude_cap.unwrap_or((r * r) as f64);
        let candidates = filter_spectrum(&raw, opts.realness_tol, cap, r);
        // only the candidates nearest to a chain are polished
        let mut polished: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
        for chain in chains.iter_mut() {
            let Some((current, worst)) = *chain else { continue };
            let window = 0.1 * (1.0 + current.abs());
            let nearest = (0..candidates.len()).min_by(|&a, &b| {
                (candidates[a].eigenvalue - current).abs().total_cmp(&(candidates[b].eigenvalue - current).abs())
            });
            *chain = match nearest {
                Some(j) if (candidates[j].eigenvalue - current).abs() <= window => {
                    let v = *polished.entry(j).or_insert_with(|| {
                        if opts.refine {
                            refine_pair(&dp, &candidates[j], 8).eigenvalue
                        } else {
                            candidates[j].eigenvalue
                        }
                    });
                    Some((v, worst.max((v - current).abs() / (1.0 + v.abs()))))
                }
                _ => None,
            };
        }
    }
    let mut kept = Vec::new();
    for (pair, chain) in base.iter().zip(&chains) {
        if let Some((_, worst)) = *chain {
            if worst <= opts.convergence_tol {
                let mut p = pair.clone();
                p.converged = true;
                p.convergence_residual = worst;
                kept.push(p);
            }
        }
    }
    if kept.is_empty() {
        return Err(SpectrumError::NoConvergedEigenvalues);
    }
    Ok(Spectrum { pairs: kept, resolutions: resolutions.to_vec() })
}

/// Scales the eigenfunction so that u(x = 1) = 1, or to unit maximum when
/// the right-endpoint value is negligible.
pub fn normalize_and_report(pair: &EigenPair) -> EigenPair {
    let mut p = pair.clone();
    let umax = p.u_values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if umax == 0.0 {
        return p;
    }
    let right = p.u_values[0];
    let (scale, how) = if right.abs() >= 1e-10 * umax {
        (right, Normalization::RightEndpoint)
    } else {
        let k = (0..p.u_values.len()).max_by(|&a, &b| p.u_values[a].abs().total_cmp(&p.u_values[b].abs())).unwrap();
        (p.u_values[k], Normalization::MaxAbs)
    };
    for v in &mut p.u_values {
        *v /= scale;
    }
    p.normalization = how;
    p
}

/// Clenshaw–Curtis weights on the Gauss–Lobatto grid of the given resolution.
pub fn clenshaw_curtis_weights(resolution: usize) -> Vec<f64> {
    let n = resolution;
    let mut w = vec![0.0; n + 1];
    let theta = |i: usize| std::f64::consts::PI * i as f64 / n as f64;
    if n.is_multiple_of(2) {
        w[0] = 1.0 / ((n * n - 1) as f64);
        w[n] = w[0];
    } else {
        w[0] = 1.0 / ((n * n) as f64);
        w[n] = w[0];
    }
    for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
        let mut v = 1.0;
        if n.is_multiple_of(2) {
            v -= ((n as f64) * theta(i)).cos() / ((n * n - 1) as f64);
            for k in 1..n / 2 {
                v -= 2.0 * (2.0 * k as f64 * theta(i)).cos() / ((4 * k * k - 1) as f64);
            }
        } else {
            for k in 1..=(n - 1) / 2 {
                v -= 2.0 * (2.0 * k as f64 * theta(i)).cos() / ((4 * k * k - 1) as f64);
            }
        }
        *wi = 2.0 * v / n as f64;
    }
    w
}

/// ∫ h_u h_v w dx over [−1,1], with the singular factors reinstated so that
/// the integral is over the physical eigenfunctions.
pub fn weighted_inner_product<P: Problem + SturmLiouville>(
    u: &[f64],
    v: &[f64],
    stripped: &StrippedProblem<P>,
    grid: &CollocationGrid,
) -> Result<f64> {
    if u.len() != grid.len() || v.len() != grid.len() {
        return Err(SpectrumError::InvalidInput("vectors do not match the grid".into()));
    }
    let cw = clenshaw_curtis_weights(grid.resolution());
    let mut s = 0.0;
    for (i, &x) in grid.points().iter().enumerate() {
        // (1+x)^{−2p_left}(1−x)^{−2p_right} w(x), with the endpoint limit
        // taken as zero when the factor vanishes there
        let f = (1.0 + x).powf(-2.0 * stripped.p_left) * (1.0 - x).powf(-2.0 * stripped.p_right);
        let f = if f.is_finite() { f } else { 0.0 };
        let wx = stripped.problem.w(x);
        let wx = if wx.is_finite() { wx } else { 0.0 };
        s += cw[i] * u[i] * v[i] * f * wx;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids() {
        let g = gauss_lobatto(2).unwrap();
        assert_eq!(g.points(), &[1.0, 0.0, -1.0]);
        let g = gauss_lobatto(4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (a, b) in g.points().iter().zip([1.0, h, 0.0, -h, -1.0]) {
            assert!((a - b).abs() < 1e-16);
        }
        assert!(gauss_lobatto(1).is_err());
    }

    #[test]
    fn two_by_two_pencil() {
        let h = Mat::from_fn(2, 2, |i, j| if i == j { [2.0, 6.0][i] } else { 0.0 });
        let w = Mat::from_fn(2, 2, |i, j| if i == j { [1.0, 2.0][i] } else { 0.0 });
        for vectors in [false, true] {
            let mut e: Vec<f64> = solve_generalized_matrices(&h, &w, vectors)
                .unwrap()
                .iter()
                .map(|p| p.eigenvalue.re)
                .collect();
            e.sort_by(f64::total_cmp);
            assert!((e[0] - 2.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_weight_gives_infinite_eigenvalue() {
        let h = Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 0.0 });
        let w = Mat::from_fn(2, 2, |i, j| if i == j && i == 0 { 1.0 } else { 0.0 });
        let raw = solve_generalized_matrices(&h, &w, false).unwrap();
        assert_eq!(raw.iter().filter(|p| p.infinite).count(), 1);
        assert!(raw.iter().any(|p| !p.infinite && (p.eigenvalue.re - 1.0).abs() < 1e-14));
    }

    #[test]
    fn realness_and_cap_filters() {
        let raw = vec![
            classify(Complex64::new(1.0, 0.3), None),
            classify(Complex64::new(1.0, -0.3), None),
            classify(Complex64::new(5.0, 1e-14), None),
            classify(Complex64::new(2e4, 0.0), None),
        ];
        let kept = filter_spectrum(&raw, 1e-10, 100.0, 10);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].eigenvalue, 5.0);
    }

    #[test]
    fn clenshaw_curtis_integrates_polynomials() {
        let g = gauss_lobatto(16).unwrap();
        let w = clenshaw_curtis_weights(16);
        let s: f64 = g.points().iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-15);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-15);
        let w = clenshaw_curtis_weights(15);
        let g = gauss_lobatto(15).unwrap();
        let s: f64 = g.points().iter().zip(&w).map(|(x, w)| w * x.powi(6)).sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-15);
        // smooth non-polynomial integrand, both parities
        for n in [48, 49, 96] {
            let g = gauss_lobatto(n).unwrap();
            let s: f64 = g.points().iter().zip(clenshaw_curtis_weights(n)).map(|(x, w)| w / (2.0 - x)).sum();
            assert!((s - 3f64.ln()).abs() < 1e-14, "n = {n}");
        }
    }
}
