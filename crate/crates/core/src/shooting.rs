//! Independent check of collocation eigenvalues by shooting.
//!
//! The regular factor u is started from its endpoint series a short
//! distance inside each pole and integrated with an adaptive Dormand–Prince
//! 5(4) scheme. Eigenvalues are zeros of the normalized Wronskian of the two
//! solutions at a matching point.
//!
//! A problem with an interior singular point cannot be integrated through
//! it. There the solution from the right pole is matched instead against one
//! Frobenius branch of the interior point, evaluated a short distance away.

use crate::error::{Result, SpectrumError};
use crate::problem::Problem;
use crate::singular::{Endpoint, LocalData, StrippedProblem};

/// Offset of the starting points from the poles.
pub const START_OFFSET: f64 = 1e-6;
/// Order of the endpoint series that sets the initial data.
pub const START_ORDER: usize = 3;
/// Relative tolerance of the integrator.
pub const RTOL: f64 = 1e-12;
/// Solutions are rescaled to unit size once they exceed this.
const RESCALE_ABOVE: f64 = 1e6;

/// State (u, u').
type State = [f64; 2];

/// Dormand–Prince 5(4) integration of u'' = f(x, u, u') from x0 to x1.
pub fn integrate(rhs: impl Fn(f64, State) -> State, x0: f64, y0: State, x1: f64, rtol: f64) -> Result<State> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    // the first step is sized to the distance from the start
    let mut h = dir * (1e-3 * span.abs()).min(0.1 * START_OFFSET.max(1e-12));
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > 2_000_000 {
            return Err(SpectrumError::Integrator("too many steps".into()));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = rhs(x + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut err = [0.0; 2];
        for s in 0..7 {
            for c in 0..2 {
                y5[c] += h * B5[s] * k[s][c];
                err[c] += h * (B5[s] - B4[s]) * k[s][c];
            }
        }
        if !(y5[0].is_finite() && y5[1].is_finite()) {
            return Err(SpectrumError::Integrator(format!("non-finite state near x = {x}")));
        }
        let scale = y[0].abs().max(y5[0].abs()) + y[1].abs().max(y5[1].abs());
        let e = (err[0].abs() + err[1].abs()) / (rtol * scale + 1e-300);
        if e <= 1.0 {
            x += h;
            y = y5;
            let size = y[0].abs() + y[1].abs();
            if size > RESCALE_ABOVE {
                y = [y[0] / size, y[1] / size];
            }
        }
        let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-15 * x.abs().max(1e-300) {
            return Err(SpectrumError::Integrator(format!("step size underflow near x = {x}")));
        }
    }
    Ok(y)
}

/// Which Frobenius branch of an interior singular point the right-hand
/// solution is matched to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The exponent nearest zero.
    Analytic,
    /// The other exponent.
    Subdominant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Matching point of the two-sided scheme.
    pub x_match: f64,
    /// Interior branch used when the problem has an interior singular point.
    pub branch: Branch,
    /// Distance from the interior singular point at which the branch is
    /// evaluated.
    pub anchor_offset: f64,
    pub rtol: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { x_match: 0.0, branch: Branch::Analytic, anchor_offset: 0.3, rtol: RTOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    pub eigenvalue: f64,
    pub match_residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// Order of the interior Frobenius series.
const ANCHOR_ORDER: usize = 40;

struct Anchor {
    data: LocalData,
    sigma: f64,
    at: f64,
}

/// Shooting set-up for one stripped problem: endpoint series data are
/// λ-independent and computed once.
pub struct Shooter<'a, P: Problem> {
    stripped: &'a StrippedProblem<P>,
    left: LocalData,
    right: LocalData,
    anchor: Option<Anchor>,
    opts: ShootingOptions,
}

fn nearest_zero(data: &LocalData) -> Result<f64> {
    let r = data.exponents()?;
    Ok(if r[0].abs() < r[1].abs() { r[0] } else { r[1] })
}

impl<'a, P: Problem> Shooter<'a, P> {
    pub fn new(stripped: &'a StrippedProblem<P>, opts: ShootingOptions) -> Result<Self> {
        if !(opts.x_match > -1.0 && opts.x_match < 1.0) {
            return Err(SpectrumError::InvalidInput(format!("matching point {} outside (−1, 1)", opts.x_match)));
        }
        let left = stripped.local_data(-1.0, 1.0, START_ORDER)?;
        let right = stripped.local_data(1.0, -1.0, START_ORDER)?;
        let singular = stripped.problem.interior_singular_points();
        let anchor = match singular.iter().copied().fold(None::<f64>, |acc, x| Some(acc.map_or(x, |a| a.max(x)))) {
            None => None,
            Some(x0) => {
                let data = stripped.local_data(x0, 1.0, ANCHOR_ORDER)?;
                let r = data.exponents()?;
                let (near, far) = if r[0].abs() < r[1].abs() { (r[0], r[1]) } else { (r[1], r[0]) };
                let sigma = match opts.branch {
                    Branch::Analytic => near,
                    Branch::Subdominant => far,
                };
                let at = x0 + opts.anchor_offset;
                if at >= 1.0 {
                    return Err(SpectrumError::InvalidInput("anchor point lies beyond the right pole".into()));
                }
                Some(Anchor { data, sigma, at })
            }
        };
        Ok(Self { stripped, left, right, anchor, opts })
    }

    fn rhs(&self, lambda: f64) -> impl Fn(f64, State) -> State + '_ {
        move |x, y| {
            let f = self.stripped.u_form(x);
            [y[1], lambda * f.weight * y[0] - f.drift * y[1] - f.potential * y[0]]
        }
    }

    fn start(&self, end: Endpoint, lambda: f64) -> Result<(f64, State)> {
        let data = match end {
            Endpoint::Left => &self.left,
            Endpoint::Right => &self.right,
        };
        let sigma = nearest_zero(data)?;
        let (u, du) = series_value(data, sigma, lambda, START_ORDER, START_OFFSET)?;
        Ok((end.x() + data.direction * START_OFFSET, [u, du]))
    }

    /// Normalized Wronskian (u_L u_R' − u_R u_L') / (|y_L| |y_R|).
    pub fn residual(&self, lambda: f64) -> Result<f64> {
        let (xr, yr) = self.start(Endpoint::Right, lambda)?;
        let (x_to, yl) = match &self.anchor {
            None => {
                let (xl, yl) = self.start(Endpoint::Left, lambda)?;
                let yl = integrate(self.rhs(lambda), xl, yl, self.opts.x_match, self.opts.rtol)?;
                (self.opts.x_match, yl)
            }
            Some(a) => {
                let (u, du) = series_value(&a.data, a.sigma, lambda, ANCHOR_ORDER, a.at - a.data.x0)?;
                (a.at, [u, du])
            }
        };
        let yr = integrate(self.rhs(lambda), xr, yr, x_to, self.opts.rtol)?;
        let w = yl[0] * yr[1] - yr[0] * yl[1];
        Ok(w / (yl[0].hypot(yl[1]) * yr[0].hypot(yr[1])))
    }
}

/// u and du/dx of the Frobenius branch t^σ Σ a_k t^k at distance t.
fn series_value(data: &LocalData, sigma: f64, lambda: f64, order: usize, t: f64) -> Result<(f64, f64)> {
    let a = data.series(sigma, lambda, order)?;
    let mut s = 0.0;
    let mut ds = 0.0;
    for (k, ak) in a.iter().enumerate().rev() {
        s = s * t + ak;
        if k > 0 {
            ds = ds * t + k as f64 * ak;
        }
    }
    // d/dt [t^σ s(t)] = t^σ (σ s/t + s'(t)), and dx = direction·dt
    let ts = t.powf(sigma);
    let u = ts * s;
    let du_dt = ts * (sigma * s / t + ds);
    Ok((u, data.direction * du_dt))
}

/// Residual at one trial eigenvalue with the default options and matching
/// point `x_match`.
pub fn shoot_residual<P: Problem>(stripped: &StrippedProblem<P>, lambda: f64, x_match: f64) -> Result<f64> {
    Shooter::new(stripped, ShootingOptions { x_match, ..Default::default() })?.residual(lambda)
}

/// Secant steps safeguarded by bisection until the bracket is below `tol`.
pub fn refine<P: Problem>(
    stripped: &StrippedProblem<P>,
    bracket: (f64, f64),
    tol: f64,
    opts: ShootingOptions,
) -> Result<ShootingResult> {
    let shooter = Shooter::new(stripped, opts)?;
    let (mut a, mut b) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let mut fa = shooter.residual(a)?;
    let mut fb = shooter.residual(b)?;
    if fa == 0.0 {
        return Ok(ShootingResult { eigenvalue: a, match_residual: 0.0, iterations: 0, bracket });
    }
    if fb == 0.0 {
        return Ok(ShootingResult { eigenvalue: b, match_residual: 0.0, iterations: 0, bracket });
    }
    if fa.signum() == fb.signum() {
        return Err(SpectrumError::NoSignChange { lo: a, hi: b });
    }
    let mut iterations = 0;
    let mut widths = vec![b - a];
    while b - a > tol && iterations < 200 {
        iterations += 1;
        let secant = b - fb * (b - a) / (fb - fa);
        // bisect when the secant leaves the bracket or two steps failed to
        // halve it
        let stalled = widths.len() >= 2 && (b - a) > 0.5 * widths[widths.len() - 2];
        let x = if secant > a && secant < b && !stalled { secant } else { 0.5 * (a + b) };
        let fx = shooter.residual(x)?;
        if fx == 0.0 {
            return Ok(ShootingResult { eigenvalue: x, match_residual: 0.0, iterations, bracket });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        widths.push(b - a);
    }
    let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    Ok(ShootingResult { eigenvalue: x, match_residual: fx.abs(), iterations, bracket })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_harmonic_oscillator() {
        let y = integrate(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], std::f64::consts::PI / 2.0, 1e-12).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
        let y = integrate(|_, y| [y[1], -y[0]], 1.0, [1.0f64.sin(), 1.0f64.cos()], -0.5, 1e-12).unwrap();
        assert!((y[0] - (-0.5f64).sin()).abs() < 1e-10);
    }
}
