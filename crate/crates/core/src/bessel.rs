//! Bessel functions of the first kind `J_ν` for real order `ν ≥ 0`, and
//! their positive zeros `j_{ν,n}`.
//!
//! Evaluation strategy:
//!
//! * `x ≤ 12`: ascending power series
//!   `J_ν(x) = Σ_m (-1)^m (x/2)^{2m+ν} / (m! Γ(m+ν+1))`.
//!   The largest term at `x = 12` is about `4·10³`, so cancellation costs
//!   at most four digits.
//! * `x > 12`: Hankel's large-argument expansion for the two seed orders
//!   `μ = frac(ν)` and `μ + 1`, followed by upward three-term recurrence to
//!   `ν`. With `μ < 2` the expansion's smallest term at `x = 12` is below
//!   `10⁻¹¹`, and upward recurrence is stable while the order stays below
//!   `x`, which always holds for `ν ≤ 12`.
//!
//! Orders above the argument (`ν > x > 12`) fall back to the series; they
//! are outside the accuracy envelope (`ν ≤ 12`, `x ≤ 100`) of this module.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Argument at which evaluation switches from the power series to the
/// asymptotic-plus-recurrence path.
pub const SERIES_SWITCHOVER: f64 = 12.0;

/// Order `ν` of a Bessel function; finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {nu}")));
        }
        Ok(BesselOrder(nu))
    }

    /// Integer order `m`.
    pub fn integer(m: u32) -> Self {
        BesselOrder(m as f64)
    }

    /// Half-integer order `k/2`, as used by angular sectors of opening `2π/k`.
    pub fn half(k: u32) -> Self {
        BesselOrder(k as f64 / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `J_ν(x)` for `x ≥ 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(eval(order.0, x))
}

fn eval(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_SWITCHOVER || nu > x {
        return series(nu, x);
    }
    let base = nu.floor();
    let mu = nu - base;
    let mut prev = hankel(mu, x);
    if base == 0.0 {
        return prev;
    }
    let mut cur = hankel(mu + 1.0, x);
    let steps = base as usize;
    for j in 1..steps {
        let order = mu + j as f64;
        let next = 2.0 * order / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = half.powf(nu) / libm::tgamma(nu + 1.0);
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= -q / (m * (m + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && m > half {
            break;
        }
        if m > 500.0 {
            break;
        }
        m += 1.0;
    }
    sum
}

/// Hankel's asymptotic expansion, truncated at its smallest term.
fn hankel(mu: f64, x: f64) -> f64 {
    let four_mu2 = 4.0 * mu * mu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= (four_mu2 - odd * odd) / (k as f64 * 8.0 * x);
        let mag = a.abs();
        if mag == 0.0 || mag > last {
            break;
        }
        last = mag;
        // k even feeds P with sign (-1)^{k/2}; k odd feeds Q with sign (-1)^{(k-1)/2}.
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if mag < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * mu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// McMahon's large-zero expansion for `j_{ν,n}`.
pub fn mcmahon_guess(order: BesselOrder, n: u32) -> f64 {
    let nu = order.0;
    let mu = 4.0 * nu * nu;
    let beta = (n as f64 + 0.5 * nu - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5))
}

/// Scan step used to isolate zeros; consecutive zeros of `J_ν` are more than
/// `2.4` apart, so a step this size never steps over two of them.
const SCAN_STEP: f64 = 0.25;

/// The `n`-th positive zero of `J_ν` (`n ≥ 1`), accurate to about `1e-13`.
///
/// The bracket containing the `n`-th sign change is isolated by a forward
/// scan from `ν` (there is no zero of `J_ν` in `(0, ν]`); the McMahon value
/// seeds a safeguarded secant refinement inside that bracket.
pub fn bessel_zero(order: BesselOrder, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("zero index n must be >= 1".into()));
    }
    Ok(*bessel_zeros(order, n)?.last().expect("n >= 1 zeros"))
}

/// The first `count` positive zeros of `J_ν`, from a single scan.
pub fn bessel_zeros(order: BesselOrder, count: u32) -> Result<Vec<f64>> {
    let nu = order.0;
    let f = |x: f64| eval(nu, x);
    let mut zeros = Vec::with_capacity(count as usize);
    let mut a = nu.max(1e-3);
    let mut fa = f(a);
    while zeros.len() < count as usize {
        let b = a + SCAN_STEP;
        let fb = f(b);
        if fb == 0.0 {
            zeros.push(b);
            a = b + 1e-9;
            fa = f(a);
            continue;
        }
        if fa.signum() != fb.signum() {
            let guess = mcmahon_guess(order, zeros.len() as u32 + 1);
            zeros.push(refine_root(f, a, b, fa, fb, guess));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// Illinois-style regula falsi with a bisection fallback; `guess` is used
/// as the first interior point when it lies in the bracket.
fn refine_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64, guess: f64) -> f64 {
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let mut side = 0i8;
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if hi - lo < 1e-14 * hi.max(1.0) {
            break;
        }
        let secant = (lo * fhi - hi * flo) / (fhi - flo);
        x = if secant > lo && secant < hi { secant } else { 0.5 * (lo + hi) };
    }
    0.5 * (lo + hi)
}
