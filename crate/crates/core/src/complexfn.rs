//! Dilogarithm, Lobachevsky function, the kernel `L(x)` and `log S_b`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

pub type ComplexValue = Complex64;

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const PI2_6: f64 = PI * PI / 6.0;

/// The quantum parameter `b` together with `Q = b + 1/b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ModularParam {
    b: f64,
    q: f64,
}

impl ModularParam {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::domain(format!("b must lie in (0,1), got {b}")));
        }
        Ok(ModularParam { b, q: b + 1.0 / b })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    #[allow(non_snake_case)]
    pub fn Q(&self) -> f64 {
        self.q
    }
}

impl TryFrom<f64> for ModularParam {
    type Error = Error;
    fn try_from(b: f64) -> Result<Self> {
        ModularParam::new(b)
    }
}

impl From<ModularParam> for f64 {
    fn from(p: ModularParam) -> f64 {
        p.b
    }
}

// ---------------------------------------------------------------------------
// dilogarithm

/// B_{2k}/(2k+1)! for k = 1.., used in the series in `-log(1-z)`.
fn bernoulli_coeffs() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = Vec::with_capacity(24);
        for k in 1..=24usize {
            let n = 2 * k;
            let zeta = match k {
                1 => PI.powi(2) / 6.0,
                2 => PI.powi(4) / 90.0,
                3 => PI.powi(6) / 945.0,
                _ => {
                    let m = 60usize;
                    let mut s = 0.0;
                    for j in (1..=m).rev() {
                        s += (j as f64).powi(-(n as i32));
                    }
                    let mf = m as f64;
                    s + mf.powi(1 - n as i32) / (n as f64 - 1.0) - 0.5 * mf.powi(-(n as i32))
                }
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let c = sign * 2.0 * zeta / ((2.0 * PI).powi(n as i32) * (n as f64 + 1.0));
            out.push(c);
        }
        out
    })
}

/// `sum B_n u^{n+1}/(n+1)!`, which equals Li2(1 - e^{-u}).
fn bernoulli_series(u: C) -> C {
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut pw = u * u2;
    for &c in bernoulli_coeffs() {
        let term = pw * c;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        pw *= u2;
    }
    sum
}

fn li2_power(z: C) -> C {
    let mut sum = C::new(0.0, 0.0);
    let mut pw = z;
    for n in 1..200 {
        let term = pw / (n * n) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        pw *= z;
    }
    sum
}

/// Principal branch. Points on the cut are evaluated as limits from above
/// or below according to the sign of the (possibly signed-zero) imaginary part.
fn li2(z: C) -> C {
    if z.re == 0.0 && z.im == 0.0 {
        return C::new(0.0, 0.0);
    }
    if z.im == 0.0 && z.re == 1.0 {
        return C::new(PI2_6, 0.0);
    }
    if z.im == 0.0 && z.re > 1.0 {
        return li2_on_cut(z.re, !z.im.is_sign_negative());
    }
    let r = z.norm();
    if r <= 0.5 {
        return li2_power(z);
    }
    if r > 1.0 {
        // inversion
        let lm = (-z).ln();
        return -li2(z.inv()) - PI2_6 - 0.5 * lm * lm;
    }
    if z.re <= 0.5 {
        bernoulli_series(-(C::new(1.0, 0.0) - z).ln())
    } else {
        // reflection z -> 1-z
        let lz = z.ln();
        PI2_6 - lz * (C::new(1.0, 0.0) - z).ln() - bernoulli_series(-lz)
    }
}

/// Li2(x ± i0) for x > 1.
fn li2_on_cut(x: f64, upper: bool) -> C {
    let lx = x.ln();
    let re = PI * PI / 3.0 - 0.5 * lx * lx - li2(C::new(1.0 / x, 0.0)).re;
    let im = if upper { PI * lx } else { -PI * lx };
    C::new(re, im)
}

/// Li2 with an explicit side for points on (or numerically next to) the cut.
fn li2_side(z: C, upper: bool) -> C {
    if z.re > 1.0 && z.im.abs() <= 1e-14 * z.re {
        li2_on_cut(z.re, upper)
    } else {
        li2(z)
    }
}

/// The dilogarithm on the principal sheet.
pub fn dilog(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("non-finite argument to dilog"));
    }
    if z.re > 1.0 && z.im.abs() <= 1e-15 * z.re {
        return Err(Error::domain(format!("dilog argument {z} lies on the cut (1,inf)")));
    }
    Ok(li2(z))
}

/// `Λ(θ) = -∫_0^θ ln|2 sin t| dt`.
pub fn lobachevsky(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    let t = theta.rem_euclid(PI);
    if t == 0.0 {
        return 0.0;
    }
    0.5 * li2(C::from_polar(1.0, 2.0 * t)).im
}

// ---------------------------------------------------------------------------
// L(x) and derivatives

fn exp2i(x: C) -> C {
    (2.0 * I * x).exp()
}

/// Period index and strip representative of `x`, with `0 <= Re x0 < π`.
fn reduce(x: C) -> (f64, C) {
    let n = (x.re / PI).floor();
    let mut x0 = x - n * PI;
    if x0.re < 0.0 {
        x0.re = 0.0;
    }
    (n, x0)
}

/// Strip evaluation for `0 <= Re x <= π`; boundary lines use the limit from inside.
fn l_strip(x: C) -> C {
    let z = exp2i(x);
    let upper = x.re < 0.5 * PI;
    x * x - PI * x + PI2_6 - li2_side(z, upper)
}

/// `L(x) = x² − πx + π²/6 − Li2(e^{2ix})`, continued by `L(x+π) = L(x) ± 2πx`.
pub fn l_potential(x: ComplexValue) -> Result<ComplexValue> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::domain("non-finite argument to L"));
    }
    if x.im == 0.0 {
        if (0.0..=PI).contains(&x.re) {
            return Ok(l_strip(x));
        }
        return Err(Error::domain(format!("L({x}): real argument outside [0,π]")));
    }
    let (n, x0) = reduce(x);
    let s = x.im.signum();
    let base = l_strip(x0);
    let shift = if n > 0.0 {
        n * x0 + PI * n * (n - 1.0) / 2.0
    } else if n < 0.0 {
        let m = -n;
        -(m * x0 - PI * m * (m + 1.0) / 2.0)
    } else {
        C::new(0.0, 0.0)
    };
    Ok(base + s * 2.0 * PI * shift)
}

fn branch_point_check(x: C, what: &str) -> Result<()> {
    let d = x.re - PI * (x.re / PI).round();
    if (C::new(d, x.im)).norm() < 1e-7 {
        return Err(Error::domain(format!("{what}: argument {x} within 1e-7 of a branch point")));
    }
    Ok(())
}

/// `log(1 − e^{2ix})` for `0 <= Re x < π`; on the strip edges the value is
/// the limit from inside the strip.
fn log1m_e2i_strip(x0: C) -> C {
    let w = C::new(1.0, 0.0) - exp2i(x0);
    if w.re < 0.0 && w.im.abs() <= 1e-14 * w.re.abs() {
        // 1 - z on the negative axis: side fixed by the strip edge
        let side = if x0.re < 0.5 * PI { -1.0 } else { 1.0 };
        C::new((-w.re).ln(), side * PI)
    } else {
        w.ln()
    }
}

/// `log(1 − e^{2ix})` continued like `L'`, i.e. `(L'(x) − 2x + π)/(2i)`:
/// the strip value plus `2πi n` below the real axis, `n` periods away.
pub fn log_one_minus_e2i(x: ComplexValue) -> Result<ComplexValue> {
    branch_point_check(x, "log(1 - e^{2ix})")?;
    let (n, x0) = reduce(x);
    let shift = if x.im < 0.0 { 2.0 * PI * n } else { 0.0 };
    Ok(log1m_e2i_strip(x0) + C::new(0.0, shift))
}

/// `L'(x) = 2x − π + 2i log(1 − e^{2ix})`, continued along periods.
pub fn l_potential_d1(x: ComplexValue) -> Result<ComplexValue> {
    branch_point_check(x, "L'")?;
    if x.im == 0.0 && !(0.0..=PI).contains(&x.re) {
        return Err(Error::domain(format!("L'({x}): real argument outside [0,π]")));
    }
    let (n, x0) = reduce(x);
    let base = 2.0 * x0 - PI + 2.0 * I * log1m_e2i_strip(x0);
    let s = if x.im == 0.0 { 0.0 } else { x.im.signum() };
    Ok(base + s * 2.0 * PI * n)
}

/// `L''(x) = 2(1 + e^{2ix})/(1 − e^{2ix})`.
pub fn l_potential_d2(x: ComplexValue) -> Result<ComplexValue> {
    branch_point_check(x, "L''")?;
    let z = exp2i(x);
    Ok(2.0 * (1.0 + z) / (1.0 - z))
}

// ---------------------------------------------------------------------------
// double sine

/// `log(2 sin x)` with the principal imaginary part, stable for large `|Im x|`.
pub(crate) fn log_2sin(x: C) -> Option<C> {
    let v = if x.im.abs() < 20.0 {
        let s = 2.0 * x.sin();
        if s.norm() < 1e-12 {
            return None;
        }
        return Some(s.ln());
    } else if x.im > 0.0 {
        // 2 sin x = i e^{-ix} (1 - e^{2ix})
        C::new(0.0, 0.5 * PI) - I * x + (C::new(1.0, 0.0) - (2.0 * I * x).exp()).ln()
    } else {
        C::new(0.0, -0.5 * PI) + I * x + (C::new(1.0, 0.0) - (-2.0 * I * x).exp()).ln()
    };
    let tau = 2.0 * PI;
    let mut im = v.im - tau * (v.im / tau).round();
    if im <= -PI {
        im += tau;
    }
    Some(C::new(v.re, im))
}

/// Reusable evaluator for `log S_b` at a fixed `b`.
///
/// The strip integral is evaluated after subtracting `w κ²/sinh²(κt)`
/// (`κ = 1/(2b)`), which cancels the double pole at `t = 0`; the remainder is
/// even, analytic in `|Im t| < 2π b` and is integrated by the trapezoid rule.
#[derive(Debug, Clone)]
pub struct DoubleSine {
    p: ModularParam,
    h: f64,
    nodes: Vec<f64>,
    kern: Vec<f64>,
    sub: Vec<f64>,
    kappa: f64,
    t_asym: f64,
}

/// Result of one evaluation together with its shift ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSbEval {
    pub value: C,
    /// Net number of `b` and `1/b` steps used to reach the centre strip.
    pub shifts_b: i64,
    pub shifts_binv: i64,
    pub asymptotic: bool,
}

impl DoubleSine {
    pub fn new(p: ModularParam) -> Self {
        let b = p.b();
        let kappa = 0.5 / b;
        let t_asym = 30.0 / (2.0 * PI * b.min(1.0 / b));
        let d = 0.7 * 2.0 * PI * b;
        let h = 2.0 * PI * d / (40.0 + t_asym * d);
        let mut nodes = Vec::new();
        let mut kern = Vec::new();
        let mut sub = Vec::new();
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            let kn = 1.0 / (4.0 * t * (0.5 * b * t).sinh() * (0.5 * t / b).sinh());
            let sh = (kappa * t).sinh();
            let sb = kappa * kappa / (sh * sh);
            // |sinh(w t)| <= cosh(Re w t) e^{...}; Re w is at most b/2 after centring
            let env = kn * (0.5 * b * t).cosh() + sb;
            nodes.push(t);
            kern.push(kn);
            sub.push(sb);
            if (env * t < 1e-19 && k > 8) || k > 100_000 {
                break;
            }
            k += 1;
        }
        DoubleSine { p, h, nodes, kern, sub, kappa, t_asym }
    }

    pub fn param(&self) -> ModularParam {
        self.p
    }

    /// Number of quadrature nodes in the strip integral.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn strip_integral(&self, z: C) -> C {
        let b = self.p.b();
        let w = 0.5 * self.p.Q() - z;
        let k2 = self.kappa * self.kappa;
        let h0 = w * w * w / 6.0 - w * (b * b + 1.0 / (b * b)) / 24.0 + w * k2 / 3.0;
        let mut sum = 0.5 * h0;
        for i in 0..self.nodes.len() {
            let t = self.nodes[i];
            sum += (w * t).sinh() * self.kern[i] - w * self.sub[i];
        }
        2.0 * self.h * sum - 2.0 * self.kappa * w
    }

    fn asymptotic(&self, z: C) -> C {
        let q = self.p.Q();
        let s = z.im.signum();
        -s * (0.5 * PI * I * z * (z - q) + PI * I / 12.0 * (q * q + 1.0))
    }

    /// `log S_b(z)` with the shift ledger.
    pub fn eval(&self, z: C) -> Result<LogSbEval> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("non-finite argument to log S_b"));
        }
        let b = self.p.b();
        let binv = 1.0 / b;
        let centre = 0.5 * self.p.Q();
        let pole = || Error::Pole(format!("{z} (b = {b})"));
        let mut acc = C::new(0.0, 0.0);
        let mut zz = z;
        let mut shifts_binv = 0i64;
        let mut shifts_b = 0i64;
        // coarse steps of 1/b: S(z+1/b) = 2 sin(π z/b) S(z)
        let m = ((centre - zz.re) * b).round() as i64;
        for _ in 0..m.max(0) {
            acc -= log_2sin(PI * zz * binv).ok_or_else(pole)?;
            zz += binv;
            shifts_binv += 1;
        }
        for _ in 0..(-m).max(0) {
            zz -= binv;
            acc += log_2sin(PI * zz * binv).ok_or_else(pole)?;
            shifts_binv -= 1;
        }
        let n = ((centre - zz.re) / b).round() as i64;
        for _ in 0..n.max(0) {
            acc -= log_2sin(PI * zz * b).ok_or_else(pole)?;
            zz += b;
            shifts_b += 1;
        }
        for _ in 0..(-n).max(0) {
            zz -= b;
            acc += log_2sin(PI * zz * b).ok_or_else(pole)?;
            shifts_b -= 1;
        }
        let asymptotic = zz.im.abs() > self.t_asym;
        let core = if asymptotic { self.asymptotic(zz) } else { self.strip_integral(zz) };
        let value = core + acc;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::numeric(format!("log S_b({z}) overflowed")));
        }
        Ok(LogSbEval { value, shifts_b, shifts_binv, asymptotic })
    }

    /// `log S_b(z)`.
    pub fn log(&self, z: C) -> Result<C> {
        self.eval(z).map(|e| e.value)
    }
}

/// `log S_b(z)`; builds a fresh evaluator, prefer [`DoubleSine`] for repeated calls.
pub fn log_double_sine(z: ComplexValue, p: ModularParam) -> Result<ComplexValue> {
    DoubleSine::new(p).log(z)
}
