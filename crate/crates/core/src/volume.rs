//! Semiclassical potential `U_α`, its critical points, and volumes.
//!
//! Angle inputs are laid out as in the angle asymptotics: the entry in slot
//! `k` is `θ_{k+3}` (see [`angle_layout`]). With that layout `τ_i` are the
//! vertex sums and `B² − 4AC = 16 det` of the angle Gram matrix.

use crate::complexfn::{
    l_potential, l_potential_d1, l_potential_d2, log_double_sine, log_one_minus_e2i, lobachevsky,
    ComplexValue, ModularParam,
};
use crate::error::{Error, Result};
use crate::geometry::{
    angles_from_lengths, check_angle_criterion, classify_gram, gram_from_angles,
    gram_from_lengths, lengths_from_angles, AngleFamily, SixTuple, TetraClass,
    TupleKind,
};
use serde::Serialize;
use std::f64::consts::PI;

type C = ComplexValue;
const I: C = C::new(0.0, 1.0);

/// Residual allowed for `U'` at an accepted critical point.
pub const CRITICAL_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Lengths,
    Angles,
}

/// `α`, `τ`, `η` of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledParams {
    pub alpha: [C; 6],
    pub tau: [C; 4],
    pub eta: [C; 4],
}

/// Slots of `α` summed in each `τ_i` (0-based).
pub const TAU_SLOTS: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4]];
/// Slots of `α` summed in `η_1..η_3`; `η_4 = 2π`.
pub const ETA_SLOTS: [[usize; 4]; 3] = [[0, 1, 3, 4], [0, 2, 3, 5], [1, 2, 4, 5]];

impl RescaledParams {
    pub fn from_alpha(alpha: [C; 6]) -> Self {
        let tau = TAU_SLOTS.map(|s| s.iter().map(|&k| alpha[k]).sum());
        let e = ETA_SLOTS.map(|s| s.iter().map(|&k| alpha[k]).sum::<C>());
        RescaledParams { alpha, tau, eta: [e[0], e[1], e[2], C::new(2.0 * PI, 0.0)] }
    }

    /// `u_k = e^{2iα_k}`.
    pub fn u(&self) -> [C; 6] {
        self.alpha.map(|a| (2.0 * I * a).exp())
    }

    pub fn sum_alpha(&self) -> C {
        self.alpha.iter().sum()
    }

    /// `α` at parameter `b` for entries `a`: `α_k = πb a_k − πb²/2`.
    pub fn from_entries(a: &[C; 6], b: f64) -> Self {
        Self::from_alpha(a.map(|x| PI * b * x - 0.5 * PI * b * b))
    }

    /// Entries `a_k = (α_k + πb²/2)/(πb)` realising these `α` at parameter `b`.
    pub fn entries(&self, b: f64) -> [C; 6] {
        self.alpha.map(|x| (x + 0.5 * PI * b * b) / (PI * b))
    }
}

/// Lengths: `α_k = π/2 + i l_k/2`. Angles: `α_k = (π + θ_k)/2`, slot by slot.
pub fn rescale(input: &SixTuple, mode: Scaling) -> Result<RescaledParams> {
    let alpha = match mode {
        Scaling::Lengths => {
            if input.kind != TupleKind::Lengths {
                return Err(Error::domain("length scaling needs a length tuple"));
            }
            input.values.map(|l| C::new(0.5 * PI, 0.5 * l.re))
        }
        Scaling::Angles => {
            if input.kind != TupleKind::Angles {
                return Err(Error::domain("angle scaling needs an angle tuple"));
            }
            input.values.map(|t| 0.5 * (PI + t))
        }
    };
    Ok(RescaledParams::from_alpha(alpha))
}

/// Arrangement of dihedral angles used by the angle asymptotics: slot `k`
/// carries the angle at the edge opposite to slot `k`.
pub fn angle_layout(theta: &SixTuple) -> SixTuple {
    theta.permuted(&[3, 4, 5, 0, 1, 2])
}

/// Coefficients of `Az² + Bz + C = 0`, `z = e^{−2iξ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadratic {
    pub a: C,
    pub b: C,
    pub c: C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Root {
    Plus,
    Minus,
}

impl Quadratic {
    pub fn discriminant(&self) -> C {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// `(−B ± √(B² − 4AC))/(2A)` with the principal square root.
    pub fn roots(&self) -> (C, C) {
        let s = self.discriminant().sqrt();
        ((-self.b + s) / (2.0 * self.a), (-self.b - s) / (2.0 * self.a))
    }

    pub fn root(&self, which: Root) -> C {
        let (p, m) = self.roots();
        match which {
            Root::Plus => p,
            Root::Minus => m,
        }
    }
}

pub fn critical_quadratic(u: &[C; 6]) -> Quadratic {
    let [u1, u2, u3, u4, u5, u6] = *u;
    let poly = |u1: C, u2: C, u3: C, u4: C, u5: C, u6: C| {
        u1 * u4 + u2 * u5 + u3 * u6 - u1 * u2 * u6 - u1 * u3 * u5 - u2 * u3 * u4 - u4 * u5 * u6
            + u1 * u2 * u3 * u4 * u5 * u6
    };
    let a = poly(u1, u2, u3, u4, u5, u6);
    let c = poly(1.0 / u1, 1.0 / u2, 1.0 / u3, 1.0 / u4, 1.0 / u5, 1.0 / u6);
    let d = |x: C| x - 1.0 / x;
    let b = -(d(u1) * d(u4) + d(u2) * d(u5) + d(u3) * d(u6));
    Quadratic { a, b, c }
}

#[allow(non_snake_case)]
/// `U_α(ξ) = −½ΣΣ L(η_j − τ_i) + Σ L(ξ − τ_i) + Σ L(η_j − ξ)`.
pub fn potential_U(xi: C, p: &RescaledParams) -> Result<C> {
    let mut s = C::new(0.0, 0.0);
    for t in &p.tau {
        for e in &p.eta {
            s -= 0.5 * l_potential(e - t)?;
        }
        s += l_potential(xi - t)?;
    }
    for e in &p.eta {
        s += l_potential(e - xi)?;
    }
    Ok(s)
}

#[allow(non_snake_case)]
/// `(U'(ξ), U''(ξ))`, continued along the period rules of `L`.
pub fn potential_U_derivs(xi: C, p: &RescaledParams) -> Result<(C, C)> {
    let mut d1 = C::new(0.0, 0.0);
    let mut d2 = C::new(0.0, 0.0);
    for t in &p.tau {
        d1 += l_potential_d1(xi - t)?;
        d2 += l_potential_d2(xi - t)?;
    }
    for e in &p.eta {
        d1 -= l_potential_d1(e - xi)?;
        d2 += l_potential_d2(e - xi)?;
    }
    Ok((d1, d2))
}

/// `κ_α(ξ)`; the logarithms use the same branch as `L'`.
pub fn kappa(xi: C, p: &RescaledParams) -> Result<C> {
    let mut k = 8.0 * PI * PI + 14.0 * PI * p.sum_alpha() - 28.0 * PI * xi;
    for t in &p.tau {
        k -= 4.0 * PI * I * log_one_minus_e2i(xi - t)?;
    }
    for e in &p.eta {
        k += 3.0 * PI * I * log_one_minus_e2i(e - xi)?;
    }
    Ok(k)
}

/// The form of `κ_α` valid at a critical point.
pub fn kappa_at_critical(xi: C, p: &RescaledParams) -> Result<C> {
    let mut k = 2.0 * PI * PI + 2.0 * PI * p.sum_alpha() - 4.0 * PI * xi;
    for t in &p.tau {
        k -= PI * I * log_one_minus_e2i(xi - t)?;
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub z_star: C,
    pub xi_star: C,
    pub which_root: Root,
    pub u_value: C,
    pub u_first: C,
    pub u_second: C,
    pub kappa_value: C,
}

impl CriticalPoint {
    /// Evaluate the potential data at `ξ`; `which` records the quadratic root.
    pub fn at(xi: C, which: Root, p: &RescaledParams) -> Result<Self> {
        let (d1, d2) = potential_U_derivs(xi, p)?;
        Ok(CriticalPoint {
            z_star: (-2.0 * I * xi).exp(),
            xi_star: xi,
            which_root: which,
            u_value: potential_U(xi, p)?,
            u_first: d1,
            u_second: d2,
            kappa_value: kappa(xi, p)?,
        })
    }

    pub fn residual(&self) -> f64 {
        self.u_first.norm()
    }

    /// `−U''(ξ*)·exp(−κ(ξ*)/(πi))`, which should equal `16√det`.
    pub fn hessian_ratio(&self) -> C {
        -self.u_second * (-self.kappa_value / (PI * I)).exp()
    }
}

/// Newton steps on `U'` from a closed-form root.
fn polish(mut xi: C, p: &RescaledParams) -> Result<C> {
    for _ in 0..3 {
        let (d1, d2) = potential_U_derivs(xi, p)?;
        if d1.norm() < 1e-14 || d1.norm() > 1e-4 {
            break;
        }
        xi -= d1 / d2;
    }
    Ok(xi)
}

/// `ξ` with `Re ξ = re` and `e^{−2iξ} = z` for real `z > 0`.
fn xi_from_positive_root(z: C, re: f64) -> Result<C> {
    if !(z.re > 0.0 && z.im.abs() <= 1e-10 * z.re.max(1.0)) {
        return Err(Error::numeric(format!("quadratic root {z} is not positive real")));
    }
    Ok(C::new(re, 0.5 * z.re.ln()))
}

/// Comparison of the Hessian identity `−U''·e^{−κ/πi} = 16√det`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianCheck {
    pub lhs: C,
    pub rhs: C,
    /// `|lhs − s·rhs| / |rhs|` for the better sign `s`.
    pub rel_err: f64,
    /// `+1` when the identity holds as displayed, `−1` when it holds up to sign.
    pub sign: i8,
}

pub fn hessian_check(cp: &CriticalPoint, det: f64) -> HessianCheck {
    let lhs = cp.hessian_ratio();
    let rhs = 16.0 * C::new(det, 0.0).sqrt();
    let ep = (lhs - rhs).norm() / rhs.norm();
    let em = (lhs + rhs).norm() / rhs.norm();
    if ep <= em {
        HessianCheck { lhs, rhs, rel_err: ep, sign: 1 }
    } else {
        HessianCheck { lhs, rhs, rel_err: em, sign: -1 }
    }
}

/// Volume of a tetrahedron computed from its dihedral angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleVolume {
    pub volume: f64,
    pub critical: CriticalPoint,
    /// The other root of the quadratic, which is not a critical point.
    pub rejected: Option<CriticalPoint>,
    pub quadratic: Quadratic,
    /// Determinant of the angle Gram matrix.
    pub gram_det: f64,
    pub hessian: HessianCheck,
}

/// `V'(ξ) = −Σ ln|2 sin(ξ−τ_i)| + Σ ln|2 sin(η_j−ξ)|` for real `ξ`.
fn v_prime(x: f64, tau: &[f64; 4], eta: &[f64; 4]) -> f64 {
    let f = |y: f64| (2.0 * y.sin()).abs().ln();
    eta.iter().map(|e| f(e - x)).sum::<f64>() - tau.iter().map(|t| f(x - t)).sum::<f64>()
}

pub fn hyperbolic_volume_from_angles(theta: &SixTuple) -> Result<AngleVolume> {
    if theta.angle_family()? != AngleFamily::Hyperbolic {
        return Err(Error::domain("hyperbolic volume needs real angles in (0,π)"));
    }
    let g = gram_from_angles(theta)?;
    let det = g.det();
    if det >= -g.flat_tolerance() {
        return Err(Error::domain(format!(
            "angle Gram determinant {det:e} is not negative: not a hyperideal tetrahedron"
        )));
    }
    let p = rescale(&angle_layout(theta), Scaling::Angles)?;
    let tau = p.tau.map(|t| t.re);
    let eta = p.eta.map(|e| e.re);
    let lo = tau.iter().cloned().fold(f64::MIN, f64::max);
    let hi = eta.iter().cloned().fold(f64::MAX, f64::min);
    if !(lo < hi) {
        return Err(Error::domain("empty critical interval: max τ >= min η"));
    }
    // V' decreases from +∞ to −∞ on (lo, hi)
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if v_prime(m, &tau, &eta) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let x = 0.5 * (a + b);
    let quadratic = critical_quadratic(&p.u());
    let z = (-2.0 * I * x).exp();
    let (zp, zm) = quadratic.roots();
    let which = if (z - zp).norm() <= (z - zm).norm() { Root::Plus } else { Root::Minus };
    if (z - quadratic.root(which)).norm() > 1e-6 {
        return Err(Error::numeric(format!(
            "bisection root e^(-2iξ) = {z} matches neither quadratic root ({zp}, {zm})"
        )));
    }
    let critical = CriticalPoint::at(C::new(x, 0.0), which, &p)?;
    let volume = -0.5 * critical.u_value.im;
    let hessian = hessian_check(&critical, det);
    Ok(AngleVolume { volume, critical, rejected: None, quadratic, gram_det: det, hessian })
}

/// `V(ξ)` through the Lobachevsky function; equals the volume at `ξ*`.
pub fn hyperbolic_v(xi: f64, p: &RescaledParams) -> f64 {
    let mut v = 0.0;
    for t in &p.tau {
        for e in &p.eta {
            v -= 0.5 * lobachevsky(e.re - t.re);
        }
        v += lobachevsky(xi - t.re);
    }
    for e in &p.eta {
        v += lobachevsky(e.re - xi);
    }
    v
}

pub fn ads_volume_from_angles(theta: &SixTuple) -> Result<AngleVolume> {
    if !matches!(theta.angle_family()?, AngleFamily::AntiDeSitter { .. }) {
        return Err(Error::domain("anti-de Sitter volume needs angles of the form iφ, π − iφ"));
    }
    let crit = check_angle_criterion(theta)?;
    if !crit.passed() {
        return Err(Error::domain(format!(
            "angles fail the anti-de Sitter criterion: {}",
            crit.failures().join(", ")
        )));
    }
    let p = rescale(&angle_layout(theta), Scaling::Angles)?;
    let quadratic = critical_quadratic(&p.u());
    let mut pts = Vec::with_capacity(2);
    for which in [Root::Plus, Root::Minus] {
        let xi = polish(xi_from_positive_root(quadratic.root(which), 2.0 * PI)?, &p)?;
        pts.push(CriticalPoint::at(xi, which, &p)?);
    }
    let (critical, rejected) = match (pts[0].residual() < CRITICAL_RESIDUAL, pts[1].residual() < CRITICAL_RESIDUAL) {
        (true, false) => (pts[0], pts[1]),
        (false, true) => (pts[1], pts[0]),
        _ => {
            return Err(Error::numeric(format!(
                "branch check failed: |U'| = {:e}, {:e} at the two roots",
                pts[0].residual(),
                pts[1].residual()
            )))
        }
    };
    let volume = 0.5 * critical.u_value.re;
    if critical.u_value.im.abs() > 1e-8 * critical.u_value.norm().max(1.0) {
        return Err(Error::numeric(format!("U(ξ*) = {} is not real", critical.u_value)));
    }
    let det = crit.det;
    Ok(AngleVolume {
        volume,
        critical,
        rejected: Some(rejected),
        quadratic,
        gram_det: det,
        hessian: hessian_check(&critical, det),
    })
}

/// The potential at the two critical points of a length-scaled tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthPotential {
    /// `W = U_α(ξ₁*)`.
    pub w: C,
    pub cov: f64,
    pub cov_tilde: f64,
    /// Critical point carrying `W`; satisfies `∂W/∂l_k = −iθ_k`.
    pub xi1: CriticalPoint,
    /// The other critical point, with `Re U = −Re W`.
    pub xi2: CriticalPoint,
    pub quadratic: Quadratic,
    /// Determinant of the length Gram matrix.
    pub gram_det: f64,
    pub hessian: HessianCheck,
}

/// Potential data for anti-de Sitter (or flat) edge lengths.
pub fn ads_potential_from_lengths(l: &SixTuple) -> Result<LengthPotential> {
    let g = gram_from_lengths(l)?;
    let class = classify_gram(&g);
    if class == TetraClass::Hyperbolic {
        return Err(Error::domain("length potential needs an anti-de Sitter or flat tuple"));
    }
    let p = rescale(l, Scaling::Lengths)?;
    let mut quadratic = critical_quadratic(&p.u());
    if class == TetraClass::Flat {
        // double root
        quadratic.b = -(4.0 * quadratic.a * quadratic.c).sqrt();
    }
    // W is taken at the root where ∂W/∂l_k = −iθ_k; with z = e^{−2iξ} this
    // is the smaller root.
    let at = |which| -> Result<CriticalPoint> {
        let xi = polish(xi_from_positive_root(quadratic.root(which), 2.0 * PI)?, &p)?;
        CriticalPoint::at(xi, which, &p)
    };
    let xi1 = at(Root::Minus)?;
    let xi2 = at(Root::Plus)?;
    for cp in [&xi1, &xi2] {
        if cp.residual() > 1e-7 {
            return Err(Error::numeric(format!(
                "|U'| = {:e} at the {:?} root: not a critical point",
                cp.residual(),
                cp.which_root
            )));
        }
    }
    let w = xi1.u_value;
    let det = g.det();
    Ok(LengthPotential {
        w,
        cov: 0.5 * w.re,
        cov_tilde: -0.5 * w.im,
        xi1,
        xi2,
        quadratic,
        gram_det: det,
        hessian: hessian_check(&xi1, det),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthVolume {
    /// `½(Re W − Σ ∂Re W/∂l_k · l_k)`, gradient by extrapolated central differences.
    pub volume: f64,
    /// `Cov − ½Σ Im θ_k l_k` with angles from the Gram matrix.
    pub volume_from_angles: f64,
    pub cov: f64,
    pub cov_tilde: f64,
    /// `∂Re W/∂l_k`.
    pub gradient: [f64; 6],
    pub angles: [C; 6],
}

/// Central-difference step used for gradient checks.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

pub fn ads_volume_from_lengths(l: &SixTuple) -> Result<LengthVolume> {
    let lv = l.reals();
    let base = ads_potential_from_lengths(l)?;
    let mut gradient = [0.0; 6];
    let re_w = |x: [f64; 6]| -> Result<f64> { Ok(ads_potential_from_lengths(&SixTuple::lengths(x)?)?.w.re) };
    for k in 0..6 {
        let central = |h: f64| -> Result<f64> {
            let mut a = lv;
            let mut b = lv;
            a[k] += h;
            b[k] -= h;
            Ok((re_w(a)? - re_w(b)?) / (2.0 * h))
        };
        // one Richardson step on top of the central difference
        let h = fd_step(lv[k]);
        gradient[k] = (4.0 * central(0.5 * h)? - central(h)?) / 3.0;
    }
    let volume = 0.5 * (base.w.re - (0..6).map(|k| gradient[k] * lv[k]).sum::<f64>());
    let theta = angles_from_lengths(l)?;
    let volume_from_angles = base.cov - 0.5 * (0..6).map(|k| theta.values[k].im * lv[k]).sum::<f64>();
    if (volume - volume_from_angles).abs() > 1e-6 * volume.abs().max(1.0) {
        return Err(Error::numeric(format!(
            "volume routes disagree: {volume} from W, {volume_from_angles} from the angles"
        )));
    }
    Ok(LengthVolume {
        volume,
        volume_from_angles,
        cov: base.cov,
        cov_tilde: base.cov_tilde,
        gradient,
        angles: theta.values,
    })
}

/// Co-volume `Vol + ½Σ θ_k l_k` of a hyperbolic tetrahedron given by lengths.
pub fn hyperbolic_covolume_from_lengths(l: &SixTuple) -> Result<f64> {
    let theta = angles_from_lengths(l)?;
    if theta.angle_family()? != AngleFamily::Hyperbolic {
        return Err(Error::domain("lengths are not hyperbolic"));
    }
    let v = hyperbolic_volume_from_angles(&theta)?.volume;
    let lv = l.reals();
    Ok(v + 0.5 * (0..6).map(|k| theta.values[k].re * lv[k]).sum::<f64>())
}

/// One linear piece of `Im U` along `Re ξ = 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopePiece {
    pub lo: f64,
    pub hi: f64,
    pub predicted: f64,
    pub measured: f64,
}

/// Predicted and measured slopes of `Im U_α(2π + iy)` in `y`, for
/// angle-scaled anti-de Sitter parameters.
pub fn piecewise_slope_profile(p: &RescaledParams) -> Result<Vec<SlopePiece>> {
    // breakpoints: Im τ_i (all Re 2π), Im η_j
    let mut cuts: Vec<f64> = p.tau.iter().map(|t| t.im).chain(p.eta.iter().map(|e| e.im)).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let span = (cuts[cuts.len() - 1] - cuts[0]).max(1.0);
    let mut edges = vec![cuts[0] - span];
    edges.extend(cuts.iter().cloned());
    edges.push(cuts[cuts.len() - 1] + span);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let y = 0.5 * (lo + hi);
        let predicted = predicted_slope(y, p);
        let h = 1e-4 * (hi - lo).min(1.0);
        let f = |y: f64| potential_U(C::new(2.0 * PI, y), p).map(|u| u.im);
        let measured = (f(y + h)? - f(y - h)?) / (2.0 * h);
        out.push(SlopePiece { lo, hi, predicted, measured });
    }
    Ok(out)
}

/// Slope of `Im L(iy)` is `−π` for `y>0`, `π` for `y<0`; of `Im L(π+iy)` the
/// opposite. Each term of `U` contributes through its argument.
fn predicted_slope(y: f64, p: &RescaledParams) -> f64 {
    let mut s = 0.0;
    for t in &p.tau {
        // L(ξ − τ): argument i(y − Im τ), Re 0
        s += if y > t.im { -PI } else { PI };
    }
    for e in &p.eta {
        // L(η − ξ): argument Re(η) − 2π + i(Im η − y); d/dy flips the sign
        let on_pi = (e.re - 3.0 * PI).abs() < 1e-9;
        let above = e.im - y > 0.0;
        let d = match (on_pi, above) {
            (false, true) => -PI,
            (false, false) => PI,
            (true, true) => PI,
            (true, false) => -PI,
        };
        s -= d;
    }
    s
}

/// `ν_{α,b}(ξ) = (U_{α,b}(ξ) − κ_α(ξ)b² − U_α(ξ))/b⁴` at fixed `α`, with
/// `U_{α,b}` taken on the branch nearest to `U_α + κ_α b²`.
pub fn nu_correction(xi: C, p: &RescaledParams, b: f64) -> Result<C> {
    let mp = ModularParam::new(b)?;
    let a = p.entries(b);
    let t: [C; 4] = TAU_SLOTS.map(|s| s.iter().map(|&k| a[k]).sum());
    let q3 = ETA_SLOTS.map(|s| s.iter().map(|&k| a[k]).sum::<C>());
    let q = [q3[0], q3[1], q3[2], C::new(2.0 * mp.Q(), 0.0)];
    let u = xi / (PI * b);
    let mut s = C::new(0.0, 0.0);
    for ti in &t {
        for qj in &q {
            s -= 0.5 * log_double_sine(qj - ti, mp)?;
        }
        s += log_double_sine(u - ti, mp)?;
    }
    for qj in &q {
        s += log_double_sine(qj - u, mp)?;
    }
    let ub = 2.0 * PI * I * b * b * s;
    // log S_b is principal, so U_{α,b} is only known modulo 4π²b²
    let period = 4.0 * PI * PI * b * b;
    let mut r = ub - kappa(xi, p)? * b * b - potential_U(xi, p)?;
    r.re -= period * (r.re / period).round();
    Ok(r / b.powi(4))
}

/// Which slot pair carries `Re θ = π`, if the tuple is anti-de Sitter.
pub fn pi_pair_of(theta: &SixTuple) -> Option<usize> {
    match theta.angle_family() {
        Ok(AngleFamily::AntiDeSitter { pi_pair }) => Some(pi_pair),
        _ => None,
    }
}

/// Edge lengths from angles, re-exported for Schläfli checks.
pub fn lengths_of(theta: &SixTuple) -> Result<[f64; 6]> {
    Ok(lengths_from_angles(theta)?.reals())
}
