//! The b-6j symbol as a contour integral of double sines, symmetry checks and
//! the semiclassical predictions it is compared against.
//!
//! Everything is assembled in log space: the symbol for small `b` is
//! exponentially small or large, so [`B6jEvaluation::log_value`] is the
//! primary output and `value` may underflow to zero.

use crate::complexfn::{ComplexValue, DoubleSine, ModularParam};
use crate::error::{Error, Result};
use crate::geometry::{
    classify_lengths, covolume_tilde, gram_from_angles, gram_from_lengths, AngleFamily, SixTuple,
    TetraClass, TupleKind,
};
use crate::quad;
use crate::volume::{
    ads_potential_from_lengths, ads_volume_from_angles, angle_layout, hyperbolic_covolume_from_lengths,
    hyperbolic_volume_from_angles, ETA_SLOTS, TAU_SLOTS,
};
use rayon::prelude::*;
use serde::Serialize;
use std::cell::RefCell;
use std::f64::consts::PI;

type C = ComplexValue;
const I: C = C::new(0.0, 1.0);

/// How the six entries are produced from geometric data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entries {
    /// `a_k = Q/2 + i l_k/(2πb)`.
    Lengths(SixTuple),
    /// `a_k = Q/2 + θ_{k+3}/(2πb)`, real angles.
    HypAngles(SixTuple),
    /// `a_k = Q/2 + θ_{k+3}/(2πb)`, anti-de Sitter angles.
    AdSAngles(SixTuple),
}

/// A b-admissible six-tuple with its `t_i` and `q_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct B6jParams {
    pub a: [C; 6],
    pub b: f64,
    pub t: [C; 4],
    pub q: [C; 4],
}

impl B6jParams {
    /// Checks `0 < Re q_j − Re t_i < Q` for all `i, j`.
    pub fn new(a: [C; 6], b: f64) -> Result<Self> {
        let mp = ModularParam::new(b)?;
        if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain("non-finite entry"));
        }
        let qq = mp.Q();
        let t = TAU_SLOTS.map(|s| s.iter().map(|&k| a[k]).sum::<C>());
        let q3 = ETA_SLOTS.map(|s| s.iter().map(|&k| a[k]).sum::<C>());
        let q = [q3[0], q3[1], q3[2], C::new(2.0 * qq, 0.0)];
        let p = B6jParams { a, b, t, q };
        for (i, row) in p.gaps().iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                if !(g > 0.0 && g < qq) {
                    return Err(Error::domain(format!(
                        "not b-admissible at b = {b}: Re q{} − Re t{} = {g} outside (0, Q = {qq})",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn modular(&self) -> ModularParam {
        ModularParam::new(self.b).expect("checked on construction")
    }

    #[allow(non_snake_case)]
    pub fn Q(&self) -> f64 {
        self.b + 1.0 / self.b
    }

    /// `gaps[i][j] = Re q_j − Re t_i`.
    pub fn gaps(&self) -> [[f64; 4]; 4] {
        let mut g = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = self.q[j].re - self.t[i].re;
            }
        }
        g
    }

    /// `(max Re t_i, min Re q_j)`: the vertical lines allowed by the definition.
    pub fn strip(&self) -> (f64, f64) {
        let lo = self.t.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        let hi = self.q.iter().map(|z| z.re).fold(f64::MAX, f64::min);
        (lo, hi)
    }

    /// Slot `k` takes entry `perm[k]`.
    pub fn permuted(&self, perm: &[usize; 6]) -> Result<Self> {
        Self::new(perm.map(|k| self.a[k]), self.b)
    }

    /// `a_k → Q − a_k`.
    pub fn reflected(&self, k: usize) -> Result<Self> {
        let mut a = self.a;
        a[k] = self.Q() - a[k];
        Self::new(a, self.b)
    }
}

pub fn make_params(entries: &Entries, b: f64) -> Result<B6jParams> {
    let mp = ModularParam::new(b)?;
    let half_q = 0.5 * mp.Q();
    let kind = match entries {
        Entries::Lengths(t) | Entries::HypAngles(t) | Entries::AdSAngles(t) => t.kind,
    };
    let want = if matches!(entries, Entries::Lengths(_)) { TupleKind::Lengths } else { TupleKind::Angles };
    if kind != want {
        return Err(Error::domain(format!("entries need a tuple of kind {want:?}, got {kind:?}")));
    }
    let a = match entries {
        Entries::Lengths(l) => {
            if l.kind != TupleKind::Lengths {
                return Err(Error::domain("length entries need a length tuple"));
            }
            l.values.map(|x| C::new(half_q, x.re / (2.0 * PI * b)))
        }
        Entries::HypAngles(th) => {
            if th.angle_family()? != AngleFamily::Hyperbolic {
                return Err(Error::domain("hyperbolic angle entries need real angles in (0,π)"));
            }
            angle_layout(th).values.map(|x| half_q + x / (2.0 * PI * b))
        }
        Entries::AdSAngles(th) => {
            if !matches!(th.angle_family()?, AngleFamily::AntiDeSitter { .. }) {
                return Err(Error::domain("anti-de Sitter angle entries need angles iφ, π − iφ"));
            }
            angle_layout(th).values.map(|x| half_q + x / (2.0 * PI * b))
        }
    };
    B6jParams::new(a, b)
}

/// A detour of the contour: `Re u = c + re_offset` for `im_lo <= Im u <= im_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Waypoint {
    pub im_lo: f64,
    pub im_hi: f64,
    pub re_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourSpec {
    VerticalLine { c: f64 },
    /// `Re u = c` for `|Im u| >= l`; inside, piecewise linear through the waypoints.
    Deformed { c: f64, l: f64, waypoints: Vec<Waypoint> },
}

impl ContourSpec {
    /// The vertical line through the middle of the allowed strip.
    pub fn vertical_mid(p: &B6jParams) -> Self {
        let (lo, hi) = p.strip();
        ContourSpec::VerticalLine { c: 0.5 * (lo + hi) }
    }

    /// A vertical line at fraction `s ∈ (0,1)` across the strip.
    pub fn vertical_at(p: &B6jParams, s: f64) -> Self {
        let (lo, hi) = p.strip();
        ContourSpec::VerticalLine { c: lo + s * (hi - lo) }
    }

    /// Detours of size up to `offset` towards the middle of the allowed
    /// interval (`Re t_i + Q/2` near `Im t_i`, `Re q_j − Q/2` near `Im q_j`)
    /// in bands of half-height `half_height`. Overlapping bands are merged.
    pub fn deformed(p: &B6jParams, half_height: f64, offset: f64) -> Result<Self> {
        let ContourSpec::VerticalLine { c } = Self::vertical_mid(p) else { unreachable!() };
        let qq = p.Q();
        // (centre, allowed lo, allowed hi)
        let mut lines: Vec<(f64, f64, f64)> = p.t.iter().map(|t| (t.im, t.re, t.re + qq)).collect();
        lines.extend(p.q.iter().map(|q| (q.im, q.re - qq, q.re)));
        lines.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut bands: Vec<(f64, f64, f64, f64)> = Vec::new();
        for (h, lo, hi) in lines {
            let (blo, bhi) = (h - half_height, h + half_height);
            match bands.last_mut() {
                Some(last) if blo <= last.1 => {
                    last.1 = last.1.max(bhi);
                    last.2 = last.2.max(lo);
                    last.3 = last.3.min(hi);
                }
                _ => bands.push((blo, bhi, lo, hi)),
            }
        }
        let mut waypoints = Vec::new();
        for (blo, bhi, lo, hi) in &bands {
            if !(lo < hi) {
                return Err(Error::domain("overlapping bands leave no admissible real part"));
            }
            // c lies inside every allowed interval, so anything between c
            // and the middle does too
            let x = c + (0.5 * (lo + hi) - c).clamp(-offset, offset);
            waypoints.push(Waypoint { im_lo: *blo, im_hi: *bhi, re_offset: x - c });
        }
        let l = bands.iter().map(|b| b.0.abs().max(b.1.abs())).fold(0.0, f64::max) + 1.0;
        let spec = ContourSpec::Deformed { c, l, waypoints };
        spec.validate(p)?;
        Ok(spec)
    }

    fn vertices(&self) -> (f64, Vec<(f64, f64)>) {
        match self {
            ContourSpec::VerticalLine { c } => (*c, Vec::new()),
            ContourSpec::Deformed { c, l, waypoints } => {
                let mut v = vec![(-l, *c)];
                for w in waypoints {
                    v.push((w.im_lo, c + w.re_offset));
                    v.push((w.im_hi, c + w.re_offset));
                }
                v.push((*l, *c));
                (*c, v)
            }
        }
    }

    /// `(Re u, d Re u / d Im u)` at height `y`.
    pub fn point(&self, y: f64) -> (f64, f64) {
        let (c, v) = self.vertices();
        if v.is_empty() || y <= v[0].0 || y >= v[v.len() - 1].0 {
            return (c, 0.0);
        }
        let k = v.partition_point(|p| p.0 <= y).clamp(1, v.len() - 1);
        let (y0, x0) = v[k - 1];
        let (y1, x1) = v[k];
        if y1 <= y0 {
            return (x1, 0.0);
        }
        let s = (x1 - x0) / (y1 - y0);
        (x0 + s * (y - y0), s)
    }

    /// Heights where the contour bends.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.vertices().1.iter().map(|p| p.0).collect()
    }

    /// The contour must cross `Im u = Im t_i` in `(Re t_i, Re t_i + Q)` and
    /// `Im u = Im q_j` in `(Re q_j − Q, Re q_j)`.
    pub fn validate(&self, p: &B6jParams) -> Result<()> {
        let qq = p.Q();
        match self {
            ContourSpec::VerticalLine { c } => {
                let (lo, hi) = p.strip();
                if !(*c > lo && *c < hi) {
                    return Err(Error::domain(format!("vertical line Re u = {c} outside ({lo}, {hi})")));
                }
            }
            ContourSpec::Deformed { l, waypoints, .. } => {
                let mut prev = -l;
                for w in waypoints {
                    if !(w.im_lo >= prev && w.im_hi >= w.im_lo && w.im_hi <= *l) {
                        return Err(Error::domain("waypoints must be ordered and inside (−L, L)"));
                    }
                    prev = w.im_hi;
                }
            }
        }
        for (k, t) in p.t.iter().enumerate() {
            let x = self.point(t.im).0;
            if !(x > t.re && x < t.re + qq) {
                return Err(Error::domain(format!("contour crosses Im t{} at Re u = {x}, outside (Re t, Re t + Q)", k + 1)));
            }
        }
        for (k, q) in p.q.iter().enumerate() {
            let x = self.point(q.im).0;
            if !(x > q.re - qq && x < q.re) {
                return Err(Error::domain(format!("contour crosses Im q{} at Re u = {x}, outside (Re q − Q, Re q)", k + 1)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Target relative accuracy of the integral.
    pub tol: f64,
    pub max_panels: usize,
    /// Fixed truncation height `T` (both sides); chosen automatically when `None`.
    pub truncation: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { tol: 1e-10, max_panels: 20_000, truncation: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct B6jEvaluation {
    /// `exp(log_value)`; zero or infinite when out of range.
    pub value: C,
    /// Logarithm of the symbol; the imaginary part is defined modulo `2π`.
    pub log_value: C,
    pub abs_error_estimate: f64,
    pub rel_error_estimate: f64,
    pub contour: ContourSpec,
    /// Bound on the discarded tails `|Im u| > T`, in the units of `value`.
    pub tail_bound: f64,
    /// Truncation heights `(−T₋, T₊)`.
    pub truncation: (f64, f64),
    /// `−½ Σ log S_b(q_j − t_i)`.
    pub log_prefactor: C,
    pub integrand_evals: usize,
}

/// `Σ log S_b(u − t_i) + Σ log S_b(q_j − u)`.
fn log_integrand(ds: &DoubleSine, p: &B6jParams, u: C) -> Result<C> {
    let mut s = C::new(0.0, 0.0);
    for t in &p.t {
        s += ds.log(u - t)?;
    }
    for q in &p.q {
        s += ds.log(q - u)?;
    }
    Ok(s)
}

/// `−½ Σ_{i,j} log S_b(q_j − t_i)`; fixes the branch of the square root.
pub fn log_prefactor(p: &B6jParams) -> Result<C> {
    let ds = DoubleSine::new(p.modular());
    log_prefactor_with(&ds, p)
}

fn log_prefactor_with(ds: &DoubleSine, p: &B6jParams) -> Result<C> {
    let mut s = C::new(0.0, 0.0);
    for t in &p.t {
        for q in &p.q {
            s += ds.log(q - t)?;
        }
    }
    Ok(-0.5 * s)
}

pub fn evaluate(p: &B6jParams, contour: &ContourSpec, cfg: &QuadratureConfig) -> Result<B6jEvaluation> {
    contour.validate(p)?;
    let ds = DoubleSine::new(p.modular());
    let g = |y: f64| -> Result<C> {
        let (x, _) = contour.point(y);
        log_integrand(&ds, p, C::new(x, y))
    };

    // scale: the largest integrand modulus on a sample grid
    let mut marks: Vec<f64> = p.t.iter().chain(p.q.iter()).map(|z| z.im).collect();
    marks.extend(contour.breakpoints());
    let core = marks.iter().fold(0.0f64, |m, y| m.max(y.abs())) + 2.0;
    let n_grid = 800;
    let mut grid: Vec<f64> = (0..=n_grid).map(|k| -core + 2.0 * core * k as f64 / n_grid as f64).collect();
    grid.extend(marks.iter().cloned());
    let mut m = f64::MIN;
    let mut gmax = 0.0f64;
    let mut re_grid = Vec::with_capacity(grid.len());
    for &y in &grid {
        let v = g(y)?;
        m = m.max(v.re);
        gmax = gmax.max(v.norm());
        re_grid.push(v.re);
    }

    // truncation: walk outwards until the integrand is negligible
    let cut = cfg.tol.ln() - 10.0;
    let mut ends = [core, core];
    let mut end_vals = [0.0; 2];
    for (side, sgn) in [1.0f64, -1.0].iter().enumerate() {
        if let Some(t) = cfg.truncation {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::domain("truncation height must be positive"));
            }
            ends[side] = t;
            end_vals[side] = g(sgn * t)?.re - m;
            continue;
        }
        let mut y = core;
        loop {
            let v = g(sgn * y)?.re - m;
            if v < cut {
                ends[side] = y;
                end_vals[side] = v;
                break;
            }
            y += 0.5;
            if y > core + 1e4 {
                return Err(Error::numeric("integrand does not decay along the contour"));
            }
        }
    }
    // the integrand decays like exp(−2πQ|Im u|) far out; nearer in the local
    // rate just beyond T can be smaller, so take the minimum of the two
    let rate_cap = 2.0 * PI * p.Q();
    let mut tail_scaled = 0.0;
    for (side, sgn) in [1.0f64, -1.0].iter().enumerate() {
        let further = g(sgn * (ends[side] + 0.5))?.re - m;
        let rate = ((end_vals[side] - further) / 0.5).min(rate_cap);
        tail_scaled += if rate > 0.0 { 2.0 * end_vals[side].exp() / rate } else { f64::INFINITY };
    }

    let mut breaks: Vec<f64> = marks.iter().cloned().filter(|y| *y > -ends[1] && *y < ends[0]).collect();
    breaks.push(-ends[1]);
    breaks.push(ends[0]);
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |y: f64| -> C {
        if failure.borrow().is_some() {
            return C::new(0.0, 0.0);
        }
        let (x, dx) = contour.point(y);
        match log_integrand(&ds, p, C::new(x, y)) {
            Ok(v) => (v - m).exp() * C::new(dx, 1.0),
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                C::new(0.0, 0.0)
            }
        }
    };
    let abs_mass = re_grid[..=n_grid].iter().map(|r| (r - m).exp()).sum::<f64>() * 2.0 * core / n_grid as f64;
    let floor = 64.0 * f64::EPSILON * abs_mass;
    // rough pass, then one at the requested relative accuracy
    let rough = quad::adaptive(&integrand, &breaks, 1e-4 * cfg.tol.sqrt(), cfg.max_panels);
    let target = (cfg.tol * rough.value.norm()).max(floor);
    let res = quad::adaptive(&integrand, &breaks, target, cfg.max_panels);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let evals = rough.evals + res.evals;
    if !res.converged {
        return Err(Error::numeric(format!(
            "quadrature did not converge: error {:e} against target {:e} after {} evaluations",
            res.error, target, evals
        )));
    }
    if res.value.norm() == 0.0 {
        return Err(Error::numeric("integral vanished to working precision"));
    }
    // rounding in the eight-term log sum, relative to ∫|integrand|
    let rounding = 16.0 * f64::EPSILON * 8.0 * gmax * abs_mass;
    let err_scaled = res.error + tail_scaled + rounding;
    let rel = err_scaled / res.value.norm();

    let pre = log_prefactor_with(&ds, p)?;
    let log_value = pre + m + res.value.ln();
    let value = log_value.exp();
    let scale = (pre.re + m).exp();
    Ok(B6jEvaluation {
        value,
        log_value,
        abs_error_estimate: rel * value.norm(),
        rel_error_estimate: rel,
        contour: contour.clone(),
        tail_bound: tail_scaled * scale,
        truncation: (-ends[1], ends[0]),
        log_prefactor: pre,
        integrand_evals: evals,
    })
}

/// Saddle of `Σ log S_b(u − t_i) + Σ log S_b(q_j − u)` near `start`.
pub fn integrand_saddle(p: &B6jParams, start: C) -> Result<C> {
    let ds = DoubleSine::new(p.modular());
    let h = 1e-4;
    let mut u = start;
    for _ in 0..30 {
        let gp = log_integrand(&ds, p, u + h)?;
        let g0 = log_integrand(&ds, p, u)?;
        let gm = log_integrand(&ds, p, u - h)?;
        let d1 = (gp - gm) / (2.0 * h);
        let d2 = (gp - 2.0 * g0 + gm) / (h * h);
        let step = d1 / d2;
        u -= step;
        if !(u.re.is_finite() && u.im.is_finite()) {
            break;
        }
        if step.norm() < 1e-9 {
            return Ok(u);
        }
    }
    Err(Error::numeric("saddle search did not converge"))
}

/// Vertical line with the smallest peak of `Re log integrand`: candidates are
/// the integrand saddle near `start` (clamped into the strip) and a grid
/// across the strip. Since the integral does not depend on the line, a lower
/// peak means less cancellation.
pub fn saddle_contour(p: &B6jParams, start: Option<C>) -> ContourSpec {
    let (lo, hi) = p.strip();
    let w = hi - lo;
    let mut cands: Vec<f64> = (1..12).map(|k| lo + w * k as f64 / 12.0).collect();
    if let Some(u) = start.map(|s| integrand_saddle(p, s).unwrap_or(s)) {
        cands.push(u.re.clamp(lo + 0.01 * w, hi - 0.01 * w));
    }
    let ds = DoubleSine::new(p.modular());
    let ys: Vec<f64> = {
        let core = p.t.iter().chain(p.q.iter()).fold(0.0f64, |m, z| m.max(z.im.abs())) + 2.0;
        (0..=40).map(|k| -core + 2.0 * core * k as f64 / 40.0).collect()
    };
    let peak = |c: f64| -> f64 {
        ys.iter()
            .map(|&y| log_integrand(&ds, p, C::new(c, y)).map(|v| v.re).unwrap_or(f64::INFINITY))
            .fold(f64::MIN, f64::max)
    };
    let best = cands
        .iter()
        .map(|&c| (c, peak(c)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|x| x.0)
        .unwrap_or(0.5 * (lo + hi));
    ContourSpec::VerticalLine { c: best }
}

/// Evaluate on the default contour (vertical line through the middle of the strip).
pub fn evaluate_default(p: &B6jParams, cfg: &QuadratureConfig) -> Result<B6jEvaluation> {
    evaluate(p, &ContourSpec::vertical_mid(p), cfg)
}

/// `|e^{x − y} − 1|`, a relative difference computed from logarithms.
pub fn log_rel_diff(x: C, y: C) -> f64 {
    ((x - y).exp() - 1.0).norm()
}

/// Relative difference allowing for the sign of the square root.
pub fn log_rel_diff_up_to_sign(x: C, y: C) -> (f64, bool) {
    let plus = log_rel_diff(x, y);
    let minus = ((x - y).exp() + 1.0).norm();
    if minus < plus {
        (minus, true)
    } else {
        (plus, false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub log_values: Vec<C>,
    pub max_rel_deviation: f64,
    /// Per compared form: whether it matched only after a sign change.
    pub sign_flips: Vec<bool>,
    pub max_rel_error_estimate: f64,
}

/// The four rearrangements `{a1a2a3;a4a5a6}`, `{a2a1a3;a5a4a6}`,
/// `{a1a3a2;a4a6a5}`, `{a1a5a6;a4a2a3}` as slot permutations.
pub const TETRAHEDRAL_FORMS: [[usize; 6]; 4] =
    [[0, 1, 2, 3, 4, 5], [1, 0, 2, 4, 3, 5], [0, 2, 1, 3, 5, 4], [0, 4, 5, 3, 1, 2]];

fn compare(evals: Vec<B6jEvaluation>) -> SymmetryReport {
    let base = evals[0].log_value;
    let mut dev = 0.0f64;
    let mut flips = Vec::new();
    for e in &evals[1..] {
        let (d, f) = log_rel_diff_up_to_sign(e.log_value, base);
        dev = dev.max(d);
        flips.push(f);
    }
    SymmetryReport {
        log_values: evals.iter().map(|e| e.log_value).collect(),
        max_rel_deviation: dev,
        sign_flips: flips,
        max_rel_error_estimate: evals.iter().map(|e| e.rel_error_estimate).fold(0.0, f64::max),
    }
}

pub fn check_tetrahedral_symmetry(p: &B6jParams, cfg: &QuadratureConfig) -> Result<SymmetryReport> {
    let evals = TETRAHEDRAL_FORMS
        .par_iter()
        .map(|perm| {
            let q = p.permuted(perm)?;
            evaluate_default(&q, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(compare(evals))
}

pub fn check_reflection_symmetry(p: &B6jParams, k: usize, cfg: &QuadratureConfig) -> Result<SymmetryReport> {
    if k > 5 {
        return Err(Error::domain("slot must be 0..=5"));
    }
    let q = p.reflected(k)?;
    let evals = [*p, q].par_iter().map(|x| evaluate_default(x, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(compare(evals))
}

/// Geometric input of an asymptotic comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Hyp(SixTuple),
    AdSAngles(SixTuple),
    AdSLengths(SixTuple),
    HypLengths(SixTuple),
    FlatLengths(SixTuple),
}

impl Geometry {
    pub fn entries(&self) -> Entries {
        match *self {
            Geometry::Hyp(t) => Entries::HypAngles(t),
            Geometry::AdSAngles(t) => Entries::AdSAngles(t),
            Geometry::AdSLengths(l) | Geometry::HypLengths(l) | Geometry::FlatLengths(l) => Entries::Lengths(l),
        }
    }

    /// Critical point `ξ*` of the leading potential, where one is available.
    pub fn saddle(&self) -> Option<C> {
        match self {
            Geometry::Hyp(t) => hyperbolic_volume_from_angles(t).ok().map(|v| v.critical.xi_star),
            Geometry::AdSAngles(t) => ads_volume_from_angles(t).ok().map(|v| v.critical.xi_star),
            Geometry::AdSLengths(l) | Geometry::FlatLengths(l) => {
                ads_potential_from_lengths(l).ok().map(|w| w.xi1.xi_star)
            }
            Geometry::HypLengths(_) => None,
        }
    }

    /// Vertical line through the saddle of the integrand, found by Newton
    /// iteration from `ξ*/(πb)` and clamped into the strip.
    pub fn contour(&self, p: &B6jParams) -> ContourSpec {
        let start = self.saddle().map(|xi| xi / (PI * p.b));
        saddle_contour(p, start)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Hyp(_) => "hyperbolic-angles",
            Geometry::AdSAngles(_) => "ads-angles",
            Geometry::AdSLengths(_) => "ads-lengths",
            Geometry::HypLengths(_) => "hyperbolic-lengths",
            Geometry::FlatLengths(_) => "flat-lengths",
        }
    }
}

/// Right-hand side of the matching asymptotic formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    /// Log of the prediction (for lengths in AdS: of the envelope times the oscillation).
    pub log_value: C,
    /// `log` of the exponential envelope including the Gram prefactor.
    pub log_envelope: C,
    /// `2cos(Cov/(πb²) + π/4)` in the AdS length case, otherwise 1.
    pub oscillation: f64,
    /// Vol, Cov or C̃ov entering the exponent.
    pub exponent_quantity: f64,
    /// The co-volume in the AdS length case.
    pub phase_quantity: Option<f64>,
    pub gram_det: f64,
}

pub fn asymptotic_prediction(geometry: &Geometry, b: f64) -> Result<Prediction> {
    ModularParam::new(b)?;
    let pb2 = PI * b * b;
    let mismatch = |want: &str| Error::domain(format!("input is not {want}"));
    Ok(match *geometry {
        Geometry::Hyp(th) => {
            let v = hyperbolic_volume_from_angles(&th)?;
            let det = gram_from_angles(&th)?.det();
            let lg = C::new(-v.volume / pb2 - 0.25 * (-det).ln(), 0.0);
            Prediction { log_value: lg, log_envelope: lg, oscillation: 1.0, exponent_quantity: v.volume, phase_quantity: None, gram_det: det }
        }
        Geometry::AdSAngles(th) => {
            let v = ads_volume_from_angles(&th)?;
            let det = v.gram_det;
            // ⁴√(−det) with det > 0, principal branch
            let root4 = C::new(-det, 0.0).powf(0.25);
            let lg = -I * v.volume / pb2 - root4.ln();
            Prediction { log_value: lg, log_envelope: lg, oscillation: 1.0, exponent_quantity: v.volume, phase_quantity: None, gram_det: det }
        }
        Geometry::AdSLengths(l) => {
            if classify_lengths(&l)? != TetraClass::AntiDeSitter {
                return Err(mismatch("an anti-de Sitter length tuple"));
            }
            let w = ads_potential_from_lengths(&l)?;
            let det = w.gram_det;
            let env = C::new(-w.cov_tilde / pb2 - 0.25 * det.ln(), 0.0);
            let osc = 2.0 * (w.cov / pb2 + 0.25 * PI).cos();
            Prediction {
                log_value: env + C::new(osc, 0.0).ln(),
                log_envelope: env,
                oscillation: osc,
                exponent_quantity: w.cov_tilde,
                phase_quantity: Some(w.cov),
                gram_det: det,
            }
        }
        Geometry::HypLengths(l) => {
            if classify_lengths(&l)? != TetraClass::Hyperbolic {
                return Err(mismatch("a hyperbolic length tuple"));
            }
            let cov = hyperbolic_covolume_from_lengths(&l)?;
            let det = gram_from_lengths(&l)?.det();
            let lg = C::new(-cov / pb2 - 0.25 * (-det).ln(), 0.0);
            Prediction { log_value: lg, log_envelope: lg, oscillation: 1.0, exponent_quantity: cov, phase_quantity: None, gram_det: det }
        }
        Geometry::FlatLengths(l) => {
            if classify_lengths(&l)? != TetraClass::Flat {
                return Err(mismatch("a flat length tuple"));
            }
            let ct = covolume_tilde(&l, TetraClass::Flat)?;
            let det = gram_from_lengths(&l)?.det();
            let lg = C::new(-ct / pb2, 0.0);
            Prediction { log_value: lg, log_envelope: lg, oscillation: 1.0, exponent_quantity: ct, phase_quantity: None, gram_det: det }
        }
    })
}

impl Prediction {
    pub fn value(&self) -> C {
        self.log_value.exp()
    }
}

impl Geometry {
    /// Observed limit of `value / prediction` as `b → 0`: `i/2`, except `1/2`
    /// for anti-de Sitter angles. `None` for flat lengths (no prefactor).
    pub fn leading_constant(&self) -> Option<C> {
        match self {
            Geometry::AdSAngles(_) => Some(C::new(0.5, 0.0)),
            Geometry::FlatLengths(_) => None,
            _ => Some(C::new(0.0, 0.5)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub b: f64,
    pub log_value: C,
    pub rel_error_estimate: f64,
    pub predicted: Prediction,
    /// `value / prediction`.
    pub ratio: C,
    /// `|ratio| `, the modulus ratio.
    pub modulus_ratio: f64,
    /// `|ratio − 1|` up to the sign of the square root; `None` near cosine zeros
    /// and in the flat case.
    pub ratio_deviation: Option<f64>,
    /// `|ratio / leading_constant − 1|` up to sign, where both are defined.
    pub normalized_deviation: Option<f64>,
    /// `−πb² log|value|`.
    pub extracted: f64,
    /// `arg(value) − arg(prediction)` reduced to `(−π/2, π/2]` (sign untracked).
    pub phase_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub geometry: String,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log ratio_deviation` against `log b`.
    pub loglog_slope: Option<f64>,
    /// The same for `normalized_deviation`.
    pub normalized_loglog_slope: Option<f64>,
}

fn wrap_half_pi(x: f64) -> f64 {
    let mut y = x.rem_euclid(PI);
    if y > 0.5 * PI {
        y -= PI;
    }
    y
}

pub fn sweep_row(geometry: &Geometry, b: f64, cfg: &QuadratureConfig) -> Result<SweepRow> {
    let p = make_params(&geometry.entries(), b)?;
    let e = evaluate(&p, &geometry.contour(&p), cfg)?;
    let pred = asymptotic_prediction(geometry, b)?;
    let near_zero = matches!(geometry, Geometry::AdSLengths(_)) && pred.oscillation.abs() < 0.2;
    let comparable = !near_zero && !matches!(geometry, Geometry::FlatLengths(_));
    let ratio = if near_zero { (e.log_value - pred.log_envelope).exp() } else { (e.log_value - pred.log_value).exp() };
    let normalized_deviation = match geometry.leading_constant() {
        Some(k) if comparable => Some(log_rel_diff_up_to_sign(e.log_value - k.ln(), pred.log_value).0),
        _ => None,
    };
    Ok(SweepRow {
        b,
        log_value: e.log_value,
        rel_error_estimate: e.rel_error_estimate,
        predicted: pred,
        ratio,
        modulus_ratio: ratio.norm(),
        ratio_deviation: comparable.then(|| log_rel_diff_up_to_sign(e.log_value, pred.log_value).0),
        normalized_deviation,
        extracted: -PI * b * b * e.log_value.re,
        phase_difference: wrap_half_pi(e.log_value.im - pred.log_value.im),
    })
}

/// Evaluate and compare along `b_list` (rows in the given order).
pub fn asymptotic_sweep(geometry: &Geometry, b_list: &[f64], cfg: &QuadratureConfig) -> Result<SweepTable> {
    if b_list.iter().any(|&b| !(b >= MIN_SWEEP_B && b < 1.0)) {
        return Err(Error::domain(format!("sweep values of b must lie in [{MIN_SWEEP_B}, 1)")));
    }
    if b_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("sweep values of b must be strictly decreasing"));
    }
    let rows = b_list.par_iter().map(|&b| sweep_row(geometry, b, cfg)).collect::<Result<Vec<_>>>()?;
    let slope = |f: &dyn Fn(&SweepRow) -> Option<f64>| {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter_map(|r| f(r).filter(|d| *d > 0.0).map(|d| (r.b.ln(), d.ln()))).collect();
        fit_slope(&pts)
    };
    Ok(SweepTable {
        geometry: geometry.name().to_string(),
        loglog_slope: slope(&|r| r.ratio_deviation),
        normalized_loglog_slope: slope(&|r| r.normalized_deviation),
        rows,
    })
}

/// Smallest `b` accepted by [`asymptotic_sweep`]; below it the dynamic range
/// of the integrand is beyond double precision.
pub const MIN_SWEEP_B: f64 = 0.05;

/// Least-squares slope through `(x, y)` points.
pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
