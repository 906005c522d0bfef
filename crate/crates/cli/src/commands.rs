use crate::input::{geometry_of, Input};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sixj::b6j::{
    asymptotic_sweep, check_reflection_symmetry, check_tetrahedral_symmetry, evaluate, log_rel_diff, make_params,
    saddle_contour, B6jParams, ContourSpec, QuadratureConfig, SweepTable,
};
use sixj::geometry::{
    angles_from_lengths, classify_gram, covolume_tilde, gram_from_lengths, AngleFamily, SixTuple, TetraClass,
    TupleKind,
};
use sixj::moduli::{holonomy_from_lengths, tetra_to_fn, Orientation, HOLONOMY_PAIRS};
use sixj::volume::{
    ads_potential_from_lengths, ads_volume_from_lengths, ads_volume_from_angles, fd_step,
    hyperbolic_covolume_from_lengths, hyperbolic_volume_from_angles, lengths_of,
};
use sixj::geometry::slot_of;
use sixj::{ComplexValue as C, Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "# sixj sweep csv v1";
pub const CSV_COLUMNS: [&str; 11] = [
    "b",
    "re_value",
    "im_value",
    "abs_value",
    "re_prediction",
    "im_prediction",
    "re_ratio",
    "im_ratio",
    "abs_ratio",
    "extracted",
    "rel_error_estimate",
];

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn lengths_only(input: &Input, cmd: &str) -> Result<SixTuple> {
    match input {
        Input::Tuple(t) if t.kind == TupleKind::Lengths => Ok(*t),
        _ => Err(Error::Parse(format!("{cmd} expects {{\"lengths\": [...]}}"))),
    }
}

pub fn classify(input: &Input) -> Result<Value> {
    let l = lengths_only(input, "classify")?;
    let g = gram_from_lengths(&l)?;
    let class = classify_gram(&g);
    let sig = g.signature();
    let mut out = json!({
        "class": class,
        "gram_det": g.det(),
        "signature": sig,
    });
    if class != TetraClass::Flat {
        out["angles"] = to_value(&angles_from_lengths(&l)?.values);
    }
    Ok(out)
}

/// Central differences of `f` in direction `dir` at slot `k`.
fn central(th: &SixTuple, k: usize, dir: C, h: f64, f: &dyn Fn(&SixTuple) -> Result<f64>) -> Result<f64> {
    let (mut a, mut b) = (*th, *th);
    a.values[k] += dir * h;
    b.values[k] -= dir * h;
    Ok((f(&a)? - f(&b)?) / (2.0 * h))
}

/// `∂Vol/∂θ_k + l_k/2` for real angles, `∂Vol/∂Im θ_k + l_k/2` in anti-de Sitter.
fn schlaefli_residuals(th: &SixTuple) -> Result<[f64; 6]> {
    let l = lengths_of(th)?;
    let hyp = th.angle_family()? == AngleFamily::Hyperbolic;
    let mut r = [0.0; 6];
    for k in 0..6 {
        let d = if hyp {
            let f = |t: &SixTuple| Ok(hyperbolic_volume_from_angles(t)?.volume);
            central(th, k, C::new(1.0, 0.0), fd_step(th.values[k].re), &f)?
        } else {
            let f = |t: &SixTuple| Ok(ads_volume_from_angles(t)?.volume);
            central(th, k, C::new(0.0, 1.0), fd_step(th.values[k].im), &f)?
        };
        r[k] = d + l[k] / 2.0;
    }
    Ok(r)
}

/// `∂Cov/∂l_k − Im θ_k/2`.
fn co_schlaefli_residuals(l: &SixTuple) -> Result<[f64; 6]> {
    let th = angles_from_lengths(l)?;
    let f = |t: &SixTuple| Ok(ads_potential_from_lengths(t)?.cov);
    let mut r = [0.0; 6];
    for k in 0..6 {
        let d = central(l, k, C::new(1.0, 0.0), fd_step(l.values[k].re), &f)?;
        r[k] = d - th.values[k].im / 2.0;
    }
    Ok(r)
}

fn angle_volume_report(th: &SixTuple, verify: bool) -> Result<Value> {
    let (family, v) = match th.angle_family()? {
        AngleFamily::Hyperbolic => ("hyperbolic", hyperbolic_volume_from_angles(th)?),
        AngleFamily::AntiDeSitter { .. } => ("anti-de-sitter", ads_volume_from_angles(th)?),
    };
    let mut out = json!({
        "class": family,
        "input": "angles",
        "volume": v.volume,
        "degenerate": false,
        "critical_point": v.critical,
        "rejected_root": v.rejected,
        "quadratic": v.quadratic,
        "gram_det": v.gram_det,
        "hessian": v.hessian,
    });
    if verify {
        out["schlaefli_residuals"] = to_value(&schlaefli_residuals(th)?);
    }
    Ok(out)
}

pub fn volume(input: &Input, verify: bool) -> Result<Value> {
    let t = match input {
        Input::Tuple(t) => *t,
        Input::Raw(_) => return Err(Error::Parse("volume expects lengths or angles".into())),
    };
    if t.kind == TupleKind::Angles {
        return angle_volume_report(&t, verify);
    }
    let g = gram_from_lengths(&t)?;
    match classify_gram(&g) {
        TetraClass::Flat => Ok(json!({
            "class": TetraClass::Flat,
            "input": "lengths",
            "volume": 0.0,
            "degenerate": true,
            "gram_det": g.det(),
            "cov_tilde": covolume_tilde(&t, TetraClass::Flat)?,
        })),
        TetraClass::Hyperbolic => {
            let th = angles_from_lengths(&t)?;
            let mut out = angle_volume_report(&th, verify)?;
            out["input"] = json!("lengths");
            out["angles"] = to_value(&th.values);
            out["cov"] = json!(hyperbolic_covolume_from_lengths(&t)?);
            out["gram_det"] = json!(g.det());
            Ok(out)
        }
        TetraClass::AntiDeSitter => {
            let w = ads_potential_from_lengths(&t)?;
            let v = ads_volume_from_lengths(&t)?;
            let mut out = json!({
                "class": TetraClass::AntiDeSitter,
                "input": "lengths",
                "volume": v.volume,
                "degenerate": false,
                "angles": v.angles,
                "w": w.w,
                "cov": w.cov,
                "cov_tilde": w.cov_tilde,
                "critical_points": [w.xi1, w.xi2],
                "quadratic": w.quadratic,
                "gram_det": w.gram_det,
                "hessian": w.hessian,
            });
            if verify {
                out["co_schlaefli_residuals"] = to_value(&co_schlaefli_residuals(&t)?);
                let th = angles_from_lengths(&t)?;
                out["schlaefli_residuals"] = to_value(&schlaefli_residuals(&th)?);
            }
            Ok(out)
        }
    }
}

fn params_and_contour(input: &Input, b: f64) -> Result<(B6jParams, ContourSpec, Option<&'static str>)> {
    match input {
        Input::Raw(a) => {
            let p = B6jParams::new(*a, b)?;
            let c = saddle_contour(&p, None);
            Ok((p, c, None))
        }
        Input::Tuple(t) => {
            let g = geometry_of(t)?;
            let p = make_params(&g.entries(), b)?;
            let c = g.contour(&p);
            Ok((p, c, Some(g.name())))
        }
    }
}

pub fn b6j(input: &Input, b: f64, cfg: &QuadratureConfig, verify: bool, seed: u64) -> Result<Value> {
    let (p, contour, geometry) = params_and_contour(input, b)?;
    let e = evaluate(&p, &contour, cfg)?;
    let mut out = json!({
        "b": b,
        "geometry": geometry,
        "params": p,
        "value": e.value,
        "log_value": e.log_value,
        "abs_error_estimate": e.abs_error_estimate,
        "rel_error_estimate": e.rel_error_estimate,
        "contour": e.contour,
        "tail_bound": e.tail_bound,
        "truncation": e.truncation,
        "integrand_evals": e.integrand_evals,
    });
    if verify {
        let s = ChaCha8Rng::seed_from_u64(seed).gen_range(0.3..0.7);
        let other = evaluate(&p, &ContourSpec::vertical_at(&p, s), cfg)?;
        out["contour_check"] = json!({
            "contour": other.contour,
            "log_value": other.log_value,
            "rel_difference": log_rel_diff(other.log_value, e.log_value),
            "rel_error_estimate": other.rel_error_estimate,
        });
        out["tetrahedral_symmetry"] = to_value(&check_tetrahedral_symmetry(&p, cfg)?);
        out["reflection_symmetry"] = to_value(&check_reflection_symmetry(&p, 0, cfg)?);
    }
    Ok(out)
}

pub fn sweep(input: &Input, b_list: &[f64], cfg: &QuadratureConfig) -> Result<SweepTable> {
    let t = match input {
        Input::Tuple(t) => t,
        Input::Raw(_) => return Err(Error::Parse("sweep expects lengths or angles".into())),
    };
    asymptotic_sweep(&geometry_of(t)?, b_list, cfg)
}

/// Plain notation in `[1e-4, 1e6)`, scientific otherwise.
fn number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in &table.rows {
        let v = r.log_value.exp();
        let pr = r.predicted.value();
        let rec = [
            r.b,
            v.re,
            v.im,
            v.norm(),
            pr.re,
            pr.im,
            r.ratio.re,
            r.ratio.im,
            r.modulus_ratio,
            r.extracted,
            r.rel_error_estimate,
        ];
        w.write_record(rec.iter().map(|&x| number(x))).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("ascii");
    format!("{CSV_HEADER} geometry={}\n{body}", table.geometry)
}

pub fn fenchel_nielsen(input: &Input, orientation: Orientation) -> Result<Value> {
    let l = match input {
        Input::Tuple(t) if t.kind == TupleKind::Lengths => *t,
        _ => return Err(Error::Parse("fn expects {\"lengths\": [...]}".into())),
    };
    let r = tetra_to_fn(&l, orientation)?;
    let h = holonomy_from_lengths(&l)?;
    let lv = l.reals();
    let traces: Vec<Value> = HOLONOMY_PAIRS
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            json!({
                "matrix": format!("A{}", k + 1),
                "vertices": [i + 1, j + 1],
                "trace": h.traces[k],
                "expected": -2.0 * lv[slot_of(i, j)].cosh(),
                "product_trace": h.product_traces[k],
            })
        })
        .collect();
    Ok(json!({
        "coordinates": r.coordinates,
        "slot_permutation": r.slot_permutation,
        "cosh_t5_hexagon": r.cosh_t5_hexagon,
        "cosh_t5_angle": r.cosh_t5_angle,
        "traces": traces,
        "max_trace_residual": h.max_trace_residual,
        "max_det_residual": h.max_det_residual,
        "product_relation_residual": h.product_relation_residual,
    }))
}
