#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sixj::geometry::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random length tuples of the given class, kept away from the flat locus.
pub fn lengths_of_class(rng: &mut ChaCha8Rng, class: TetraClass, n: usize) -> Vec<SixTuple> {
    let (lo, hi) = match class {
        TetraClass::Hyperbolic => (0.2, 1.5),
        _ => (0.05, 4.0),
    };
    let mut out = Vec::new();
    while out.len() < n {
        let mut l = [0.0; 6];
        for x in l.iter_mut() {
            *x = rng.gen_range(lo..hi);
        }
        let t = SixTuple::lengths(l).unwrap();
        let g = gram_from_lengths(&t).unwrap();
        if classify_gram(&g) == class && g.det().abs() > 1e-4 * g.norm().powi(4) {
            out.push(t);
        }
    }
    out
}

pub fn ads_angle_instances(seed: u64, n: usize) -> Vec<SixTuple> {
    lengths_of_class(&mut rng(seed), TetraClass::AntiDeSitter, n)
        .iter()
        .map(|l| angles_from_lengths(l).unwrap())
        .collect()
}

pub fn hyperbolic_angle_instances(seed: u64, n: usize) -> Vec<SixTuple> {
    lengths_of_class(&mut rng(seed), TetraClass::Hyperbolic, n)
        .iter()
        .map(|l| angles_from_lengths(l).unwrap())
        .collect()
}

pub fn worked_example(eps: f64) -> SixTuple {
    let a = 2f64.ln();
    SixTuple::ads_angles(0, [a, eps, eps, a, eps, eps]).unwrap()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
