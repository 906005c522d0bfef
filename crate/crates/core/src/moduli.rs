//! Anti-de Sitter tetrahedra as hyperbolic four-holed spheres: the map Φ from
//! 2×2 matrices to `E^{2,2}`, holonomy matrices, and Fenchel–Nielsen lengths
//! and twists.

use crate::error::{Error, Result};
use crate::geometry::{
    angles_from_lengths, canonical_pi_pair_permutation, classify_gram, column, det4, gram_from_lengths,
    inner, reconstruct_vertices, GramMatrix, SixTuple, TetraClass, TetraEmbedding, TupleKind,
};
use crate::volume::pi_pair_of;
use serde::{Deserialize, Serialize};

/// The form of `E^{2,2}` used by Φ: `x₁y₁ + x₂y₂ − x₃y₃ − x₄y₄`.
pub const J22: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

const DET_TOL: f64 = 1e-10;

/// A real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// `Ad(M)`, so that `M·Ad(M) = det(M)·I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d].iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// A matrix with determinant one (within `1e-10`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SL2Matrix(Mat2);

impl SL2Matrix {
    pub fn new(m: Mat2) -> Result<Self> {
        if !((m.det() - 1.0).abs() <= DET_TOL) {
            return Err(Error::domain(format!("determinant {} is not 1", m.det())));
        }
        Ok(SL2Matrix(m))
    }

    pub fn identity() -> Self {
        SL2Matrix(Mat2::IDENTITY)
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix(self.0.mul(&o.0))
    }

    /// The adjugate, which is the inverse in SL(2,ℝ).
    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix(self.0.adjugate())
    }
}

/// `Φ([[a,b],[c,d]]) = ((a+d)/2, (b−c)/2, (a−d)/2, (b+c)/2)`.
pub fn phi(m: &Mat2) -> [f64; 4] {
    [(m.a + m.d) / 2.0, (m.b - m.c) / 2.0, (m.a - m.d) / 2.0, (m.b + m.c) / 2.0]
}

pub fn phi_inv(v: &[f64; 4]) -> Mat2 {
    Mat2 { a: v[0] + v[2], b: v[1] + v[3], c: v[3] - v[1], d: v[0] - v[2] }
}

/// `⟨A, B⟩ = ½Tr(A·Ad(B))`, the form of `E^{2,2}` pulled back by Φ.
pub fn pairing(a: &Mat2, b: &Mat2) -> f64 {
    0.5 * a.mul(&b.adjugate()).trace()
}

/// Orientation of the four-holed sphere; fixes the overall sign of the twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+1")]
    Positive,
    #[serde(rename = "-1")]
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Fenchel–Nielsen lengths and twists of `γ₁,…,γ₆`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNCoordinates {
    pub lengths: [f64; 6],
    pub twists: [f64; 6],
    pub orientation: Orientation,
}

impl FNCoordinates {
    /// The mirror image: same lengths, twists negated.
    pub fn mirror(&self) -> Self {
        FNCoordinates {
            lengths: self.lengths,
            twists: self.twists.map(|t| -t),
            orientation: self.orientation.reversed(),
        }
    }
}

/// Slots of the edges `e₁₃, e₂₃, e₂₄, e₁₄, e₁₂, e₃₄` carried by `γ₁,…,γ₆`.
pub const GAMMA_SLOTS: [usize; 6] = [1, 2, 4, 5, 0, 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FnReport {
    pub coordinates: FNCoordinates,
    /// Slot permutation applied to put the π-pair on `e₁₂, e₃₄`
    /// (output slot `k` is input slot `perm[k]`).
    pub slot_permutation: [usize; 6],
    /// `−G₃₄/√(G₃₃G₄₄)` from the hexagon cofactor formula.
    pub cosh_t5_hexagon: f64,
    /// `cosh(Im θ₁₂)`.
    pub cosh_t5_angle: f64,
}

/// Edge lengths of the tetrahedron from the lengths of `γ₁,…,γ₆`.
pub fn fn_lengths_to_tetra(lengths: &[f64; 6]) -> Result<SixTuple> {
    let mut l = [0.0; 6];
    for (g, &s) in GAMMA_SLOTS.iter().enumerate() {
        l[s] = lengths[g] / 2.0;
    }
    SixTuple::lengths(l)
}

/// Lengths and twists of the four-holed sphere of an anti-de Sitter tetrahedron.
/// Vertices are relabelled first so that the π-pair of angles sits on `e₁₂, e₃₄`.
pub fn tetra_to_fn(l: &SixTuple, orientation: Orientation) -> Result<FnReport> {
    if l.kind != TupleKind::Lengths {
        return Err(Error::domain("expected edge lengths"));
    }
    let g = gram_from_lengths(l)?;
    if classify_gram(&g) != TetraClass::AntiDeSitter {
        return Err(Error::domain("the four-holed sphere correspondence needs an anti-de Sitter tetrahedron"));
    }
    let theta = angles_from_lengths(l)?;
    let k = pi_pair_of(&theta).ok_or_else(|| Error::numeric("no π-pair among the angles"))?;
    let (perm, _) = canonical_pi_pair_permutation(k);
    let l2 = l.permuted(&perm);
    let th2 = theta.permuted(&perm);
    let lv = l2.reals();
    let s = orientation.sign();
    let coordinates = FNCoordinates {
        lengths: GAMMA_SLOTS.map(|k| 2.0 * lv[k]),
        twists: GAMMA_SLOTS.map(|k| s * th2.values[k].im),
        orientation,
    };
    let g2 = gram_from_lengths(&l2)?;
    let (hex, ang) = t5_consistency(&g2, th2.values[0].im);
    if !((hex - ang).abs() <= 1e-9 * ang) {
        return Err(Error::numeric(format!("cosh t(γ₅): hexagon formula {hex}, angle {ang}")));
    }
    Ok(FnReport { coordinates, slot_permutation: perm, cosh_t5_hexagon: hex, cosh_t5_angle: ang })
}

fn t5_consistency(g: &GramMatrix, im_theta12: f64) -> (f64, f64) {
    let hex = -g.cofactor(2, 3) / (g.cofactor(2, 2) * g.cofactor(3, 3)).sqrt();
    (hex, im_theta12.cosh())
}

/// Sign of `det[v₁ v₂ v₃ v₄]`.
pub fn orientation_of(e: &TetraEmbedding) -> Orientation {
    if det4(&e.v) >= 0.0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

/// `v ↦ (v₁, −v₂, −v₃, −v₄)` applied to vertices and normals.
pub fn mirror_embedding(e: &TetraEmbedding) -> TetraEmbedding {
    let mut m = *e;
    for r in 1..4 {
        for c in 0..4 {
            m.v[r][c] = -m.v[r][c];
            m.u[r][c] = -m.u[r][c];
        }
    }
    m
}

/// Coordinates of an embedded tetrahedron, with the orientation flag taken
/// from the sign of `det[v₁ v₂ v₃ v₄]`.
pub fn fn_from_embedding(e: &TetraEmbedding) -> Result<FnReport> {
    let vg = e.vertex_gram();
    let mut l = [0.0; 6];
    for (k, &(i, j)) in crate::geometry::SLOT_EDGES.iter().enumerate() {
        let c = -vg[i][j];
        if !(c > 1.0) {
            return Err(Error::domain("vertices are not pairwise hyperideal"));
        }
        l[k] = c.acosh();
    }
    tetra_to_fn(&SixTuple::lengths(l)?, orientation_of(e))
}

/// Vertex index pairs `(i, j)` with `Tr A_k = 2⟨v_i, v_j⟩` (0-based).
pub const HOLONOMY_PAIRS: [(usize, usize); 6] = [(0, 2), (1, 2), (1, 3), (0, 3), (0, 1), (2, 3)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomyReport {
    /// `B_i = Φ⁻¹(v_i)`.
    pub lifts: [SL2Matrix; 4],
    /// `A₁,…,A₆` in the gauge `B₁ = I`: `A₁ = B₃`, `A₂ = B₂B₃⁻¹`, `A₃ = B₄B₂⁻¹`,
    /// `A₄ = (A₃A₂A₁)⁻¹`, `A₅ = (A₂A₁)⁻¹`, `A₆ = (A₃A₂)⁻¹`.
    pub holonomy: [SL2Matrix; 6],
    pub traces: [f64; 6],
    /// `2⟨v_i, v_j⟩` for the matching vertex pair.
    pub expected_traces: [f64; 6],
    /// Traces of the products `B_iB_j⁻¹` of the original lifts.
    pub product_traces: [f64; 6],
    pub max_trace_residual: f64,
    /// `max |det A_k − 1| / max(1, ‖A_k‖²)`; entries grow like `e^l`, so the
    /// unscaled residual grows with them.
    pub max_det_residual: f64,
    /// `‖A₄A₃A₂A₁ − I‖_max / Π‖A_k‖_F`.
    pub product_relation_residual: f64,
}

/// Holonomy matrices of the four-holed sphere from an anti-de Sitter embedding.
pub fn holonomy_from_embedding(e: &TetraEmbedding) -> Result<HolonomyReport> {
    if e.class != TetraClass::AntiDeSitter || e.j != J22 {
        return Err(Error::domain("holonomy needs an anti-de Sitter embedding with form (+,+,−,−)"));
    }
    let mut lifts = [SL2Matrix::identity(); 4];
    for (i, b) in lifts.iter_mut().enumerate() {
        let v = column(&e.v, i);
        if !((inner(&J22, &v, &v) - 1.0).abs() <= DET_TOL.sqrt()) {
            return Err(Error::domain("vertices must satisfy ⟨v, v⟩ = 1"));
        }
        // renormalise the last bits of rounding onto det = 1
        let m = phi_inv(&v);
        let s = m.det().sqrt();
        *b = SL2Matrix::new(Mat2::new(m.a / s, m.b / s, m.c / s, m.d / s))?;
    }
    let b1inv = lifts[0].inverse();
    let c: Vec<SL2Matrix> = lifts.iter().map(|b| b1inv.mul(b)).collect();
    let a1 = c[2];
    let a2 = c[1].mul(&c[2].inverse());
    let a3 = c[3].mul(&c[1].inverse());
    // A₃A₂A₁ = C₄, A₂A₁ = C₂ and A₃A₂ = C₄C₃⁻¹; the telescoped forms avoid
    // cancellation in products of large matrices
    let a4 = c[3].inverse();
    let a5 = c[1].inverse();
    let a6 = c[2].mul(&c[3].inverse());
    let holonomy = [a1, a2, a3, a4, a5, a6];
    let traces = holonomy.map(|a| a.trace());
    let expected_traces = HOLONOMY_PAIRS.map(|(i, j)| 2.0 * inner(&J22, &column(&e.v, i), &column(&e.v, j)));
    let product_traces = HOLONOMY_PAIRS.map(|(i, j)| lifts[i].mul(&lifts[j].inverse()).trace());
    let mut max_trace_residual = 0.0f64;
    for k in 0..6 {
        let scale = expected_traces[k].abs().max(1.0);
        max_trace_residual = max_trace_residual
            .max((traces[k] - expected_traces[k]).abs() / scale)
            .max((product_traces[k] - expected_traces[k]).abs() / scale);
        if !(traces[k] < -2.0) {
            return Err(Error::domain(format!("Tr A{} = {} is not below −2: bad lift", k + 1, traces[k])));
        }
    }
    let max_det_residual = holonomy
        .iter()
        .map(|a| {
            let m = a.matrix();
            let norm2 = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
            (a.det() - 1.0).abs() / norm2.max(1.0)
        })
        .fold(0.0, f64::max);
    let fro = |m: Mat2| (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d).sqrt();
    let relation = a4.mul(&a3).mul(&a2).mul(&a1).matrix();
    let product_relation_residual = relation.max_abs_diff(&Mat2::IDENTITY)
        / [a1, a2, a3, a4].iter().map(|a| fro(a.matrix())).product::<f64>();
    Ok(HolonomyReport {
        lifts,
        holonomy,
        traces,
        expected_traces,
        product_traces,
        max_trace_residual,
        max_det_residual,
        product_relation_residual,
    })
}

/// Holonomy of an anti-de Sitter length tuple via its embedding.
pub fn holonomy_from_lengths(l: &SixTuple) -> Result<HolonomyReport> {
    let g = gram_from_lengths(l)?;
    holonomy_from_embedding(&reconstruct_vertices(&g, TetraClass::AntiDeSitter)?)
}

/// Vertices `Φ(I), Φ(A₂A₁), Φ(A₁), Φ(A₃A₂A₁)` of the tetrahedron of a
/// four-holed sphere with holonomy `A₁, A₂, A₃`.
pub fn vertices_from_holonomy(a1: &SL2Matrix, a2: &SL2Matrix, a3: &SL2Matrix) -> [[f64; 4]; 4] {
    let a21 = a2.mul(a1);
    [phi(&Mat2::IDENTITY), phi(&a21.matrix()), phi(&a1.matrix()), phi(&a3.mul(&a21).matrix())]
}
