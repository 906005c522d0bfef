//! Gram matrices, classification, embeddings and the length/angle dictionary.
//!
//! Slot convention: `(l12, l13, l14, l23, l24, l34) = (l1, l2, l6, l3, l5, l4)`,
//! so slots `k` and `k+3` are opposite edges.

use crate::complexfn::ComplexValue;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = ComplexValue;
pub type Mat4 = [[f64; 4]; 4];

/// Vertex pair of each slot (0-based vertices).
pub const SLOT_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];

/// Slot of the edge joining vertices `i` and `j`.
pub fn slot_of(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    SLOT_EDGES
        .iter()
        .position(|&e| e == (a, b))
        .expect("distinct vertices in 0..4")
}

/// Slot of the edge opposite to slot `k`.
pub fn opposite(k: usize) -> usize {
    (k + 3) % 6
}

const TOL_RE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TupleKind {
    Lengths,
    Angles,
    Raw,
}

/// Six complex entries in slot order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SixTuple {
    pub kind: TupleKind,
    pub values: [C; 6],
}

/// Which admissible family an angle tuple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleFamily {
    Hyperbolic,
    /// `pi_pair` is the 0-based slot `k < 3` such that slots `k, k+3` have `Re θ = π`.
    AntiDeSitter { pi_pair: usize },
}

impl SixTuple {
    pub fn lengths(l: [f64; 6]) -> Result<Self> {
        if l.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::domain(format!("edge lengths must be positive, got {l:?}")));
        }
        Ok(SixTuple { kind: TupleKind::Lengths, values: l.map(|x| C::new(x, 0.0)) })
    }

    pub fn angles(theta: [C; 6]) -> Result<Self> {
        let t = SixTuple { kind: TupleKind::Angles, values: theta };
        t.angle_family()?;
        Ok(t)
    }

    /// Real dihedral angles of a hyperbolic tetrahedron.
    pub fn hyperbolic_angles(theta: [f64; 6]) -> Result<Self> {
        Self::angles(theta.map(|x| C::new(x, 0.0)))
    }

    /// AdS angles `π − iφ` on the pair `(k, k+3)` and `iφ` elsewhere (`k` 0-based).
    pub fn ads_angles(pi_pair: usize, phi: [f64; 6]) -> Result<Self> {
        if pi_pair > 2 {
            return Err(Error::domain("pi_pair must be 0, 1 or 2"));
        }
        let mut v = [C::new(0.0, 0.0); 6];
        for k in 0..6 {
            v[k] = if k % 3 == pi_pair {
                C::new(PI, -phi[k])
            } else {
                C::new(0.0, phi[k])
            };
        }
        Self::angles(v)
    }

    pub fn raw(a: [C; 6]) -> Self {
        SixTuple { kind: TupleKind::Raw, values: a }
    }

    /// Real parts, for length tuples.
    pub fn reals(&self) -> [f64; 6] {
        self.values.map(|v| v.re)
    }

    pub fn angle_family(&self) -> Result<AngleFamily> {
        let v = &self.values;
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain("non-finite angle"));
        }
        if v.iter().all(|z| z.im.abs() <= TOL_RE && z.re > 0.0 && z.re < PI) {
            return Ok(AngleFamily::Hyperbolic);
        }
        for k in 0..3 {
            let ok = (0..6).all(|s| {
                let z = v[s];
                if s % 3 == k {
                    (z.re - PI).abs() <= TOL_RE && z.im < 0.0
                } else {
                    z.re.abs() <= TOL_RE && z.im > 0.0
                }
            });
            if ok {
                return Ok(AngleFamily::AntiDeSitter { pi_pair: k });
            }
        }
        Err(Error::domain(format!(
            "angles {:?} are neither in (0,π)^6 nor of the anti-de Sitter form",
            v
        )))
    }

    /// Apply a slot permutation: output slot `k` takes input slot `perm[k]`.
    pub fn permuted(&self, perm: &[usize; 6]) -> Self {
        SixTuple { kind: self.kind, values: perm.map(|k| self.values[k]) }
    }
}

/// Slot permutation moving the AdS π-pair to slots (0,3), with its inverse.
/// Both are relabellings of the vertices.
pub fn canonical_pi_pair_permutation(pi_pair: usize) -> ([usize; 6], [usize; 6]) {
    match pi_pair {
        0 => ([0, 1, 2, 3, 4, 5], [0, 1, 2, 3, 4, 5]),
        // swap vertices 2 and 3
        1 => ([1, 0, 2, 4, 3, 5], [1, 0, 2, 4, 3, 5]),
        // swap vertices 2 and 4
        _ => ([5, 1, 3, 2, 4, 0], [5, 1, 3, 2, 4, 0]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramFlavor {
    EdgeLength,
    DihedralAngle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix {
    pub entries: Mat4,
    pub flavor: GramFlavor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TetraClass {
    Hyperbolic,
    Flat,
    AntiDeSitter,
}

impl std::fmt::Display for TetraClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TetraClass::Hyperbolic => "hyperbolic",
            TetraClass::Flat => "flat",
            TetraClass::AntiDeSitter => "anti-de-sitter",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

// ---------------------------------------------------------------------------
// small dense linear algebra

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(m: &Mat4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for c in 0..4 {
        let p = (c..4)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Signed cofactor `(−1)^{i+j} M_ij`.
pub fn cofactor(m: &Mat4, i: usize, j: usize) -> f64 {
    let mut s = [[0.0; 3]; 3];
    let mut r = 0;
    for a in 0..4 {
        if a == i {
            continue;
        }
        let mut c = 0;
        for b in 0..4 {
            if b == j {
                continue;
            }
            s[r][c] = m[a][b];
            c += 1;
        }
        r += 1;
    }
    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
    sign * det3(s)
}

pub fn cofactor_matrix(m: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = cofactor(m, i, j);
        }
    }
    out
}

fn frobenius(m: &Mat4) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a symmetric 4×4 matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the matrix whose columns are the eigenvectors.
pub fn jacobi_eigen(m: &Mat4) -> ([f64; 4], Mat4) {
    let mut a = *m;
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}

impl GramMatrix {
    pub fn det(&self) -> f64 {
        det4(&self.entries)
    }

    pub fn cofactor(&self, i: usize, j: usize) -> f64 {
        cofactor(&self.entries, i, j)
    }

    pub fn cofactors(&self) -> Mat4 {
        cofactor_matrix(&self.entries)
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.entries)
    }

    pub fn signature(&self) -> Signature {
        signature(self)
    }

    /// Relative band used to call a determinant zero.
    pub fn flat_tolerance(&self) -> f64 {
        1e-9 * self.norm().powi(4)
    }
}

pub fn signature(g: &GramMatrix) -> Signature {
    let (ev, _) = jacobi_eigen(&g.entries);
    let tau = 1e-9 * g.norm();
    let mut s = Signature { pos: 0, neg: 0, zero: 0 };
    for e in ev {
        if e > tau {
            s.pos += 1;
        } else if e < -tau {
            s.neg += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

/// Gram matrix in the edge lengths: 1 on the diagonal, `−cosh l_ij` off it.
pub fn gram_from_lengths(l: &SixTuple) -> Result<GramMatrix> {
    let lv = l.reals();
    if l.values.iter().any(|z| z.im.abs() > TOL_RE) || lv.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::domain("edge lengths must be positive reals"));
    }
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (k, &(i, j)) in SLOT_EDGES.iter().enumerate() {
        g[i][j] = -lv[k].cosh();
        g[j][i] = g[i][j];
    }
    Ok(GramMatrix { entries: g, flavor: GramFlavor::EdgeLength })
}

/// Gram matrix in the dihedral angles: −1 on the diagonal, entry `(i,j)` is
/// `cos θ` of the edge opposite to `ij`.
pub fn gram_from_angles(theta: &SixTuple) -> Result<GramMatrix> {
    theta.angle_family()?;
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -1.0;
    }
    for (k, &(i, j)) in SLOT_EDGES.iter().enumerate() {
        let c = theta.values[opposite(k)].cos();
        g[i][j] = c.re;
        g[j][i] = c.re;
    }
    Ok(GramMatrix { entries: g, flavor: GramFlavor::DihedralAngle })
}

pub fn classify_gram(g: &GramMatrix) -> TetraClass {
    let d = g.det();
    let tau = g.flat_tolerance();
    if d > tau {
        TetraClass::AntiDeSitter
    } else if d < -tau {
        TetraClass::Hyperbolic
    } else {
        TetraClass::Flat
    }
}

pub fn classify_lengths(l: &SixTuple) -> Result<TetraClass> {
    let g = gram_from_lengths(l)?;
    let class = classify_gram(&g);
    if class == TetraClass::AntiDeSitter {
        let s = g.signature();
        if (s.pos, s.neg) != (2, 2) {
            return Err(Error::numeric(format!(
                "positive determinant but signature ({}, {}, {})",
                s.pos, s.neg, s.zero
            )));
        }
    }
    Ok(class)
}

// ---------------------------------------------------------------------------
// embeddings

/// Vertices and outward unit normals in `R^4` with the form `J`.
/// Columns of `v` and `u` are the vectors `v_i`, `u_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraEmbedding {
    pub v: Mat4,
    pub u: Mat4,
    pub j: [f64; 4],
    pub class: TetraClass,
}

pub fn inner(j: &[f64; 4], x: &[f64; 4], y: &[f64; 4]) -> f64 {
    (0..4).map(|k| j[k] * x[k] * y[k]).sum()
}

pub fn column(m: &Mat4, i: usize) -> [f64; 4] {
    [m[0][i], m[1][i], m[2][i], m[3][i]]
}

/// Residuals of the defining conditions of an embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub gram_residual: f64,
    pub vertex_norm_residual: f64,
    pub normal_norm_residual: f64,
    pub orthogonality_residual: f64,
    pub outward: bool,
    pub segments_ok: bool,
}

impl TetraEmbedding {
    pub fn vertex(&self, i: usize) -> [f64; 4] {
        column(&self.v, i)
    }

    pub fn normal(&self, i: usize) -> [f64; 4] {
        column(&self.u, i)
    }

    /// `VᵀJV`.
    pub fn vertex_gram(&self) -> Mat4 {
        let mut g = [[0.0; 4]; 4];
        for (a, row) in g.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x = inner(&self.j, &self.vertex(a), &self.vertex(b));
            }
        }
        g
    }

    pub fn normal_gram(&self) -> Mat4 {
        let mut g = [[0.0; 4]; 4];
        for (a, row) in g.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x = inner(&self.j, &self.normal(a), &self.normal(b));
            }
        }
        g
    }

    pub fn check(&self, g: &GramMatrix) -> EmbeddingReport {
        let vg = self.vertex_gram();
        let ng = self.normal_gram();
        let mut gram_residual: f64 = 0.0;
        let mut vertex_norm_residual: f64 = 0.0;
        let mut normal_norm_residual: f64 = 0.0;
        let mut orthogonality_residual: f64 = 0.0;
        let mut outward = true;
        let mut segments_ok = true;
        let unit = if self.class == TetraClass::AntiDeSitter { -1.0 } else { 1.0 };
        for a in 0..4 {
            vertex_norm_residual = vertex_norm_residual.max((vg[a][a] - 1.0).abs());
            normal_norm_residual = normal_norm_residual.max((ng[a][a] - unit).abs());
            for b in 0..4 {
                gram_residual = gram_residual.max((vg[a][b] - g.entries[a][b]).abs());
                let uv = inner(&self.j, &self.normal(a), &self.vertex(b));
                if a == b {
                    outward &= uv > 0.0;
                } else {
                    orthogonality_residual = orthogonality_residual.max(uv.abs());
                    // 2(1−g)t² − 2(1−g)t + 1 is most negative at t = 1/2
                    let gab = vg[a][b];
                    segments_ok &= 1.0 - (1.0 - gab) / 2.0 < 0.0;
                }
            }
        }
        EmbeddingReport {
            gram_residual,
            vertex_norm_residual,
            normal_norm_residual,
            orthogonality_residual,
            outward,
            segments_ok,
        }
    }
}

pub fn reconstruct_vertices(g: &GramMatrix, class: TetraClass) -> Result<TetraEmbedding> {
    if g.flavor != GramFlavor::EdgeLength {
        return Err(Error::domain("embedding needs the edge-length Gram matrix"));
    }
    let want = match class {
        TetraClass::AntiDeSitter => (2, 2),
        TetraClass::Hyperbolic => (3, 1),
        TetraClass::Flat => return Err(Error::domain("flat tetrahedra have no embedding")),
    };
    let (ev, e) = jacobi_eigen(&g.entries);
    let tau = 1e-9 * g.norm();
    let pos = ev.iter().filter(|&&x| x > tau).count();
    let neg = ev.iter().filter(|&&x| x < -tau).count();
    if (pos, neg) != want {
        return Err(Error::domain(format!(
            "signature ({pos},{neg}) does not match class {class}"
        )));
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| ev[b].total_cmp(&ev[a]));
    let mut j = [1.0; 4];
    let mut v = [[0.0; 4]; 4];
    for (r, &k) in order.iter().enumerate() {
        j[r] = ev[k].signum();
        let s = ev[k].abs().sqrt();
        for c in 0..4 {
            v[r][c] = s * e[c][k];
        }
    }
    // lift: first vertex pairs positively with (1,0,0,0), else first nonzero coordinate
    let v1 = column(&v, 0);
    let lead = v1.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
    if v1[0] < -1e-12 || (v1[0].abs() <= 1e-12 && lead < 0.0) {
        for row in v.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
    }
    let det = g.det();
    let cof = g.cofactors();
    let mut u = [[0.0; 4]; 4];
    for i in 0..4 {
        let scale = match class {
            TetraClass::AntiDeSitter => 1.0 / (-det * cof[i][i]).sqrt(),
            _ => -1.0 / (det * cof[i][i]).sqrt(),
        };
        if !scale.is_finite() {
            return Err(Error::numeric("degenerate cofactor in normal construction"));
        }
        for r in 0..4 {
            let w: f64 = (0..4).map(|jj| cof[i][jj] * v[r][jj]).sum();
            u[r][i] = scale * w;
        }
    }
    Ok(TetraEmbedding { v, u, j, class })
}

/// Inner products of the face normals, normalised so that the result is the
/// angle-flavour Gram matrix: `N_ii = −1` and `N_kl = cos θ_ij`.
pub fn normals_from_gram(g: &GramMatrix) -> Result<Mat4> {
    let class = classify_gram(g);
    let cof = g.cofactors();
    let scale = g.norm().powi(3);
    for i in 0..4 {
        if cof[i][i].abs() <= 1e-13 * scale {
            return Err(Error::domain("vanishing diagonal cofactor"));
        }
    }
    let sign = match class {
        TetraClass::AntiDeSitter => {
            if cof.iter().enumerate().any(|(i, r)| r[i] >= 0.0) {
                return Err(Error::domain("diagonal cofactors must be negative"));
            }
            1.0
        }
        TetraClass::Hyperbolic => 1.0,
        TetraClass::Flat => return Err(Error::domain("flat tetrahedron")),
    };
    let mut n = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            n[i][j] = if i == j {
                -1.0
            } else {
                sign * cof[i][j] / (cof[i][i] * cof[j][j]).sqrt()
            };
        }
    }
    Ok(n)
}

pub fn angles_from_lengths(l: &SixTuple) -> Result<SixTuple> {
    let g = gram_from_lengths(l)?;
    let class = classify_lengths(l)?;
    let n = normals_from_gram(&g)?;
    let mut out = [C::new(0.0, 0.0); 6];
    for k in 0..6 {
        let (p, q) = SLOT_EDGES[opposite(k)];
        let c = n[p][q];
        out[k] = match class {
            TetraClass::Hyperbolic => C::new(c.clamp(-1.0, 1.0).acos(), 0.0),
            _ => {
                if c < -1.0 {
                    C::new(PI, -(-c).acosh())
                } else if c > 1.0 {
                    C::new(0.0, c.acosh())
                } else {
                    return Err(Error::numeric(format!(
                        "normal product {c} in [-1,1] for an anti-de Sitter tetrahedron"
                    )));
                }
            }
        };
    }
    Ok(SixTuple { kind: TupleKind::Angles, values: out })
}

/// Outcome of the angle criterion for anti-de Sitter tetrahedra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleCriterion {
    pub signature_2_2: bool,
    pub diagonal_cofactors_positive: bool,
    pub offdiagonal_cofactors_negative: bool,
    pub signature: Signature,
    pub det: f64,
}

impl AngleCriterion {
    pub fn passed(&self) -> bool {
        self.signature_2_2 && self.diagonal_cofactors_positive && self.offdiagonal_cofactors_negative
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.signature_2_2 {
            f.push("(a) signature is not (2,2)");
        }
        if !self.diagonal_cofactors_positive {
            f.push("(b) some diagonal cofactor is not positive");
        }
        if !self.offdiagonal_cofactors_negative {
            f.push("(c) some off-diagonal cofactor is not negative");
        }
        f
    }
}

pub fn check_angle_criterion(theta: &SixTuple) -> Result<AngleCriterion> {
    let g = gram_from_angles(theta)?;
    let s = g.signature();
    let cof = g.cofactors();
    let scale = g.norm().powi(3) * 1e-14;
    let diag = (0..4).all(|i| cof[i][i] > scale);
    let off = (0..4).all(|i| (i + 1..4).all(|j| cof[i][j] < -scale));
    Ok(AngleCriterion {
        signature_2_2: (s.pos, s.neg) == (2, 2),
        diagonal_cofactors_positive: diag,
        offdiagonal_cofactors_negative: off,
        signature: s,
        det: g.det(),
    })
}

pub fn lengths_from_angles(theta: &SixTuple) -> Result<SixTuple> {
    let family = theta.angle_family()?;
    let g = gram_from_angles(theta)?;
    match family {
        AngleFamily::AntiDeSitter { .. } => {
            let c = check_angle_criterion(theta)?;
            if !c.passed() {
                return Err(Error::domain(format!(
                    "angles fail the anti-de Sitter criterion: {}",
                    c.failures().join(", ")
                )));
            }
        }
        AngleFamily::Hyperbolic => {
            if g.det() >= 0.0 {
                return Err(Error::domain("angle Gram determinant must be negative"));
            }
        }
    }
    let cof = g.cofactors();
    let mut out = [0.0; 6];
    for (k, &(i, j)) in SLOT_EDGES.iter().enumerate() {
        let prod = cof[i][i] * cof[j][j];
        if prod <= 0.0 {
            return Err(Error::domain("diagonal cofactors of mixed sign"));
        }
        let ch = -cof[i][j] / prod.sqrt();
        if !(ch > 1.0) {
            return Err(Error::domain(format!(
                "edge {}{} would have cosh l = {ch} <= 1",
                i + 1,
                j + 1
            )));
        }
        out[k] = ch.acosh();
    }
    SixTuple::lengths(out)
}

/// Extended co-volume `(π/2)(l_k + l_{k+3})` of an anti-de Sitter length tuple,
/// where `(k, k+3)` carries the angles with real part `π`. For a flat tuple the
/// same formula is used with the pair whose normal products tend to `−1`.
pub fn covolume_tilde(l: &SixTuple, class: TetraClass) -> Result<f64> {
    let lv = l.reals();
    if class == TetraClass::Flat {
        let cof = gram_from_lengths(l)?.cofactors();
        let n = |s: usize| {
            let (p, q) = SLOT_EDGES[opposite(s)];
            cof[p][q] / (cof[p][p] * cof[q][q]).abs().sqrt()
        };
        let k = (0..3)
            .min_by(|&a, &b| (n(a) + n(a + 3)).total_cmp(&(n(b) + n(b + 3))))
            .expect("three pairs");
        if !(n(k) + n(k + 3) < 0.0) {
            return Err(Error::numeric("flat tuple without an opposite pair of straight angles"));
        }
        return Ok(0.5 * PI * (lv[k] + lv[k + 3]));
    }
    if class != TetraClass::AntiDeSitter {
        return Err(Error::domain(format!("extended co-volume closed form needs anti-de Sitter or flat, got {class}")));
    }
    let theta = angles_from_lengths(l)?;
    match theta.angle_family()? {
        AngleFamily::AntiDeSitter { pi_pair } => {
            Ok(0.5 * PI * (lv[pi_pair] + lv[pi_pair + 3]))
        }
        AngleFamily::Hyperbolic => Err(Error::numeric("expected anti-de Sitter angles")),
    }
}
