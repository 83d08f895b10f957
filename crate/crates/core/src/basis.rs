//! Bigraded spherical harmonics on S³ and the orthonormal basis table.
//!
//! L²(S³) splits under U(2) into spaces H_{j,k} of restrictions of harmonic
//! polynomials bihomogeneous of degree j in ζ and k in ζ̄. Restriction to the
//! sphere is injective on each bihomogeneous component, so the restriction span
//! of all bidegree-(j,k) monomials has dimension (j+1)(k+1); the genuinely new
//! eigenspace added at (j,k) is the harmonic part, of dimension j+k+1. Both
//! counts are verified constructively during the build.
//!
//! Each H_{j,k} decomposes further into one-dimensional torus-weight classes,
//! so the basis is canonical: per class the exact harmonic combination is the
//! nullspace of the Euclidean Laplacian on that class (solved in rational
//! arithmetic), distinct classes are exactly orthogonal, and no Gram–Schmidt
//! ever runs. Elements are tagged pluriharmonic exactly when k = 0, i.e. they
//! come from bidegrees (j,0)/(0,k).

use crate::frame::{sublaplacian, sublaplacian_eigenvalue};
use crate::poly::{
    coef_i, coef_is_zero, coef_to_f64, coef_zero, monomial_mean, Coef, Mono, Poly,
};
use crate::{Error, Result};
use num::complex::Complex;
use num::{BigInt, BigRational, One, Signed, Zero};
use sha2::Digest;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

/// Bigrading label. Stored with j ≥ k; a real basis element tagged (j,k) spans
/// directions in H_{j,k} ⊕ H_{k,j}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, serde::Serialize)]
pub struct BiDegree {
    pub j: u16,
    pub k: u16,
}

impl BiDegree {
    pub fn new(j: u16, k: u16) -> BiDegree {
        BiDegree { j, k }
    }

    pub fn order(&self) -> u16 {
        self.j + self.k
    }

    pub fn is_pluriharmonic(&self) -> bool {
        self.k == 0
    }

    /// Dimension of the restriction span of all bidegree-(j,k) monomials on S³.
    pub fn restriction_dim(&self) -> usize {
        (self.j as usize + 1) * (self.k as usize + 1)
    }

    /// Dimension of the new harmonic eigenspace H_{j,k}.
    pub fn harmonic_dim(&self) -> usize {
        self.j as usize + self.k as usize + 1
    }

    /// Constructive check that bidegree-(j,k) monomials restrict to S³ with
    /// full rank (j+1)(k+1): the exact Gram matrix under the L² pairing must
    /// be nonsingular.
    pub fn verify_restriction_dimension(&self) -> Result<()> {
        let monos: Vec<Mono> = monomials_of_bidegree(self.j, self.k);
        let n = monos.len();
        if n != self.restriction_dim() {
            return Err(Error::Dimension(format!(
                "monomial count {} != (j+1)(k+1) = {} at ({},{})",
                n,
                self.restriction_dim(),
                self.j,
                self.k
            )));
        }
        let mut gram = vec![vec![BigRational::zero(); n]; n];
        for (r, m1) in monos.iter().enumerate() {
            for (c, m2) in monos.iter().enumerate() {
                // ⟨m1, m2⟩ = ⨍ m1 · conj(m2); real rational for monomials.
                let prod = Mono([
                    m1.0[0] + m2.0[2],
                    m1.0[1] + m2.0[3],
                    m1.0[2] + m2.0[0],
                    m1.0[3] + m2.0[1],
                ]);
                gram[r][c] = monomial_mean(&prod);
            }
        }
        if rational_rank(gram) != n {
            return Err(Error::Dimension(format!(
                "restriction span at ({},{}) is rank-deficient",
                self.j, self.k
            )));
        }
        Ok(())
    }
}

fn monomials_of_bidegree(j: u16, k: u16) -> Vec<Mono> {
    let mut out = Vec::new();
    for a1 in 0..=j {
        for b1 in 0..=k {
            out.push(Mono([a1, j - a1, b1, k - b1]));
        }
    }
    out
}

fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for r in (row + 1)..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / inv.clone();
            for c in col..cols {
                let sub = f.clone() * m[row][c].clone();
                m[r][c] -= sub;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Which real combination of the class representative an element realizes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum RealPart {
    /// Self-conjugate class (j = k, zero weight): the representative itself.
    Zonal,
    /// √2 · Re(h) / ‖h‖.
    Re,
    /// √2 · Im(h) / ‖h‖.
    Im,
}

/// One real orthonormal basis function.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub bidegree: BiDegree,
    /// Torus weight w₁ = a₁ − b₁ of the complex class representative.
    pub weight: i32,
    pub part: RealPart,
    /// Exact complex class representative h (unnormalized).
    pub rep: Poly,
    /// ‖h‖² / V as an exact rational.
    pub norm_sq_over_v: BigRational,
    /// Sub-Laplacian eigenvalue λ_{j,k} = −(2jk + j + k), derived exactly.
    pub lambda: f64,
    pub pluriharmonic: bool,
    /// Floating-point terms of the normalized real function, for evaluation.
    pub terms: Vec<(Mono, Complex<f64>)>,
}

impl BasisElement {
    /// Evaluate the (real) basis function at a point of S³.
    pub fn eval(&self, z1: Complex<f64>, z2: Complex<f64>) -> f64 {
        let z1b = z1.conj();
        let z2b = z2.conj();
        let mut acc = Complex::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let v = z1.powi(m.0[0] as i32)
                * z2.powi(m.0[1] as i32)
                * z1b.powi(m.0[2] as i32)
                * z2b.powi(m.0[3] as i32);
            acc += c * v;
        }
        acc.re
    }

    /// Evaluate using precomputed power tables `z1p[a] = ζ₁^a`, `z2p[b] = ζ₂^b`.
    #[inline]
    pub fn eval_pow(&self, z1p: &[Complex<f64>], z2p: &[Complex<f64>]) -> f64 {
        let mut acc = Complex::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let v = z1p[m.0[0] as usize]
                * z2p[m.0[1] as usize]
                * z1p[m.0[2] as usize].conj()
                * z2p[m.0[3] as usize].conj();
            acc += c * v;
        }
        acc.re
    }

    /// Exact real combination realized by this element (unnormalized).
    pub fn real_combination(&self) -> Poly {
        match self.part {
            RealPart::Zonal => self.rep.clone(),
            RealPart::Re => self.rep.add(&self.rep.conj()),
            RealPart::Im => self
                .rep
                .sub(&self.rep.conj())
                .scale(&(coef_zero() - coef_i())),
        }
    }
}

/// Scope of a basis table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisKind {
    /// All bidegrees with j + k ≤ J_max.
    Full,
    /// Only pluriharmonic bidegrees (m,0)/(0,m); cheap at large J_max.
    PluriOnly,
}

/// Ordered orthonormal real basis for ⊕_{j+k ≤ J_max} H_{j,k}.
///
/// Ordering is lexicographic in (j+k, j, class weight descending, Re before
/// Im), stable across runs. Immutable after construction and safely shareable
/// across threads.
#[derive(Clone, Debug)]
pub struct BasisTable {
    pub j_max: u16,
    pub kind: BasisKind,
    pub elements: Vec<BasisElement>,
    /// Indices of pluriharmonic elements, in table order.
    pub pluri_indices: Vec<usize>,
    /// Map from (j,k) (j ≥ k) to (offset, len) in `elements`.
    blocks: BTreeMap<(u16, u16), (usize, usize)>,
}

impl BasisTable {
    pub fn build_full(j_max: u16) -> Result<BasisTable> {
        BasisTable::build(j_max, BasisKind::Full)
    }

    pub fn build_pluri(j_max: u16) -> Result<BasisTable> {
        BasisTable::build(j_max, BasisKind::PluriOnly)
    }

    pub fn build(j_max: u16, kind: BasisKind) -> Result<BasisTable> {
        if j_max < 1 {
            return Err(Error::Basis("J_max must be at least 1".into()));
        }
        let mut elements = Vec::new();
        let mut blocks = BTreeMap::new();
        for n in 0..=j_max {
            let j_lo = n.div_ceil(2);
            for j in j_lo..=n {
                let k = n - j;
                if kind == BasisKind::PluriOnly && k != 0 {
                    continue;
                }
                let start = elements.len();
                build_block(j, k, &mut elements)?;
                blocks.insert((j, k), (start, elements.len() - start));
            }
        }
        // Constructive dimension law for small bidegrees: full monomial rank.
        for (&(j, k), _) in blocks.iter() {
            if j + k <= 4 {
                BiDegree::new(j, k).verify_restriction_dimension()?;
            }
        }
        let pluri_indices = elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.pluriharmonic)
            .map(|(i, _)| i)
            .collect();
        Ok(BasisTable {
            j_max,
            kind,
            elements,
            pluri_indices,
            blocks,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn pluri_len(&self) -> usize {
        self.pluri_indices.len()
    }

    /// (offset, len) of the real elements tagged (j,k); j ≥ k required.
    pub fn block(&self, j: u16, k: u16) -> Option<(usize, usize)> {
        self.blocks.get(&(j, k)).copied()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(u16, u16), &(usize, usize))> {
        self.blocks.iter()
    }

    /// Index of the constant element (always first).
    pub fn constant_index(&self) -> usize {
        0
    }

    /// Position of a full-table element inside the pluriharmonic subordering.
    pub fn pluri_position(&self, full_index: usize) -> Option<usize> {
        self.pluri_indices.binary_search(&full_index).ok()
    }

    /// Total real dimension expected for the full table: Σ_{n ≤ J} (n+1)².
    pub fn expected_full_dim(j_max: u16) -> usize {
        (0..=j_max as usize).map(|n| (n + 1) * (n + 1)).sum()
    }

    /// Total real dimension expected for the pluriharmonic table.
    pub fn expected_pluri_dim(j_max: u16) -> usize {
        1 + (1..=j_max as usize).map(|m| 2 * (m + 1)).sum::<usize>()
    }
}

fn build_block(j: u16, k: u16, out: &mut Vec<BasisElement>) -> Result<()> {
    let lambda_exact = sublaplacian_eigenvalue(j, k)?;
    let lambda = rat_to_f64(&lambda_exact);
    let w_lo: i32 = if j == k { 0 } else { -(k as i32) };
    let mut classes = 0usize;
    for w in (w_lo..=j as i32).rev() {
        let h = harmonic_class(j, k, w)?;
        // Exact eigen-verification: Δ_b h = λ h as polynomials.
        let image = sublaplacian(&h);
        let lam_c = Complex::new(lambda_exact.clone(), BigRational::zero());
        if !image.sub(&h.scale(&lam_c)).is_zero() {
            return Err(Error::Basis(format!(
                "class ({j},{k},{w}) is not an exact Δ_b eigenfunction"
            )));
        }
        let rho = norm_sq_over_v(&h)?;
        let bidegree = BiDegree::new(j, k);
        let pluri = bidegree.is_pluriharmonic();
        if j == k && w == 0 {
            // Self-conjugate zonal class: the representative is already real.
            if h.conj() != h {
                return Err(Error::Basis(format!(
                    "zonal class ({j},{j}) representative is not real"
                )));
            }
            out.push(make_element(
                bidegree,
                w,
                RealPart::Zonal,
                h,
                rho,
                lambda,
                pluri,
            ));
        } else {
            out.push(make_element(
                bidegree,
                w,
                RealPart::Re,
                h.clone(),
                rho.clone(),
                lambda,
                pluri,
            ));
            out.push(make_element(
                bidegree, w, RealPart::Im, h, rho, lambda, pluri,
            ));
        }
        classes += 1;
    }
    // The number of weight classes is the harmonic dimension j+k+1 (for j > k)
    // or its conjugate-reduced half (for j = k).
    let expected = if j == k {
        j as usize + 1
    } else {
        (j + k + 1) as usize
    };
    if classes != expected {
        return Err(Error::Basis(format!(
            "block ({j},{k}) produced {classes} classes, expected {expected}"
        )));
    }
    Ok(())
}

fn make_element(
    bidegree: BiDegree,
    weight: i32,
    part: RealPart,
    rep: Poly,
    norm_sq_over_v: BigRational,
    lambda: f64,
    pluriharmonic: bool,
) -> BasisElement {
    let v = crate::quadrature::volume();
    let norm = (rat_to_f64(&norm_sq_over_v) * v).sqrt();
    let scale = match part {
        RealPart::Zonal => 1.0 / norm,
        _ => 1.0 / (norm * std::f64::consts::SQRT_2),
    };
    let combo = match part {
        RealPart::Zonal => rep.clone(),
        RealPart::Re => rep.add(&rep.conj()),
        RealPart::Im => rep.sub(&rep.conj()).scale(&(coef_zero() - coef_i())),
    };
    let terms = combo
        .float_terms()
        .into_iter()
        .map(|(m, c)| (m, c * scale))
        .collect();
    BasisElement {
        bidegree,
        weight,
        part,
        rep,
        norm_sq_over_v,
        lambda,
        pluriharmonic,
        terms,
    }
}

/// Exact harmonic representative of the torus-weight class (j, k, w₁): the
/// unique (up to scale) combination of bidegree-(j,k) monomials with
/// a₁ − b₁ = w₁ annihilated by the Euclidean Laplacian ∂₁∂̄₁ + ∂₂∂̄₂.
fn harmonic_class(j: u16, k: u16, w: i32) -> Result<Poly> {
    let a1_lo = w.max(0) as u16;
    let a1_hi = (j as i32).min(k as i32 + w) as u16;
    if a1_lo > a1_hi {
        return Err(Error::Basis(format!("empty weight class ({j},{k},{w})")));
    }
    let monos: Vec<Mono> = (a1_lo..=a1_hi)
        .map(|a1| {
            let b1 = (a1 as i32 - w) as u16;
            Mono([a1, j - a1, b1, k - b1])
        })
        .collect();
    let dim = monos.len();

    // Laplacian image lives in the (j−1, k−1) class of the same weight.
    let mut targets: BTreeMap<Mono, usize> = BTreeMap::new();
    let mut cols: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); dim];
    for (ci, m) in monos.iter().enumerate() {
        let p = Poly::monomial(*m, crate::poly::coef_one());
        let lap = p
            .derivative(0)
            .derivative(2)
            .add(&p.derivative(1).derivative(3));
        for (tm, tc) in lap.terms() {
            let next = targets.len();
            let ti = *targets.entry(*tm).or_insert(next);
            cols[ci].insert(ti, tc.re.clone());
        }
    }
    let trows = targets.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for ti in 0..trows {
        let mut row = vec![BigRational::zero(); dim];
        for (ci, col) in cols.iter().enumerate() {
            if let Some(v) = col.get(&ti) {
                row[ci] = v.clone();
            }
        }
        rows.push(row);
    }

    let null = rational_nullspace(rows, dim);
    if null.len() != 1 {
        return Err(Error::Basis(format!(
            "weight class ({j},{k},{w}) has nullspace dimension {}, expected 1",
            null.len()
        )));
    }
    let mut coeffs = null.into_iter().next().unwrap();
    // Clear denominators and fix the sign of the lexicographically smallest
    // monomial, so the representative is canonical.
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num::integer::lcm(acc, c.denom().clone()));
    for c in coeffs.iter_mut() {
        *c *= BigRational::from_integer(lcm.clone());
    }
    let first_nonzero = coeffs.iter().find(|c| !c.is_zero()).unwrap().clone();
    if first_nonzero.is_negative() {
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    let mut h = Poly::zero();
    for (m, c) in monos.iter().zip(coeffs.iter()) {
        h = h.add(&Poly::monomial(
            *m,
            Complex::new(c.clone(), BigRational::zero()),
        ));
    }
    Ok(h)
}

/// Nullspace basis of a rational matrix given as rows, over `dim` columns.
fn rational_nullspace(mut rows: Vec<Vec<BigRational>>, dim: usize) -> Vec<Vec<BigRational>> {
    let nrows = rows.len();
    let mut pivot_col = vec![usize::MAX; nrows.max(1)];
    let mut row = 0;
    for col in 0..dim {
        let p = (row..nrows).find(|&r| !rows[r][col].is_zero());
        let Some(p) = p else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].clone();
        for c in col..dim {
            rows[row][c] = rows[row][c].clone() / inv.clone();
        }
        for r in 0..nrows {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..dim {
                    let sub = f.clone() * rows[row][c].clone();
                    rows[r][c] -= sub;
                }
            }
        }
        pivot_col[row] = col;
        row += 1;
        if row == nrows {
            break;
        }
    }
    let pivots: Vec<usize> = pivot_col[..row].to_vec();
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![BigRational::zero(); dim];
        v[fc] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// ‖h‖² / V for a class representative, via the exact monomial integrals.
fn norm_sq_over_v(h: &Poly) -> Result<BigRational> {
    let pairing = crate::poly::poly_pairing(h, h);
    if !pairing.im.is_zero() {
        return Err(Error::Basis("norm² came out complex".into()));
    }
    if pairing.re.is_zero() || pairing.re.is_negative() {
        return Err(Error::Basis("norm² is not positive".into()));
    }
    Ok(pairing.re)
}

fn rat_to_f64(r: &BigRational) -> f64 {
    coef_to_f64(&Complex::new(r.clone(), BigRational::zero())).re
}

// ---------------------------------------------------------------------------
// Cache files
// ---------------------------------------------------------------------------

/// Writes a versioned textual dump of the table with an integrity checksum.
pub fn save_cache(table: &BasisTable, path: &std::path::Path) -> Result<()> {
    let mut body = String::new();
    body.push_str(&format!(
        "crflow-basis v1\nconvention {}\nj_max {}\nkind {}\nelements {}\n",
        crate::CONVENTION_TAG,
        table.j_max,
        match table.kind {
            BasisKind::Full => "full",
            BasisKind::PluriOnly => "pluri",
        },
        table.elements.len()
    ));
    for e in &table.elements {
        body.push_str(&format!(
            "e {} {} {} {} {} {}\n",
            e.bidegree.j,
            e.bidegree.k,
            e.weight,
            match e.part {
                RealPart::Zonal => "zonal",
                RealPart::Re => "re",
                RealPart::Im => "im",
            },
            e.norm_sq_over_v,
            poly_to_line(&e.rep),
        ));
    }
    let checksum = hex_digest(&body);
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    writeln!(f, "checksum {checksum}")?;
    Ok(())
}

/// Loads a cached table, verifying checksum and convention tag, then rebuilds
/// and compares: the cache certifies reproducibility, while eigenvalues and
/// normalizations always come from the live derivation.
pub fn load_cache(path: &std::path::Path) -> Result<BasisTable> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut lines: Vec<String> = Vec::new();
    for l in reader.lines() {
        lines.push(l?);
    }
    let Some(checksum_line) = lines.pop() else {
        return Err(Error::Basis("cache file empty".into()));
    };
    let body = lines.join("\n") + "\n";
    let expect = checksum_line
        .strip_prefix("checksum ")
        .ok_or_else(|| Error::Basis("cache missing checksum".into()))?;
    if hex_digest(&body) != expect {
        return Err(Error::Basis("cache checksum mismatch".into()));
    }
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| Error::Basis("cache truncated".into()))?;
    if header != "crflow-basis v1" {
        return Err(Error::Basis(format!("unknown cache version: {header}")));
    }
    let conv = it.next().ok_or_else(|| Error::Basis("cache truncated".into()))?;
    if conv != &format!("convention {}", crate::CONVENTION_TAG) {
        return Err(Error::Basis(format!("convention mismatch: {conv}")));
    }
    let j_max: u16 = field_after(it.next(), "j_max")?.parse().map_err(bad)?;
    let kind = match field_after(it.next(), "kind")?.as_str() {
        "full" => BasisKind::Full,
        "pluri" => BasisKind::PluriOnly,
        other => return Err(Error::Basis(format!("unknown kind {other}"))),
    };
    let _count: usize = field_after(it.next(), "elements")?.parse().map_err(bad)?;
    let table = BasisTable::build(j_max, kind)?;
    let mut idx = 0usize;
    for line in it {
        let Some(rest) = line.strip_prefix("e ") else {
            continue;
        };
        let parts: Vec<&str> = rest.splitn(6, ' ').collect();
        if parts.len() != 6 {
            return Err(Error::Basis("malformed element line".into()));
        }
        if idx >= table.elements.len() {
            return Err(Error::Basis("cache has extra elements".into()));
        }
        let e = &table.elements[idx];
        let rep = poly_from_line(parts[5])?;
        if rep != e.rep {
            return Err(Error::Basis(format!(
                "cache element {idx} disagrees with rebuilt basis"
            )));
        }
        idx += 1;
    }
    if idx != table.elements.len() {
        return Err(Error::Basis("cache is missing elements".into()));
    }
    Ok(table)
}

fn field_after(line: Option<&String>, key: &str) -> Result<String> {
    let l = line.ok_or_else(|| Error::Basis("cache truncated".into()))?;
    l.strip_prefix(&format!("{key} "))
        .map(|s| s.to_string())
        .ok_or_else(|| Error::Basis(format!("expected `{key}` line")))
}

fn bad<E: std::fmt::Display>(e: E) -> Error {
    Error::Basis(format!("cache parse error: {e}"))
}

fn hex_digest(s: &str) -> String {
    let mut hasher = sha2::Sha256::new();
    hasher.update(s.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn poly_to_line(p: &Poly) -> String {
    let mut parts = Vec::new();
    for (m, c) in p.terms() {
        parts.push(format!(
            "{},{},{},{}:{}:{}",
            m.0[0], m.0[1], m.0[2], m.0[3], c.re, c.im
        ));
    }
    parts.join(";")
}

fn poly_from_line(s: &str) -> Result<Poly> {
    let mut p = Poly::zero();
    for chunk in s.split(';') {
        if chunk.is_empty() {
            continue;
        }
        let seg: Vec<&str> = chunk.split(':').collect();
        if seg.len() != 3 {
            return Err(Error::Basis("malformed polynomial term".into()));
        }
        let exps: Vec<u16> = seg[0]
            .split(',')
            .map(|x| x.parse().map_err(bad))
            .collect::<Result<_>>()?;
        if exps.len() != 4 {
            return Err(Error::Basis("malformed monomial".into()));
        }
        let re = BigRational::from_str(seg[1]).map_err(bad)?;
        let im = BigRational::from_str(seg[2]).map_err(bad)?;
        let c: Coef = Complex::new(re, im);
        if !coef_is_zero(&c) {
            p = p.add(&Poly::monomial(Mono([exps[0], exps[1], exps[2], exps[3]]), c));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_counts_low_order() {
        let t = BasisTable::build_full(3).unwrap();
        // Σ_{n≤3} (n+1)² = 1 + 4 + 9 + 16 = 30 real dimensions.
        assert_eq!(t.len(), 30);
        assert_eq!(t.len(), BasisTable::expected_full_dim(3));
        // Pluriharmonic subspace: 1 + 4 + 6 + 8 = 19.
        assert_eq!(t.pluri_len(), BasisTable::expected_pluri_dim(3));
        // J_max = 1: constants plus the four degree-one functions.
        let t1 = BasisTable::build_full(1).unwrap();
        assert_eq!(t1.len(), 5);
    }

    #[test]
    fn restriction_dimension_law() {
        for (j, k) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
            BiDegree::new(j, k).verify_restriction_dimension().unwrap();
            // New harmonic directions: (j+1)(k+1) − jk = j+k+1.
            let bd = BiDegree::new(j, k);
            assert_eq!(
                bd.restriction_dim() - (j as usize) * (k as usize),
                bd.harmonic_dim()
            );
        }
    }

    #[test]
    fn flags_mark_pluriharmonic_bidegrees() {
        let t = BasisTable::build_full(3).unwrap();
        for e in &t.elements {
            assert_eq!(e.pluriharmonic, e.bidegree.k == 0);
        }
        let (off, len) = t.block(1, 1).unwrap();
        for e in &t.elements[off..off + len] {
            assert!(!e.pluriharmonic);
        }
        assert_eq!(len, 3);
    }

    #[test]
    fn constant_element_normalization() {
        let t = BasisTable::build_full(1).unwrap();
        let e = &t.elements[0];
        assert_eq!(e.bidegree, BiDegree::new(0, 0));
        let v = e.eval(Complex::new(0.6, 0.0), Complex::new(0.0, 0.8));
        assert!((v - 1.0 / crate::quadrature::volume().sqrt()).abs() < 1e-14);
    }

    #[test]
    fn pluri_table_matches_full_subordering() {
        let full = BasisTable::build_full(4).unwrap();
        let pluri = BasisTable::build_pluri(4).unwrap();
        assert_eq!(pluri.len(), full.pluri_len());
        for (pi, &fi) in full.pluri_indices.iter().enumerate() {
            let a = &pluri.elements[pi];
            let b = &full.elements[fi];
            assert_eq!(a.bidegree, b.bidegree);
            assert_eq!(a.weight, b.weight);
            assert_eq!(a.part, b.part);
            assert_eq!(a.rep, b.rep);
        }
    }

    #[test]
    fn cache_round_trip() {
        let t = BasisTable::build_full(2).unwrap();
        let dir = std::env::temp_dir().join("crflow-basis-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("basis2.txt");
        save_cache(&t, &path).unwrap();
        let loaded = load_cache(&path).unwrap();
        assert_eq!(loaded.len(), t.len());
    }
}
