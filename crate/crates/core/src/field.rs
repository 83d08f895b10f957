//! Spectral and grid representations of functions on S³, and the transforms
//! between them.
//!
//! A [`SpectralField`] holds coefficients over a full [`BasisTable`]; a
//! [`PluriField`] holds coefficients over the pluriharmonic sub-basis only
//! (bidegrees (m,0)/(0,m)), which is the state space of the flow. Transforms
//! are dense; basis values are cached when the table×grid product is small
//! enough and streamed with per-node power tables otherwise. All reductions
//! are deterministic (fixed chunking, pairwise sums) so reruns are bit-stable
//! regardless of thread count.

use crate::basis::BasisTable;
use crate::quadrature::QuadratureGrid;
use crate::util::pairwise_sum;
use crate::{Error, Result};
use num::complex::Complex;
use rayon::prelude::*;

/// Values on quadrature nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField(pub Vec<f64>);

/// Coefficients over a full basis table.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField(pub Vec<f64>);

/// Coefficients over the pluriharmonic sub-basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PluriField(pub Vec<f64>);

macro_rules! vec_ops {
    ($t:ident) => {
        impl $t {
            pub fn zeros(n: usize) -> $t {
                $t(vec![0.0; n])
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn add(&self, o: &$t) -> $t {
                $t(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, o: &$t) -> $t {
                $t(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
            }

            pub fn scale(&self, s: f64) -> $t {
                $t(self.0.iter().map(|a| a * s).collect())
            }

            pub fn axpy(&mut self, s: f64, o: &$t) {
                for (a, b) in self.0.iter_mut().zip(&o.0) {
                    *a += s * b;
                }
            }

            pub fn dot(&self, o: &$t) -> f64 {
                let prods: Vec<f64> = self.0.iter().zip(&o.0).map(|(a, b)| a * b).collect();
                pairwise_sum(&prods)
            }

            pub fn norm_l2_coeff(&self) -> f64 {
                self.dot(self).sqrt()
            }
        }
    };
}

vec_ops!(SpectralField);
vec_ops!(PluriField);
vec_ops!(GridField);

const CACHE_ENTRY_LIMIT: usize = 24_000_000; // ×8 bytes ≈ 192 MB

/// Basis table + quadrature grid + cached basis values. The central handle
/// passed to every operator; immutable after construction.
pub struct Workspace {
    pub table: BasisTable,
    pub grid: QuadratureGrid,
    /// Per-element nodal values for elements in `cache_index`, row-major.
    cache: Vec<Vec<f64>>,
    /// cache_index[i] = Some(row) if element i is cached.
    cache_index: Vec<Option<usize>>,
}

impl Workspace {
    pub fn new(table: BasisTable, grid: QuadratureGrid) -> Workspace {
        let dim = table.len();
        let nodes = grid.len();
        let cache_all = dim * nodes <= CACHE_ENTRY_LIMIT;
        let cache_pluri = table.pluri_len() * nodes <= CACHE_ENTRY_LIMIT;
        let mut ws = Workspace {
            table,
            grid,
            cache: Vec::new(),
            cache_index: vec![None; dim],
        };
        if cache_all {
            ws.build_cache((0..dim).collect());
        } else if cache_pluri {
            ws.build_cache(ws.table.pluri_indices.clone());
        }
        ws
    }

    fn build_cache(&mut self, indices: Vec<usize>) {
        let rows: Vec<Vec<f64>> = indices
            .par_iter()
            .map(|&ei| {
                let e = &self.table.elements[ei];
                self.grid
                    .nodes
                    .iter()
                    .map(|p| e.eval(p[0], p[1]))
                    .collect()
            })
            .collect();
        for (row, &ei) in indices.iter().enumerate() {
            self.cache_index[ei] = Some(row);
        }
        self.cache = rows;
    }

    pub fn volume(&self) -> f64 {
        crate::quadrature::volume()
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn pluri_dim(&self) -> usize {
        self.table.pluri_len()
    }

    /// Nodal values of one basis element (cached or computed).
    fn element_values(&self, ei: usize) -> Vec<f64> {
        if let Some(row) = self.cache_index[ei] {
            return self.cache[row].clone();
        }
        let e = &self.table.elements[ei];
        self.grid.nodes.iter().map(|p| e.eval(p[0], p[1])).collect()
    }

    /// Synthesis over an arbitrary list of element indices.
    fn synthesize_indices(&self, indices: &[usize], coeffs: &[f64]) -> GridField {
        assert_eq!(indices.len(), coeffs.len());
        let nodes = &self.grid.nodes;
        let jp = self.table.j_max as usize + 1;
        let out: Vec<f64> = nodes
            .par_iter()
            .with_min_len(256)
            .map(|p| {
                let (z1p, z2p) = power_tables(p, jp);
                let mut acc = 0.0;
                for (&ei, &c) in indices.iter().zip(coeffs.iter()) {
                    if c != 0.0 {
                        acc += c * self.table.elements[ei].eval_pow(&z1p, &z2p);
                    }
                }
                acc
            })
            .collect();
        GridField(out)
    }

    /// Analysis (weighted inner products) over a list of element indices.
    fn analyze_indices(&self, indices: &[usize], g: &GridField) -> Vec<f64> {
        assert_eq!(g.0.len(), self.grid.len());
        let wg: Vec<f64> = g
            .0
            .iter()
            .zip(self.grid.weights.iter())
            .map(|(v, w)| v * w)
            .collect();
        // Fixed-size node chunks; per-chunk partials combined in chunk order,
        // so the reduction is deterministic under any thread count.
        const CHUNK: usize = 8192;
        let nodes = &self.grid.nodes;
        let nchunks = nodes.len().div_ceil(CHUNK);
        let jp = self.table.j_max as usize + 1;
        let partials: Vec<Vec<f64>> = (0..nchunks)
            .into_par_iter()
            .map(|ci| {
                let lo = ci * CHUNK;
                let hi = (lo + CHUNK).min(nodes.len());
                let mut acc = vec![0.0; indices.len()];
                for ni in lo..hi {
                    let p = &nodes[ni];
                    let w = wg[ni];
                    if w == 0.0 {
                        continue;
                    }
                    let (z1p, z2p) = power_tables(p, jp);
                    for (slot, &ei) in indices.iter().enumerate() {
                        acc[slot] += w * self.table.elements[ei].eval_pow(&z1p, &z2p);
                    }
                }
                acc
            })
            .collect();
        let mut out = vec![0.0; indices.len()];
        for slot in 0..indices.len() {
            let col: Vec<f64> = partials.iter().map(|p| p[slot]).collect();
            out[slot] = pairwise_sum(&col);
        }
        out
    }

    pub fn synthesize(&self, c: &SpectralField) -> GridField {
        assert_eq!(c.len(), self.dim(), "coefficient/table dimension mismatch");
        if self.cache.len() == self.dim() {
            let out: Vec<f64> = (0..self.grid.len())
                .into_par_iter()
                .with_min_len(1024)
                .map(|ni| {
                    let mut acc = 0.0;
                    for (ei, &cv) in c.0.iter().enumerate() {
                        if cv != 0.0 {
                            acc += cv * self.cache[self.cache_index[ei].unwrap()][ni];
                        }
                    }
                    acc
                })
                .collect();
            return GridField(out);
        }
        let indices: Vec<usize> = (0..self.dim()).collect();
        self.synthesize_indices(&indices, &c.0)
    }

    pub fn analyze(&self, g: &GridField) -> SpectralField {
        if self.cache.len() == self.dim() {
            let wg: Vec<f64> = g
                .0
                .iter()
                .zip(self.grid.weights.iter())
                .map(|(v, w)| v * w)
                .collect();
            let out: Vec<f64> = (0..self.dim())
                .into_par_iter()
                .map(|ei| {
                    let row = &self.cache[self.cache_index[ei].unwrap()];
                    let prods: Vec<f64> = row.iter().zip(&wg).map(|(a, b)| a * b).collect();
                    pairwise_sum(&prods)
                })
                .collect();
            return SpectralField(out);
        }
        let indices: Vec<usize> = (0..self.dim()).collect();
        SpectralField(self.analyze_indices(&indices, g))
    }

    pub fn synthesize_pluri(&self, c: &PluriField) -> GridField {
        assert_eq!(c.len(), self.pluri_dim(), "pluri dimension mismatch");
        if !self.cache.is_empty()
            && self
                .table
                .pluri_indices
                .iter()
                .all(|&ei| self.cache_index[ei].is_some())
        {
            let rows: Vec<&Vec<f64>> = self
                .table
                .pluri_indices
                .iter()
                .map(|&ei| &self.cache[self.cache_index[ei].unwrap()])
                .collect();
            let out: Vec<f64> = (0..self.grid.len())
                .into_par_iter()
                .with_min_len(1024)
                .map(|ni| {
                    let mut acc = 0.0;
                    for (slot, row) in rows.iter().enumerate() {
                        let cv = c.0[slot];
                        if cv != 0.0 {
                            acc += cv * row[ni];
                        }
                    }
                    acc
                })
                .collect();
            return GridField(out);
        }
        self.synthesize_indices(&self.table.pluri_indices, &c.0)
    }

    /// Orthogonal projection onto pluriharmonics composed with analysis: the
    /// coefficients of Γ(g) in the pluriharmonic sub-basis.
    pub fn analyze_pluri(&self, g: &GridField) -> PluriField {
        if !self.cache.is_empty()
            && self
                .table
                .pluri_indices
                .iter()
                .all(|&ei| self.cache_index[ei].is_some())
        {
            let wg: Vec<f64> = g
                .0
                .iter()
                .zip(self.grid.weights.iter())
                .map(|(v, w)| v * w)
                .collect();
            let out: Vec<f64> = self
                .table
                .pluri_indices
                .par_iter()
                .map(|&ei| {
                    let row = &self.cache[self.cache_index[ei].unwrap()];
                    let prods: Vec<f64> = row.iter().zip(&wg).map(|(a, b)| a * b).collect();
                    pairwise_sum(&prods)
                })
                .collect();
            return PluriField(out);
        }
        PluriField(self.analyze_indices(&self.table.pluri_indices, g))
    }

    /// Grid values of a pointwise function of the node.
    pub fn grid_fn(&self, f: impl Fn(&[Complex<f64>; 2]) -> f64 + Sync) -> GridField {
        GridField(self.grid.nodes.par_iter().map(|p| f(p)).collect())
    }

    pub fn integrate(&self, g: &GridField) -> f64 {
        self.grid.integrate(&g.0)
    }

    pub fn mean(&self, g: &GridField) -> f64 {
        self.integrate(g) / self.volume()
    }

    pub fn inner_grid(&self, a: &GridField, b: &GridField) -> f64 {
        self.grid.inner(&a.0, &b.0)
    }

    /// Point evaluation of a pluriharmonic field (no grid involved).
    pub fn eval_pluri_at(&self, c: &PluriField, p: &[Complex<f64>; 2]) -> f64 {
        let jp = self.table.j_max as usize + 1;
        let (z1p, z2p) = power_tables(p, jp);
        let mut acc = 0.0;
        for (slot, &ei) in self.table.pluri_indices.iter().enumerate() {
            if c.0[slot] != 0.0 {
                acc += c.0[slot] * self.table.elements[ei].eval_pow(&z1p, &z2p);
            }
        }
        acc
    }

    /// Embeds pluriharmonic coefficients into a full spectral vector.
    pub fn embed_pluri(&self, c: &PluriField) -> SpectralField {
        let mut out = SpectralField::zeros(self.dim());
        for (slot, &ei) in self.table.pluri_indices.iter().enumerate() {
            out.0[ei] = c.0[slot];
        }
        out
    }

    /// Extracts the pluriharmonic coefficients of a full spectral vector.
    pub fn extract_pluri(&self, c: &SpectralField) -> PluriField {
        PluriField(
            self.table
                .pluri_indices
                .iter()
                .map(|&ei| c.0[ei])
                .collect(),
        )
    }

    /// Mean of a pluriharmonic field: only the constant element contributes.
    pub fn pluri_mean(&self, c: &PluriField) -> f64 {
        c.0[0] / self.volume().sqrt()
    }

    /// Integral of a pluriharmonic field.
    pub fn pluri_integral(&self, c: &PluriField) -> f64 {
        c.0[0] * self.volume().sqrt()
    }

    /// Constant shift u ↦ u + a as a coefficient operation.
    pub fn pluri_shift(&self, c: &PluriField, a: f64) -> PluriField {
        let mut out = c.clone();
        out.0[0] += a * self.volume().sqrt();
        out
    }

    pub fn check_dims(&self, g: &GridField) -> Result<()> {
        if g.0.len() != self.grid.len() {
            return Err(Error::Dimension(format!(
                "grid field has {} values, grid has {} nodes",
                g.0.len(),
                self.grid.len()
            )));
        }
        Ok(())
    }
}

/// Power tables ζ₁^a, ζ₂^b for a = 0..jp at a point.
#[inline]
pub fn power_tables(p: &[Complex<f64>; 2], jp: usize) -> (Vec<Complex<f64>>, Vec<Complex<f64>>) {
    let mut z1p = Vec::with_capacity(jp + 1);
    let mut z2p = Vec::with_capacity(jp + 1);
    let mut a = Complex::new(1.0, 0.0);
    let mut b = Complex::new(1.0, 0.0);
    for _ in 0..=jp {
        z1p.push(a);
        z2p.push(b);
        a *= p[0];
        b *= p[1];
    }
    (z1p, z2p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisTable;
    use crate::quadrature::QuadratureGrid;

    fn ws(j: u16) -> Workspace {
        let table = BasisTable::build_full(j).unwrap();
        let grid = QuadratureGrid::build(2 * j as usize + 4).unwrap();
        Workspace::new(table, grid)
    }

    #[test]
    fn round_trip_on_basis_vectors() {
        let ws = ws(3);
        for i in [0usize, 1, 7, 15, ws.dim() - 1] {
            let mut c = SpectralField::zeros(ws.dim());
            c.0[i] = 1.0;
            let g = ws.synthesize(&c);
            let back = ws.analyze(&g);
            for (k, (&a, &b)) in c.0.iter().zip(&back.0).enumerate() {
                assert!(
                    (a - b).abs() < 1e-10,
                    "coefficient {k}: {a} vs {b} (unit vector {i})"
                );
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        let ws = ws(4);
        let n = ws.dim();
        let mut worst: f64 = 0.0;
        let rows: Vec<Vec<f64>> = (0..n).map(|i| ws.element_values(i)).collect();
        for i in 0..n {
            for j in i..n {
                let g = ws.grid.inner(&rows[i], &rows[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - expect).abs());
            }
        }
        assert!(worst < 1e-12, "worst Gram deviation {worst}");
    }

    #[test]
    fn adjointness_of_transforms() {
        let ws = ws(3);
        let mut rng = crate::util::rng(7);
        use rand::Rng;
        let c = SpectralField((0..ws.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let g = GridField((0..ws.grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let lhs = ws.inner_grid(&ws.synthesize(&c), &g);
        let rhs = c.dot(&ws.analyze(&g));
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn orthogonality_re_im() {
        // ⟨Re ζ₁, Im ζ₁⟩ = 0.
        let ws = ws(2);
        let re = ws.grid_fn(|p| p[0].re);
        let im = ws.grid_fn(|p| p[0].im);
        assert!(ws.inner_grid(&re, &im).abs() < 1e-12);
    }

    #[test]
    fn analyze_reproduces_exact_expansion() {
        // A hand-built degree-2 polynomial: 3·Re(ζ₁²) − 1 + ½·|ζ₂|².
        let ws = ws(3);
        let g = ws.grid_fn(|p| 3.0 * (p[0] * p[0]).re - 1.0 + 0.5 * p[1].norm_sqr());
        let c = ws.analyze(&g);
        let back = ws.synthesize(&c);
        let diff: f64 = g
            .0
            .iter()
            .zip(&back.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "band-limited field not reproduced: {diff}");
    }

    #[test]
    fn pluri_roundtrip_and_mean() {
        let ws = ws(3);
        let mut c = PluriField::zeros(ws.pluri_dim());
        c.0[0] = 2.0;
        c.0[3] = -0.7;
        let g = ws.synthesize_pluri(&c);
        let back = ws.analyze_pluri(&g);
        for (a, b) in c.0.iter().zip(&back.0) {
            assert!((a - b).abs() < 1e-11);
        }
        assert!((ws.pluri_mean(&c) - 2.0 / ws.volume().sqrt()).abs() < 1e-13);
        let shifted = ws.pluri_shift(&c, 1.5);
        assert!((ws.pluri_mean(&shifted) - ws.pluri_mean(&c) - 1.5).abs() < 1e-12);
    }
}
