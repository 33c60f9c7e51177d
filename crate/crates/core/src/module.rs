//! Finitely presented Z/n-modules.
//!
//! Every module keeps the presentation it was built from (generators and a
//! Howell-form relation matrix) and, alongside it, an isomorphism onto a
//! direct sum of cyclic modules `Z/q_1 ⊕ … ⊕ Z/q_k` with every `q_i` a
//! prime power dividing `n`. All arithmetic happens in these internal
//! coordinates; the presentation is only used at the boundary (user
//! matrices, JSON).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{diagonalize, howell_rows, kernel_basis, reduce_against, MatrixZn};
use crate::ring::{prime_of, prime_power_parts, RingSpec};

#[derive(Debug)]
struct Inner {
    ring: RingSpec,
    divisors: Vec<u64>,
    generators: usize,
    relations: MatrixZn,
    relation_pivots: Vec<usize>,
    /// generators × k: user generator `e_j` in internal coordinates.
    to_internal: MatrixZn,
    /// k × generators: internal basis vector `i` in user coordinates.
    from_internal: MatrixZn,
}

/// A finitely presented module over Z/n.
#[derive(Clone, Debug)]
pub struct FPModule(Arc<Inner>);

pub(crate) struct DiagonalData {
    pub divisors: Vec<u64>,
    pub to_internal: MatrixZn,
    pub from_internal: MatrixZn,
}

/// Diagonalizes `R^g / rowspan(rel)` into prime-power cyclic coordinates.
pub(crate) fn diagonal_data(ring: &RingSpec, g: usize, rel: &MatrixZn) -> DiagonalData {
    let n = ring.modulus();
    let d = diagonalize(ring, rel);
    // (prime, q, column of V, row of V^{-1} scaled by the CRT idempotent)
    let mut coords: Vec<(u64, u64, Vec<u64>, Vec<u64>)> = Vec::new();
    for (i, &di) in d.diagonal.iter().enumerate() {
        if di == 1 {
            continue;
        }
        for q in prime_power_parts(di) {
            let cofactor = di / q;
            let u = if cofactor == 1 {
                1
            } else {
                let inv = RingSpec::new(q.max(2))
                    .ok()
                    .and_then(|rq| rq.inverse(cofactor % q))
                    .expect("coprime cofactor");
                cofactor * inv % di
            };
            let col: Vec<u64> = (0..g).map(|r| d.v.get(r, i) % q).collect();
            let row: Vec<u64> = d.v_inv.row(i).iter().map(|&x| x * u % n).collect();
            coords.push((prime_of(q), q, col, row));
        }
    }
    coords.sort_by_key(|c| (c.0, c.1));
    let k = coords.len();
    let mut to_internal = MatrixZn::zeros(g, k);
    let mut from_internal = MatrixZn::zeros(k, g);
    let mut divisors = Vec::with_capacity(k);
    for (c, (_, q, col, row)) in coords.into_iter().enumerate() {
        divisors.push(q);
        for r in 0..g {
            to_internal.set(r, c, col[r]);
            from_internal.set(c, r, row[r]);
        }
    }
    DiagonalData {
        divisors,
        to_internal,
        from_internal,
    }
}

impl FPModule {
    /// The module `R^g / rowspan(relations)`.
    pub fn from_presentation(ring: &RingSpec, generators: usize, relations: &MatrixZn) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::Dimension(format!(
                "relation matrix has {} columns but the module has {generators} generators",
                relations.cols()
            )));
        }
        let n = ring.modulus();
        let mut relations = relations.clone();
        for i in 0..relations.rows() {
            for j in 0..relations.cols() {
                relations.set(i, j, relations.get(i, j) % n);
            }
        }
        let (howell, pivots) = howell_rows(ring, &relations);
        let dd = diagonal_data(ring, generators, &howell);
        Ok(FPModule(Arc::new(Inner {
            ring: ring.clone(),
            divisors: dd.divisors,
            generators,
            relations: howell,
            relation_pivots: pivots,
            to_internal: dd.to_internal,
            from_internal: dd.from_internal,
        })))
    }

    /// `Z/d_1 ⊕ … ⊕ Z/d_k` presented diagonally. Every `d_i` must be a prime
    /// power dividing `n`.
    pub(crate) fn diagonal(ring: &RingSpec, divisors: Vec<u64>) -> Self {
        let n = ring.modulus();
        let k = divisors.len();
        debug_assert!(divisors.iter().all(|&d| d > 1 && n % d == 0 && prime_power_parts(d).len() == 1));
        let rel_rows: Vec<Vec<u64>> = divisors
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != n)
            .map(|(i, &d)| {
                let mut r = vec![0; k];
                r[i] = d;
                r
            })
            .collect();
        let relations = MatrixZn::from_vecs(k, rel_rows);
        let pivots = (0..k).filter(|&i| divisors[i] != n).collect();
        FPModule(Arc::new(Inner {
            ring: ring.clone(),
            divisors,
            generators: k,
            relations,
            relation_pivots: pivots,
            to_internal: MatrixZn::identity(k),
            from_internal: MatrixZn::identity(k),
        }))
    }

    pub fn zero(ring: &RingSpec) -> Self {
        Self::diagonal(ring, Vec::new())
    }

    /// The free module `R^rank`.
    pub fn free(ring: &RingSpec, rank: usize) -> Self {
        Self::from_presentation(ring, rank, &MatrixZn::zeros(0, rank)).expect("free module")
    }

    /// The cyclic module `R / dR`.
    pub fn cyclic(ring: &RingSpec, d: u64) -> Self {
        let rel = MatrixZn::from_vecs(1, vec![vec![d % ring.modulus()]]);
        Self::from_presentation(ring, 1, &rel).expect("cyclic module")
    }

    /// `R/d_1 ⊕ … ⊕ R/d_k` for arbitrary `d_i`.
    pub fn from_cyclic_orders(ring: &RingSpec, orders: &[u64]) -> Self {
        let k = orders.len();
        let rows = orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![0; k];
                r[i] = d % ring.modulus();
                r
            })
            .collect();
        Self::from_presentation(ring, k, &MatrixZn::from_vecs(k, rows)).expect("diagonal presentation")
    }

    pub fn ring(&self) -> &RingSpec {
        &self.0.ring
    }

    /// Orders of the internal cyclic coordinates.
    pub fn divisors(&self) -> &[u64] {
        &self.0.divisors
    }

    /// Number of internal coordinates.
    pub fn dim(&self) -> usize {
        self.0.divisors.len()
    }

    /// Number of generators of the presentation.
    pub fn generators(&self) -> usize {
        self.0.generators
    }

    /// Relation matrix of the presentation, in Howell form.
    pub fn relations(&self) -> &MatrixZn {
        &self.0.relations
    }

    pub(crate) fn to_internal(&self) -> &MatrixZn {
        &self.0.to_internal
    }

    pub(crate) fn from_internal(&self) -> &MatrixZn {
        &self.0.from_internal
    }

    pub fn order(&self) -> u64 {
        self.0.divisors.iter().product()
    }

    pub fn is_zero(&self) -> bool {
        self.0.divisors.is_empty()
    }

    /// Elementary divisors (prime powers), sorted by prime then exponent.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut d = self.0.divisors.clone();
        d.sort_by_key(|&q| (prime_of(q), q));
        d
    }

    /// Invariant factors `d_1 | d_2 | …`, all greater than one.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &q in &self.0.divisors {
            by_prime.entry(prime_of(q)).or_default().push(q);
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (t, &q) in powers.iter().enumerate() {
                out[t] *= q;
            }
        }
        out.reverse();
        out
    }

    /// Isomorphism test by elementary divisors.
    pub fn is_isomorphic(&self, other: &FPModule) -> bool {
        self.ring() == other.ring() && self.elementary_divisors() == other.elementary_divisors()
    }

    /// True when both modules use the same internal coordinate system.
    pub fn same_coordinates(&self, other: &FPModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.ring() == other.ring() && self.divisors() == other.divisors())
    }

    /// Canonical representative of an element given in internal coordinates.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        v.iter().zip(self.divisors()).map(|(&x, &d)| x % d).collect()
    }

    /// Converts user (presentation) coordinates to internal coordinates.
    pub fn element_from_presentation(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.generators() {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, module has {} generators",
                v.len(),
                self.generators()
            )));
        }
        let row = MatrixZn::from_vecs(v.len(), vec![v.iter().map(|&x| x % self.ring().modulus()).collect()]);
        Ok(self.reduce(row.mul(self.ring(), self.to_internal()).row(0)))
    }

    /// Converts internal coordinates to the canonical representative in
    /// presentation coordinates.
    pub fn element_to_presentation(&self, v: &[u64]) -> Vec<u64> {
        let row = MatrixZn::from_vecs(v.len(), vec![v.to_vec()]);
        let user = row.mul(self.ring(), self.from_internal());
        reduce_against(self.ring(), self.relations(), &self.0.relation_pivots, user.row(0)).0
    }

    /// All elements (internal coordinates). Exponential; oracle use only.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in self.divisors() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Column scaling `n / d_i` turning "coordinate i vanishes in Z/d_i" into
    /// "scaled coordinate vanishes in Z/n".
    pub(crate) fn annihilator_scales(&self) -> Vec<u64> {
        let n = self.ring().modulus();
        self.divisors().iter().map(|&d| n / d).collect()
    }

    /// Submodule generated by the rows of `gens` (internal coordinates of
    /// `self`), returned as a new module together with its coordinates in
    /// `self` (one row per generator of the new module).
    pub(crate) fn submodule(&self, gens: &MatrixZn) -> (FPModule, MatrixZn) {
        let ring = self.ring();
        let scaled = scale_cols(ring, gens, &self.annihilator_scales());
        let rel = kernel_basis(ring, &scaled);
        let dd = diagonal_data(ring, gens.rows(), &rel);
        let sub = FPModule::diagonal(ring, dd.divisors);
        let incl = reduce_cols(&dd.from_internal.mul(ring, gens), self.divisors());
        (sub, incl)
    }

    /// Quotient by the submodule generated by the rows of `gens`, with the
    /// projection images (one row per internal coordinate of `self`).
    pub(crate) fn quotient(&self, gens: &MatrixZn) -> (FPModule, MatrixZn) {
        let ring = self.ring();
        let k = self.dim();
        let n = ring.modulus();
        let own: Vec<Vec<u64>> = self
            .divisors()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != n)
            .map(|(i, &d)| {
                let mut r = vec![0; k];
                r[i] = d;
                r
            })
            .collect();
        let rel = gens.vstack(&MatrixZn::from_vecs(k, own));
        let dd = diagonal_data(ring, k, &rel);
        let q = FPModule::diagonal(ring, dd.divisors);
        let proj = reduce_cols(&dd.to_internal, q.divisors());
        (q, proj)
    }
}

pub(crate) fn scale_cols(ring: &RingSpec, m: &MatrixZn, scales: &[u64]) -> MatrixZn {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, &s) in scales.iter().enumerate() {
            out.set(i, j, ring.mul(m.get(i, j), s));
        }
    }
    out
}

pub(crate) fn reduce_cols(m: &MatrixZn, moduli: &[u64]) -> MatrixZn {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, &d) in moduli.iter().enumerate() {
            out.set(i, j, m.get(i, j) % d);
        }
    }
    out
}

/// JSON form `{"ring": n, "generators": g, "relations": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub ring: u64,
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

impl FPModule {
    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            ring: self.ring().modulus(),
            generators: self.generators(),
            relations: self.relations().to_i64_rows(),
        }
    }

    pub fn from_json(json: &ModuleJson) -> Result<Self> {
        let ring = RingSpec::new(json.ring)?;
        let rel = MatrixZn::from_rows(&ring, json.generators, &json.relations)?;
        Self::from_presentation(&ring, json.generators, &rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::new(n).unwrap()
    }

    /// Counts cosets of the relation span by brute force.
    fn coset_count(ring: &RingSpec, g: usize, rel: &MatrixZn) -> u64 {
        let span = crate::matrix::enumerate_row_span(ring, rel);
        ring.modulus().pow(g as u32) / span.len() as u64
    }

    #[test]
    fn cyclic_order_two_over_z4() {
        let r = z(4);
        let rel = MatrixZn::from_rows(&r, 1, &[vec![2]]).unwrap();
        let m = FPModule::from_presentation(&r, 1, &rel).unwrap();
        assert_eq!(coset_count(&r, 1, &rel), 2);
        assert_eq!(m.order(), 2);
        assert_eq!(m.elementary_divisors(), vec![2]);
    }

    #[test]
    fn zero_generators_is_zero() {
        let m = FPModule::from_presentation(&z(4), 0, &MatrixZn::zeros(0, 0)).unwrap();
        assert!(m.is_zero());
        assert_eq!(m.order(), 1);
    }

    #[test]
    fn two_by_two_order_four() {
        let r = z(4);
        let rel = MatrixZn::from_rows(&r, 2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let m = FPModule::from_presentation(&r, 2, &rel).unwrap();
        assert_eq!(coset_count(&r, 2, &rel), 4);
        assert_eq!(m.elementary_divisors(), vec![2, 2]);
        assert_eq!(m.order(), 4);
    }

    #[test]
    fn column_mismatch_rejected() {
        let r = z(4);
        let rel = MatrixZn::from_rows(&r, 2, &[vec![2, 0]]).unwrap();
        assert!(FPModule::from_presentation(&r, 1, &rel).is_err());
    }

    #[test]
    fn free_over_twelve_splits_by_crt() {
        let r = z(12);
        let f = FPModule::free(&r, 1);
        assert_eq!(f.elementary_divisors(), vec![4, 3]);
        assert_eq!(f.invariant_factors(), vec![12]);
        let m = FPModule::from_cyclic_orders(&r, &[6, 2]);
        assert_eq!(m.elementary_divisors(), vec![2, 2, 3]);
        assert_eq!(m.invariant_factors(), vec![2, 6]);
    }

    #[test]
    fn coordinates_round_trip() {
        let r = z(12);
        let rel = MatrixZn::from_rows(&r, 3, &[vec![2, 4, 6], vec![0, 3, 3]]).unwrap();
        let m = FPModule::from_presentation(&r, 3, &rel).unwrap();
        assert_eq!(m.order(), coset_count(&r, 3, &rel));
        for e in m.elements() {
            let user = m.element_to_presentation(&e);
            assert_eq!(m.element_from_presentation(&user).unwrap(), e);
        }
    }

    #[test]
    fn orders_match_coset_enumeration() {
        for n in [4u64, 6, 8, 9] {
            let r = z(n);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let rel = MatrixZn::from_rows(&r, 2, &[vec![a as i64, b as i64], vec![0, c as i64]]).unwrap();
                        let m = FPModule::from_presentation(&r, 2, &rel).unwrap();
                        assert_eq!(m.order(), coset_count(&r, 2, &rel), "n={n} rel={rel:?}");
                    }
                }
            }
        }
    }
}
