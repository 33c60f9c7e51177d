//! Morphisms of finitely presented modules and the finite limits and
//! colimits built from them.

use crate::error::{Error, Result};
use crate::matrix::{kernel_basis, solve_linear, MatrixZn};
use crate::module::{reduce_cols, scale_cols, FPModule};
use crate::ring::RingSpec;

/// A module homomorphism stored by the images of the internal basis of the
/// source (row `j` = image of basis vector `j`, in target coordinates).
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    source: FPModule,
    target: FPModule,
    images: MatrixZn,
}

fn check_ring(a: &FPModule, b: &FPModule) -> Result<()> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(a.ring().modulus(), b.ring().modulus()));
    }
    Ok(())
}

impl ModuleMorphism {
    /// Builds a morphism from internal images, checking well-definedness.
    pub(crate) fn from_images(source: &FPModule, target: &FPModule, images: MatrixZn) -> Result<Self> {
        check_ring(source, target)?;
        if images.rows() != source.dim() || images.cols() != target.dim() {
            return Err(Error::Dimension(format!(
                "images are {}x{}, expected {}x{}",
                images.rows(),
                images.cols(),
                source.dim(),
                target.dim()
            )));
        }
        let images = reduce_cols(&images, target.divisors());
        for (j, &ds) in source.divisors().iter().enumerate() {
            for (i, &dt) in target.divisors().iter().enumerate() {
                if (ds as u128 * images.get(j, i) as u128) % dt as u128 != 0 {
                    return Err(Error::NotWellDefined { relation: j });
                }
            }
        }
        Ok(ModuleMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub(crate) fn from_images_unchecked(source: &FPModule, target: &FPModule, images: MatrixZn) -> Self {
        let images = reduce_cols(&images, target.divisors());
        ModuleMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        }
    }

    /// Builds a morphism from a matrix in presentation coordinates: entry
    /// `[i][j]` is the coefficient of target generator `i` in the image of
    /// source generator `j`.
    pub fn from_matrix(source: &FPModule, target: &FPModule, matrix: &MatrixZn) -> Result<Self> {
        check_ring(source, target)?;
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, expected {}x{} (target generators x source generators)",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let ring = source.ring();
        let per_generator = matrix.transpose().mul(ring, target.to_internal());
        Self::from_generator_images(source, target, &per_generator)
    }

    /// Builds a morphism from the images of the presentation generators of
    /// `source`, given in internal coordinates of `target`.
    pub fn from_generator_images(source: &FPModule, target: &FPModule, images: &MatrixZn) -> Result<Self> {
        check_ring(source, target)?;
        if images.rows() != source.generators() || images.cols() != target.dim() {
            return Err(Error::Dimension("generator image matrix has the wrong shape".into()));
        }
        let ring = source.ring();
        let on_relations = reduce_cols(&source.relations().mul(ring, images), target.divisors());
        for i in 0..on_relations.rows() {
            if on_relations.row(i).iter().any(|&x| x != 0) {
                return Err(Error::NotWellDefined { relation: i });
            }
        }
        let internal = source.from_internal().mul(ring, images);
        Self::from_images(source, target, internal)
    }

    /// Matrix in presentation coordinates (target generators × source generators).
    pub fn matrix(&self) -> MatrixZn {
        let ring = self.ring();
        let mut rows = Vec::with_capacity(self.source.generators());
        for j in 0..self.source.generators() {
            let mut img = vec![0u64; self.target.dim()];
            for (b, &c) in self.source.to_internal().row(j).iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (i, x) in img.iter_mut().enumerate() {
                    *x = ring.add(*x, ring.mul(c, self.images.get(b, i)));
                }
            }
            rows.push(self.target.element_to_presentation(&self.target.reduce(&img)));
        }
        MatrixZn::from_vecs(self.target.generators(), rows).transpose()
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn ring(&self) -> &RingSpec {
        self.source.ring()
    }

    /// Internal images, one row per source coordinate.
    pub fn images(&self) -> &MatrixZn {
        &self.images
    }

    pub fn identity(m: &FPModule) -> Self {
        ModuleMorphism::from_images_unchecked(m, m, MatrixZn::identity(m.dim()))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        ModuleMorphism::from_images_unchecked(source, target, MatrixZn::zeros(source.dim(), target.dim()))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMorphism) -> Result<Self> {
        if !first.target.same_coordinates(&self.source) {
            return Err(Error::Dimension("composition of non-composable morphisms".into()));
        }
        let images = first.images.mul(self.ring(), &self.images);
        Ok(Self::from_images_unchecked(&first.source, &self.target, images))
    }

    fn check_parallel(&self, other: &ModuleMorphism) -> Result<()> {
        if !self.source.same_coordinates(&other.source) || !self.target.same_coordinates(&other.target) {
            return Err(Error::Dimension("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ModuleMorphism) -> Result<Self> {
        self.check_parallel(other)?;
        let ring = self.ring();
        let mut images = self.images.clone();
        for i in 0..images.rows() {
            for j in 0..images.cols() {
                images.set(i, j, ring.add(images.get(i, j), other.images.get(i, j)));
            }
        }
        Ok(Self::from_images_unchecked(&self.source, &self.target, images))
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ring().modulus() - 1)
    }

    pub fn sub(&self, other: &ModuleMorphism) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let ring = self.ring();
        let mut images = self.images.clone();
        for i in 0..images.rows() {
            for j in 0..images.cols() {
                images.set(i, j, ring.mul(images.get(i, j), c));
            }
        }
        Self::from_images_unchecked(&self.source, &self.target, images)
    }

    /// Image of an element given in internal coordinates.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let row = MatrixZn::from_vecs(x.len(), vec![x.to_vec()]);
        self.target.reduce(row.mul(self.ring(), &self.images).row(0))
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_zero()
    }

    /// Equality of parallel morphisms (as maps, independent of presentation).
    pub fn equals(&self, other: &ModuleMorphism) -> bool {
        self.source.same_coordinates(&other.source)
            && self.target.same_coordinates(&other.target)
            && self.images == other.images
    }

    fn scaled_images(&self) -> MatrixZn {
        scale_cols(self.ring(), &self.images, &self.target.annihilator_scales())
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> (FPModule, ModuleMorphism) {
        let gens = kernel_basis(self.ring(), &self.scaled_images());
        let (k, incl) = self.source.submodule(&gens);
        let incl = ModuleMorphism::from_images_unchecked(&k, &self.source, incl);
        (k, incl)
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> (FPModule, ModuleMorphism) {
        let (im, incl) = self.target.submodule(&self.images);
        let incl = ModuleMorphism::from_images_unchecked(&im, &self.target, incl);
        (im, incl)
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> (FPModule, ModuleMorphism) {
        let (q, proj) = self.target.quotient(&self.images);
        let proj = ModuleMorphism::from_images_unchecked(&self.target, &q, proj);
        (q, proj)
    }

    pub fn image_order(&self) -> u64 {
        self.image().0.order()
    }

    pub fn is_monic(&self) -> bool {
        self.image_order() == self.source.order()
    }

    pub fn is_epic(&self) -> bool {
        self.image_order() == self.target.order()
    }

    pub fn is_iso(&self) -> bool {
        self.is_monic() && self.source.order() == self.target.order()
    }

    /// Some `x` with `self(x) = y`, if `y` lies in the image.
    pub fn preimage(&self, y: &[u64]) -> Option<Vec<u64>> {
        let ring = self.ring();
        let b: Vec<u64> = y
            .iter()
            .zip(self.target.annihilator_scales())
            .map(|(&v, s)| ring.mul(v, s))
            .collect();
        let sol = solve_linear(ring, &self.scaled_images(), &b).ok()??;
        Some(self.source.reduce(&sol.particular))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMorphism> {
        if !self.is_iso() {
            return None;
        }
        let rows: Option<Vec<Vec<u64>>> = (0..self.target.dim())
            .map(|i| {
                let mut e = vec![0u64; self.target.dim()];
                e[i] = 1;
                self.preimage(&self.target.reduce(&e))
            })
            .collect();
        let images = MatrixZn::from_vecs(self.source.dim(), rows?);
        Some(Self::from_images_unchecked(&self.target, &self.source, images))
    }
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FPModule,
    pub injections: Vec<ModuleMorphism>,
    pub projections: Vec<ModuleMorphism>,
}

impl DirectSum {
    /// Morphism out of the sum given by its restrictions to the summands.
    pub fn copair(&self, maps: &[ModuleMorphism]) -> Result<ModuleMorphism> {
        let target = maps.first().map(|m| m.target().clone());
        let Some(target) = target else {
            return Ok(ModuleMorphism::zero(&self.module, &self.module));
        };
        let mut rows = Vec::new();
        for m in maps {
            rows.extend(m.images().row_vecs());
        }
        ModuleMorphism::from_images(&self.module, &target, MatrixZn::from_vecs(target.dim(), rows))
    }

    /// Morphism into the sum given by its components.
    pub fn pair(&self, maps: &[ModuleMorphism]) -> Result<ModuleMorphism> {
        let source = maps[0].source().clone();
        let mut images = MatrixZn::zeros(source.dim(), 0);
        for m in maps {
            images = images.hstack(m.images());
        }
        ModuleMorphism::from_images(&source, &self.module, images)
    }
}

/// Direct sum of a list of modules over one ring.
pub fn direct_sum(ring: &RingSpec, summands: &[FPModule]) -> Result<DirectSum> {
    for m in summands {
        if m.ring() != ring {
            return Err(Error::RingMismatch(ring.modulus(), m.ring().modulus()));
        }
    }
    let divisors: Vec<u64> = summands.iter().flat_map(|m| m.divisors().to_vec()).collect();
    let total = divisors.len();
    let module = FPModule::diagonal(ring, divisors);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for m in summands {
        let k = m.dim();
        let mut inj = MatrixZn::zeros(k, total);
        let mut proj = MatrixZn::zeros(total, k);
        for i in 0..k {
            inj.set(i, offset + i, 1);
            proj.set(offset + i, i, 1);
        }
        injections.push(ModuleMorphism::from_images_unchecked(m, &module, inj));
        projections.push(ModuleMorphism::from_images_unchecked(&module, m, proj));
        offset += k;
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// Direct sum of two modules.
pub fn direct_sum2(m: &FPModule, n: &FPModule) -> Result<DirectSum> {
    check_ring(m, n)?;
    direct_sum(m.ring(), &[m.clone(), n.clone()])
}

/// `f ⊕ g : A ⊕ B → C ⊕ D` on given sums.
pub fn morphism_sum(src: &DirectSum, tgt: &DirectSum, parts: &[ModuleMorphism]) -> ModuleMorphism {
    let mut images = MatrixZn::zeros(0, tgt.module.dim());
    for (idx, f) in parts.iter().enumerate() {
        debug_assert!(f.source().same_coordinates(src.projections[idx].target()));
        let block = tgt.injections[idx].compose(f).expect("summand morphism");
        images = images.vstack(block.images());
    }
    ModuleMorphism::from_images_unchecked(&src.module, &tgt.module, images)
}

/// A finite limit cone `P → A`, `P → B` over a cospan.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub module: FPModule,
    pub to_first: ModuleMorphism,
    pub to_second: ModuleMorphism,
}

/// Pullback of `f: A → C` and `g: B → C`.
pub fn pullback(f: &ModuleMorphism, g: &ModuleMorphism) -> Result<Pullback> {
    if !f.target().same_coordinates(g.target()) {
        return Err(Error::Dimension("pullback of maps with different targets".into()));
    }
    let sum = direct_sum2(f.source(), g.source())?;
    let diff = f
        .compose(&sum.projections[0])?
        .sub(&g.compose(&sum.projections[1])?)?;
    let (p, incl) = diff.kernel();
    Ok(Pullback {
        to_first: sum.projections[0].compose(&incl)?,
        to_second: sum.projections[1].compose(&incl)?,
        module: p,
    })
}

/// A finite colimit cocone `B → P`, `C → P` under a span.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: FPModule,
    pub from_first: ModuleMorphism,
    pub from_second: ModuleMorphism,
}

/// Pushout of `f: A → B` and `g: A → C`.
pub fn pushout(f: &ModuleMorphism, g: &ModuleMorphism) -> Result<Pushout> {
    if !f.source().same_coordinates(g.source()) {
        return Err(Error::Dimension("pushout of maps with different sources".into()));
    }
    let sum = direct_sum2(f.target(), g.target())?;
    let diff = sum.injections[0]
        .compose(f)?
        .sub(&sum.injections[1].compose(g)?)?;
    let (p, proj) = diff.cokernel();
    Ok(Pushout {
        from_first: proj.compose(&sum.injections[0])?,
        from_second: proj.compose(&sum.injections[1])?,
        module: p,
    })
}

/// `0 → A → B → C → 0`, verified exact.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub mono: ModuleMorphism,
    pub epi: ModuleMorphism,
}

impl ShortExactSequence {
    pub fn new(mono: ModuleMorphism, epi: ModuleMorphism) -> Result<Self> {
        if !mono.target().same_coordinates(epi.source()) {
            return Err(Error::NotShortExact("maps are not composable".into()));
        }
        if !mono.is_monic() {
            return Err(Error::NotShortExact("first map is not monic".into()));
        }
        if !epi.is_epic() {
            return Err(Error::NotShortExact("second map is not epic".into()));
        }
        if !epi.compose(&mono)?.is_zero() {
            return Err(Error::NotShortExact("composite is nonzero".into()));
        }
        // image(mono) ⊆ kernel(epi), equal because the orders agree
        if mono.source().order() * epi.target().order() != mono.target().order() {
            return Err(Error::NotShortExact("image of the first map is not the kernel of the second".into()));
        }
        Ok(ShortExactSequence { mono, epi })
    }

    pub fn left(&self) -> &FPModule {
        self.mono.source()
    }

    pub fn middle(&self) -> &FPModule {
        self.mono.target()
    }

    pub fn right(&self) -> &FPModule {
        self.epi.target()
    }

    /// `0 → K → B → B/K → 0` for the kernel of `f`.
    pub fn from_kernel(f: &ModuleMorphism) -> Result<Self> {
        let (_, incl) = f.kernel();
        let (_, proj) = incl.cokernel();
        Self::new(incl, proj)
    }

    /// The split sequence `0 → A → A ⊕ C → C → 0`.
    pub fn split(a: &FPModule, c: &FPModule) -> Result<Self> {
        let sum = direct_sum2(a, c)?;
        Self::new(sum.injections[0].clone(), sum.projections[1].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::new(n).unwrap()
    }

    fn mult(m: &FPModule, c: u64) -> ModuleMorphism {
        ModuleMorphism::identity(m).scale(c)
    }

    /// Elements `x` with `f(x) = 0`, by enumeration.
    fn brute_kernel(f: &ModuleMorphism) -> Vec<Vec<u64>> {
        f.source().elements().into_iter().filter(|x| f.apply(x).iter().all(|&v| v == 0)).collect()
    }

    #[test]
    fn kernel_of_times_two_on_z4() {
        let r = z(4);
        let ring_mod = FPModule::free(&r, 1);
        let f = mult(&ring_mod, 2);
        let (k, incl) = f.kernel();
        assert_eq!(k.order(), 2);
        let hits: Vec<Vec<u64>> = k.elements().iter().map(|x| incl.apply(x)).collect();
        let mut hits = hits;
        hits.sort();
        assert_eq!(hits, brute_kernel(&f));
        assert!(incl.is_monic());
    }

    #[test]
    fn kernel_and_cokernel_trivial_cases() {
        let r = z(4);
        let m = FPModule::free(&r, 1);
        assert!(ModuleMorphism::identity(&m).kernel().0.is_zero());
        assert_eq!(ModuleMorphism::zero(&m, &m).kernel().0.order(), 4);
        assert!(ModuleMorphism::identity(&m).cokernel().0.is_zero());
        assert_eq!(ModuleMorphism::zero(&m, &m).cokernel().0.order(), 4);
        assert_eq!(mult(&m, 2).cokernel().0.order(), 2);
    }

    #[test]
    fn direct_sums() {
        let r = z(4);
        let z2 = FPModule::cyclic(&r, 2);
        let zero = FPModule::zero(&r);
        assert!(direct_sum2(&z2, &zero).unwrap().module.is_isomorphic(&z2));
        assert_eq!(direct_sum2(&z2, &z2).unwrap().module.elementary_divisors(), vec![2, 2]);
        let rr = FPModule::free(&r, 1);
        let s = direct_sum2(&rr, &rr).unwrap();
        assert_eq!(s.module.invariant_factors(), vec![4, 4]);
        for (i, inj) in s.injections.iter().enumerate() {
            for (j, proj) in s.projections.iter().enumerate() {
                let c = proj.compose(inj).unwrap();
                if i == j {
                    assert!(c.equals(&ModuleMorphism::identity(inj.source())));
                } else {
                    assert!(c.is_zero());
                }
            }
        }
        assert!(direct_sum2(&rr, &FPModule::free(&z(8), 1)).is_err());
    }

    #[test]
    fn pullbacks_over_z4() {
        let r = z(4);
        let rr = FPModule::free(&r, 1);
        let z2 = FPModule::cyclic(&r, 2);
        let q = ModuleMorphism::from_matrix(&rr, &z2, &MatrixZn::identity(1)).unwrap();
        // along zero: kernel of the epi
        let zero_in = ModuleMorphism::zero(&FPModule::zero(&r), &z2);
        assert_eq!(pullback(&q, &zero_in).unwrap().module.order(), 2);
        // along identity
        let p = pullback(&ModuleMorphism::identity(&z2), &q).unwrap();
        assert!(p.module.is_isomorphic(&rr));
        // two copies of the quotient: pairs (x, y) with x = y mod 2
        let p = pullback(&q, &q).unwrap();
        let brute = (0..4u64).flat_map(|x| (0..4u64).map(move |y| (x, y))).filter(|(x, y)| x % 2 == y % 2).count();
        assert_eq!(p.module.order() as usize, brute);
        assert_eq!(brute, 8);
        assert_eq!(p.module.invariant_factors(), vec![2, 4]);
        assert!(q.compose(&p.to_first).unwrap().equals(&q.compose(&p.to_second).unwrap()));
    }

    #[test]
    fn pushouts_over_z4() {
        let r = z(4);
        let rr = FPModule::free(&r, 1);
        let z2 = FPModule::cyclic(&r, 2);
        let zero = FPModule::zero(&r);
        let p = pushout(&ModuleMorphism::zero(&zero, &z2), &ModuleMorphism::zero(&zero, &rr)).unwrap();
        assert_eq!(p.module.order(), 8);
        let j = ModuleMorphism::from_matrix(&z2, &rr, &MatrixZn::from_vecs(1, vec![vec![2]])).unwrap();
        assert!(pushout(&ModuleMorphism::identity(&z2), &j).unwrap().module.is_isomorphic(&rr));
        let p = pushout(&j, &j).unwrap();
        // (R ⊕ R) / {(2t, -2t)}
        assert_eq!(p.module.order(), 8);
        assert!(p.from_first.compose(&j).unwrap().equals(&p.from_second.compose(&j).unwrap()));
    }

    #[test]
    fn ill_defined_matrix_rejected() {
        let r = z(4);
        let rr = FPModule::free(&r, 1);
        let z2 = FPModule::cyclic(&r, 2);
        // Z/2 -> Z/4, 1 -> 1 is not well defined
        assert!(ModuleMorphism::from_matrix(&z2, &rr, &MatrixZn::identity(1)).is_err());
        assert!(ModuleMorphism::from_matrix(&z2, &rr, &MatrixZn::from_vecs(1, vec![vec![2]])).is_ok());
    }

    #[test]
    fn matrix_round_trip() {
        let r = z(12);
        let rel = MatrixZn::from_rows(&r, 2, &[vec![2, 4], vec![0, 6]]).unwrap();
        let m = FPModule::from_presentation(&r, 2, &rel).unwrap();
        let mut defined = 0;
        for code in 0..12i64.pow(4) {
            let e: Vec<i64> = (0..4).map(|k| (code / 12i64.pow(k)) % 12).collect();
            let a = MatrixZn::from_rows(&r, 2, &[vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap();
            if let Ok(f) = ModuleMorphism::from_matrix(&m, &m, &a) {
                defined += 1;
                let g = ModuleMorphism::from_matrix(&m, &m, &f.matrix()).unwrap();
                assert!(f.equals(&g));
            }
        }
        // |End(M)| times the number of matrices representing zero
        assert!(defined > 0 && defined % m.order() as i32 == 0);
    }

    #[test]
    fn exactness_bookkeeping() {
        let r = z(8);
        let m = FPModule::from_cyclic_orders(&r, &[2, 4, 8]);
        assert_eq!(m.divisors(), &[2, 4, 8]);
        let f = ModuleMorphism::from_images(
            &m,
            &m,
            MatrixZn::from_vecs(3, vec![vec![1, 0, 4], vec![1, 2, 0], vec![0, 1, 2]]),
        );
        let f = f.unwrap();
        let (k, _) = f.kernel();
        let (im, _) = f.image();
        let (q, _) = f.cokernel();
        assert_eq!(m.order(), k.order() * im.order());
        assert_eq!(m.order(), im.order() * q.order());
        assert_eq!(brute_kernel(&f).len() as u64, k.order());
    }

    #[test]
    fn short_exact_sequences() {
        let r = z(4);
        let rr = FPModule::free(&r, 1);
        let ses = ShortExactSequence::from_kernel(&mult(&rr, 2)).unwrap();
        assert_eq!(ses.left().order(), 2);
        assert_eq!(ses.right().order(), 2);
        assert!(ShortExactSequence::new(mult(&rr, 2), ModuleMorphism::identity(&rr)).is_err());
    }
}
