//! Hom groups, Ext¹, covers and duality for finitely presented modules.

use crate::error::{Error, Result};
use crate::matrix::MatrixZn;
use crate::module::FPModule;
use crate::morphism::ModuleMorphism;
use crate::ring::{prime_of, RingSpec};
use crate::system::{self, HomSpace};

/// `Hom(M, N)` as a finite module with decoding to actual morphisms.
#[derive(Clone, Debug)]
pub struct HomGroup {
    source: FPModule,
    target: FPModule,
    space: HomSpace,
}

impl HomGroup {
    pub fn module(&self) -> &FPModule {
        self.space.module()
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn decode(&self, x: &[u64]) -> ModuleMorphism {
        self.space.decode(x).remove(0)
    }

    pub fn encode(&self, f: &ModuleMorphism) -> Option<Vec<u64>> {
        self.space.encode(std::slice::from_ref(f))
    }

    pub fn generators(&self) -> Vec<ModuleMorphism> {
        self.space.generators().into_iter().map(|mut v| v.remove(0)).collect()
    }

    /// The additive map `self → other` induced by `h ↦ f(h)`.
    pub fn induced<F>(&self, other: &HomGroup, mut f: F) -> Result<ModuleMorphism>
    where
        F: FnMut(&ModuleMorphism) -> Result<ModuleMorphism>,
    {
        self.space.induced(&other.space, |v| Ok(vec![f(&v[0])?]))
    }
}

pub fn hom_group(m: &FPModule, n: &FPModule) -> Result<HomGroup> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().modulus(), n.ring().modulus()));
    }
    Ok(HomGroup {
        source: m.clone(),
        target: n.clone(),
        space: system::single(m, n),
    })
}

/// `Hom(f, N): Hom(B, N) → Hom(A, N)` for `f: A → B`.
pub fn hom_pre(f: &ModuleMorphism, from: &HomGroup, to: &HomGroup) -> Result<ModuleMorphism> {
    from.induced(to, |h| h.compose(f))
}

/// `Hom(M, g): Hom(M, N) → Hom(M, N')` for `g: N → N'`.
pub fn hom_post(g: &ModuleMorphism, from: &HomGroup, to: &HomGroup) -> Result<ModuleMorphism> {
    from.induced(to, |h| g.compose(h))
}

/// Homology `ker(b) / im(a)` of `X →a Y →b Z` with `b ∘ a = 0`.
pub fn homology(a: &ModuleMorphism, b: &ModuleMorphism) -> Result<FPModule> {
    let (_, incl) = b.kernel();
    let lifted = factor_through_mono(a, &incl)?;
    Ok(lifted.cokernel().0)
}

/// The unique `g` with `mono ∘ g = f`, when the image of `f` lies in the
/// image of `mono`.
pub fn factor_through_mono(f: &ModuleMorphism, mono: &ModuleMorphism) -> Result<ModuleMorphism> {
    let mut rows = Vec::with_capacity(f.source().dim());
    for j in 0..f.source().dim() {
        let y = f.images().row(j).to_vec();
        let x = mono
            .preimage(&y)
            .ok_or_else(|| Error::Invalid("map does not factor through the given monomorphism".into()))?;
        rows.push(x);
    }
    ModuleMorphism::from_images(f.source(), mono.source(), MatrixZn::from_vecs(mono.source().dim(), rows))
}

/// The map `C → target` induced by `f: B → target` on the cokernel `proj: B ↠ C`.
pub fn factor_through_epi(f: &ModuleMorphism, epi: &ModuleMorphism) -> Result<ModuleMorphism> {
    let mut rows = Vec::with_capacity(epi.target().dim());
    for i in 0..epi.target().dim() {
        let mut e = vec![0u64; epi.target().dim()];
        e[i] = 1;
        let x = epi
            .preimage(&epi.target().reduce(&e))
            .ok_or_else(|| Error::Invalid("map is not epic".into()))?;
        rows.push(f.apply(&x));
    }
    ModuleMorphism::from_images(epi.target(), f.target(), MatrixZn::from_vecs(f.target().dim(), rows))
}

/// Epi from the free module of rank `dim(M/pM)` over a local ring; its kernel
/// lies in `p·F`.
pub fn minimal_free_cover(m: &FPModule) -> Result<ModuleMorphism> {
    let ring = m.ring();
    if !ring.is_local() {
        return Err(Error::NotLocal(ring.modulus()));
    }
    let f = FPModule::free(ring, m.dim());
    Ok(ModuleMorphism::from_images_unchecked(&f, m, MatrixZn::identity(m.dim())))
}

/// Epi from the free module on the presentation generators of `M`.
pub fn free_precover(m: &FPModule) -> ModuleMorphism {
    let f = FPModule::free(m.ring(), m.generators());
    ModuleMorphism::from_generator_images(&f, m, m.to_internal()).expect("free modules have no relations")
}

/// Projective cover: `Z/p^{k_p}` over each cyclic summand `Z/p^e` of `M`.
pub fn projective_cover(m: &FPModule) -> ModuleMorphism {
    let ring = m.ring();
    let divisors: Vec<u64> = m.divisors().iter().map(|&d| ring.local_factor(prime_of(d))).collect();
    let p = FPModule::diagonal(ring, divisors);
    ModuleMorphism::from_images_unchecked(&p, m, MatrixZn::identity(m.dim()))
}

/// Free cover used for resolutions: minimal when the ring is local.
pub fn free_cover(m: &FPModule) -> ModuleMorphism {
    minimal_free_cover(m).unwrap_or_else(|_| {
        let f = FPModule::free(m.ring(), m.dim());
        ModuleMorphism::from_generator_images(&f, m, &MatrixZn::identity(m.dim())).expect("free modules have no relations")
    })
}

/// True when every element of the submodule generated by `gens` (internal
/// coordinates of `m`) lies in the radical `J·M`.
pub fn generated_in_radical(m: &FPModule, gens: &MatrixZn) -> bool {
    (0..gens.rows()).all(|r| {
        gens.row(r)
            .iter()
            .zip(m.divisors())
            .all(|(&x, &d)| x % prime_of(d) == 0)
    })
}

/// True when `ker(cover) ⊆ J·F`, so the kernel is superfluous.
pub fn is_superfluous_cover(cover: &ModuleMorphism) -> bool {
    let (_, incl) = cover.kernel();
    generated_in_radical(cover.source(), incl.images())
}

/// Ext¹ via the three-term projective resolution `F₂ → F₁ → F₀ → M`.
pub fn ext1(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().modulus(), n.ring().modulus()));
    }
    let e0 = projective_cover(m);
    let (k0, i0) = e0.kernel();
    let e1 = projective_cover(&k0);
    let d1 = i0.compose(&e1)?;
    let (k1, i1) = d1.kernel();
    let e2 = projective_cover(&k1);
    let d2 = i1.compose(&e2)?;
    let h0 = hom_group(e0.source(), n)?;
    let h1 = hom_group(e1.source(), n)?;
    let h2 = hom_group(e2.source(), n)?;
    let d1s = hom_pre(&d1, &h0, &h1)?;
    let d2s = hom_pre(&d2, &h1, &h2)?;
    homology(&d1s, &d2s)
}

/// Ext¹ as `coker(Hom(F₀, N) → Hom(K, N))` for `0 → K → F₀ → M → 0`.
pub fn ext1_by_restriction(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().modulus(), n.ring().modulus()));
    }
    let e0 = free_precover(m);
    let (k, incl) = e0.kernel();
    let hf = hom_group(e0.source(), n)?;
    let hk = hom_group(&k, n)?;
    Ok(hom_pre(&incl, &hf, &hk)?.cokernel().0)
}

/// `D(M) = Hom(M, R)`.
pub fn matlis_dual(m: &FPModule) -> Result<HomGroup> {
    hom_group(m, &FPModule::free(m.ring(), 1))
}

/// `D(f): D(B) → D(A)` for `f: A → B`, on given duals.
pub fn matlis_dual_map(f: &ModuleMorphism, db: &HomGroup, da: &HomGroup) -> Result<ModuleMorphism> {
    hom_pre(f, db, da)
}

/// `D(f)` computing both duals.
pub fn dual_morphism(f: &ModuleMorphism) -> Result<(HomGroup, HomGroup, ModuleMorphism)> {
    let db = matlis_dual(f.target())?;
    let da = matlis_dual(f.source())?;
    let df = matlis_dual_map(f, &db, &da)?;
    Ok((db, da, df))
}

/// Evaluation `M → D(D(M))`, `x ↦ (φ ↦ φ(x))`.
pub fn evaluation(m: &FPModule, dm: &HomGroup, ddm: &HomGroup) -> Result<ModuleMorphism> {
    let ring = m.ring();
    let r = FPModule::free(ring, 1);
    let basis: Vec<ModuleMorphism> = (0..dm.module().dim())
        .map(|k| {
            let mut e = vec![0u64; dm.module().dim()];
            e[k] = 1;
            dm.decode(&e)
        })
        .collect();
    let mut rows = Vec::with_capacity(m.dim());
    for j in 0..m.dim() {
        let images: Vec<Vec<u64>> = basis.iter().map(|phi| phi.images().row(j).to_vec()).collect();
        let ev = ModuleMorphism::from_images(dm.module(), &r, MatrixZn::from_vecs(r.dim(), images))?;
        rows.push(
            ddm.encode(&ev)
                .ok_or_else(|| Error::DualityUnstable("evaluation is not a morphism".into()))?,
        );
    }
    ModuleMorphism::from_images(m, ddm.module(), MatrixZn::from_vecs(ddm.module().dim(), rows))
}

/// Monic `M ↪ E` with `E` injective, obtained by dualizing the projective
/// cover of `D(M)` and precomposing with evaluation.
pub fn injective_preenvelope(m: &FPModule) -> Result<ModuleMorphism> {
    let dm = matlis_dual(m)?;
    let ddm = matlis_dual(dm.module())?;
    let ev = evaluation(m, &dm, &ddm)?;
    let cover = projective_cover(dm.module());
    let dp = matlis_dual(cover.source())?;
    let dcover = matlis_dual_map(&cover, &ddm, &dp)?;
    dcover.compose(&ev)
}

/// Number of morphisms `M → N` by enumerating generator images and testing
/// each relation. Oracle use only; bounded by the size of the search.
pub fn count_morphisms_brute(m: &FPModule, n: &FPModule, bound: u64) -> Result<u64> {
    let ring: &RingSpec = m.ring();
    let targets = n.elements();
    let g = m.generators();
    let space = (targets.len() as u64).checked_pow(g as u32).unwrap_or(u64::MAX);
    if space > bound {
        return Err(Error::OrderBound { order: space, bound });
    }
    let mut count = 0;
    let mut idx = vec![0usize; g];
    loop {
        let ok = (0..m.relations().rows()).all(|r| {
            let mut acc = vec![0u64; n.dim()];
            for (j, &c) in m.relations().row(r).iter().enumerate() {
                for (a, &t) in acc.iter_mut().zip(&targets[idx[j]]) {
                    *a = ring.add(*a, ring.mul(c, t));
                }
            }
            n.reduce(&acc).iter().all(|&x| x == 0)
        });
        if ok {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == g {
                return Ok(count);
            }
            idx[k] += 1;
            if idx[k] < targets.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
