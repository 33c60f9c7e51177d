//! Classes of modules: membership, providers, and the derived notions for
//! complexes.

use rand::Rng;
use serde::Serialize;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::hom::{evaluation, ext1, free_cover, matlis_dual, matlis_dual_map, projective_cover};
use crate::module::FPModule;
use crate::morphism::ModuleMorphism;
use crate::ring::{prime_of, RingSpec};
use crate::sample::{self, random_cyclic_sum, random_disk_sum, random_module};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassKind {
    Free,
    Projective,
    Injective,
    All,
}

#[derive(Clone, Debug)]
pub struct ModuleClass {
    kind: ClassKind,
    ring: RingSpec,
    self_orthogonal: bool,
}

impl ModuleClass {
    pub fn new(kind: ClassKind, ring: &RingSpec) -> Self {
        let self_orthogonal = match kind {
            ClassKind::All => ring.factorization().iter().all(|&(_, e)| e == 1),
            _ => true,
        };
        ModuleClass {
            kind,
            ring: ring.clone(),
            self_orthogonal,
        }
    }

    /// Looks up `free`, `projective`, `injective` or `all` (case-insensitive).
    pub fn builtin(name: &str, ring: &RingSpec) -> Result<Self> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "free" => ClassKind::Free,
            "projective" => ClassKind::Projective,
            "injective" => ClassKind::Injective,
            "all" => ClassKind::All,
            _ => return Err(Error::UnknownClass(name.to_string())),
        };
        Ok(Self::new(kind, ring))
    }

    /// The same class carrying a different self-orthogonality claim.
    pub fn with_self_orthogonal_claim(mut self, claim: bool) -> Self {
        self.self_orthogonal = claim;
        self
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ClassKind::Free => "Free",
            ClassKind::Projective => "Projective",
            ClassKind::Injective => "Injective",
            ClassKind::All => "All",
        }
    }

    pub fn contains(&self, m: &FPModule) -> bool {
        let n = self.ring.modulus();
        match self.kind {
            ClassKind::Free => m.invariant_factors().iter().all(|&d| d == n),
            ClassKind::Projective | ClassKind::Injective => m
                .elementary_divisors()
                .iter()
                .all(|&q| q == self.ring.local_factor(prime_of(q))),
            ClassKind::All => true,
        }
    }

    /// Claimed `Ext¹(L, L') = 0` for all members.
    pub fn self_orthogonal(&self) -> bool {
        self.self_orthogonal
    }

    pub fn contains_projectives(&self) -> bool {
        match self.kind {
            ClassKind::Free => self.ring.is_local(),
            _ => true,
        }
    }

    pub fn projectively_resolving(&self) -> bool {
        self.contains_projectives()
    }

    /// Every member is a projective module.
    pub fn within_projectives(&self) -> bool {
        self.kind != ClassKind::All
    }

    /// Epimorphism from a class member onto `M` that is a precover.
    pub fn precover(&self, m: &FPModule) -> ModuleMorphism {
        match self.kind {
            ClassKind::Free => free_cover(m),
            ClassKind::Projective | ClassKind::Injective => projective_cover(m),
            ClassKind::All => ModuleMorphism::identity(m),
        }
    }

    /// Monomorphism from `M` into a class member that is a preenvelope,
    /// obtained by dualizing the precover of `D(M)`.
    pub fn preenvelope(&self, m: &FPModule) -> Result<ModuleMorphism> {
        if self.kind == ClassKind::All {
            return Ok(ModuleMorphism::identity(m));
        }
        let dm = matlis_dual(m)?;
        let ddm = matlis_dual(dm.module())?;
        let ev = evaluation(m, &dm, &ddm)?;
        let cover = self.precover(dm.module());
        let dp = matlis_dual(cover.source())?;
        matlis_dual_map(&cover, &ddm, &dp)?.compose(&ev)
    }

    /// A random member with at most three cyclic summands.
    pub fn random_member<R: Rng>(&self, rng: &mut R) -> FPModule {
        let ring = &self.ring;
        match self.kind {
            ClassKind::Free => FPModule::free(ring, rng.gen_range(0..=2)),
            ClassKind::Projective | ClassKind::Injective => {
                let orders: Vec<u64> = ring.factorization().iter().map(|&(p, _)| ring.local_factor(p)).collect();
                random_cyclic_sum(ring, rng, &orders, 3)
            }
            ClassKind::All if rng.gen_bool(0.5) => random_cyclic_sum(ring, rng, &ring.prime_power_divisors(), 3),
            ClassKind::All => random_module(ring, rng, 3),
        }
    }

    /// The tilde-membership test: exact with every cycle module in the class.
    pub fn tilde_membership(&self, c: &ChainComplex) -> std::result::Result<(), TildeWitness> {
        if let Err((degree, homology_order)) = c.exactness() {
            return Err(TildeWitness::NotExact { degree, homology_order });
        }
        for m in c.degrees() {
            let z = c.cycles(m).0;
            if !self.contains(&z) {
                return Err(TildeWitness::CycleNotInClass {
                    degree: m,
                    divisors: z.elementary_divisors(),
                });
            }
        }
        Ok(())
    }

    /// A random member of the tilde class inside degrees `[lo, hi]`.
    pub fn random_tilde_member<R: Rng>(&self, rng: &mut R, lo: i32, hi: i32) -> ChainComplex {
        if self.kind == ClassKind::All && rng.gen_bool(0.3) && hi - lo >= 3 {
            let top = rng.gen_range(lo + 3..=hi);
            return sample::random_four_term_exact(&self.ring, rng, top, 2);
        }
        let me = self.clone();
        random_disk_sum(&self.ring, rng, lo, hi, 2, move |r| me.random_member(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TildeWitness {
    NotExact { degree: i32, homology_order: u64 },
    CycleNotInClass { degree: i32, divisors: Vec<u64> },
}

/// Outcome of sampling `Ext¹` between class members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub class: String,
    pub seed: u64,
    pub pairs_checked: usize,
    /// `(M, N, Ext¹(M, N))` elementary divisors for the first nonzero pair.
    pub witness: Option<OrthogonalityWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityWitness {
    pub left: crate::module::ModuleJson,
    pub right: crate::module::ModuleJson,
    pub ext_divisors: Vec<u64>,
}

impl OrthogonalityReport {
    /// True when no sampled pair had nonzero Ext¹. Evidence, not proof.
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Samples pairs of members and computes `Ext¹` honestly.
pub fn orthogonal_sample_check(class: &ModuleClass, samples: usize, seed: u64) -> Result<OrthogonalityReport> {
    let mut rng = sample::rng(seed);
    for k in 0..samples {
        let a = class.random_member(&mut rng);
        let b = class.random_member(&mut rng);
        let e = ext1(&a, &b)?;
        if !e.is_zero() {
            return Ok(OrthogonalityReport {
                class: class.name().to_string(),
                seed,
                pairs_checked: k + 1,
                witness: Some(OrthogonalityWitness {
                    left: a.to_json(),
                    right: b.to_json(),
                    ext_divisors: e.elementary_divisors(),
                }),
            });
        }
    }
    Ok(OrthogonalityReport {
        class: class.name().to_string(),
        seed,
        pairs_checked: samples,
        witness: None,
    })
}

/// A pair of classes with a sampled orthogonality check.
#[derive(Clone, Debug)]
pub struct ClassPair {
    pub left: ModuleClass,
    pub right: ModuleClass,
}

impl ClassPair {
    /// First sampled pair `(A, B)` with `Ext¹(A, B) ≠ 0`.
    pub fn sampled_orthogonality(&self, samples: usize, seed: u64) -> Result<Option<OrthogonalityWitness>> {
        let mut rng = sample::rng(seed);
        for _ in 0..samples {
            let a = self.left.random_member(&mut rng);
            let b = self.right.random_member(&mut rng);
            let e = ext1(&a, &b)?;
            if !e.is_zero() {
                return Ok(Some(OrthogonalityWitness {
                    left: a.to_json(),
                    right: b.to_json(),
                    ext_divisors: e.elementary_divisors(),
                }));
            }
        }
        Ok(None)
    }
}
