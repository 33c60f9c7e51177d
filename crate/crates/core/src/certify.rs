//! Independent re-verification of claimed precovers and preenvelopes.
//!
//! Every check recomputes from definitions: membership in the tilde class,
//! factorization of test maps through the claimed map (solved as linear
//! systems), and honest `Ext¹` computations against the kernel or cokernel.

use serde::{Deserialize, Serialize};

use crate::classes::{ClassKind, ModuleClass, OrthogonalityWitness, TildeWitness};
use crate::complex::{
    chainmap_cokernel, chainmap_kernel, extend_along, lift_through, reverse_dual, reverse_dual_map,
    ChainComplex, ChainMap,
};
use crate::constructions::ext1_ch;
use crate::error::Result;
use crate::hom::{ext1, hom_group};
use crate::json::{ChainMapJson, ComplexJson, MorphismJson};
use crate::matrix::MatrixZn;
use crate::module::{FPModule, ModuleJson};
use crate::morphism::ModuleMorphism;
use crate::sample::{self, random_morphism};
use crate::system::{MorphismSystem, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Level {
    Failed,
    Sampled,
    Proven,
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Proven => "PROVEN",
            Level::Sampled => "SAMPLED",
            Level::Failed => "FAILED",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    Precover,
    SpecialPrecover,
    Preenvelope,
    SpecialPreenvelope,
    TildeMembership,
    Exactness,
    SelfOrthogonality,
}

/// Which side of a claimed map a tilde-membership witness refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Source,
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The source (precover) or target (preenvelope) is not in the tilde class.
    NotInTilde { side: Side, reason: TildeWitness },
    NotEpic { degree: i32 },
    NotMonic { degree: i32 },
    /// A test chain map that does not factor through the claimed map.
    NoFactorization { test: ChainMapJson },
    /// A module map at one degree that does not factor through the component.
    NoDegreewiseFactorization { degree: i32, extend: bool, test_module: ModuleJson, test: MorphismJson },
    /// `Ext¹` between a test complex and the kernel (or cokernel) is nonzero.
    NonzeroExt { left: ComplexJson, right: ComplexJson, ext_divisors: Vec<u64> },
    /// Two class members with nonzero `Ext¹`.
    NotSelfOrthogonal(OrthogonalityWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: ClaimKind,
    pub class: String,
    pub level: Level,
    pub witness: Option<Witness>,
    pub seed: u64,
    pub samples: usize,
    /// Names of the checks that ran and passed, in order.
    pub checks: Vec<String>,
}

impl Certificate {
    fn new(kind: ClaimKind, class: &ModuleClass, sampling: &Sampling) -> Self {
        Certificate {
            kind,
            class: class.name().to_string(),
            level: Level::Proven,
            witness: None,
            seed: sampling.seed,
            samples: sampling.samples,
            checks: Vec::new(),
        }
    }

    fn fail(mut self, w: Witness) -> Self {
        self.level = Level::Failed;
        self.witness = Some(w);
        self
    }

    fn passed(&mut self, check: &str) {
        self.checks.push(check.to_string());
    }

    pub fn is_failed(&self) -> bool {
        self.level == Level::Failed
    }

    /// Lowers the level to at most `level` (never raises; FAILED absorbs).
    pub fn cap(&mut self, level: Level) {
        self.level = self.level.min(level);
    }

    /// Combines with an ingredient certificate: minimum level, first witness.
    pub fn absorb(&mut self, other: &Certificate) {
        if other.level < self.level {
            self.level = other.level;
        }
        if self.witness.is_none() {
            self.witness = other.witness.clone();
        }
        for c in &other.checks {
            self.checks.push(format!("{:?}:{c}", other.kind).to_lowercase());
        }
    }
}

/// Seed and sample count for randomized checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub samples: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { seed: 0, samples: 20 }
    }
}

impl Sampling {
    pub fn new(seed: u64, samples: usize) -> Self {
        Sampling { seed, samples }
    }
}

fn hull(cs: &[&ChainComplex]) -> Option<(i32, i32)> {
    let lo = cs.iter().filter_map(|c| c.support()).map(|s| s.0).min()?;
    let hi = cs.iter().filter_map(|c| c.support()).map(|s| s.1).max()?;
    Some((lo, hi))
}

fn unit_vector(m: &FPModule, k: usize) -> Vec<u64> {
    let mut e = vec![0u64; m.dim()];
    e[k] = 1;
    e
}

/// The chain map `D^i(R) → C` sending the generator to `x ∈ C_i`.
pub fn disk_test_map(c: &ChainComplex, i: i32, x: &[u64]) -> Result<ChainMap> {
    let r = FPModule::free(c.ring(), 1);
    let disk = ChainComplex::disk(i, &r);
    let top = ModuleMorphism::from_generator_images(&r, &c.term(i), &MatrixZn::from_vecs(x.len(), vec![x.to_vec()]))?;
    let bottom = c.diff(i).compose(&top)?;
    ChainMap::new(&disk, c, vec![bottom, top])
}

/// The chain map `C → D^i(R)` given by `h: C_{i−1} → R`.
pub fn cogenerator_test_map(c: &ChainComplex, i: i32, h: &ModuleMorphism) -> Result<ChainMap> {
    let r = FPModule::free(c.ring(), 1);
    let disk = ChainComplex::disk(i, &r);
    let up = h.compose(&c.diff(i))?;
    ChainMap::from_fn(c, &disk, |m| {
        if m == i - 1 {
            Ok(h.clone())
        } else if m == i {
            Ok(up.clone())
        } else {
            Ok(ModuleMorphism::zero(&c.term(m), &disk.term(m)))
        }
    })
}

/// Some `g` with `phi ∘ g = f` for module maps.
pub fn module_lift(f: &ModuleMorphism, phi: &ModuleMorphism) -> Result<Option<ModuleMorphism>> {
    let mut sys = MorphismSystem::new(f.ring());
    let g = sys.unknown(f.source(), phi.source());
    sys.constrain(f.source(), f.target(), vec![Term::new(g, 1).post(phi.clone())], Some(f.clone()))?;
    Ok(sys.solve()?.map(|mut v| v.remove(0)))
}

/// Some `g` with `g ∘ phi = f` for module maps.
pub fn module_extend(f: &ModuleMorphism, phi: &ModuleMorphism) -> Result<Option<ModuleMorphism>> {
    let mut sys = MorphismSystem::new(f.ring());
    let g = sys.unknown(phi.target(), f.target());
    sys.constrain(phi.source(), f.target(), vec![Term::new(g, 1).pre(phi.clone())], Some(f.clone()))?;
    Ok(sys.solve()?.map(|mut v| v.remove(0)))
}

fn degreewise_precover_check(phi: &ChainMap, class: &ModuleClass, rng: &mut sample::SampleRng, samples: usize) -> Result<Option<Witness>> {
    let c = phi.target();
    for i in c.degrees() {
        let ci = c.term(i);
        let fi = phi.comp(i);
        let mut tests: Vec<(FPModule, ModuleMorphism)> = Vec::new();
        let r = FPModule::free(c.ring(), 1);
        for k in 0..ci.dim() {
            let x = unit_vector(&ci, k);
            let t = ModuleMorphism::from_generator_images(&r, &ci, &MatrixZn::from_vecs(ci.dim(), vec![x]))?;
            tests.push((r.clone(), t));
        }
        if !class.within_projectives() {
            if class.contains(&ci) {
                tests.push((ci.clone(), ModuleMorphism::identity(&ci)));
            }
            for _ in 0..samples.min(4) {
                let m = class.random_member(rng);
                let t = random_morphism(&m, &ci, rng);
                tests.push((m, t));
            }
        }
        for (m, t) in tests {
            if module_lift(&t, &fi)?.is_none() {
                return Ok(Some(Witness::NoDegreewiseFactorization {
                    degree: i,
                    extend: false,
                    test_module: m.to_json(),
                    test: t.to_json(),
                }));
            }
        }
    }
    Ok(None)
}

fn degreewise_preenvelope_check(phi: &ChainMap, class: &ModuleClass, rng: &mut sample::SampleRng, samples: usize) -> Result<Option<Witness>> {
    let c = phi.source();
    for i in c.degrees() {
        let ci = c.term(i);
        let fi = phi.comp(i);
        let mut tests: Vec<(FPModule, ModuleMorphism)> = Vec::new();
        let r = FPModule::free(c.ring(), 1);
        for h in hom_group(&ci, &r)?.generators() {
            tests.push((r.clone(), h));
        }
        if !class.within_projectives() {
            if class.contains(&ci) {
                tests.push((ci.clone(), ModuleMorphism::identity(&ci)));
            }
            for _ in 0..samples.min(4) {
                let m = class.random_member(rng);
                let t = random_morphism(&ci, &m, rng);
                tests.push((m, t));
            }
        }
        for (m, t) in tests {
            if module_extend(&t, &fi)?.is_none() {
                return Ok(Some(Witness::NoDegreewiseFactorization {
                    degree: i,
                    extend: true,
                    test_module: m.to_json(),
                    test: t.to_json(),
                }));
            }
        }
    }
    Ok(None)
}

/// Precover claim: source in the tilde class, and every map from a tilde
/// member into the target factors through `phi`.
pub fn certify_precover(phi: &ChainMap, class: &ModuleClass, sampling: &Sampling) -> Result<Certificate> {
    let cert = Certificate::new(ClaimKind::Precover, class, sampling);
    certify_precover_into(phi, class, sampling, cert)
}

fn certify_precover_into(phi: &ChainMap, class: &ModuleClass, sampling: &Sampling, mut cert: Certificate) -> Result<Certificate> {
    let mut rng = sample::rng(sampling.seed);
    if let Err(w) = class.tilde_membership(phi.source()) {
        return Ok(cert.fail(Witness::NotInTilde { side: Side::Source, reason: w }));
    }
    cert.passed("source-in-tilde");
    let c = phi.target();
    if class.within_projectives() {
        // disks D^i(R) on every generator of every C_i
        for i in c.degrees() {
            let ci = c.term(i);
            for k in 0..ci.dim() {
                let t = disk_test_map(c, i, &unit_vector(&ci, k))?;
                if lift_through(&t, phi)?.is_none() {
                    return Ok(cert.fail(Witness::NoFactorization { test: t.to_json() }));
                }
            }
        }
        cert.passed("generator-disk-factorization");
    }
    if let Some(w) = degreewise_precover_check(phi, class, &mut rng, sampling.samples)? {
        return Ok(cert.fail(w));
    }
    cert.passed("degreewise-precover");
    if let Some((lo, hi)) = hull(&[phi.source(), c]) {
        for _ in 0..sampling.samples {
            let t = class.random_tilde_member(&mut rng, lo - 1, hi + 1);
            let g = crate::sample::random_chain_map(&t, c, &mut rng);
            if lift_through(&g, phi)?.is_none() {
                return Ok(cert.fail(Witness::NoFactorization { test: g.to_json() }));
            }
        }
        cert.passed("sampled-tilde-factorization");
    }
    if !(class.within_projectives() && class.self_orthogonal()) {
        cert.cap(Level::Sampled);
    }
    Ok(cert)
}

/// Special precover claim: epic precover whose kernel has vanishing `Ext¹`
/// from every tilde member.
pub fn certify_special(phi: &ChainMap, class: &ModuleClass, sampling: &Sampling) -> Result<Certificate> {
    let mut cert = Certificate::new(ClaimKind::SpecialPrecover, class, sampling);
    if let Some(d) = phi.non_epic_degree() {
        return Ok(cert.fail(Witness::NotEpic { degree: d }));
    }
    cert.passed("epic");
    let (k, _) = chainmap_kernel(phi)?;
    let mut cert = certify_precover_into(phi, class, sampling, cert)?;
    if cert.is_failed() {
        return Ok(cert);
    }
    let mut rng = sample::rng(sampling.seed ^ 0x5eed);
    let r = FPModule::free(phi.ring(), 1);
    if let Some((lo, hi)) = hull(&[&k, phi.source()]) {
        let mut tests: Vec<ChainComplex> = (lo..=hi + 1).map(|i| ChainComplex::disk(i, &r)).collect();
        let generators = tests.len();
        for _ in 0..sampling.samples {
            tests.push(class.random_tilde_member(&mut rng, lo - 1, hi + 1));
        }
        for (idx, t) in tests.iter().enumerate() {
            let e = ext1_ch(t, &k)?;
            if !e.is_zero() {
                return Ok(cert.fail(Witness::NonzeroExt {
                    left: t.to_json(),
                    right: k.to_json(),
                    ext_divisors: e.elementary_divisors(),
                }));
            }
            if idx + 1 == generators {
                cert.passed("generator-disk-ext");
            }
        }
        cert.passed("sampled-tilde-ext");
    }
    if !class.within_projectives() {
        cert.cap(Level::Sampled);
    }
    Ok(cert)
}

fn certify_preenvelope_into(phi: &ChainMap, class: &ModuleClass, sampling: &Sampling, mut cert: Certificate) -> Result<Certificate> {
    let mut rng = sample::rng(sampling.seed);
    if let Err(w) = class.tilde_membership(phi.target()) {
        return Ok(cert.fail(Witness::NotInTilde { side: Side::Target, reason: w }));
    }
    cert.passed("target-in-tilde");
    let c = phi.source();
    let r = FPModule::free(c.ring(), 1);
    if class.within_projectives() {
        if let Some((lo, hi)) = c.support() {
            for i in lo + 1..=hi + 1 {
                for h in hom_group(&c.term(i - 1), &r)?.generators() {
                    let t = cogenerator_test_map(c, i, &h)?;
                    if extend_along(&t, phi)?.is_none() {
                        return Ok(cert.fail(Witness::NoFactorization { test: t.to_json() }));
                    }
                }
            }
        }
        cert.passed("cogenerator-disk-extension");
    }
    if let Some(w) = degreewise_preenvelope_check(phi, class, &mut rng, sampling.samples)? {
        return Ok(cert.fail(w));
    }
    cert.passed("degreewise-preenvelope");
    if let Some((lo, hi)) = hull(&[c, phi.target()]) {
        for _ in 0..sampling.samples {
            let t = class.random_tilde_member(&mut rng, lo - 1, hi + 1);
            let g = crate::sample::random_chain_map(c, &t, &mut rng);
            if extend_along(&g, phi)?.is_none() {
                return Ok(cert.fail(Witness::NoFactorization { test: g.to_json() }));
            }
        }
        cert.passed("sampled-tilde-extension");
    }
    // the dual map must pass the generator test for precovers
    let dl = reverse_dual(phi.target())?;
    let dc = reverse_dual(c)?;
    let dphi = reverse_dual_map(phi, &dl, &dc)?;
    if class.tilde_membership(dphi.source()).is_err() {
        return Err(crate::error::Error::DualityUnstable(class.name().to_string()));
    }
    if class.within_projectives() {
        for i in dphi.target().degrees() {
            let ci = dphi.target().term(i);
            for k in 0..ci.dim() {
                let t = disk_test_map(dphi.target(), i, &unit_vector(&ci, k))?;
                if lift_through(&t, &dphi)?.is_none() {
                    return Ok(cert.fail(Witness::NoFactorization { test: t.to_json() }));
                }
            }
        }
    }
    cert.passed("reverse-dual-cross-check");
    if !(class.within_projectives() && class.self_orthogonal()) {
        cert.cap(Level::Sampled);
    }
    Ok(cert)
}

/// Preenvelope claim: target in the tilde class, and every map from the
/// source into a tilde member extends along `phi`.
pub fn certify_preenvelope(phi: &ChainMap, class: &ModuleClass, sampling: &Sampling) -> Result<Certificate> {
    let cert = Certificate::new(ClaimKind::Preenvelope, class, sampling);
    certify_preenvelope_into(phi, class, sampling, cert)
}

/// Special preenvelope claim: monic preenvelope whose cokernel has
/// vanishing `Ext¹` into every tilde member.
pub fn certify_special_preenvelope(phi: &ChainMap, class: &ModuleClass, sampling: &Sampling) -> Result<Certificate> {
    let mut cert = Certificate::new(ClaimKind::SpecialPreenvelope, class, sampling);
    if let Some(d) = phi.non_monic_degree() {
        return Ok(cert.fail(Witness::NotMonic { degree: d }));
    }
    cert.passed("monic");
    let (q, _) = chainmap_cokernel(phi)?;
    let mut cert = certify_preenvelope_into(phi, class, sampling, cert)?;
    if cert.is_failed() {
        return Ok(cert);
    }
    let mut rng = sample::rng(sampling.seed ^ 0x5eed);
    let r = FPModule::free(phi.ring(), 1);
    if let Some((lo, hi)) = hull(&[&q, phi.target()]) {
        let mut tests: Vec<ChainComplex> = (lo..=hi + 1).map(|i| ChainComplex::disk(i, &r)).collect();
        for _ in 0..sampling.samples {
            tests.push(class.random_tilde_member(&mut rng, lo - 1, hi + 1));
        }
        for t in &tests {
            let e = ext1_ch(&q, t)?;
            if !e.is_zero() {
                return Ok(cert.fail(Witness::NonzeroExt {
                    left: q.to_json(),
                    right: t.to_json(),
                    ext_divisors: e.elementary_divisors(),
                }));
            }
        }
        cert.passed("cogenerator-and-sampled-ext");
    }
    if !class.within_projectives() {
        cert.cap(Level::Sampled);
    }
    Ok(cert)
}

/// Tilde-membership as a certificate.
pub fn certify_tilde(c: &ChainComplex, class: &ModuleClass) -> Certificate {
    let cert = Certificate::new(ClaimKind::TildeMembership, class, &Sampling::new(0, 0));
    match class.tilde_membership(c) {
        Ok(()) => {
            let mut c2 = cert;
            c2.passed("exact-with-cycles-in-class");
            c2
        }
        Err(w) => cert.fail(Witness::NotInTilde { side: Side::Source, reason: w }),
    }
}

/// Checks the class's self-orthogonality claim by sampling member pairs.
/// A claim of `true` that sampling refutes is FAILED; an accurate claim of
/// `false` passes at level SAMPLED.
pub fn certify_self_orthogonality(class: &ModuleClass, sampling: &Sampling) -> Result<Certificate> {
    let mut cert = Certificate::new(ClaimKind::SelfOrthogonality, class, sampling);
    let mut rng = sample::rng(sampling.seed);
    let mut pool: Vec<FPModule> = Vec::new();
    if class.kind() == ClassKind::All {
        // small cyclic members first, so that the obvious pairs are tested
        for q in class.ring().prime_power_divisors() {
            pool.push(FPModule::cyclic(class.ring(), q));
        }
    }
    for _ in 0..sampling.samples {
        pool.push(class.random_member(&mut rng));
    }
    for a in &pool {
        for b in pool.iter().take(8) {
            let e = ext1(a, b)?;
            if !e.is_zero() {
                let w = Witness::NotSelfOrthogonal(OrthogonalityWitness {
                    left: a.to_json(),
                    right: b.to_json(),
                    ext_divisors: e.elementary_divisors(),
                });
                if class.self_orthogonal() {
                    return Ok(cert.fail(w));
                }
                cert.passed("claim-false-confirmed");
                cert.cap(Level::Sampled);
                return Ok(cert);
            }
        }
    }
    cert.passed("sampled-pairs-ext-zero");
    if !class.self_orthogonal() || !class.within_projectives() {
        cert.cap(Level::Sampled);
    }
    Ok(cert)
}

impl Witness {
    /// Re-checks the witness from scratch against the claimed map. Returns
    /// true when the witness still demonstrates the failure.
    pub fn recheck(&self, phi: Option<&ChainMap>, class: &ModuleClass) -> Result<bool> {
        Ok(match self {
            Witness::NotInTilde { side, .. } => {
                let Some(phi) = phi else { return Ok(false) };
                let c = match side {
                    Side::Source => phi.source(),
                    Side::Target => phi.target(),
                };
                class.tilde_membership(c).is_err()
            }
            Witness::NotEpic { degree } => phi.is_some_and(|p| !p.comp(*degree).is_epic()),
            Witness::NotMonic { degree } => phi.is_some_and(|p| !p.comp(*degree).is_monic()),
            Witness::NoFactorization { test } => {
                let Some(phi) = phi else { return Ok(false) };
                let t = ChainMap::from_json(test)?;
                let t = map_onto(&t, phi)?;
                match t {
                    Mapped::Into(t) => lift_through(&t, phi)?.is_none(),
                    Mapped::OutOf(t) => extend_along(&t, phi)?.is_none(),
                }
            }
            Witness::NoDegreewiseFactorization { degree, extend, test_module, test } => {
                let Some(phi) = phi else { return Ok(false) };
                let m = FPModule::from_json(test_module)?;
                let fi = phi.comp(*degree);
                if *extend {
                    let t = ModuleMorphism::from_json(fi.source(), &m, test)?;
                    module_extend(&t, &fi)?.is_none()
                } else {
                    let t = ModuleMorphism::from_json(&m, fi.target(), test)?;
                    module_lift(&t, &fi)?.is_none()
                }
            }
            Witness::NonzeroExt { left, right, .. } => {
                let l = ChainComplex::from_json(left)?;
                let r = ChainComplex::from_json(right)?;
                !ext1_ch(&l, &r)?.is_zero()
            }
            Witness::NotSelfOrthogonal(w) => {
                let a = FPModule::from_json(&w.left)?;
                let b = FPModule::from_json(&w.right)?;
                !ext1(&a, &b)?.is_zero()
            }
        })
    }
}

enum Mapped {
    Into(ChainMap),
    OutOf(ChainMap),
}

/// Re-expresses a reloaded test map in the coordinates of `phi`'s target
/// (precover tests) or source (preenvelope tests).
fn map_onto(t: &ChainMap, phi: &ChainMap) -> Result<Mapped> {
    let same = |a: &ChainComplex, b: &ChainComplex| {
        let lo = a.lo().min(b.lo());
        let hi = a.hi().max(b.hi());
        (lo..=hi).all(|m| a.term(m).same_coordinates(&b.term(m)))
    };
    if same(t.target(), phi.target()) {
        let comps = t.source().degrees().map(|m| {
            ModuleMorphism::from_images(&t.source().term(m), &phi.target().term(m), t.comp(m).images().clone())
        });
        let comps = comps.collect::<Result<Vec<_>>>()?;
        return Ok(Mapped::Into(ChainMap::new(t.source(), phi.target(), comps)?));
    }
    let comps = phi.source().degrees().map(|m| {
        ModuleMorphism::from_images(&phi.source().term(m), &t.target().term(m), t.comp(m).images().clone())
    });
    let comps = comps.collect::<Result<Vec<_>>>()?;
    Ok(Mapped::OutOf(ChainMap::new(phi.source(), t.target(), comps)?))
}

/// Number of morphisms `M → N` by enumeration; requires `|M| ≤ 64`.
pub fn oracle_hom(m: &FPModule, n: &FPModule) -> Result<u64> {
    const BOUND: u64 = 64;
    if m.order() > BOUND {
        return Err(crate::error::Error::OrderBound { order: m.order(), bound: BOUND });
    }
    crate::hom::count_morphisms_brute(m, n, u64::MAX)
}

/// Both `Ext¹` computations agree in elementary divisors.
pub fn oracle_ext_agreement(m: &FPModule, n: &FPModule) -> Result<bool> {
    let a = ext1(m, n)?;
    let b = crate::hom::ext1_by_restriction(m, n)?;
    Ok(a.is_isomorphic(&b))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ClassKind;
    use crate::constructions::{epic_precover, monic_preenvelope, special_precover_exact};
    use crate::ring::RingSpec;
    use crate::MatrixZn;

    fn setup() -> (RingSpec, ModuleClass, Sampling) {
        let ring = RingSpec::new(4).unwrap();
        let class = ModuleClass::new(ClassKind::Free, &ring);
        (ring, class, Sampling::default())
    }

    #[test]
    fn identity_on_nonexact_complex_fails_membership() {
        let (ring, class, s) = setup();
        let c = ChainComplex::stalk(0, &FPModule::cyclic(&ring, 2));
        let id = ChainMap::identity(&c);
        let cert = certify_precover(&id, &class, &s).unwrap();
        assert_eq!(cert.level, Level::Failed);
        let w = cert.witness.unwrap();
        assert!(matches!(w, Witness::NotInTilde { side: Side::Source, .. }));
        assert!(w.recheck(Some(&id), &class).unwrap());
    }

    #[test]
    fn multiplication_by_two_is_not_a_precover() {
        let (ring, class, s) = setup();
        let r = FPModule::free(&ring, 1);
        let d = ChainComplex::disk(0, &r);
        let two = ModuleMorphism::from_matrix(&r, &r, &MatrixZn::from_rows(&ring, 1, &[vec![2]]).unwrap()).unwrap();
        let phi = disk_map_of(&d, &two);
        let cert = certify_precover(&phi, &class, &s).unwrap();
        assert_eq!(cert.level, Level::Failed);
        let w = cert.witness.unwrap();
        assert!(matches!(w, Witness::NoFactorization { .. }));
        assert!(w.recheck(Some(&phi), &class).unwrap());
        assert!(!w.recheck(Some(&ChainMap::identity(&d)), &class).unwrap());
    }

    fn disk_map_of(d: &ChainComplex, f: &ModuleMorphism) -> ChainMap {
        ChainMap::from_fn(d, d, |_| Ok(f.clone())).unwrap()
    }

    #[test]
    fn constructions_certify() {
        let (ring, class, s) = setup();
        let m = FPModule::cyclic(&ring, 2);
        let stalk = ChainComplex::stalk(0, &m);
        assert_eq!(epic_precover(&stalk, &class, &s).unwrap().certificate.level, Level::Proven);
        assert!(!monic_preenvelope(&stalk, &class, &s).unwrap().certificate.is_failed());
        let disk = ChainComplex::disk(0, &m);
        let sp = special_precover_exact(&disk, &class, &s).unwrap();
        assert_eq!(sp.certificate.level, Level::Proven);
        assert_eq!(sp.certificate.kind, ClaimKind::SpecialPrecover);
    }

    #[test]
    fn monic_map_is_not_special() {
        let (ring, class, s) = setup();
        let m = FPModule::cyclic(&ring, 2);
        let r = FPModule::free(&ring, 1);
        let incl = ModuleMorphism::from_matrix(&m, &r, &MatrixZn::from_rows(&ring, 1, &[vec![2]]).unwrap()).unwrap();
        let phi = crate::complex::disk_map(0, &incl);
        let cert = certify_special(&phi, &class, &s).unwrap();
        assert_eq!(cert.level, Level::Failed);
        assert!(matches!(cert.witness, Some(Witness::NotEpic { .. })));
    }

    #[test]
    fn zero_map_into_injective_is_not_a_preenvelope() {
        let (ring, class, s) = setup();
        let m = FPModule::cyclic(&ring, 2);
        let c = ChainComplex::disk(0, &m);
        let d = ChainComplex::disk(0, &FPModule::free(&ring, 1));
        let phi = ChainMap::zero(&c, &d);
        let cert = certify_preenvelope(&phi, &class, &s).unwrap();
        assert_eq!(cert.level, Level::Failed);
        assert!(cert.witness.unwrap().recheck(Some(&phi), &class).unwrap());
    }

    #[test]
    fn self_orthogonality_claims() {
        let ring = RingSpec::new(4).unwrap();
        let s = Sampling::new(1, 10);
        let free = ModuleClass::new(ClassKind::Free, &ring);
        assert_eq!(certify_self_orthogonality(&free, &s).unwrap().level, Level::Proven);
        let all = ModuleClass::new(ClassKind::All, &ring);
        assert!(!certify_self_orthogonality(&all, &s).unwrap().is_failed());
        let lying = all.with_self_orthogonal_claim(true);
        let cert = certify_self_orthogonality(&lying, &s).unwrap();
        assert_eq!(cert.level, Level::Failed);
        assert!(cert.witness.unwrap().recheck(None, &lying).unwrap());
    }

    #[test]
    fn level_order() {
        assert!(Level::Failed < Level::Sampled && Level::Sampled < Level::Proven);
        assert_eq!(serde_json::to_string(&Level::Sampled).unwrap(), "\"SAMPLED\"");
    }
}
