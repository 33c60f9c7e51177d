//! Precover and preenvelope constructions for complexes.

use serde::Serialize;

use crate::certify::{
    certify_preenvelope, certify_precover, certify_special, certify_special_preenvelope, Certificate, ClaimKind,
    Level, Sampling, Witness,
};
use crate::classes::{ClassKind, ModuleClass, TildeWitness};
use crate::complex::{
    chain_maps_group, chainmap_cokernel, chainmap_kernel, complex_direct_sum, complex_pullback, disk_map,
    double_dual_evaluation, reverse_dual, reverse_dual_map, ChainComplex, ChainMap, ComplexSum,
};
use crate::error::{Error, Result};
use crate::hom::{ext1, factor_through_mono, free_cover, generated_in_radical, minimal_free_cover, projective_cover};
use crate::module::FPModule;
use crate::morphism::{direct_sum2, DirectSum, ModuleMorphism, ShortExactSequence};
use crate::sample;
use crate::system::{MorphismSystem, Term};

/// An epic map onto `C` from a tilde-class complex, with its kernel.
#[derive(Clone, Debug)]
pub struct PrecoverResult {
    pub map: ChainMap,
    pub kernel: ChainComplex,
    pub kernel_inclusion: ChainMap,
    pub certificate: Certificate,
}

/// A monic map from `C` into a tilde-class complex, with its cokernel.
#[derive(Clone, Debug)]
pub struct PreenvelopeResult {
    pub map: ChainMap,
    pub cokernel: ChainComplex,
    pub cokernel_projection: ChainMap,
    pub certificate: Certificate,
}

fn with_kernel(map: ChainMap, certificate: Certificate) -> Result<PrecoverResult> {
    let (kernel, kernel_inclusion) = chainmap_kernel(&map)?;
    Ok(PrecoverResult {
        map,
        kernel,
        kernel_inclusion,
        certificate,
    })
}

fn with_cokernel(map: ChainMap, certificate: Certificate) -> Result<PreenvelopeResult> {
    let (cokernel, cokernel_projection) = chainmap_cokernel(&map)?;
    Ok(PreenvelopeResult {
        map,
        cokernel,
        cokernel_projection,
        certificate,
    })
}

/// `L_m = G_{m+1} ⊕ G_m` with `δ(x, y) = (y, 0)` and
/// `α_m(x, y) = δ_{m+1} f_{m+1}(x) + f_m(y)`, for degreewise maps
/// `f_m : G_m → C_m` produced by `provider`.
pub fn disk_presentation<F>(c: &ChainComplex, mut provider: F) -> Result<ChainMap>
where
    F: FnMut(&FPModule) -> Result<ModuleMorphism>,
{
    let Some((lo, hi)) = c.support() else {
        return Ok(ChainMap::identity(c));
    };
    let ring = c.ring();
    let zero = FPModule::zero(ring);
    let mut covers: Vec<ModuleMorphism> = Vec::new();
    for m in lo..=hi {
        covers.push(provider(&c.term(m))?);
    }
    let cover = |m: i32| -> ModuleMorphism {
        if m < lo || m > hi {
            ModuleMorphism::zero(&zero, &c.term(m))
        } else {
            covers[(m - lo) as usize].clone()
        }
    };
    let sums: Vec<DirectSum> = (lo - 1..=hi)
        .map(|m| direct_sum2(cover(m + 1).source(), cover(m).source()))
        .collect::<Result<Vec<_>>>()?;
    let sum = |m: i32| &sums[(m - lo + 1) as usize];
    let mut diffs = Vec::new();
    for m in lo..=hi {
        diffs.push(sum(m - 1).injections[0].compose(&sum(m).projections[1])?);
    }
    let l = ChainComplex::new(ring, lo - 1, sums.iter().map(|s| s.module.clone()).collect(), diffs)?;
    let comps = (lo - 1..=hi)
        .map(|m| {
            let top = c.diff(m + 1).compose(&cover(m + 1))?;
            sum(m).copair(&[top, cover(m)])
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(&l, c, comps)
}

/// The epic map onto `C` from a sum of disks on free covers; a projective
/// object of the category of complexes.
pub fn free_disk_presentation(c: &ChainComplex) -> Result<ChainMap> {
    disk_presentation(c, |m| Ok(free_cover(m)))
}

/// `Ext¹` in the category of complexes, as
/// `coker(Hom(P, Y) → Hom(K′, Y))` for `0 → K′ → P → X → 0` with `P` a sum
/// of free disks.
pub fn ext1_ch(x: &ChainComplex, y: &ChainComplex) -> Result<FPModule> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch(x.ring().modulus(), y.ring().modulus()));
    }
    if x.is_zero() || y.is_zero() {
        return Ok(FPModule::zero(x.ring()));
    }
    let alpha = free_disk_presentation(x)?;
    let (k, incl) = chainmap_kernel(&alpha)?;
    let hp = chain_maps_group(alpha.source(), y)?;
    let hk = chain_maps_group(&k, y)?;
    let restrict = hp.induced(&hk, |h| h.compose(&incl))?;
    Ok(restrict.cokernel().0)
}

/// Epic tilde-precover assembled from the class's module precovers.
pub fn epic_precover(c: &ChainComplex, class: &ModuleClass, sampling: &Sampling) -> Result<PrecoverResult> {
    let lo = c.lo();
    let mut degree = lo;
    let map = disk_presentation(c, |m| {
        let p = class.precover(m);
        let d = degree;
        degree += 1;
        if !p.is_epic() {
            return Err(Error::ProviderNotEpic {
                class: class.name().to_string(),
                degree: d,
            });
        }
        Ok(p)
    })?;
    let certificate = certify_precover(&map, class, sampling)?;
    with_kernel(map, certificate)
}

fn dual_transport<F>(c: &ChainComplex, class: &ModuleClass, inner: F) -> Result<ChainMap>
where
    F: FnOnce(&ChainComplex) -> Result<ChainMap>,
{
    let dc = reverse_dual(c)?;
    let psi = inner(&dc.complex)?;
    let dl = reverse_dual(psi.source())?;
    let ddc = reverse_dual(&dc.complex)?;
    let dpsi = reverse_dual_map(&psi, &ddc, &dl)?;
    let ev = double_dual_evaluation(&dc, &ddc)?;
    let out = dpsi.compose(&ev)?;
    if class.tilde_membership(out.target()).is_err() && class.tilde_membership(psi.source()).is_ok() {
        return Err(Error::DualityUnstable(class.name().to_string()));
    }
    Ok(out)
}

/// Monic tilde-preenvelope obtained by dualizing the epic precover of the
/// reverse dual: `C → DD(C) → D(L)`.
pub fn monic_preenvelope(c: &ChainComplex, class: &ModuleClass, sampling: &Sampling) -> Result<PreenvelopeResult> {
    let map = dual_transport(c, class, |dc| Ok(epic_precover(dc, class, sampling)?.map))?;
    let certificate = certify_preenvelope(&map, class, sampling)?;
    with_cokernel(map, certificate)
}

/// `C ≅ ⊕ D^n(M_n)`: the summands and an explicit isomorphism.
#[derive(Clone, Debug)]
pub struct DiskDecomposition {
    pub pieces: Vec<(i32, FPModule)>,
    pub sum: ComplexSum,
    pub iso: ChainMap,
    pub inverse: ChainMap,
}

/// Splits each `0 → Z_i → C_i → Z_{i−1} → 0` by solving `δ_i s_i = 1`.
pub fn decompose_into_disks(c: &ChainComplex, class: &ModuleClass) -> Result<DiskDecomposition> {
    let ring = c.ring();
    if let Err(w) = class.tilde_membership(c) {
        return Err(match w {
            TildeWitness::NotExact { degree, homology_order } => Error::NotExact { degree, homology_order },
            TildeWitness::CycleNotInClass { degree, .. } => Error::CycleNotInClass {
                degree,
                class: class.name().to_string(),
            },
        });
    }
    let mut pieces = Vec::new();
    let mut disks = Vec::new();
    let mut sections: Vec<(i32, ModuleMorphism, ModuleMorphism)> = Vec::new();
    for i in c.degrees() {
        let (z, incl) = c.cycles(i - 1);
        if z.is_zero() {
            continue;
        }
        let mut sys = MorphismSystem::new(ring);
        let s = sys.unknown(&z, &c.term(i));
        sys.constrain(&z, &c.term(i - 1), vec![Term::new(s, 1).post(c.diff(i))], Some(incl.clone()))?;
        let Some(mut sol) = sys.solve()? else {
            let zi = c.cycles(i).0;
            return Err(Error::LiftingObstruction {
                degree: i,
                ext_divisors: ext1(&z, &zi)?.elementary_divisors(),
            });
        };
        sections.push((i, sol.remove(0), incl));
        pieces.push((i, z.clone()));
        disks.push(ChainComplex::disk(i, &z));
    }
    let sum = complex_direct_sum(ring, &disks)?;
    let maps: Vec<ChainMap> = sections
        .iter()
        .zip(&disks)
        .map(|((i, s, incl), d)| {
            ChainMap::from_fn(d, c, |m| {
                if m == *i {
                    Ok(s.clone())
                } else {
                    Ok(incl.clone())
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let target = c.restricted(
        sum.complex.support().map_or(c.lo(), |s| s.0.min(c.lo())),
        sum.complex.support().map_or(c.hi(), |s| s.1.max(c.hi())),
    );
    let maps: Vec<ChainMap> = maps
        .into_iter()
        .map(|f| ChainMap::new(f.source(), &target, f.components().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let iso = sum.copair(&maps, &target)?;
    let inverse = iso
        .inverse()
        .ok_or_else(|| Error::Invalid("assembled disk map is not an isomorphism".into()))?;
    Ok(DiskDecomposition {
        pieces,
        sum,
        iso,
        inverse,
    })
}

/// Nine objects and twelve maps: rows `0 → K_A → K_B → K_C → 0`,
/// `0 → L_1 → L_1 ⊕ L_3 → L_3 → 0`, `0 → A → B → C → 0`; columns
/// `0 → K_X → L_X → X → 0`.
#[derive(Clone, Debug)]
pub struct HorseshoeResult {
    pub kernel_row: ShortExactSequence,
    pub cover_row: ShortExactSequence,
    pub base_row: ShortExactSequence,
    pub left_column: ShortExactSequence,
    pub middle_column: ShortExactSequence,
    pub right_column: ShortExactSequence,
    /// The lift `L_3 → B` of `L_3 → C`.
    pub lift: ModuleMorphism,
    pub middle_sum: DirectSum,
    pub speciality: Level,
}

impl HorseshoeResult {
    pub fn middle(&self) -> &ModuleMorphism {
        &self.middle_column.epi
    }
}

/// Middle precover of a short exact sequence from precovers of its ends.
pub fn horseshoe_special_precover(
    ses: &ShortExactSequence,
    pc_a: &ModuleMorphism,
    pc_c: &ModuleMorphism,
    class: &ModuleClass,
    sampling: &Sampling,
) -> Result<HorseshoeResult> {
    let ring = ses.middle().ring();
    if !pc_a.is_epic() || !pc_c.is_epic() {
        return Err(Error::ProviderNotEpic {
            class: class.name().to_string(),
            degree: 0,
        });
    }
    let l1 = pc_a.source();
    let l3 = pc_c.source();
    let mut sys = MorphismSystem::new(ring);
    let s = sys.unknown(l3, ses.middle());
    sys.constrain(l3, ses.right(), vec![Term::new(s, 1).post(ses.epi.clone())], Some(pc_c.clone()))?;
    let Some(mut sol) = sys.solve()? else {
        return Err(Error::LiftingObstruction {
            degree: 0,
            ext_divisors: ext1(l3, ses.left())?.elementary_divisors(),
        });
    };
    let lift = sol.remove(0);
    let sum = direct_sum2(l1, l3)?;
    let f2 = sum.copair(&[ses.mono.compose(pc_a)?, lift.clone()])?;
    let cover_row = ShortExactSequence::new(sum.injections[0].clone(), sum.projections[1].clone())?;
    let left_column = ShortExactSequence::from_kernel(pc_a)?;
    let right_column = ShortExactSequence::from_kernel(pc_c)?;
    let (_, kb) = f2.kernel();
    let middle_column = ShortExactSequence::new(kb.clone(), f2.clone())
        .map_err(|e| Error::NotShortExact(format!("middle column: {e}")))?;
    let top_left = factor_through_mono(&sum.injections[0].compose(&left_column.mono)?, &kb)?;
    let top_right = factor_through_mono(&sum.projections[1].compose(&kb)?, &right_column.mono)?;
    let kernel_row = ShortExactSequence::new(top_left, top_right)
        .map_err(|e| Error::NotShortExact(format!("kernel row: {e}")))?;
    // commuting squares
    let ok = f2.compose(&sum.injections[0])?.equals(&ses.mono.compose(pc_a)?)
        && ses.epi.compose(&f2)?.equals(&pc_c.compose(&sum.projections[1])?);
    if !ok {
        return Err(Error::Invalid("horseshoe squares do not commute".into()));
    }
    let speciality = module_speciality(&kb, class, sampling)?;
    Ok(HorseshoeResult {
        kernel_row,
        cover_row,
        base_row: ses.clone(),
        left_column,
        middle_column,
        right_column,
        lift,
        middle_sum: sum,
        speciality,
    })
}

/// Level of `Ext¹(L, K) = 0` for class members `L`, where `K ↪ F` is the
/// kernel of a precover.
fn module_speciality(kernel: &ModuleMorphism, class: &ModuleClass, sampling: &Sampling) -> Result<Level> {
    let k = kernel.source();
    let r = FPModule::free(k.ring(), 1);
    if !ext1(&r, k)?.is_zero() {
        return Ok(Level::Failed);
    }
    let mut rng = sample::rng(sampling.seed);
    for _ in 0..sampling.samples.min(8) {
        let m = class.random_member(&mut rng);
        if !ext1(&m, k)?.is_zero() {
            return Ok(Level::Failed);
        }
    }
    Ok(if class.within_projectives() {
        Level::Proven
    } else {
        Level::Sampled
    })
}

/// Verdict of the exact-orthogonality check `Ext¹(G, C) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrthogonalityVerdict {
    Holds { level: Level },
    HypothesisViolated { reason: String },
    ConclusionFailed { ext_divisors: Vec<u64> },
}

/// Checks the hypotheses (`G, C` exact; terms and cycles of `G` in the
/// class; terms and cycles of `C` right-orthogonal to sampled members) and
/// then computes `Ext¹(G, C)`.
pub fn verify_exact_orthogonality(
    g: &ChainComplex,
    c: &ChainComplex,
    class: &ModuleClass,
    sampling: &Sampling,
) -> Result<OrthogonalityVerdict> {
    for (name, x) in [("G", g), ("C", c)] {
        if let Err((d, h)) = x.exactness() {
            return Ok(OrthogonalityVerdict::HypothesisViolated {
                reason: format!("{name} is not exact at degree {d} (homology of order {h})"),
            });
        }
    }
    for m in g.degrees() {
        if !class.contains(&g.term(m)) || !class.contains(&g.cycles(m).0) {
            return Ok(OrthogonalityVerdict::HypothesisViolated {
                reason: format!("term or cycles of G at degree {m} not in {}", class.name()),
            });
        }
    }
    let mut rng = sample::rng(sampling.seed);
    let mut members = vec![FPModule::free(class.ring(), 1)];
    for _ in 0..sampling.samples {
        members.push(class.random_member(&mut rng));
    }
    for m in c.degrees() {
        for x in [c.term(m), c.cycles(m).0] {
            for l in &members {
                if !ext1(l, &x)?.is_zero() {
                    return Ok(OrthogonalityVerdict::HypothesisViolated {
                        reason: format!("term or cycles of C at degree {m} not right-orthogonal to the class"),
                    });
                }
            }
        }
    }
    let e = ext1_ch(g, c)?;
    if !e.is_zero() {
        return Ok(OrthogonalityVerdict::ConclusionFailed {
            ext_divisors: e.elementary_divisors(),
        });
    }
    Ok(OrthogonalityVerdict::Holds {
        level: if class.within_projectives() {
            Level::Proven
        } else {
            Level::Sampled
        },
    })
}

/// Pastes horseshoes over `0 → Z_i → E_i → Z_{i−1} → 0` using the given
/// cycle precovers.
fn paste_horseshoes<F>(e: &ChainComplex, class: &ModuleClass, sampling: &Sampling, mut provider: F) -> Result<ChainMap>
where
    F: FnMut(&FPModule) -> Result<ModuleMorphism>,
{
    let Some((lo, hi)) = e.support() else {
        return Ok(ChainMap::identity(e));
    };
    if let Err((degree, homology_order)) = e.exactness() {
        return Err(Error::NotExact { degree, homology_order });
    }
    let ring = e.ring();
    let cycles: Vec<(FPModule, ModuleMorphism)> = (lo - 1..=hi).map(|m| e.cycles(m)).collect();
    let cyc = |m: i32| &cycles[(m - lo + 1) as usize];
    let covers: Vec<ModuleMorphism> = (lo - 1..=hi)
        .map(|m| {
            let p = provider(&cyc(m).0)?;
            if !p.is_epic() {
                return Err(Error::ProviderNotEpic {
                    class: class.name().to_string(),
                    degree: m,
                });
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let cover = |m: i32| &covers[(m - lo + 1) as usize];
    let mut shoes = Vec::new();
    for i in lo..=hi {
        let (_, zi) = cyc(i);
        let (_, zprev) = cyc(i - 1);
        let q = factor_through_mono(&e.diff(i), zprev)?;
        let ses = ShortExactSequence::new(zi.clone(), q)
            .map_err(|err| Error::NotShortExact(format!("degree {i}: {err}")))?;
        let shoe = horseshoe_special_precover(&ses, cover(i), cover(i - 1), class, sampling).map_err(|err| match err {
            Error::LiftingObstruction { ext_divisors, .. } => Error::LiftingObstruction { degree: i, ext_divisors },
            other => other,
        })?;
        shoes.push(shoe);
    }
    let shoe = |i: i32| &shoes[(i - lo) as usize];
    let mut diffs = Vec::new();
    for i in lo + 1..=hi {
        // (a, c) ↦ (c, 0)
        diffs.push(shoe(i - 1).middle_sum.injections[0].compose(&shoe(i).middle_sum.projections[1])?);
    }
    let l = ChainComplex::new(ring, lo, shoes.iter().map(|s| s.middle_sum.module.clone()).collect(), diffs)?;
    let comps = shoes.iter().map(|s| s.middle().clone()).collect();
    ChainMap::new(&l, e, comps)
}

/// Special tilde-precover of an exact complex by horseshoes at every degree.
pub fn special_precover_exact(e: &ChainComplex, class: &ModuleClass, sampling: &Sampling) -> Result<PrecoverResult> {
    let map = paste_horseshoes(e, class, sampling, |m| Ok(class.precover(m)))?;
    let certificate = certify_special(&map, class, sampling)?;
    with_kernel(map, certificate)
}

fn minimal_cover(class: &ModuleClass, m: &FPModule) -> Result<ModuleMorphism> {
    match class.kind() {
        ClassKind::Free => minimal_free_cover(m),
        ClassKind::Projective | ClassKind::Injective => Ok(projective_cover(m)),
        ClassKind::All => Ok(ModuleMorphism::identity(m)),
    }
}

/// Tilde-cover of a complex whose terms and cycles are right-orthogonal to
/// the class, from minimal covers of the cycles; the kernel is checked to be
/// degreewise superfluous.
pub fn cover_on_orthogonal(c: &ChainComplex, class: &ModuleClass, sampling: &Sampling) -> Result<PrecoverResult> {
    if let Err((degree, homology_order)) = c.exactness() {
        return Err(Error::NotExact { degree, homology_order });
    }
    if class.kind() == ClassKind::All {
        // the right orthogonal of all modules is the injectives
        let inj = ModuleClass::new(ClassKind::Injective, class.ring());
        for m in c.degrees() {
            if !inj.contains(&c.cycles(m).0) {
                return Err(Error::CycleNotInClass {
                    degree: m,
                    class: "Injective".into(),
                });
            }
        }
    }
    let map = paste_horseshoes(c, class, sampling, |m| minimal_cover(class, m))?;
    let mut certificate = certify_precover(&map, class, sampling)?;
    let result = with_kernel(map, certificate.clone())?;
    for m in result.kernel.degrees() {
        let incl = result.kernel_inclusion.comp(m);
        if !generated_in_radical(incl.target(), incl.images()) {
            certificate.level = Level::Failed;
            certificate.witness = Some(Witness::NotMonic { degree: m });
        }
    }
    if !certificate.is_failed() {
        certificate.checks.push("kernel-superfluous".into());
    }
    Ok(PrecoverResult { certificate, ..result })
}

/// Composite `L → E → C` of a precover of `E` with an exact precover of `C`,
/// re-certified.
pub fn precover_via_exact_cover(
    c: &ChainComplex,
    exact_precover: &ChainMap,
    precover_of_e: &PrecoverResult,
    class: &ModuleClass,
    sampling: &Sampling,
) -> Result<PrecoverResult> {
    let e = exact_precover.source();
    if let Err((degree, homology_order)) = e.exactness() {
        return Err(Error::NotExact { degree, homology_order });
    }
    if !c.same_shape(exact_precover.target()) {
        return Err(Error::Dimension("exact precover does not target the complex".into()));
    }
    let map = exact_precover.compose(&precover_of_e.map)?;
    let certificate = certify_precover(&map, class, sampling)?;
    with_kernel(map, certificate)
}

/// How a special precover was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Exact,
    Projective,
    Supplied,
}

#[derive(Clone, Debug)]
pub struct SpecialPrecover {
    pub result: PrecoverResult,
    pub route: Route,
    /// For the supplied route: `0 → G → W → K → 0` with `W` the kernel.
    pub layers: Option<(ChainMap, ChainMap)>,
}

/// Level of `K` lying in the right orthogonal of exact complexes.
fn exact_orthogonal_level(k: &ChainComplex, sampling: &Sampling) -> Result<(Level, Option<Witness>)> {
    let inj = ModuleClass::new(ClassKind::Injective, k.ring());
    if k.degrees().all(|m| inj.contains(&k.term(m))) {
        return Ok((Level::Proven, None));
    }
    let mut rng = sample::rng(sampling.seed ^ 0xe4ac7);
    for _ in 0..sampling.samples {
        let t = sample::random_exact_complex(k.ring(), &mut rng, 2);
        let e = ext1_ch(&t, k)?;
        if !e.is_zero() {
            return Ok((
                Level::Failed,
                Some(Witness::NonzeroExt {
                    left: t.to_json(),
                    right: k.to_json(),
                    ext_divisors: e.elementary_divisors(),
                }),
            ));
        }
    }
    Ok((Level::Sampled, None))
}

/// Special tilde-precover of an arbitrary bounded complex, by whichever
/// route applies.
pub fn special_precover_any(
    c: &ChainComplex,
    class: &ModuleClass,
    supplied: Option<&ChainMap>,
    sampling: &Sampling,
) -> Result<SpecialPrecover> {
    if c.is_exact() {
        return Ok(SpecialPrecover {
            result: special_precover_exact(c, class, sampling)?,
            route: Route::Exact,
            layers: None,
        });
    }
    if let Some(eps) = supplied {
        let e = eps.source();
        if let Err((degree, homology_order)) = e.exactness() {
            return Err(Error::NotExact { degree, homology_order });
        }
        if let Some(d) = eps.non_epic_degree() {
            return Err(Error::Invalid(format!("supplied exact precover is not epic at degree {d}")));
        }
        let (k, k_incl) = chainmap_kernel(eps)?;
        let (k_level, k_witness) = exact_orthogonal_level(&k, sampling)?;
        let inner = special_precover_exact(e, class, sampling)?;
        let wp = complex_pullback(&inner.map, &k_incl)?;
        let w_to_k = wp.to_second.clone();
        let w_to_l = wp.to_first.clone();
        let g_to_w = crate::complex::lift_through(&inner.kernel_inclusion, &w_to_l)?
            .map(Ok)
            .unwrap_or_else(|| {
                Err(Error::Invalid("kernel of the exact precover does not factor through the pullback".into()))
            })?;
        let map = eps.compose(&inner.map)?;
        let mut certificate = certify_special(&map, class, sampling)?;
        certificate.absorb(&inner.certificate);
        certificate.cap(k_level);
        if certificate.witness.is_none() {
            certificate.witness = k_witness;
        }
        certificate.checks.push(format!("kernel-exact-orthogonal:{}", k_level.as_str()));
        let g_to_w = ChainMap::new(&inner.kernel, &wp.complex, g_to_w.components().to_vec())?;
        let result = PrecoverResult {
            map,
            kernel: wp.complex.clone(),
            kernel_inclusion: w_to_l,
            certificate,
        };
        return Ok(SpecialPrecover {
            result,
            route: Route::Supplied,
            layers: Some((g_to_w, w_to_k)),
        });
    }
    if class.within_projectives() {
        let pre = epic_precover(c, class, sampling)?;
        let certificate = certify_special(&pre.map, class, sampling)?;
        return Ok(SpecialPrecover {
            result: PrecoverResult { certificate, ..pre },
            route: Route::Projective,
            layers: None,
        });
    }
    Err(Error::NoRoute)
}

/// Special tilde-preenvelope by dual transport of the special precover.
pub fn special_preenvelope_any(
    c: &ChainComplex,
    class: &ModuleClass,
    supplied: Option<&ChainMap>,
    sampling: &Sampling,
) -> Result<PreenvelopeResult> {
    let dual_supplied = match supplied {
        Some(phi) => {
            let de = reverse_dual(phi.target())?;
            let dc = reverse_dual(phi.source())?;
            Some(reverse_dual_map(phi, &de, &dc)?)
        }
        None => None,
    };
    let map = dual_transport(c, class, |dc| {
        let supplied = dual_supplied.map(|f| {
            let comps = f.components().to_vec();
            ChainMap::new(f.source(), dc, comps)
        });
        let supplied = supplied.transpose()?;
        Ok(special_precover_any(dc, class, supplied.as_ref(), sampling)?.result.map)
    })?;
    let certificate = certify_special_preenvelope(&map, class, sampling)?;
    with_cokernel(map, certificate)
}

/// A named fixture: a claimed cover and its certificate.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub map: ChainMap,
    pub certificate: Certificate,
    /// Kernel of the map is degreewise inside the radical of the source.
    pub superfluous_kernel: bool,
}

fn degreewise_superfluous(phi: &ChainMap) -> Result<bool> {
    let (k, incl) = chainmap_kernel(phi)?;
    Ok(k.degrees().all(|m| {
        let i = incl.comp(m);
        generated_in_radical(i.target(), i.images())
    }))
}

fn scenario(name: &str, map: ChainMap, class: &ModuleClass, sampling: &Sampling) -> Result<Scenario> {
    let mut certificate = certify_precover(&map, class, sampling)?;
    let superfluous_kernel = degreewise_superfluous(&map)?;
    if !superfluous_kernel && !certificate.is_failed() {
        certificate.level = Level::Failed;
    }
    certificate.kind = ClaimKind::Precover;
    Ok(Scenario {
        name: name.to_string(),
        map,
        certificate,
        superfluous_kernel,
    })
}

/// The four cover fixtures over `Z/4` with the free class, `L = R` and
/// `M = Z/2`, plus their degenerate `M = 0` forms.
pub fn example_scenarios(sampling: &Sampling) -> Result<Vec<Scenario>> {
    let ring = crate::ring::RingSpec::new(4)?;
    let class = ModuleClass::new(ClassKind::Free, &ring);
    let r = FPModule::free(&ring, 1);
    let mut out = Vec::new();
    for (tag, m) in [("", FPModule::cyclic(&ring, 2)), (" (M = 0)", FPModule::zero(&ring))] {
        let f = minimal_free_cover(&m)?;
        let l = f.source().clone();
        // (1) D^n(f) for a few n
        for n in [0, 1] {
            out.push(scenario(&format!("disk-of-cover n={n}{tag}"), disk_map(n, &f), &class, sampling)?);
        }
        // (2) [L = L] → [L → M]
        let top = ChainComplex::disk(1, &l);
        let bottom = ChainComplex::new(&ring, 0, vec![m.clone(), l.clone()], vec![f.clone()])?;
        let phi = ChainMap::new(&top, &bottom, vec![f.clone(), ModuleMorphism::identity(&l)])?;
        out.push(scenario(&format!("two-term{tag}"), phi, &class, sampling)?);
        // (3) 0 → L → X → L' → 0 over 0 → L → G → M → 0, with G = L ⊕ M
        let seq2 = ShortExactSequence::split(&r, &m)?;
        let cover_m = minimal_free_cover(&m)?;
        let pb = crate::morphism::pullback(&seq2.epi, &cover_m)?;
        let x = pb.module.clone();
        let l_to_x = factor_through_mono(&seq2.mono, &pb.to_first)
            .ok()
            .map(Ok)
            .unwrap_or_else(|| pullback_pair(&pb, &seq2.mono, &ModuleMorphism::zero(&r, cover_m.source())))?;
        let seq1 = ChainComplex::new(&ring, 0, vec![cover_m.source().clone(), x.clone(), r.clone()], vec![pb.to_second.clone(), l_to_x.clone()])?;
        let seq2c = ChainComplex::new(&ring, 0, vec![m.clone(), seq2.middle().clone(), r.clone()], vec![seq2.epi.clone(), seq2.mono.clone()])?;
        let phi = ChainMap::new(&seq1, &seq2c, vec![cover_m.clone(), pb.to_first.clone(), ModuleMorphism::identity(&r)])?;
        out.push(scenario(&format!("pullback-left{tag}"), phi, &class, sampling)?);
        // (4) 0 → X → L' → L → 0 over 0 → N → M' → L → 0, with N = M, M' = M ⊕ L
        let seq4 = ShortExactSequence::split(&m, &r)?;
        let cover_mid = minimal_free_cover(seq4.middle())?;
        let to_l = seq4.epi.compose(&cover_mid)?;
        let (x4, x_incl) = to_l.kernel();
        let x_to_n = factor_through_mono(&cover_mid.compose(&x_incl)?, &seq4.mono)?;
        let seq3 = ChainComplex::new(&ring, 0, vec![r.clone(), cover_mid.source().clone(), x4.clone()], vec![to_l.clone(), x_incl.clone()])?;
        let seq4c = ChainComplex::new(&ring, 0, vec![r.clone(), seq4.middle().clone(), m.clone()], vec![seq4.epi.clone(), seq4.mono.clone()])?;
        let phi = ChainMap::new(&seq3, &seq4c, vec![ModuleMorphism::identity(&r), cover_mid.clone(), x_to_n])?;
        out.push(scenario(&format!("pullback-right{tag}"), phi, &class, sampling)?);
    }
    Ok(out)
}

/// The map into a pullback with the given components.
fn pullback_pair(
    pb: &crate::morphism::Pullback,
    to_first: &ModuleMorphism,
    to_second: &ModuleMorphism,
) -> Result<ModuleMorphism> {
    let sum = direct_sum2(pb.to_first.target(), pb.to_second.target())?;
    let pair = sum.pair(&[to_first.clone(), to_second.clone()])?;
    let incl = sum.pair(&[pb.to_first.clone(), pb.to_second.clone()])?;
    factor_through_mono(&pair, &incl)
}
