use std::time::{Duration, Instant};

use precover_core::certify::{
    certify_precover, certify_preenvelope, certify_self_orthogonality, certify_special, module_lift, oracle_ext_agreement,
    oracle_hom, Level, Sampling, Witness,
};
use precover_core::classes::{ClassKind, ModuleClass};
use precover_core::complex::{
    complex_direct_sum, double_dual_evaluation, reverse_dual, ChainComplex, ChainMap,
};
use precover_core::constructions::{
    decompose_into_disks, epic_precover, ext1_ch, horseshoe_special_precover, special_precover_exact,
    special_preenvelope_any,
};
use precover_core::hom::{ext1, hom_group};
use precover_core::morphism::{direct_sum2, morphism_sum};
use precover_core::sample::{self, random_complex, random_disk_sum, random_module, random_ses};
use precover_core::{FPModule, MatrixZn, ModuleMorphism, RingSpec, ShortExactSequence};

type Outcome = Result<String, String>;

fn ring(n: u64) -> RingSpec {
    RingSpec::new(n).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Free for local rings, Projective otherwise, alternating with Projective.
fn classes_for(r: &RingSpec) -> Vec<ModuleClass> {
    vec![ModuleClass::new(ClassKind::Free, r), ModuleClass::new(ClassKind::Projective, r)]
}

fn construction_soundness() -> Outcome {
    let mut count = 0;
    let mut slowest = Duration::ZERO;
    for n in [4, 8, 9, 12] {
        let r = ring(n);
        for class in classes_for(&r) {
            let mut rng = sample::rng(1000 + n);
            for k in 0..200u64 {
                let c = random_complex(&r, &mut rng, 5, 3);
                let start = Instant::now();
                let out = epic_precover(&c, &class, &Sampling::new(k, 6)).map_err(err)?;
                ensure(!out.certificate.is_failed(), || format!("Z/{n} {} #{k}: {:?}", class.name(), out.certificate))?;
                let again = certify_precover(&out.map, &class, &Sampling::new(k + 7919, 6)).map_err(err)?;
                ensure(again.level == out.certificate.level, || format!("Z/{n} #{k}: level changed on fresh seed"))?;
                ensure(again.checks.iter().any(|s| s == "generator-disk-factorization"), || {
                    format!("Z/{n} #{k}: generator disks not checked")
                })?;
                ensure(class.tilde_membership(out.map.source()).is_ok(), || format!("Z/{n} #{k}: source not in tilde"))?;
                ensure(out.map.is_epic(), || format!("Z/{n} #{k}: not degreewise epic"))?;
                slowest = slowest.max(start.elapsed());
                count += 1;
            }
        }
    }
    ensure(slowest < Duration::from_secs(1), || format!("slowest instance {slowest:?}"))?;
    Ok(format!("{count} instances, slowest {:.1} ms", slowest.as_secs_f64() * 1e3))
}

fn generator_disks(r: &RingSpec, lo: i32, hi: i32) -> Vec<ChainComplex> {
    let free = FPModule::free(r, 1);
    (lo..=hi + 1).map(|i| ChainComplex::disk(i, &free)).collect()
}

fn special_exact() -> Outcome {
    let mut count = 0;
    let mut kernel_order = 0u64;
    let rings = [4, 8, 9, 12];
    for k in 0..100u64 {
        let n = rings[(k % 4) as usize];
        let r = ring(n);
        let class = &classes_for(&r)[(k / 4 % 2) as usize];
        let mut rng = sample::rng(2000 + k);
        let e = sample::random_exact_complex(&r, &mut rng, 2);
        let out = special_precover_exact(&e, class, &Sampling::new(k, 4)).map_err(err)?;
        kernel_order += out.kernel.total_order();
        ensure(out.kernel.is_exact(), || format!("#{k}: kernel not exact"))?;
        ensure(out.map.is_epic(), || format!("#{k}: not epic"))?;
        let Some((lo, hi)) = out.kernel.support() else {
            count += 1;
            continue;
        };
        let mut tests = generator_disks(&r, lo, hi);
        for _ in 0..20 {
            tests.push(class.random_tilde_member(&mut rng, lo - 1, hi + 1));
        }
        for t in &tests {
            let x = ext1_ch(t, &out.kernel).map_err(err)?;
            ensure(x.is_zero(), || format!("#{k} over Z/{n}: ext1_ch(T, K) has divisors {:?}", x.elementary_divisors()))?;
        }
        count += 1;
    }
    Ok(format!("{count} exact complexes, generator disks + 20 members each, kernel orders summing to {kernel_order}"))
}

fn decomposition_round_trip() -> Outcome {
    let mut count = 0;
    let mut pieces = 0;
    for k in 0..100u64 {
        let r = ring([4, 8, 9, 12][(k % 4) as usize]);
        let mut rng = sample::rng(3000 + k);
        let (class, c) = if k % 2 == 0 {
            let all = ModuleClass::new(ClassKind::All, &r);
            let c = random_disk_sum(&r, &mut rng, -2, 2, 3, |g| random_module(&r, g, 2));
            (all, c)
        } else {
            let proj = ModuleClass::new(ClassKind::Projective, &r);
            let c = random_disk_sum(&r, &mut rng, -2, 2, 3, |g| proj.random_member(g));
            (proj, c)
        };
        let dec = decompose_into_disks(&c, &class).map_err(err)?;
        pieces += dec.pieces.len();
        let disks: Vec<ChainComplex> = dec.pieces.iter().map(|(n, m)| ChainComplex::disk(*n, m)).collect();
        let rebuilt = complex_direct_sum(&r, &disks).map_err(err)?;
        ensure(rebuilt.complex.same_shape(dec.iso.source()), || format!("#{k}: rebuilt sum differs"))?;
        let there = dec.inverse.compose(&dec.iso).map_err(err)?;
        let back = dec.iso.compose(&dec.inverse).map_err(err)?;
        ensure(there.equals(&ChainMap::identity(dec.iso.source())), || format!("#{k}: inverse∘iso ≠ 1"))?;
        ensure(back.equals(&ChainMap::identity(dec.iso.target())), || format!("#{k}: iso∘inverse ≠ 1"))?;
        ensure(
            c.degrees().all(|m| c.term(m).is_isomorphic(&rebuilt.complex.term(m))),
            || format!("#{k}: terms differ"),
        )?;
        count += 1;
    }
    Ok(format!("{count} disk sums reassembled from {pieces} disks"))
}

fn duality_transport() -> Outcome {
    let mut count = 0;
    for k in 0..100u64 {
        let n = [4, 8, 9, 12][(k % 4) as usize];
        let r = ring(n);
        let class = &classes_for(&r)[(k / 4 % 2) as usize];
        let mut rng = sample::rng(4000 + k);
        let c = random_complex(&r, &mut rng, 4, 2);
        let s = Sampling::new(k, 4);
        let out = special_preenvelope_any(&c, class, None, &s).map_err(err)?;
        ensure(out.map.is_monic(), || format!("#{k}: not monic"))?;
        let cert = certify_preenvelope(&out.map, class, &s).map_err(err)?;
        ensure(!cert.is_failed(), || format!("#{k} over Z/{n}: {cert:?}"))?;
        let d = reverse_dual(&c).map_err(err)?;
        let dd = reverse_dual(&d.complex).map_err(err)?;
        let ev = double_dual_evaluation(&d, &dd).map_err(err)?;
        ensure(ev.is_iso(), || format!("#{k}: double dual evaluation not iso"))?;
        count += 1;
    }
    Ok(format!("{count} complexes transported"))
}

fn pinned_values() -> Outcome {
    let r = ring(4);
    let two = FPModule::cyclic(&r, 2);
    let free = FPModule::free(&r, 1);
    let hom = hom_group(&two, &free).map_err(err)?.module().order();
    ensure(hom == 2 && oracle_hom(&two, &free).map_err(err)? == 2, || format!("|Hom(Z/2, R)| = {hom}"))?;
    let e = ext1(&two, &two).map_err(err)?;
    ensure(e.elementary_divisors() == vec![2], || format!("ext1(Z/2, Z/2) = {:?}", e.elementary_divisors()))?;
    ensure(ext1(&two, &free).map_err(err)?.is_zero(), || "ext1(Z/2, R) ≠ 0".into())?;
    let stalk = ChainComplex::stalk(0, &two);
    let ec = ext1_ch(&stalk, &stalk).map_err(err)?;
    ensure(ec.elementary_divisors() == vec![2], || format!("ext1_ch(stalk, stalk) = {:?}", ec.elementary_divisors()))?;
    let disk = ChainComplex::disk(0, &free);
    let mut rng = sample::rng(5);
    for k in 0..50 {
        let y = random_complex(&r, &mut rng, 4, 2);
        let x = ext1_ch(&disk, &y).map_err(err)?;
        ensure(x.is_zero(), || format!("ext1_ch(D^0(R), Y#{k}) = {:?}", x.elementary_divisors()))?;
    }
    Ok("Hom, Ext and chain Ext values match over Z/4".into())
}

/// Products of prime-power cyclic orders with total order at most `bound`.
fn divisor_patterns(r: &RingSpec, bound: u64) -> Vec<Vec<u64>> {
    let qs = r.prime_power_divisors();
    let mut out = vec![vec![]];
    let mut frontier = vec![(vec![], 1u64, 0usize)];
    while let Some((pat, ord, from)) = frontier.pop() {
        for (i, &q) in qs.iter().enumerate().skip(from) {
            if ord * q <= bound {
                let mut p: Vec<u64> = pat.clone();
                p.push(q);
                out.push(p.clone());
                frontier.push((p, ord * q, i));
            }
        }
    }
    out
}

fn oracle_exhaustion() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for n in [4, 9] {
        let r = ring(n);
        // each pattern both diagonally and through a scrambled presentation
        let mut mods = Vec::new();
        for p in divisor_patterns(&r, 16) {
            let m = FPModule::from_cyclic_orders(&r, &p);
            mods.push(m.clone());
            if p.len() >= 2 {
                let mut rels: Vec<Vec<i64>> = Vec::new();
                for (i, &q) in p.iter().enumerate() {
                    let mut row = vec![0i64; p.len()];
                    row[i] = q as i64;
                    if i + 1 < p.len() {
                        row[i + 1] = q as i64;
                    }
                    rels.push(row);
                }
                let re = FPModule::from_presentation(&r, p.len(), &MatrixZn::from_rows(&r, p.len(), &rels).map_err(err)?)
                    .map_err(err)?;
                mods.push(re);
            }
        }
        for a in &mods {
            for b in &mods {
                let h = hom_group(a, b).map_err(err)?.module().order();
                let o = oracle_hom(a, b).map_err(err)?;
                ensure(h == o, || format!("Z/{n}: |Hom| {h} vs oracle {o}"))?;
                ensure(oracle_ext_agreement(a, b).map_err(err)?, || format!("Z/{n}: Ext methods disagree"))?;
                pairs += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{pairs} module pairs in {:.2} s", t.as_secs_f64()))
}

fn check_ses(s: &ShortExactSequence, what: &str) -> Result<(), String> {
    let ok = s.mono.is_monic()
        && s.epi.is_epic()
        && s.epi.compose(&s.mono).map_err(err)?.is_zero()
        && s.left().order() * s.right().order() == s.middle().order();
    ensure(ok, || format!("{what} not short exact"))
}

fn horseshoes() -> Outcome {
    let mut count = 0;
    let mut nonsplit = 0;
    for k in 0..100u64 {
        let n = [4, 8, 9, 12][(k % 4) as usize];
        let r = ring(n);
        let class = &classes_for(&r)[(k / 4 % 2) as usize];
        let mut rng = sample::rng(7000 + k);
        let ses = random_ses(&r, &mut rng, 3);
        let s = Sampling::new(k, 4);
        let pa = class.precover(ses.left());
        let pc = class.precover(ses.right());
        let out = horseshoe_special_precover(&ses, &pa, &pc, class, &s).map_err(err)?;
        nonsplit += usize::from(ext1(ses.right(), ses.left()).map_err(err)?.order() > 1 && !ses.left().is_zero());
        for (row, name) in [
            (&out.kernel_row, "kernel row"),
            (&out.cover_row, "cover row"),
            (&out.base_row, "base row"),
            (&out.left_column, "left column"),
            (&out.middle_column, "middle column"),
            (&out.right_column, "right column"),
        ] {
            check_ses(row, &format!("#{k} {name}"))?;
        }
        ensure(out.speciality != Level::Failed, || format!("#{k}: speciality failed"))?;
        for _ in 0..4 {
            let l = class.random_member(&mut rng);
            let f = sample::random_morphism(&l, ses.middle(), &mut rng);
            ensure(module_lift(&f, out.middle()).map_err(err)?.is_some(), || format!("#{k}: middle map not a precover"))?;
        }
        count += 1;
    }
    let r = ring(8);
    let class = ModuleClass::new(ClassKind::Free, &r);
    let a = FPModule::cyclic(&r, 2);
    let c = FPModule::from_cyclic_orders(&r, &[4, 8]);
    let ses = ShortExactSequence::split(&a, &c).map_err(err)?;
    let pa = class.precover(&a);
    let pc = class.precover(&c);
    let out = horseshoe_special_precover(&ses, &pa, &pc, &class, &Sampling::default()).map_err(err)?;
    let expect = morphism_sum(&out.middle_sum, &direct_sum2(&a, &c).map_err(err)?, &[pa, pc]);
    ensure(out.middle().equals(&expect), || "split case is not the sum of the end precovers".into())?;
    Ok(format!("{count} sequences ({nonsplit} with Ext¹(C, A) ≠ 0), split case exact"))
}

fn negative_controls() -> Outcome {
    let r = ring(4);
    let free = ModuleClass::new(ClassKind::Free, &r);
    let s = Sampling::default();
    let two = FPModule::cyclic(&r, 2);
    let stalk = ChainComplex::stalk(0, &two);
    let id = ChainMap::identity(&stalk);
    let a = certify_precover(&id, &free, &s).map_err(err)?;
    let wa = a.witness.as_ref().ok_or("(a) no witness")?;
    ensure(a.level == Level::Failed && matches!(wa, Witness::NotInTilde { .. }), || "(a) not detected".into())?;
    ensure(wa.recheck(Some(&id), &free).map_err(err)?, || "(a) witness does not replay".into())?;

    let rr = FPModule::free(&r, 1);
    let incl = ModuleMorphism::from_matrix(&two, &rr, &MatrixZn::from_rows(&r, 1, &[vec![2]]).map_err(err)?).map_err(err)?;
    let phi = precover_core::complex::disk_map(0, &incl);
    let b = certify_special(&phi, &free, &s).map_err(err)?;
    let wb = b.witness.as_ref().ok_or("(b) no witness")?;
    ensure(b.level == Level::Failed && matches!(wb, Witness::NotEpic { .. }), || "(b) not detected".into())?;
    ensure(wb.recheck(Some(&phi), &free).map_err(err)?, || "(b) witness does not replay".into())?;

    let all = ModuleClass::new(ClassKind::All, &r).with_self_orthogonal_claim(true);
    let c = certify_self_orthogonality(&all, &s).map_err(err)?;
    let Some(Witness::NotSelfOrthogonal(w)) = &c.witness else {
        return Err("(c) no orthogonality witness".into());
    };
    ensure(c.level == Level::Failed, || "(c) not detected".into())?;
    ensure(w.ext_divisors == vec![2], || format!("(c) ext divisors {:?}", w.ext_divisors))?;
    ensure(c.witness.as_ref().unwrap().recheck(None, &all).map_err(err)?, || "(c) witness does not replay".into())?;
    Ok("3/3 detected with replayable witnesses".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("construction soundness", construction_soundness),
        ("special precover of exact complexes", special_exact),
        ("disk decomposition round-trip", decomposition_round_trip),
        ("duality transport", duality_transport),
        ("pinned values over Z/4", pinned_values),
        ("oracle exhaustion", oracle_exhaustion),
        ("horseshoe", horseshoes),
        ("negative controls", negative_controls),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {secs:.2} s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({why})", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
