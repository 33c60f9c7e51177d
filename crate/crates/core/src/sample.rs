//! Seeded random generators for modules, morphisms, complexes and sequences.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{complex_direct_sum, chain_maps_group, ChainComplex, ChainMap};
use crate::hom::hom_group;
use crate::matrix::MatrixZn;
use crate::module::FPModule;
use crate::morphism::{ModuleMorphism, ShortExactSequence};
use crate::ring::RingSpec;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform element of a module, in internal coordinates.
pub fn random_element<R: Rng>(m: &FPModule, rng: &mut R) -> Vec<u64> {
    m.divisors().iter().map(|&d| rng.gen_range(0..d)).collect()
}

/// Module given by a random presentation with at most `max_gens` generators.
pub fn random_module<R: Rng>(ring: &RingSpec, rng: &mut R, max_gens: usize) -> FPModule {
    let g = rng.gen_range(0..=max_gens);
    let r = rng.gen_range(0..=g);
    let n = ring.modulus() as i64;
    let proper: Vec<i64> = ring.divisors().into_iter().filter(|&d| d > 1 && d < ring.modulus()).map(|d| d as i64).collect();
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| {
            (0..g)
                .map(|_| match rng.gen_range(0..10) {
                    0..=3 => 0,
                    4..=7 if !proper.is_empty() => proper[rng.gen_range(0..proper.len())] * rng.gen_range(1..n) % n,
                    _ => rng.gen_range(0..n),
                })
                .collect()
        })
        .collect();
    let rel = MatrixZn::from_rows(ring, g, &rows).expect("entries are reduced");
    FPModule::from_presentation(ring, g, &rel).expect("shape is consistent")
}

/// Direct sum of at most `max` cyclic modules with orders drawn from `orders`.
pub fn random_cyclic_sum<R: Rng>(ring: &RingSpec, rng: &mut R, orders: &[u64], max: usize) -> FPModule {
    let k = rng.gen_range(0..=max);
    let picked: Vec<u64> = (0..k).map(|_| orders[rng.gen_range(0..orders.len())]).collect();
    FPModule::from_cyclic_orders(ring, &picked)
}

/// Uniform morphism `M → N`.
pub fn random_morphism<R: Rng>(m: &FPModule, n: &FPModule, rng: &mut R) -> ModuleMorphism {
    let h = hom_group(m, n).expect("same ring");
    h.decode(&random_element(h.module(), rng))
}

/// Bounded complex with support length at most `max_len`, built from the
/// bottom: each differential is a random map into the cycles below.
pub fn random_complex<R: Rng>(ring: &RingSpec, rng: &mut R, max_len: usize, max_gens: usize) -> ChainComplex {
    let len = rng.gen_range(1..=max_len);
    let lo = rng.gen_range(-2..=1);
    let mut terms = vec![random_module(ring, rng, max_gens)];
    let mut diffs: Vec<ModuleMorphism> = Vec::new();
    for k in 1..len {
        let t = random_module(ring, rng, max_gens);
        let below = &terms[k - 1];
        let (z, incl) = match diffs.last() {
            Some(d) => d.kernel(),
            None => (below.clone(), ModuleMorphism::identity(below)),
        };
        let f = random_morphism(&t, &z, rng);
        diffs.push(incl.compose(&f).expect("composable"));
        terms.push(t);
    }
    ChainComplex::new(ring, lo, terms, diffs).expect("differentials square to zero by construction")
}

/// Finite sum of disks on modules drawn by `draw`, all inside degrees
/// `[lo, hi]`.
pub fn random_disk_sum<R: Rng, F>(ring: &RingSpec, rng: &mut R, lo: i32, hi: i32, max_disks: usize, mut draw: F) -> ChainComplex
where
    F: FnMut(&mut R) -> FPModule,
{
    let k = rng.gen_range(1..=max_disks.max(1));
    let disks: Vec<ChainComplex> = (0..k)
        .map(|_| {
            let n = rng.gen_range(lo + 1..=hi.max(lo + 1));
            ChainComplex::disk(n, &draw(rng))
        })
        .collect();
    complex_direct_sum(ring, &disks).expect("same ring").complex
}

/// Exact complex of support length at most 5 built as a sum of disks on
/// random modules.
pub fn random_exact_complex<R: Rng>(ring: &RingSpec, rng: &mut R, max_gens: usize) -> ChainComplex {
    let lo = rng.gen_range(-2..=0);
    let hi = lo + rng.gen_range(1..=4);
    random_disk_sum(ring, rng, lo, hi, 3, |r| random_module(ring, r, max_gens))
}

/// Exact `0 → ker f → M → N → coker f → 0` for a random `f`, placed in
/// degrees `top, …, top−3`.
pub fn random_four_term_exact<R: Rng>(ring: &RingSpec, rng: &mut R, top: i32, max_gens: usize) -> ChainComplex {
    let m = random_module(ring, rng, max_gens);
    let n = random_module(ring, rng, max_gens);
    let f = random_morphism(&m, &n, rng);
    let (_, i) = f.kernel();
    let (_, q) = f.cokernel();
    ChainComplex::new(ring, top - 3, vec![q.target().clone(), n, m, i.source().clone()], vec![q, f, i])
        .expect("kernel and cokernel sequences compose to zero")
}

/// Uniform chain map `X → Y`.
pub fn random_chain_map<R: Rng>(x: &ChainComplex, y: &ChainComplex, rng: &mut R) -> ChainMap {
    let h = chain_maps_group(x, y).expect("same ring");
    h.decode(&random_element(h.module(), rng))
}

/// Short exact sequence from the kernel or the image of a random morphism.
pub fn random_ses<R: Rng>(ring: &RingSpec, rng: &mut R, max_gens: usize) -> ShortExactSequence {
    let m = random_module(ring, rng, max_gens);
    let n = random_module(ring, rng, max_gens);
    let f = random_morphism(&m, &n, rng);
    if rng.gen_bool(0.5) {
        ShortExactSequence::from_kernel(&f).expect("kernel sequence is exact")
    } else {
        let (_, incl) = f.image();
        let (_, q) = incl.cokernel();
        ShortExactSequence::new(incl, q).expect("image sequence is exact")
    }
}
