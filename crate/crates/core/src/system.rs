//! Linear systems whose unknowns are module morphisms.
//!
//! An unknown `h: A → B` is parametrized entrywise: the image of internal
//! basis vector `j` in coordinate `i` is `c·t` with
//! `c = d^B_i / gcd(d^A_j, d^B_i)` and `t` ranging over `Z/gcd`. These are
//! exactly the well-defined assignments, so only the caller's constraints
//! need to be imposed.

use crate::error::{Error, Result};
use crate::matrix::{kernel_basis, solve_linear, MatrixZn};
use crate::module::FPModule;
use crate::morphism::ModuleMorphism;
use crate::ring::{gcd, RingSpec};

#[derive(Clone, Debug)]
struct Slot {
    row: usize,
    col: usize,
    scale: u64,
    order: u64,
}

#[derive(Clone, Debug)]
struct Block {
    source: FPModule,
    target: FPModule,
    slots: Vec<Slot>,
    offset: usize,
}

fn slots_for(source: &FPModule, target: &FPModule) -> Vec<Slot> {
    let mut slots = Vec::new();
    for (row, &da) in source.divisors().iter().enumerate() {
        for (col, &db) in target.divisors().iter().enumerate() {
            let g = gcd(da, db);
            if g > 1 {
                slots.push(Slot {
                    row,
                    col,
                    scale: db / g,
                    order: g,
                });
            }
        }
    }
    slots
}

/// One summand `coeff · post ∘ h ∘ pre` of a constraint.
#[derive(Clone, Debug)]
pub struct Term {
    pub unknown: usize,
    pub coeff: i64,
    pub pre: Option<ModuleMorphism>,
    pub post: Option<ModuleMorphism>,
}

impl Term {
    pub fn new(unknown: usize, coeff: i64) -> Self {
        Term {
            unknown,
            coeff,
            pre: None,
            post: None,
        }
    }

    pub fn pre(mut self, f: ModuleMorphism) -> Self {
        self.pre = Some(f);
        self
    }

    pub fn post(mut self, f: ModuleMorphism) -> Self {
        self.post = Some(f);
        self
    }
}

#[derive(Clone, Debug)]
struct Constraint {
    source: FPModule,
    target: FPModule,
    terms: Vec<Term>,
    rhs: Option<ModuleMorphism>,
}

/// A system `Σ coeff · post ∘ h_u ∘ pre = rhs` over unknown morphisms `h_u`.
#[derive(Clone, Debug)]
pub struct MorphismSystem {
    ring: RingSpec,
    blocks: Vec<Block>,
    constraints: Vec<Constraint>,
    variables: usize,
}

impl MorphismSystem {
    pub fn new(ring: &RingSpec) -> Self {
        MorphismSystem {
            ring: ring.clone(),
            blocks: Vec::new(),
            constraints: Vec::new(),
            variables: 0,
        }
    }

    /// Adds an unknown morphism `source → target`, returning its index.
    pub fn unknown(&mut self, source: &FPModule, target: &FPModule) -> usize {
        let slots = slots_for(source, target);
        let offset = self.variables;
        self.variables += slots.len();
        self.blocks.push(Block {
            source: source.clone(),
            target: target.clone(),
            slots,
            offset,
        });
        self.blocks.len() - 1
    }

    /// Adds the constraint `Σ terms = rhs` (zero when `rhs` is `None`) as maps
    /// `source → target`.
    pub fn constrain(
        &mut self,
        source: &FPModule,
        target: &FPModule,
        terms: Vec<Term>,
        rhs: Option<ModuleMorphism>,
    ) -> Result<()> {
        for t in &terms {
            let b = self
                .blocks
                .get(t.unknown)
                .ok_or_else(|| Error::Invalid(format!("unknown {} does not exist", t.unknown)))?;
            let pre_ok = match &t.pre {
                Some(p) => p.source().same_coordinates(source) && p.target().same_coordinates(&b.source),
                None => b.source.same_coordinates(source),
            };
            let post_ok = match &t.post {
                Some(p) => p.source().same_coordinates(&b.target) && p.target().same_coordinates(target),
                None => b.target.same_coordinates(target),
            };
            if !pre_ok || !post_ok {
                return Err(Error::Dimension(format!("term for unknown {} is not composable", t.unknown)));
            }
        }
        if let Some(r) = &rhs {
            if !r.source().same_coordinates(source) || !r.target().same_coordinates(target) {
                return Err(Error::Dimension("right-hand side has the wrong shape".into()));
            }
        }
        self.constraints.push(Constraint {
            source: source.clone(),
            target: target.clone(),
            terms,
            rhs,
        });
        Ok(())
    }

    fn matrices(&self) -> (MatrixZn, Vec<u64>) {
        let ring = &self.ring;
        let n = ring.modulus();
        let total_cols: usize = self.constraints.iter().map(|c| c.source.dim() * c.target.dim()).sum();
        let mut a = MatrixZn::zeros(self.variables, total_cols);
        let mut b = vec![0u64; total_cols];
        let mut base = 0;
        for c in &self.constraints {
            let sk = c.source.dim();
            let tk = c.target.dim();
            let scales = c.target.annihilator_scales();
            for t in &c.terms {
                let blk = &self.blocks[t.unknown];
                let coeff = ring.reduce_signed(t.coeff);
                let pre = t.pre.as_ref().map(|p| p.images());
                let post = t.post.as_ref().map(|p| p.images());
                for (v, slot) in blk.slots.iter().enumerate() {
                    let var = blk.offset + v;
                    let lead = ring.mul(coeff, slot.scale);
                    for s in 0..sk {
                        let ps = match pre {
                            Some(p) => p.get(s, slot.row),
                            None => u64::from(s == slot.row),
                        };
                        if ps == 0 {
                            continue;
                        }
                        let ps = ring.mul(ps, lead);
                        for l in 0..tk {
                            let ql = match post {
                                Some(q) => q.get(slot.col, l),
                                None => u64::from(l == slot.col),
                            };
                            if ql == 0 {
                                continue;
                            }
                            let col = base + s * tk + l;
                            let add = ring.mul(ring.mul(ps, ql), scales[l]);
                            a.set(var, col, ring.add(a.get(var, col), add));
                        }
                    }
                }
            }
            if let Some(r) = &c.rhs {
                for s in 0..sk {
                    for l in 0..tk {
                        b[base + s * tk + l] = ring.mul(r.images().get(s, l), scales[l]);
                    }
                }
            }
            base += sk * tk;
        }
        debug_assert!(b.iter().all(|&x| x < n));
        (a, b)
    }

    fn decode_vector(&self, t: &[u64]) -> Vec<ModuleMorphism> {
        decode_blocks(&self.blocks, t)
    }

    /// Some solution, or `None` when the system is inconsistent.
    pub fn solve(&self) -> Result<Option<Vec<ModuleMorphism>>> {
        if self.variables == 0 {
            let (_, b) = self.matrices();
            if b.iter().any(|&x| x != 0) {
                return Ok(None);
            }
            return Ok(Some(self.decode_vector(&[])));
        }
        let (a, b) = self.matrices();
        Ok(solve_linear(&self.ring, &a, &b)?.map(|s| self.decode_vector(&s.particular)))
    }

    /// The group of solutions of the homogeneous system.
    pub fn solution_space(&self) -> HomSpace {
        let orders: Vec<u64> = self.blocks.iter().flat_map(|b| b.slots.iter().map(|s| s.order)).collect();
        let ambient = FPModule::diagonal(&self.ring, orders);
        let shapes = self.blocks.clone();
        if self.constraints.is_empty() {
            let incl = MatrixZn::identity(ambient.dim());
            return HomSpace {
                module: ambient.clone(),
                inclusion: ModuleMorphism::from_images_unchecked(&ambient, &ambient, incl),
                blocks: shapes,
            };
        }
        let (a, _) = self.matrices();
        let gens = if self.variables == 0 {
            MatrixZn::zeros(0, 0)
        } else {
            kernel_basis(&self.ring, &a)
        };
        let (module, incl) = ambient.submodule(&gens);
        let inclusion = ModuleMorphism::from_images_unchecked(&module, &ambient, incl);
        HomSpace {
            module,
            inclusion,
            blocks: shapes,
        }
    }
}

fn decode_blocks(blocks: &[Block], t: &[u64]) -> Vec<ModuleMorphism> {
    blocks
        .iter()
        .map(|blk| {
            let mut images = MatrixZn::zeros(blk.source.dim(), blk.target.dim());
            let ring = blk.source.ring();
            for (v, slot) in blk.slots.iter().enumerate() {
                let x = t[blk.offset + v] % slot.order;
                images.set(slot.row, slot.col, ring.mul(x, slot.scale));
            }
            ModuleMorphism::from_images_unchecked(&blk.source, &blk.target, images)
        })
        .collect()
}

/// A finite group of tuples of morphisms, realized as an [`FPModule`] with
/// explicit decoding and encoding.
#[derive(Clone, Debug)]
pub struct HomSpace {
    module: FPModule,
    inclusion: ModuleMorphism,
    blocks: Vec<Block>,
}

impl HomSpace {
    pub fn module(&self) -> &FPModule {
        &self.module
    }

    /// The tuple of morphisms represented by an element (internal coordinates).
    pub fn decode(&self, x: &[u64]) -> Vec<ModuleMorphism> {
        let t = self.inclusion.apply(x);
        decode_blocks(&self.blocks, &t)
    }

    /// Coordinates of a tuple of morphisms, or `None` when it is not a solution.
    pub fn encode(&self, maps: &[ModuleMorphism]) -> Option<Vec<u64>> {
        if maps.len() != self.blocks.len() {
            return None;
        }
        let mut t = Vec::new();
        for (blk, f) in self.blocks.iter().zip(maps) {
            if !f.source().same_coordinates(&blk.source) || !f.target().same_coordinates(&blk.target) {
                return None;
            }
            for slot in &blk.slots {
                t.push(f.images().get(slot.row, slot.col) / slot.scale);
            }
        }
        let t = self.inclusion.target().reduce(&t);
        let x = self.inclusion.preimage(&t)?;
        Some(x)
    }

    /// Decoded images of the internal basis vectors of the space.
    pub fn generators(&self) -> Vec<Vec<ModuleMorphism>> {
        (0..self.module.dim())
            .map(|i| {
                let mut e = vec![0u64; self.module.dim()];
                e[i] = 1;
                self.decode(&e)
            })
            .collect()
    }

    /// The group homomorphism `self → other` induced by a map on tuples,
    /// assumed additive.
    pub fn induced<F>(&self, other: &HomSpace, mut f: F) -> Result<ModuleMorphism>
    where
        F: FnMut(&[ModuleMorphism]) -> Result<Vec<ModuleMorphism>>,
    {
        let mut rows = Vec::with_capacity(self.module.dim());
        for g in self.generators() {
            let image = f(&g)?;
            let coords = other
                .encode(&image)
                .ok_or_else(|| Error::Invalid("induced map leaves the target space".into()))?;
            rows.push(coords);
        }
        let images = MatrixZn::from_vecs(other.module.dim(), rows);
        ModuleMorphism::from_images(&self.module, &other.module, images)
    }
}

/// Hom space with a single unknown block.
pub fn single(source: &FPModule, target: &FPModule) -> HomSpace {
    let mut sys = MorphismSystem::new(source.ring());
    sys.unknown(source, target);
    sys.solution_space()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::new(n).unwrap()
    }

    #[test]
    fn factoring_through_multiplication() {
        let r = z(8);
        let rr = FPModule::free(&r, 1);
        let two = ModuleMorphism::identity(&rr).scale(2);
        let four = ModuleMorphism::identity(&rr).scale(4);
        // find h with 2·h = 4
        let mut sys = MorphismSystem::new(&r);
        let h = sys.unknown(&rr, &rr);
        sys.constrain(&rr, &rr, vec![Term::new(h, 1).post(two.clone())], Some(four.clone())).unwrap();
        let sol = sys.solve().unwrap().unwrap();
        assert!(two.compose(&sol[0]).unwrap().equals(&four));
        // no h with 4·h = 2
        let mut sys = MorphismSystem::new(&r);
        let h = sys.unknown(&rr, &rr);
        sys.constrain(&rr, &rr, vec![Term::new(h, 1).post(four)], Some(two)).unwrap();
        assert!(sys.solve().unwrap().is_none());
    }

    #[test]
    fn space_round_trip() {
        let r = z(12);
        let m = FPModule::from_cyclic_orders(&r, &[4, 6]);
        let n = FPModule::from_cyclic_orders(&r, &[12, 2]);
        let space = single(&m, &n);
        for x in space.module().elements().into_iter().step_by(7) {
            let f = space.decode(&x);
            assert_eq!(space.encode(&f).unwrap(), x);
        }
    }
}
