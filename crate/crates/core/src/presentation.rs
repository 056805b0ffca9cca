//! Finitely presented abelian groups `Z^g / ⟨relations⟩` and their elements.
//!
//! Relations are first folded into an integer echelon basis (at most `g`
//! rows, same row lattice), then the Smith normal form fixes coordinates:
//! generator `j` has coordinates `row j of R` reduced modulo the nontrivial
//! invariant factors. Elements are indexed by their coordinate vectors in
//! mixed radix, first coordinate most significant, so index order is the
//! lexicographic order of coordinate vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::snf::{smith_normal_form, Matrix};

/// Largest group materialized as an element table.
pub const DEFAULT_ELEMENT_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianPresentation {
    pub labels: Vec<String>,
    /// Rows are relations, columns generators.
    pub relations: Vec<Vec<i64>>,
}

impl AbelianPresentation {
    pub fn new(labels: Vec<String>) -> Self {
        AbelianPresentation {
            labels,
            relations: Vec::new(),
        }
    }

    pub fn generators(&self) -> usize {
        self.labels.len()
    }

    /// Adds a relation given as `(generator, coefficient)` terms.
    pub fn relate(&mut self, terms: &[(usize, i64)]) {
        let mut row = vec![0; self.labels.len()];
        for &(g, c) in terms {
            row[g] += c;
        }
        if row.iter().any(|&v| v != 0) {
            self.relations.push(row);
        }
    }
}

/// Incremental echelon form over `Z`; every insertion is a unimodular
/// change of the spanning set, so the row lattice is preserved.
#[derive(Debug, Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<BigInt>) {
        let mut k = 0;
        loop {
            let Some(lead) = v.iter().position(|x| !x.is_zero()) else { return };
            while k < self.rows.len() && self.rows[k].0 < lead {
                k += 1;
            }
            if k == self.rows.len() || self.rows[k].0 > lead {
                self.rows.insert(k, (lead, v));
                return;
            }
            let p = &mut self.rows[k].1;
            let eg = p[lead].extended_gcd(&v[lead]);
            let (pa, va) = (&p[lead] / &eg.gcd, &v[lead] / &eg.gcd);
            let combined: Vec<BigInt> = p.iter().zip(&v).map(|(x, y)| &eg.x * x + &eg.y * y).collect();
            let killed: Vec<BigInt> = p.iter().zip(&v).map(|(x, y)| &pa * y - &va * x).collect();
            *p = combined;
            v = killed;
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedGroup {
    generators: usize,
    /// All invariant factors padded to the generator count (0 = free).
    invariants: Vec<u64>,
    /// Positions in `invariants` kept as coordinates (factor ≠ 1).
    kept: Vec<usize>,
    moduli: Vec<u64>,
    /// Original-generator coefficients of each kept basis element.
    basis: Vec<Vec<BigInt>>,
    /// Coordinates of each original generator.
    generator_coords: Vec<Vec<u64>>,
}

impl PresentedGroup {
    pub fn from_presentation(p: &AbelianPresentation) -> Result<Self> {
        let g = p.generators();
        let mut ech = Echelon::default();
        for r in &p.relations {
            if r.len() != g {
                return Err(Error::input("relation length differs from generator count"));
            }
            ech.insert(r.iter().map(|&v| BigInt::from(v)).collect());
        }
        let matrix: Matrix = ech.rows.into_iter().map(|(_, r)| r).collect();
        let form = smith_normal_form(&matrix, g)?;
        let mut invariants = form.invariant_factors()?;
        invariants.resize(g, 0);
        let kept: Vec<usize> = (0..g).filter(|&i| invariants[i] != 1).collect();
        let moduli: Vec<u64> = kept.iter().map(|&i| invariants[i]).collect();
        let generator_coords = (0..g)
            .map(|j| {
                kept.iter()
                    .map(|&i| reduce(&form.right[j][i], invariants[i]))
                    .collect()
            })
            .collect();
        let basis = kept.iter().map(|&i| form.right_inverse[i].clone()).collect();
        Ok(PresentedGroup {
            generators: g,
            invariants,
            kept,
            moduli,
            basis,
            generator_coords,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Nontrivial invariant factors in divisibility order (`0` = free).
    pub fn invariant_factors(&self) -> &[u64] {
        &self.moduli
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|&&m| m == 0).count()
    }

    pub fn order(&self) -> Option<u128> {
        if self.free_rank() > 0 {
            return None;
        }
        self.moduli.iter().try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
    }

    /// Number of elements, failing for infinite or oversized groups.
    pub fn element_count(&self, cap: u64) -> Result<usize> {
        if self.free_rank() > 0 {
            return Err(Error::resource("finite group (free rank)", self.free_rank() as u128, 0));
        }
        let n = self.order().unwrap_or(u128::MAX);
        if n > cap as u128 {
            return Err(Error::resource("group elements", n, cap as u128));
        }
        Ok(n as usize)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    }

    pub fn decode(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % m as usize) as u64;
            index /= m as usize;
        }
        out
    }

    pub fn generator_coords(&self, j: usize) -> &[u64] {
        &self.generator_coords[j]
    }

    pub fn generator_element(&self, j: usize) -> usize {
        self.encode(&self.generator_coords[j])
    }

    /// Element represented by the integer combination `Σ x_j g_j`.
    pub fn element_of(&self, combination: &[i64]) -> usize {
        let coords: Vec<u64> = (0..self.moduli.len())
            .map(|k| {
                let m = self.moduli[k];
                let mut acc: i128 = 0;
                for (j, &x) in combination.iter().enumerate() {
                    if x != 0 {
                        acc = (acc + x as i128 * self.generator_coords[j][k] as i128).rem_euclid(m as i128);
                    }
                }
                acc as u64
            })
            .collect();
        self.encode(&coords)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let c: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&self.moduli)
            .map(|((p, q), m)| (p + q) % m)
            .collect();
        self.encode(&c)
    }

    /// Addition table over the materialized elements.
    pub fn add_table(&self, cap: u64) -> Result<Vec<usize>> {
        let n = self.element_count(cap)?;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(self.add(x, y));
            }
        }
        Ok(table)
    }

    /// The unique additive map sending generator `j` to `images[j]` in a
    /// finite group with the given addition table, if the relations allow it.
    ///
    /// Returns the image of every element of this group.
    pub fn induced_map(
        &self,
        relations: &[Vec<i64>],
        images: &[usize],
        target_size: usize,
        target_add: &[usize],
        cap: u64,
    ) -> Result<Option<Vec<usize>>> {
        let target = Target { size: target_size, add: target_add };
        if violated_relation(relations, images, &target).is_some() {
            return Ok(None);
        }
        let basis_images: Vec<usize> = self
            .basis
            .iter()
            .map(|row| {
                row.iter().zip(images).fold(0, |acc, (c, &img)| {
                    if c.is_zero() {
                        return acc;
                    }
                    let k = c.mod_floor(&BigInt::from(target_size)).to_u64().expect("reduced");
                    target.add(acc, target.multiple(k, img))
                })
            })
            .collect();
        let n = self.element_count(cap)?;
        let out = (0..n)
            .map(|e| {
                self.decode(e)
                    .iter()
                    .zip(&basis_images)
                    .fold(0, |acc, (&c, &img)| target.add(acc, target.multiple(c, img)))
            })
            .collect();
        Ok(Some(out))
    }

    /// All invariant factors including trivial ones.
    pub fn full_invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn kept_positions(&self) -> &[usize] {
        &self.kept
    }
}

struct Target<'a> {
    size: usize,
    add: &'a [usize],
}

impl Target<'_> {
    fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    /// `k · x` by doubling.
    fn multiple(&self, k: u64, x: usize) -> usize {
        let mut k = k % self.size as u64;
        let (mut acc, mut base) = (0, x);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    fn signed_multiple(&self, k: i64, x: usize) -> usize {
        self.multiple(k.rem_euclid(self.size as i64) as u64, x)
    }
}

/// Index of the first relation not killed by the generator images.
fn violated_relation(relations: &[Vec<i64>], images: &[usize], target: &Target<'_>) -> Option<usize> {
    relations.iter().position(|r| {
        r.iter().zip(images).fold(0, |acc, (&c, &img)| {
            if c == 0 {
                acc
            } else {
                target.add(acc, target.signed_multiple(c, img))
            }
        }) != 0
    })
}

fn reduce(v: &BigInt, modulus: u64) -> u64 {
    if modulus == 0 {
        // free coordinate: keep the integer, only meaningful when nonnegative
        return v.abs().to_u64().unwrap_or(u64::MAX);
    }
    v.mod_floor(&BigInt::from(modulus)).to_u64().expect("reduced below modulus")
}

/// Invariant factors (nontrivial, divisibility order) of a finite abelian
/// group given by its addition table.
pub fn group_invariants(size: usize, add: &[usize]) -> Result<Vec<u64>> {
    let mut p = AbelianPresentation::new((0..size).map(|i| i.to_string()).collect());
    p.relate(&[(0, 1)]);
    for x in 0..size {
        for y in 0..size {
            let z = add[x * size + y];
            p.relate(&[(x, 1), (y, 1), (z, -1)]);
        }
    }
    Ok(PresentedGroup::from_presentation(&p)?.invariant_factors().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Vec<usize> {
        (0..n * n).map(|i| (i / n + i % n) % n).collect()
    }

    #[test]
    fn cyclic_tables_recover_invariants() {
        assert_eq!(group_invariants(6, &cyclic(6)).unwrap(), vec![6]);
        assert_eq!(group_invariants(1, &cyclic(1)).unwrap(), Vec::<u64>::new());
        // Z2 × Z4
        let n = 8;
        let add: Vec<usize> = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                ((x / 4 + y / 4) % 2) * 4 + (x % 4 + y % 4) % 4
            })
            .collect();
        assert_eq!(group_invariants(8, &add).unwrap(), vec![2, 4]);
    }

    #[test]
    fn elements_and_induced_maps() {
        let mut p = AbelianPresentation::new(vec!["a".into(), "b".into()]);
        p.relate(&[(0, 2)]);
        p.relate(&[(1, 3)]);
        let g = PresentedGroup::from_presentation(&p).unwrap();
        assert_eq!(g.invariant_factors(), &[6]);
        assert_eq!(g.element_count(100).unwrap(), 6);
        let a = g.generator_element(0);
        let b = g.generator_element(1);
        assert_ne!(g.add(a, a), a);
        assert_eq!(g.add(a, a), 0);
        let ab = g.add(a, b);
        let mut x = 0;
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..6 {
            x = g.add(x, ab);
            seen.insert(x);
        }
        assert_eq!(seen.len(), 6);

        // a ↦ 3, b ↦ 2 in Z6 is well defined; a ↦ 1 is not
        let z6 = cyclic(6);
        let map = g.induced_map(&p.relations, &[3, 2], 6, &z6, 100).unwrap().unwrap();
        assert_eq!(map[a], 3);
        assert_eq!(map[b], 2);
        assert!(g.induced_map(&p.relations, &[1, 2], 6, &z6, 100).unwrap().is_none());
    }

    #[test]
    fn free_generator_is_reported() {
        let p = AbelianPresentation::new(vec!["x".into()]);
        let g = PresentedGroup::from_presentation(&p).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert!(matches!(g.element_count(10), Err(Error::Resource { .. })));
    }
}
