//! Finite ternary Γ-semirings stored as dense tables.
//!
//! A structure is a carrier `0..n` (element `0` is always the additive
//! zero), a binary addition table and one ternary table per mode. Formula
//! families are compiled into tables at construction time so that every law
//! becomes decidable by a finite scan.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a carrier element. Element `0` is the additive zero.
pub type Elem = usize;
/// Index of a mode `γ` in the structure's mode list.
pub type Mode = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSemiring {
    size: usize,
    add: Vec<Elem>,
    gammas: Vec<String>,
    tern: Vec<Elem>,
}

impl GammaSemiring {
    /// Builds a structure from raw tables, checking shapes and index ranges.
    ///
    /// `tern` is laid out mode-major, then `(a, b, c)` row-major.
    pub fn new(size: usize, add: Vec<Elem>, gammas: Vec<String>, tern: Vec<Elem>) -> Result<Self> {
        if size == 0 {
            return Err(Error::input("carrier must contain at least the zero element"));
        }
        if gammas.is_empty() {
            return Err(Error::input("mode set must be nonempty"));
        }
        let mut seen = HashSet::new();
        for label in &gammas {
            if !seen.insert(label) {
                return Err(Error::input(format!("duplicate mode label {label:?}")));
            }
        }
        if add.len() != size * size {
            return Err(Error::input(format!(
                "addition table has {} entries, expected {}",
                add.len(),
                size * size
            )));
        }
        let cube = size * size * size;
        if tern.len() != cube * gammas.len() {
            return Err(Error::input(format!(
                "ternary tables have {} entries, expected {} per mode",
                tern.len(),
                cube
            )));
        }
        if let Some(pos) = add.iter().position(|&v| v >= size) {
            return Err(Error::input(format!(
                "add[{}][{}] = {} is out of range",
                pos / size,
                pos % size,
                add[pos]
            )));
        }
        if let Some(pos) = tern.iter().position(|&v| v >= size) {
            let g = pos / cube;
            let rest = pos % cube;
            return Err(Error::input(format!(
                "tern[{}][{}][{}][{}] = {} is out of range",
                gammas[g],
                rest / (size * size),
                (rest / size) % size,
                rest % size,
                tern[pos]
            )));
        }
        Ok(GammaSemiring {
            size,
            add,
            gammas,
            tern,
        })
    }

    /// Compiles closures into tables.
    pub fn from_fn(
        size: usize,
        gammas: Vec<String>,
        add: impl Fn(Elem, Elem) -> Elem,
        tern: impl Fn(Elem, Elem, Elem, Mode) -> Elem,
    ) -> Result<Self> {
        let mut add_table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                add_table.push(add(a, b));
            }
        }
        let mut tern_table = Vec::with_capacity(size * size * size * gammas.len());
        for g in 0..gammas.len() {
            for a in 0..size {
                for b in 0..size {
                    for c in 0..size {
                        tern_table.push(tern(a, b, c, g));
                    }
                }
            }
        }
        GammaSemiring::new(size, add_table, gammas, tern_table)
    }

    /// `Z_modulus` with `{a,b,c}_γ = a·b·c·γ mod modulus` for each residue `γ`
    /// in `gamma_subset`.
    pub fn standard_family(modulus: usize, gamma_subset: &[usize]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::input("modulus must be at least 1"));
        }
        if gamma_subset.is_empty() {
            return Err(Error::input("gamma subset must be nonempty"));
        }
        let residues: Vec<usize> = gamma_subset.iter().map(|g| g % modulus).collect();
        let labels = gamma_subset.iter().map(|g| g.to_string()).collect();
        GammaSemiring::from_fn(
            modulus,
            labels,
            |a, b| (a + b) % modulus,
            |a, b, c, g| (a * b % modulus) * c % modulus * residues[g] % modulus,
        )
    }

    /// The `Z_6`, `Γ = Z_4` structure `{a,b,c}_γ = abc + cγ mod 6`.
    ///
    /// Usable for raw evaluation; it does not satisfy absorption or symmetry.
    pub fn z6_z4_example() -> Self {
        GammaSemiring::from_fn(
            6,
            (0..4).map(|g| g.to_string()).collect(),
            |a, b| (a + b) % 6,
            |a, b, c, g| (a * b * c + c * g) % 6,
        )
        .expect("fixture tables are well formed")
    }

    /// The one-element structure.
    pub fn singleton(gammas: Vec<String>) -> Result<Self> {
        GammaSemiring::from_fn(1, gammas, |_, _| 0, |_, _, _, _| 0)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn gamma_count(&self) -> usize {
        self.gammas.len()
    }

    pub fn gamma_labels(&self) -> &[String] {
        &self.gammas
    }

    pub fn gamma_index(&self, label: &str) -> Option<Mode> {
        self.gammas.iter().position(|l| l == label)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn tern(&self, a: Elem, b: Elem, c: Elem, g: Mode) -> Elem {
        let n = self.size;
        self.tern[((g * n + a) * n + b) * n + c]
    }

    /// Bounds-checked `{a,b,c}_g`.
    pub fn evaluate_tern(&self, a: Elem, b: Elem, c: Elem, g: Mode) -> Result<Elem> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if v >= self.size {
                return Err(Error::input(format!(
                    "element {name} = {v} outside carrier of size {}",
                    self.size
                )));
            }
        }
        if g >= self.gammas.len() {
            return Err(Error::input(format!(
                "mode index {g} outside mode set of size {}",
                self.gammas.len()
            )));
        }
        Ok(self.tern(a, b, c, g))
    }

    /// `{t,t,t}_g`.
    pub fn cube(&self, t: Elem, g: Mode) -> Elem {
        self.tern(t, t, t, g)
    }

    pub fn add_table(&self) -> &[Elem] {
        &self.add
    }

    pub fn to_document(&self) -> StructureDocument {
        let n = self.size;
        let add = (0..n).map(|a| self.add[a * n..(a + 1) * n].to_vec()).collect();
        let cube = n * n * n;
        let tern = self
            .gammas
            .iter()
            .enumerate()
            .map(|(g, label)| (label.clone(), self.tern[g * cube..(g + 1) * cube].to_vec()))
            .collect();
        StructureDocument {
            carrier: n,
            zero: 0,
            add,
            gammas: self.gammas.clone(),
            tern,
        }
    }

    pub fn from_document(doc: &StructureDocument) -> Result<Self> {
        let n = doc.carrier;
        if doc.zero != 0 {
            return Err(Error::input(format!(
                "zero must be element 0, document declares {}",
                doc.zero
            )));
        }
        if doc.add.len() != n {
            return Err(Error::input(format!(
                "add has {} rows, expected {n}",
                doc.add.len()
            )));
        }
        let mut add = Vec::with_capacity(n * n);
        for (i, row) in doc.add.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "add row {i} has {} entries, expected {n} (table must be square)",
                    row.len()
                )));
            }
            add.extend_from_slice(row);
        }
        let mut tern = Vec::with_capacity(n * n * n * doc.gammas.len());
        for label in &doc.gammas {
            let table = doc
                .tern
                .get(label)
                .ok_or_else(|| Error::input(format!("tern table for mode {label:?} missing")))?;
            if table.len() != n * n * n {
                return Err(Error::input(format!(
                    "tern table for mode {label:?} has {} entries, expected {}",
                    table.len(),
                    n * n * n
                )));
            }
            tern.extend_from_slice(table);
        }
        if let Some(extra) = doc.tern.keys().find(|k| !doc.gammas.contains(k)) {
            return Err(Error::input(format!("tern table for undeclared mode {extra:?}")));
        }
        GammaSemiring::new(n, add, doc.gammas.clone(), tern)
    }

    /// Structural plus semantic validation: tables, then the additive monoid laws.
    pub fn validate_document(doc: &StructureDocument) -> Result<Self> {
        let t = GammaSemiring::from_document(doc)?;
        if let Some(w) = crate::axioms::additive_monoid_violation(&t) {
            return Err(Error::input(format!(
                "addition is not a commutative monoid: {} fails at {:?}",
                w.clause, w.elements
            )));
        }
        Ok(t)
    }
}

/// On-disk form of a structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDocument {
    pub carrier: usize,
    pub zero: usize,
    pub add: Vec<Vec<usize>>,
    pub gammas: Vec<String>,
    pub tern: BTreeMap<String, Vec<usize>>,
}
