use std::f64::consts::PI;

use serde::Serialize;

use crate::{Error, Result};

/// Largest `k` for the built-in `ℤ_k` and `D_k` tables.
pub const MAX_GROUP_PARAM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Trivial,
    /// `ℤ_k`, generated by `r`.
    Cyclic(usize),
    /// Symmetries of the regular `k`-gon, order `2k`, generated by a
    /// rotation `r` and a reflection `s` with `srs = r⁻¹`.
    Dihedral(usize),
}

/// A real irreducible constituent of the regular representation.
///
/// Conjugate pairs of complex irreducibles of `ℤ_k` are merged into one
/// real block: `dim` is the dimension of each complex constituent,
/// `copies = 2`, and `character` is the (real) sum of the two characters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Irrep {
    pub name: String,
    pub dim: usize,
    pub copies: usize,
    pub character: Vec<f64>,
}

impl Irrep {
    /// `Σ d²` over the complex constituents: the share of the regular
    /// representation this block takes, times `#G`.
    pub fn weight(&self) -> usize {
        self.copies * self.dim * self.dim
    }
}

/// A finite group given by its multiplication table, with elements
/// written `r^a s^b` for the built-in families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteGroup {
    kind: GroupKind,
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    irreps: Vec<Irrep>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        Self::build(GroupKind::Trivial).expect("trivial group")
    }

    pub fn cyclic(k: usize) -> Result<Self> {
        Self::build(GroupKind::Cyclic(k))
    }

    pub fn dihedral(k: usize) -> Result<Self> {
        Self::build(GroupKind::Dihedral(k))
    }

    pub fn build(kind: GroupKind) -> Result<Self> {
        let (k, reflections) = match kind {
            GroupKind::Trivial => (1, false),
            GroupKind::Cyclic(k) => (k, false),
            GroupKind::Dihedral(k) => (k, true),
        };
        if k == 0 || k > MAX_GROUP_PARAM || (reflections && k < 2) {
            return Err(Error::InvalidInput(format!(
                "unsupported group {kind:?}: need 1 <= k <= {MAX_GROUP_PARAM} (k >= 2 for dihedral)"
            )));
        }
        let nb = if reflections { 2 } else { 1 };
        let order = k * nb;
        // Element index a + k·b stands for r^a s^b.
        let idx = |a: usize, b: usize| a % k + k * (b % 2);
        let mut names = Vec::with_capacity(order);
        for b in 0..nb {
            for a in 0..k {
                names.push(match (a, b) {
                    (0, 0) => "e".to_string(),
                    (1, 0) => "r".to_string(),
                    (a, 0) => format!("r^{a}"),
                    (0, _) => "s".to_string(),
                    (1, _) => "rs".to_string(),
                    (a, _) => format!("r^{a}s"),
                });
            }
        }
        let mut table = vec![vec![0; order]; order];
        for b in 0..nb {
            for a in 0..k {
                for d in 0..nb {
                    for c in 0..k {
                        // r^a s^b r^c s^d = r^{a ± c} s^{b+d}
                        let ac = if b == 0 { a + c } else { a + k - c };
                        table[idx(a, b)][idx(c, d)] = idx(ac, b + d);
                    }
                }
            }
        }
        let inverse = (0..order)
            .map(|g| (0..order).find(|&h| table[g][h] == 0).expect("group has inverses"))
            .collect();
        let irreps = match kind {
            GroupKind::Trivial => vec![Irrep {
                name: "trivial".into(),
                dim: 1,
                copies: 1,
                character: vec![1.0],
            }],
            GroupKind::Cyclic(k) => cyclic_irreps(k),
            GroupKind::Dihedral(k) => dihedral_irreps(k),
        };
        let g = FiniteGroup {
            kind,
            names,
            table,
            inverse,
            irreps,
        };
        g.check_character_table()?;
        Ok(g)
    }

    /// Replaces the built-in table, e.g. to relabel or reorder irreps.
    pub fn with_irreps(mut self, irreps: Vec<Irrep>) -> Result<Self> {
        self.irreps = irreps;
        self.check_character_table()?;
        Ok(self)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Trivial => "trivial".into(),
            GroupKind::Cyclic(k) => format!("Z{k}"),
            GroupKind::Dihedral(k) => format!("D{k}"),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    /// Rotation generator index (`r`, or `e` for the trivial group).
    pub fn rotation(&self) -> usize {
        usize::from(self.order() > 1)
    }

    /// Reflection generator index, for dihedral groups.
    pub fn reflection(&self) -> Option<usize> {
        match self.kind {
            GroupKind::Dihedral(k) => Some(k),
            _ => None,
        }
    }

    /// Checks `Σ weight = #G` and `⟨χ_i, χ_j⟩ = copies_i δ_ij` within 1e-12.
    pub fn check_character_table(&self) -> Result<()> {
        let n = self.order();
        let total: usize = self.irreps.iter().map(Irrep::weight).sum();
        if total != n {
            return Err(Error::BadCharacterTable(format!(
                "dimension formula gives {total}, group order is {n}"
            )));
        }
        for (i, a) in self.irreps.iter().enumerate() {
            if a.character.len() != n || a.dim == 0 || a.copies == 0 {
                return Err(Error::BadCharacterTable(format!("irrep {} is malformed", a.name)));
            }
            if (a.character[0] - (a.dim * a.copies) as f64).abs() > 1e-12 {
                return Err(Error::BadCharacterTable(format!(
                    "character of {} at e is {}, expected {}",
                    a.name,
                    a.character[0],
                    a.dim * a.copies
                )));
            }
            for (j, b) in self.irreps.iter().enumerate() {
                let ip: f64 = (0..n)
                    .map(|g| a.character[g] * b.character[self.inverse(g)])
                    .sum::<f64>()
                    / n as f64;
                let want = if i == j { a.copies as f64 } else { 0.0 };
                if (ip - want).abs() > 1e-12 {
                    return Err(Error::BadCharacterTable(format!(
                        "<{}, {}> = {ip}, expected {want}",
                        a.name, b.name
                    )));
                }
            }
        }
        Ok(())
    }
}

fn cyclic_irreps(k: usize) -> Vec<Irrep> {
    let mut out = vec![Irrep {
        name: "trivial".into(),
        dim: 1,
        copies: 1,
        character: vec![1.0; k],
    }];
    if k % 2 == 0 {
        out.push(Irrep {
            name: "sign".into(),
            dim: 1,
            copies: 1,
            character: (0..k).map(|a| if a % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        });
    }
    for h in 1..k.div_ceil(2) {
        out.push(Irrep {
            name: format!("chi{h}+chi{}", k - h),
            dim: 1,
            copies: 2,
            character: (0..k)
                .map(|a| 2.0 * (2.0 * PI * (h * a) as f64 / k as f64).cos())
                .collect(),
        });
    }
    out
}

fn dihedral_irreps(k: usize) -> Vec<Irrep> {
    // Characters on r^a (first k entries) then r^a s (last k entries).
    let one = |name: &str, rot: &dyn Fn(usize) -> f64, refl: &dyn Fn(usize) -> f64| Irrep {
        name: name.into(),
        dim: 1,
        copies: 1,
        character: (0..k).map(rot).chain((0..k).map(refl)).collect(),
    };
    let alt = |a: usize| if a % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = vec![
        one("trivial", &|_| 1.0, &|_| 1.0),
        one("alternating", &|_| 1.0, &|_| -1.0),
    ];
    if k % 2 == 0 {
        out.push(one("B1", &alt, &alt));
        out.push(one("B2", &alt, &|a| -alt(a)));
    }
    for h in 1..=(k - 1) / 2 {
        out.push(Irrep {
            name: if (k - 1) / 2 == 1 {
                "E".into()
            } else {
                format!("E{h}")
            },
            dim: 2,
            copies: 1,
            character: (0..k)
                .map(|a| 2.0 * (2.0 * PI * (h * a) as f64 / k as f64).cos())
                .chain(std::iter::repeat_n(0.0, k))
                .collect(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_dimension_formula() {
        for k in 1..=MAX_GROUP_PARAM {
            let c = FiniteGroup::cyclic(k).unwrap();
            assert_eq!(c.order(), k);
            if k >= 2 {
                let d = FiniteGroup::dihedral(k).unwrap();
                assert_eq!(d.order(), 2 * k);
                let w: usize = d.irreps().iter().map(Irrep::weight).sum();
                assert_eq!(w, 2 * k);
            }
        }
        assert!(FiniteGroup::cyclic(13).is_err());
        assert!(FiniteGroup::dihedral(1).is_err());
    }

    #[test]
    fn dihedral_relations() {
        let g = FiniteGroup::dihedral(5).unwrap();
        let (r, s) = (g.rotation(), g.reflection().unwrap());
        let mut p = 0;
        for _ in 0..5 {
            p = g.mul(p, r);
        }
        assert_eq!(p, 0);
        assert_eq!(g.mul(s, s), 0);
        assert_eq!(g.mul(g.mul(s, r), s), g.inverse(r));
        // Associativity.
        for a in 0..10 {
            for b in 0..10 {
                for c in 0..10 {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn d3_and_d4_tables() {
        let d3 = FiniteGroup::dihedral(3).unwrap();
        let names: Vec<_> = d3.irreps().iter().map(|i| (i.name.as_str(), i.dim)).collect();
        assert_eq!(names, vec![("trivial", 1), ("alternating", 1), ("E", 2)]);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.irreps().len(), 5);
    }

    #[test]
    fn rejects_bad_override() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let bad = vec![Irrep {
            name: "x".into(),
            dim: 1,
            copies: 1,
            character: vec![1.0, 1.0],
        }];
        assert!(matches!(g.with_irreps(bad), Err(Error::BadCharacterTable(_))));
    }
}
