use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::label::Label;

/// An element of a [`FiniteGroup`], as an index into its element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// Residue tuples under componentwise addition; the first coordinate is
    /// the most significant digit of the element index.
    CyclicProduct {
        moduli: Vec<u64>,
    },
    Table {
        table: Vec<Vec<usize>>,
    },
}

/// A finite group given either as a product of cyclic groups or by an
/// explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    repr: Repr,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// `Z_{n_1} × … × Z_{n_m}`. Elements of a single cyclic factor are
    /// labelled by their residue; tuples are labelled `"(r1,r2,…)"`.
    pub fn cyclic_product(moduli: &[u64]) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::BadModulus);
        }
        let order: u64 = moduli.iter().product();
        let order = usize::try_from(order).map_err(|_| Error::BadModulus)?;
        let mut g = FiniteGroup {
            repr: Repr::CyclicProduct { moduli: moduli.to_vec() },
            labels: Vec::with_capacity(order),
            index: HashMap::with_capacity(order),
            identity: 0,
            inverse: Vec::with_capacity(order),
        };
        for e in 0..order {
            let r = g.residues(Element(e));
            let label = match r.as_slice() {
                [x] => Label::Int(*x as i64),
                _ => Label::Str(format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))),
            };
            g.index.insert(label.clone(), e);
            g.labels.push(label);
            let inv: Vec<u64> = r.iter().zip(moduli).map(|(&x, &n)| (n - x) % n).collect();
            g.inverse.push(g.encode(&inv));
        }
        Ok(g)
    }

    /// Validates a multiplication table: `table[i][j]` is the label of
    /// `elements[i] · elements[j]`. Closure, identity and two-sided inverses
    /// are always checked; associativity only when `verify_assoc` is set.
    pub fn from_table(elements: Vec<Label>, table: Vec<Vec<Label>>, verify_assoc: bool) -> Result<Self> {
        let n = elements.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in elements.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::NotClosed(format!("element {l} declared twice")));
            }
        }
        if n == 0 {
            return Err(Error::NoIdentity);
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::NotClosed(format!("table must be {n}×{n}")));
        }
        let mut t = vec![vec![0usize; n]; n];
        for (i, row) in table.iter().enumerate() {
            for (j, l) in row.iter().enumerate() {
                t[i][j] =
                    *index.get(l).ok_or_else(|| Error::NotClosed(format!("product {l} is not a declared element")))?;
            }
        }
        let identity = (0..n).find(|&e| (0..n).all(|x| t[e][x] == x && t[x][e] == x)).ok_or(Error::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| t[a][b] == identity && t[b][a] == identity)
                .ok_or_else(|| Error::NoInverse(elements[a].to_string()))?;
            inverse.push(b);
        }
        // Left and right multiplication by each element must be bijective.
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for x in 0..n {
                if std::mem::replace(&mut row_seen[t[a][x]], true) || std::mem::replace(&mut col_seen[t[x][a]], true) {
                    return Err(Error::NoInverse(elements[a].to_string()));
                }
            }
        }
        if verify_assoc {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if t[t[a][b]][c] != t[a][t[b][c]] {
                            return Err(Error::NotAssociative(
                                elements[a].to_string(),
                                elements[b].to_string(),
                                elements[c].to_string(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup { repr: Repr::Table { table: t }, labels: elements, index, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> Element {
        Element(self.identity)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order()).map(Element)
    }

    pub fn multiply(&self, a: Element, b: Element) -> Element {
        match &self.repr {
            Repr::Table { table } => Element(table[a.0][b.0]),
            Repr::CyclicProduct { moduli } => {
                let (ra, rb) = (self.residues(a), self.residues(b));
                let sum: Vec<u64> = ra.iter().zip(&rb).zip(moduli).map(|((x, y), n)| (x + y) % n).collect();
                Element(self.encode(&sum))
            }
        }
    }

    pub fn invert(&self, a: Element) -> Element {
        Element(self.inverse[a.0])
    }

    /// Checked variants for elements coming from untrusted input.
    pub fn try_multiply(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.multiply(a, b))
    }

    pub fn try_invert(&self, a: Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.invert(a))
    }

    fn check(&self, a: Element) -> Result<()> {
        if a.0 < self.order() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("#{}", a.0)))
        }
    }

    pub fn label(&self, a: Element) -> &Label {
        &self.labels[a.0]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn element(&self, label: &Label) -> Result<Element> {
        self.index.get(label).map(|&i| Element(i)).ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    /// Moduli of a cyclic-product group, `None` for table groups.
    pub fn moduli(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::CyclicProduct { moduli } => Some(moduli),
            Repr::Table { .. } => None,
        }
    }

    /// Residue tuple of an element of a cyclic-product group.
    ///
    /// # Panics
    /// On table groups.
    pub fn residues(&self, a: Element) -> Vec<u64> {
        let Repr::CyclicProduct { moduli } = &self.repr else {
            panic!("residues of a table group element");
        };
        let mut r = vec![0u64; moduli.len()];
        let mut x = a.0 as u64;
        for (slot, &n) in r.iter_mut().zip(moduli).rev() {
            *slot = x % n;
            x /= n;
        }
        r
    }

    /// Element with the given residues (each must lie in `0..n_i`).
    pub fn from_residues(&self, residues: &[i64]) -> Result<Element> {
        let moduli = self.moduli().ok_or(Error::NotAbelian)?;
        let shown = || format!("{residues:?}");
        if residues.len() != moduli.len() {
            return Err(Error::UnknownElement(shown()));
        }
        let mut r = Vec::with_capacity(moduli.len());
        for (&x, &n) in residues.iter().zip(moduli) {
            if x < 0 || x as u64 >= n {
                return Err(Error::UnknownElement(shown()));
            }
            r.push(x as u64);
        }
        Ok(Element(self.encode(&r)))
    }

    /// `c·a` (repeated addition, negative `c` allowed) in a cyclic-product group.
    pub fn scale(&self, a: Element, c: i64) -> Element {
        let moduli = self.moduli().expect("scale on a table group");
        let r: Vec<u64> = self
            .residues(a)
            .iter()
            .zip(moduli)
            .map(|(&x, &n)| (((x as i128) * (c as i128)).rem_euclid(n as i128)) as u64)
            .collect();
        Element(self.encode(&r))
    }

    fn encode(&self, residues: &[u64]) -> usize {
        let Repr::CyclicProduct { moduli } = &self.repr else { unreachable!() };
        residues.iter().zip(moduli).fold(0u64, |acc, (&x, &n)| acc * n + x) as usize
    }

    pub fn is_abelian(&self) -> bool {
        match &self.repr {
            Repr::CyclicProduct { .. } => true,
            Repr::Table { table } => {
                let n = table.len();
                (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]))
            }
        }
    }

    /// Checks associativity exhaustively (cubic in the order).
    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let (a, b, c) = (Element(a), Element(b), Element(c));
                    self.multiply(self.multiply(a, b), c) == self.multiply(a, self.multiply(b, c))
                })
            })
        })
    }

    /// A generating set: unit vectors of the nontrivial cyclic factors, or
    /// every non-identity element of a table group. The trivial group is
    /// generated by its identity.
    pub fn generators(&self) -> Vec<Element> {
        let gens: Vec<Element> = match &self.repr {
            Repr::CyclicProduct { moduli } => (0..moduli.len())
                .filter(|&i| moduli[i] > 1)
                .map(|i| {
                    let mut r = vec![0u64; moduli.len()];
                    r[i] = 1;
                    Element(self.encode(&r))
                })
                .collect(),
            Repr::Table { .. } => self.elements().filter(|&e| e != self.identity()).collect(),
        };
        if gens.is_empty() {
            vec![self.identity()]
        } else {
            gens
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::CyclicProduct { moduli } => {
                let parts: Vec<String> = moduli.iter().map(|n| format!("Z_{n}")).collect();
                write!(f, "{}", parts.join("×"))
            }
            Repr::Table { .. } => write!(f, "table group of order {}", self.order()),
        }
    }
}

/// Multiplication table of the symmetric group on three letters, with
/// elements `e, r, r2, s, sr, sr2` (`r` a 3-cycle, `s` a transposition).
pub fn symmetric_group_3() -> FiniteGroup {
    // Permutations of {0,1,2} as image arrays; composition (p·q)(x) = p(q(x)).
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let names = ["e", "r", "r2", "s", "sr", "sr2"];
    let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let table = perms
        .iter()
        .map(|p| perms.iter().map(|q| Label::from(names[find([p[q[0]], p[q[1]], p[q[2]]])])).collect())
        .collect();
    FiniteGroup::from_table(names.iter().map(|&n| Label::from(n)).collect(), table, true).expect("S3 table is a group")
}
