use super::table::DifferentialTable;
use crate::grading::{AtomTable, Expression, Factor, Formula, Monomial, Product};

/// Result of applying a differential: a value, or the atom whose differential
/// could not be determined from the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Differential {
    Known(Expression),
    Unknown { atom: String },
}

impl Differential {
    pub fn known(&self) -> Option<&Expression> {
        match self {
            Differential::Known(x) => Some(x),
            Differential::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Key {
    pub expr: Expression,
    pub mono: Option<Monomial>,
    /// `None` marks the single unknown of an inference problem.
    pub value: Option<Expression>,
}

/// Keys of a differential table prepared for covering: single-monomial keys
/// are tried by filtration, largest first.
#[derive(Clone, Debug)]
pub(crate) struct KeySet {
    pub keys: Vec<Key>,
    order: Vec<usize>,
    /// Atoms (bitmask over the table) occurring in keys `order[i..]`.
    suffix_atoms: Vec<u64>,
    one: Monomial,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Linear {
    pub known: Expression,
    pub cofactor: Expression,
}

impl Linear {
    fn add(&mut self, o: Linear) {
        self.known.add_assign(&o.known);
        self.cofactor.add_assign(&o.cofactor);
    }
}

/// An atom that no available key can account for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Unresolved(pub usize);

fn mask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

impl KeySet {
    pub fn new(atoms: &AtomTable, keys: Vec<Key>) -> Self {
        assert!(atoms.len() <= 64, "at most 64 atoms are supported");
        let mut order: Vec<usize> = (0..keys.len()).filter(|&i| keys[i].mono.is_some()).collect();
        // the unknown of an inference goes first so covers use it when possible
        order.sort_by_key(|&i| {
            let m = keys[i].mono.as_ref().unwrap();
            (keys[i].value.is_some(), -m.degree(atoms).f, m.clone())
        });
        let mut suffix_atoms = vec![0u64; order.len() + 1];
        for j in (0..order.len()).rev() {
            suffix_atoms[j] = suffix_atoms[j + 1] | mask(keys[order[j]].mono.as_ref().unwrap());
        }
        Self {
            keys,
            order,
            suffix_atoms,
            one: Monomial::one(atoms),
        }
    }

    /// Keys from a table. If `unknown` names an existing source its value is
    /// forgotten; otherwise it is added as a fresh key.
    pub fn from_table(t: &DifferentialTable, atoms: &AtomTable, unknown: Option<&Expression>) -> (Self, Option<usize>) {
        let mut keys: Vec<Key> = t
            .entries
            .iter()
            .map(|e| Key {
                mono: e.source.expr.as_monomial().cloned(),
                expr: e.source.expr.clone(),
                value: Some(e.target_expr.clone()),
            })
            .collect();
        let mut idx = None;
        if let Some(u) = unknown {
            match keys.iter().position(|k| &k.expr == u) {
                Some(i) => {
                    keys[i].value = None;
                    idx = Some(i);
                }
                None => {
                    idx = Some(keys.len());
                    keys.push(Key {
                        mono: u.as_monomial().cloned(),
                        expr: u.clone(),
                        value: None,
                    });
                }
            }
        }
        (Self::new(atoms, keys), idx)
    }

    /// Writes `m` as τᵏ times a product of monomial keys, as (key, power) pairs.
    pub fn cover(&self, m: &Monomial) -> Result<(Vec<(usize, u32)>, u32), Unresolved> {
        let mut acc = Vec::new();
        if let Some(tau) = self.search(m, 0, &mut acc) {
            return Ok((acc, tau));
        }
        let need = mask(m);
        let i = (0..64)
            .find(|&i| need >> i & 1 == 1 && !self.order.iter().any(|&k| self.key_divides_with_atom(k, m, i)))
            .unwrap_or_else(|| need.trailing_zeros() as usize);
        Err(Unresolved(i))
    }

    fn key_divides_with_atom(&self, k: usize, m: &Monomial, atom: usize) -> bool {
        let km = self.keys[k].mono.as_ref().unwrap();
        km.exponent(atom) > 0 && m.tau_free().div(&km.tau_free()).is_some()
    }

    fn search(&self, rem: &Monomial, pos: usize, acc: &mut Vec<(usize, u32)>) -> Option<u32> {
        let need = mask(rem);
        if need == 0 {
            return Some(rem.tau_power());
        }
        if pos == self.order.len() || need & !self.suffix_atoms[pos] != 0 {
            return None;
        }
        let k = self.order[pos];
        let km = self.keys[k].mono.as_ref().unwrap();
        let mut max = 0u32;
        let mut cur = rem.clone();
        let mut stack = vec![rem.clone()];
        while let Some(next) = cur.div(km) {
            if mask(km) == 0 {
                break;
            }
            max += 1;
            stack.push(next.clone());
            cur = next;
        }
        for e in (0..=max).rev() {
            if e > 0 {
                acc.push((k, e));
            }
            if let Some(t) = self.search(&stack[e as usize], pos + 1, acc) {
                return Some(t);
            }
            if e > 0 {
                acc.pop();
            }
        }
        None
    }

    fn key_power(&self, k: usize, e: u32) -> Expression {
        self.keys[k].expr.pow(e)
    }

    /// d of τᵗ·Π keyᵉ by the Leibniz rule.
    pub fn units(&self, units: &[(usize, u32)], tau: u32) -> Linear {
        let mut out = Linear::default();
        for (i, &(k, e)) in units.iter().enumerate() {
            if e % 2 == 0 {
                continue;
            }
            let mut rest = Expression::monomial(self.one.with_tau(tau)).mul(&self.key_power(k, e - 1));
            for (j, &(k2, e2)) in units.iter().enumerate() {
                if j != i {
                    rest = rest.mul(&self.key_power(k2, e2));
                }
            }
            match &self.keys[k].value {
                Some(v) => out.known.add_assign(&v.mul(&rest)),
                None => out.cofactor.add_assign(&rest),
            }
        }
        out
    }

    pub fn monomial(&self, m: &Monomial) -> Result<Linear, Unresolved> {
        let (units, tau) = self.cover(m)?;
        Ok(self.units(&units, tau))
    }

    pub fn expression(&self, x: &Expression) -> Result<Linear, Unresolved> {
        let mut out = Linear::default();
        for m in x.terms() {
            out.add(self.monomial(m)?);
        }
        Ok(out)
    }

    fn product(&self, p: &Product, atoms: &AtomTable) -> Result<Linear, Unresolved> {
        let mut mono = self.one.clone();
        let mut units = Vec::new();
        for f in &p.factors {
            match f {
                Factor::Atom { .. } | Factor::Tau(_) => {
                    let e = f.expand(atoms);
                    mono = mono.mul(e.as_monomial().expect("atom factors expand to monomials"));
                }
                Factor::Group { inner, power } => {
                    let ex = inner.expand(atoms);
                    match self.keys.iter().position(|k| k.mono.is_none() && k.expr == ex) {
                        Some(k) => units.push((k, *power)),
                        None => return self.expression(&p.expand(atoms)),
                    }
                }
            }
        }
        let (covered, tau) = match self.cover(&mono) {
            Ok(c) => c,
            // the group may be hiding a cover of the whole product
            Err(u) if !units.is_empty() => return self.expression(&p.expand(atoms)).map_err(|_| u),
            Err(u) => return Err(u),
        };
        units.extend(covered);
        Ok(self.units(&units, tau))
    }

    pub fn formula(&self, x: &Formula, atoms: &AtomTable) -> Result<Linear, Unresolved> {
        let mut out = Linear::default();
        for p in &x.terms {
            out.add(self.product(p, atoms)?);
        }
        Ok(out)
    }
}

fn outcome(r: Result<Linear, Unresolved>, atoms: &AtomTable) -> Differential {
    match r {
        Ok(l) => Differential::Known(l.known),
        Err(Unresolved(i)) => Differential::Unknown {
            atom: atoms.get(i).name.clone(),
        },
    }
}

/// dᵣ of a formula by the Leibniz rule from the table's generator values.
/// Grouped sums are matched against grouped generators, so `h_1^2 (Delta c +
/// tau a g)` only needs `h_1` and `Delta c + tau a g` in the table.
pub fn leibniz_differential(x: &Formula, t: &DifferentialTable, atoms: &AtomTable) -> Differential {
    if let Some(e) = t.get(&x.expand(atoms)) {
        return Differential::Known(e.target_expr.clone());
    }
    let (keys, _) = KeySet::from_table(t, atoms, None);
    outcome(keys.formula(x, atoms), atoms)
}

/// [`leibniz_differential`] on an expanded expression: each monomial is
/// written as a product of single-monomial generators.
pub fn leibniz_expression(x: &Expression, t: &DifferentialTable, atoms: &AtomTable) -> Differential {
    let (keys, _) = KeySet::from_table(t, atoms, None);
    outcome(keys.expression(x), atoms)
}
