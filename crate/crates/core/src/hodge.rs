//! Signed normal form of member tuples and the multiplicative relations
//! that cut the identity component U(1)^g' out of the full torus U(1)^g.
//!
//! Entries b > m/2 of a tuple are rewritten as b − m; a negative entry −x
//! stands for the conjugate of eigenangle coordinate x. Each family tuple
//! βᵢ with i ≤ (p−1)/2 then imposes one multiplicative constraint on the
//! diagonal torus, solved for its largest angle index i + p(p−1)/2.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::shioda::{beta_family, ShiodaError, ShiodaTuple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error(transparent)]
    Shioda(#[from] ShiodaError),
    #[error("tuple {0} is not a normalized family tuple with index i <= (p-1)/2")]
    NotAFamilyTuple(String),
    #[error("relation system for p={0} is rank deficient")]
    RankDeficient(u32),
}

/// A member tuple with entries above m/2 replaced by their negative
/// representatives, order preserved from the sorted source.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedTuple {
    m: u32,
    entries: Vec<i32>,
}

impl fmt::Debug for SignedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.entries.iter().join(", "), self.m)
    }
}

impl fmt::Display for SignedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries.iter().join(", "))
    }
}

impl SignedTuple {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }
}

/// Replace each entry b > m/2 with b − m, keeping the source order.
pub fn normalize_tuple(beta: &ShiodaTuple) -> SignedTuple {
    let m = beta.m();
    let entries = beta
        .entries()
        .iter()
        .map(|&b| {
            if 2 * b > m {
                b as i32 - m as i32
            } else {
                b as i32
            }
        })
        .collect();
    SignedTuple { m, entries }
}

/// A sparse integer combination of eigenangle coordinates θ₁, …, θ_g.
/// Zero coefficients are never stored; iteration is in ascending index
/// order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coefficients: BTreeMap<u32, i64>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single coordinate θ_index.
    pub fn coordinate(index: u32) -> Self {
        let mut form = Self::default();
        form.add_term(index, 1);
        form
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut form = Self::default();
        for (index, coeff) in terms {
            form.add_term(index, coeff);
        }
        form
    }

    pub fn add_term(&mut self, index: u32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.coefficients.entry(index).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.coefficients.remove(&index);
        }
    }

    pub fn coefficient(&self, index: u32) -> i64 {
        self.coefficients.get(&index).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.coefficients.iter().map(|(&i, &c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.coefficients.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, -c);
        }
        out
    }

    pub fn negated(&self) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|(&i, &c)| (i, -c)).collect(),
        }
    }

    pub fn scaled(&self, factor: i64) -> Self {
        if factor == 0 {
            return Self::default();
        }
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&i, &c)| (i, c * factor))
                .collect(),
        }
    }

    /// Evaluate with the given assignment of coordinate values.
    pub fn eval(&self, value: impl Fn(u32) -> f64) -> f64 {
        self.coefficients
            .iter()
            .map(|(&i, &c)| c as f64 * value(i))
            .sum()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&i, &c) in &self.coefficients {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}θ{i}")?;
            } else {
                write!(f, "{sign}{mag}θ{i}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Derive the multiplicative constraint of a normalized family tuple and
/// solve it for the largest angle index.
///
/// A positive entry b contributes +θ_b, a negative entry −x contributes
/// −θ_x; the constraint is that the signed sum vanishes. The solved-for
/// index is i + p(p−1)/2, which for βᵢ with i ≤ (p−1)/2 is the largest
/// index appearing.
pub fn relation_from_tuple(tuple: &SignedTuple) -> Result<(u32, LinearForm), HodgeError> {
    let m = tuple.m();
    let p = (1..).find(|&p| p * p >= m).filter(|&p| p * p == m);
    let Some(p) = p else {
        return Err(HodgeError::NotAFamilyTuple(tuple.to_string()));
    };
    let i = *tuple
        .entries()
        .first()
        .ok_or_else(|| HodgeError::NotAFamilyTuple(tuple.to_string()))? as u32;
    let expected = (i >= 1 && i <= (p - 1) / 2)
        .then(|| beta_family(p, i))
        .transpose()?
        .map(|b| normalize_tuple(&b));
    if expected.as_ref() != Some(tuple) {
        return Err(HodgeError::NotAFamilyTuple(tuple.to_string()));
    }

    let dependent = i + p * (p - 1) / 2;
    debug_assert_eq!(
        dependent as i32,
        tuple.entries().iter().map(|e| e.abs()).max().unwrap()
    );
    let mut form = LinearForm::zero();
    for &e in tuple.entries() {
        let index = e.unsigned_abs();
        if index == dependent {
            continue;
        }
        // Move everything except the dependent angle to the other side.
        form.add_term(index, if e > 0 { -1 } else { 1 });
    }
    Ok((dependent, form))
}

/// The diagonal torus U(1)^g' inside U(1)^g: free coordinates plus one
/// solved relation per dependent coordinate.
#[derive(Debug, Clone)]
pub struct IdentityComponentModel {
    p: u32,
    g: u32,
    g_prime: u32,
    free_indices: Vec<u32>,
    relations: BTreeMap<u32, LinearForm>,
}

impl IdentityComponentModel {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Dimension of the ambient torus: (p²−1)/2.
    pub fn g(&self) -> u32 {
        self.g
    }

    /// Dimension of the identity component: p(p−1)/2.
    pub fn g_prime(&self) -> u32 {
        self.g_prime
    }

    pub fn free_indices(&self) -> &[u32] {
        &self.free_indices
    }

    pub fn dependent_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.relations.keys().copied()
    }

    pub fn relations(&self) -> impl Iterator<Item = (u32, &LinearForm)> + '_ {
        self.relations.iter().map(|(&i, f)| (i, f))
    }

    pub fn relation(&self, dependent: u32) -> Option<&LinearForm> {
        self.relations.get(&dependent)
    }

    pub fn is_free(&self, index: u32) -> bool {
        self.free_indices.binary_search(&index).is_ok()
    }

    /// Eliminate dependent coordinates from a form. Relations are
    /// themselves supported on free coordinates, so one pass suffices and
    /// the operation is idempotent.
    pub fn substitute(&self, form: &LinearForm) -> LinearForm {
        let mut out = LinearForm::zero();
        for (index, coeff) in form.terms() {
            match self.relations.get(&index) {
                None => out.add_term(index, coeff),
                Some(rel) => {
                    for (j, c) in rel.terms() {
                        out.add_term(j, coeff * c);
                    }
                }
            }
        }
        out
    }

    /// Value of every coordinate θ₁..θ_g given values for the free ones.
    pub fn full_angles(&self, free_value: impl Fn(u32) -> f64) -> Vec<f64> {
        (1..=self.g)
            .map(|i| match self.relations.get(&i) {
                None => free_value(i),
                Some(rel) => rel.eval(&free_value),
            })
            .collect()
    }
}

/// Assemble the identity-component model for an odd prime p: one relation
/// per βᵢ with 1 ≤ i ≤ (p−1)/2, each solved for its largest index.
pub fn identity_component(p: u32) -> Result<IdentityComponentModel, HodgeError> {
    let families = crate::shioda::beta_families(p)?;
    let g = (p * p - 1) / 2;
    let g_prime = p * (p - 1) / 2;
    let mut relations = BTreeMap::new();
    for i in 1..=(p - 1) / 2 {
        let signed = normalize_tuple(&families[(i - 1) as usize]);
        let (dependent, form) = relation_from_tuple(&signed)?;
        debug_assert_eq!(dependent, i + p * (p - 1) / 2);
        relations.insert(dependent, form);
    }
    let free_indices: Vec<u32> = (1..=g).filter(|i| !relations.contains_key(i)).collect();
    debug_assert_eq!(free_indices.len() as u32, g_prime);

    // Relations must already be supported on free coordinates.
    for form in relations.values() {
        debug_assert!(form.support().all(|j| !relations.contains_key(&j)));
    }
    if !full_rank(&relations, g) {
        return Err(HodgeError::RankDeficient(p));
    }
    Ok(IdentityComponentModel {
        p,
        g,
        g_prime,
        free_indices,
        relations,
    })
}

/// Rank check over the rationals by fraction-free elimination on the
/// (dependent − relation) rows.
fn full_rank(relations: &BTreeMap<u32, LinearForm>, g: u32) -> bool {
    let rows: Vec<Vec<i128>> = relations
        .iter()
        .map(|(&dep, form)| {
            let mut row = vec![0i128; g as usize];
            row[(dep - 1) as usize] = 1;
            for (j, c) in form.terms() {
                row[(j - 1) as usize] -= c as i128;
            }
            row
        })
        .collect();
    let mut rows = rows;
    let mut rank = 0usize;
    for col in 0..g as usize {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (pivot_row, rest) = {
            let (a, b) = rows.split_at_mut(rank + 1);
            (&a[rank], b)
        };
        let pv = pivot_row[col];
        for row in rest.iter_mut() {
            if row[col] != 0 {
                let rv = row[col];
                for c in col..pivot_row.len() {
                    row[c] = row[c] * pv - pivot_row[c] * rv;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank == relations.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shioda::{self, ShiodaTuple};

    #[test]
    fn normalize_examples() {
        let b1_p3 = normalize_tuple(&beta_family(3, 1).unwrap());
        assert_eq!(b1_p3.entries(), [1, 4, -3, -2]);
        let b1_p5 = normalize_tuple(&beta_family(5, 1).unwrap());
        assert_eq!(b1_p5.entries(), [1, 6, 11, -9, -5, -4]);
        let b2_p5 = normalize_tuple(&beta_family(5, 2).unwrap());
        assert_eq!(b2_p5.entries(), [2, 7, 12, -10, -8, -3]);
    }

    #[test]
    fn normalization_sign_pattern_for_families() {
        // First (p+1)/2 entries keep their sign; the distinguished entry
        // p(p−i) is always negated.
        for p in [3u32, 5, 7, 11, 13] {
            for i in 1..=(p - 1) / 2 {
                let beta = beta_family(p, i).unwrap();
                let signed = normalize_tuple(&beta);
                let half = ((p + 1) / 2) as usize;
                assert!(signed.entries()[..half].iter().all(|&e| e > 0));
                assert_eq!(
                    signed.entries()[..half].len() + signed.entries()[half..].len(),
                    (p + 1) as usize
                );
                assert!(signed.entries()[half..].iter().all(|&e| e < 0));
                let special = shioda::beta_special_entry(p, i) as i32;
                assert!(signed.entries().contains(&(special - (p * p) as i32)));
            }
        }
    }

    #[test]
    fn relation_examples() {
        let (dep, form) =
            relation_from_tuple(&normalize_tuple(&beta_family(5, 1).unwrap())).unwrap();
        assert_eq!(dep, 11);
        assert_eq!(
            form,
            LinearForm::from_terms([(1, -1), (4, 1), (5, 1), (6, -1), (9, 1)])
        );
        let (dep, form) =
            relation_from_tuple(&normalize_tuple(&beta_family(5, 2).unwrap())).unwrap();
        assert_eq!(dep, 12);
        assert_eq!(
            form,
            LinearForm::from_terms([(2, -1), (3, 1), (7, -1), (8, 1), (10, 1)])
        );
        let (dep, form) =
            relation_from_tuple(&normalize_tuple(&beta_family(3, 1).unwrap())).unwrap();
        assert_eq!(dep, 4);
        assert_eq!(form, LinearForm::from_terms([(1, -1), (2, 1), (3, 1)]));
    }

    #[test]
    fn relation_rejects_non_family_input() {
        // A paired member is not a family tuple.
        let paired = ShiodaTuple::new(25, vec![1, 2, 23, 24]).unwrap();
        assert!(relation_from_tuple(&normalize_tuple(&paired)).is_err());
        // β₄ = complement of β₁ has index i > (p−1)/2.
        let b4 = normalize_tuple(&beta_family(5, 4).unwrap());
        assert!(relation_from_tuple(&b4).is_err());
    }

    #[test]
    fn relation_coefficient_structure() {
        for p in [3u32, 5, 7, 11, 13, 17] {
            for i in 1..=(p - 1) / 2 {
                let (dep, form) =
                    relation_from_tuple(&normalize_tuple(&beta_family(p, i).unwrap())).unwrap();
                assert_eq!(dep, i + p * (p - 1) / 2);
                assert_eq!(form.len() as u32, p);
                assert_eq!(form.coefficient_sum(), 1);
                let positives = form.terms().filter(|&(_, c)| c == 1).count() as u32;
                let negatives = form.terms().filter(|&(_, c)| c == -1).count() as u32;
                assert_eq!(positives, (p + 1) / 2);
                assert_eq!(negatives, (p - 1) / 2);
            }
        }
    }

    #[test]
    fn conjugate_family_negates_raw_constraint() {
        // The raw signed sum of β_{p−i} is the negation of that of βᵢ,
        // entry for entry after sorting by coordinate index.
        for p in [3u32, 5, 7] {
            for i in 1..=(p - 1) / 2 {
                let a = normalize_tuple(&beta_family(p, i).unwrap());
                let b = normalize_tuple(&beta_family(p, p - i).unwrap());
                let mut raw_a: Vec<i32> = a.entries().to_vec();
                let mut raw_b: Vec<i32> = b.entries().iter().map(|&e| -e).collect();
                raw_a.sort_by_key(|e| e.abs());
                raw_b.sort_by_key(|e| e.abs());
                assert_eq!(raw_a, raw_b);
            }
        }
    }

    #[test]
    fn model_shapes() {
        let m5 = identity_component(5).unwrap();
        assert_eq!(m5.g(), 12);
        assert_eq!(m5.g_prime(), 10);
        assert_eq!(m5.dependent_indices().collect::<Vec<_>>(), [11, 12]);
        assert_eq!(m5.free_indices(), (1..=10).collect::<Vec<u32>>());

        let m3 = identity_component(3).unwrap();
        assert_eq!(m3.g(), 4);
        assert_eq!(m3.g_prime(), 3);
        assert_eq!(m3.dependent_indices().collect::<Vec<_>>(), [4]);
        assert_eq!(m3.free_indices(), [1, 2, 3]);

        for p in [7u32, 11, 13] {
            let m = identity_component(p).unwrap();
            assert_eq!(m.g(), (p * p - 1) / 2);
            assert_eq!(m.g_prime(), p * (p - 1) / 2);
            assert_eq!(m.relations().count() as u32, (p - 1) / 2);
            assert_eq!(m.g() - m.g_prime(), (p - 1) / 2);
        }
    }

    #[test]
    fn relation_supports_disjoint() {
        for p in [3u32, 5, 7, 11, 13] {
            let model = identity_component(p).unwrap();
            let mut seen = std::collections::HashSet::new();
            for (_, form) in model.relations() {
                for j in form.support() {
                    assert!(seen.insert(j), "index {j} in two relations (p={p})");
                }
            }
        }
    }

    #[test]
    fn substitute_examples() {
        let model = identity_component(5).unwrap();
        let theta11 = LinearForm::coordinate(11);
        assert_eq!(
            model.substitute(&theta11),
            LinearForm::from_terms([(1, -1), (4, 1), (5, 1), (6, -1), (9, 1)])
        );
        let theta3 = LinearForm::coordinate(3);
        assert_eq!(model.substitute(&theta3), theta3);
        let mixed = LinearForm::from_terms([(11, 1), (1, 1)]);
        assert_eq!(
            model.substitute(&mixed),
            LinearForm::from_terms([(4, 1), (5, 1), (6, -1), (9, 1)])
        );
        // Idempotence.
        for form in [theta11, mixed] {
            let once = model.substitute(&form);
            assert_eq!(model.substitute(&once), once);
        }
    }

    #[test]
    fn reconstructed_diagonal_satisfies_raw_constraints() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5a70);
        for p in [3u32, 5, 7] {
            let model = identity_component(p).unwrap();
            for _ in 0..20 {
                let free: std::collections::HashMap<u32, f64> = model
                    .free_indices()
                    .iter()
                    .map(|&i| (i, rng.gen_range(0.0..std::f64::consts::TAU)))
                    .collect();
                let angles = model.full_angles(|i| free[&i]);
                for i in 1..p {
                    let signed = normalize_tuple(&beta_family(p, i).unwrap());
                    let total: f64 = signed
                        .entries()
                        .iter()
                        .map(|&e| {
                            let theta = angles[(e.unsigned_abs() - 1) as usize];
                            if e > 0 {
                                theta
                            } else {
                                -theta
                            }
                        })
                        .sum();
                    // The product of unit complex numbers is 1 iff the
                    // angle sum is an integer multiple of 2π.
                    let turns = total / std::f64::consts::TAU;
                    assert!(
                        (turns - turns.round()).abs() < 1e-12,
                        "constraint broken for beta_{i}, p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        let form = LinearForm::from_terms([(1, -1), (4, 1), (5, 1), (6, -1), (9, 1)]);
        assert_eq!(form.to_string(), "-θ1+θ4+θ5-θ6+θ9");
        assert_eq!(LinearForm::zero().to_string(), "0");
        assert_eq!(LinearForm::from_terms([(2, 3)]).to_string(), "3θ2");
    }
}
