//! Enumeration and classification of the index tuples attached to Hodge
//! classes of Jac(y² = xᵐ − 1) for odd m.
//!
//! A tuple of codimension d is a strictly increasing sequence of 2d residues
//! in [1, m−1]. Membership in the distinguished set 𝔅ₘᵈ requires the twisted
//! weight Σᵢ ⟨t·bᵢ⟩ₘ / m to equal d for every t coprime to m. Members always
//! have entry sum d·m and split as d entries below m/2 and d above, which is
//! what makes a meet-in-the-middle enumeration effective.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num_integer::gcd;
use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiodaError {
    #[error("modulus must be odd and at least 3 (got {0})")]
    InvalidModulus(u32),
    #[error("codimension must satisfy 1 <= d <= (m-1)/2 (got d={d} for m={m})")]
    InvalidCodimension { m: u32, d: u32 },
    #[error("tuple entries must be strictly increasing within [1, m-1] and of even length >= 2")]
    MalformedTuple,
    #[error("{0} is not a unit modulo the tuple modulus")]
    NotAUnit(u32),
    #[error("estimated enumeration work {estimated} exceeds budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u64 },
    #[error("tuple {0} fails the membership conditions")]
    NotAMember(String),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u32),
    #[error("family index must satisfy 1 <= i <= p-1 (got i={i} for p={p})")]
    FamilyIndexOutOfRange { p: u32, i: u32 },
}

/// A strictly increasing even-length tuple of residues in [1, m−1].
///
/// The constructor enforces only the shape; use [`ShiodaTuple::is_member`]
/// for the full membership test.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiodaTuple {
    m: u32,
    entries: Vec<u32>,
}

impl fmt::Debug for ShiodaTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.entries.iter().join(", "), self.m)
    }
}

impl fmt::Display for ShiodaTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries.iter().join(", "))
    }
}

impl ShiodaTuple {
    pub fn new(m: u32, entries: Vec<u32>) -> Result<Self, ShiodaError> {
        if m < 3 || m % 2 == 0 {
            return Err(ShiodaError::InvalidModulus(m));
        }
        let ok_shape = !entries.is_empty()
            && entries.len() % 2 == 0
            && entries.windows(2).all(|w| w[0] < w[1])
            && entries.first().is_some_and(|&b| b >= 1)
            && entries.last().is_some_and(|&b| b < m);
        if !ok_shape {
            return Err(ShiodaError::MalformedTuple);
        }
        Ok(Self { m, entries })
    }

    fn from_sorted_unchecked(m: u32, entries: Vec<u32>) -> Self {
        debug_assert!(entries.len() % 2 == 0);
        debug_assert!(entries.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(entries.iter().all(|&b| (1..m).contains(&b)));
        Self { m, entries }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Codimension: half the tuple length.
    pub fn d(&self) -> u32 {
        (self.entries.len() / 2) as u32
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn contains(&self, b: u32) -> bool {
        self.entries.binary_search(&b).is_ok()
    }

    /// Twisted weight |t·β| = Σᵢ ⟨t·bᵢ⟩ₘ / m as an exact rational.
    pub fn weight(&self, t: u32) -> Result<Ratio<u64>, ShiodaError> {
        self.check_unit(t)?;
        let m = u64::from(self.m);
        let num: u64 = self
            .entries
            .iter()
            .map(|&b| u64::from(t) * u64::from(b) % m)
            .sum();
        Ok(Ratio::new(num, m))
    }

    /// Full membership test: entry sum d·m and twisted weight d for every
    /// unit t. All units are checked; no reliance on the t ↔ m−t symmetry.
    pub fn is_member(&self) -> bool {
        let m = u64::from(self.m);
        let target = u64::from(self.d()) * m;
        if self.entries.iter().map(|&b| u64::from(b)).sum::<u64>() != target {
            return false;
        }
        self.units().all(|t| self.twisted_sum_is(t, target))
    }

    fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (2..self.m).filter(move |&t| gcd(t, self.m) == 1)
    }

    fn twisted_sum_is(&self, t: u32, target: u64) -> bool {
        let m = u64::from(self.m);
        let t = u64::from(t);
        let mut sum = 0u64;
        for &b in &self.entries {
            sum += t * u64::from(b) % m;
            if sum > target {
                return false;
            }
        }
        sum == target
    }

    /// The sorted image ⟨t·β⟩ₘ under a unit t.
    pub fn unit_image(&self, t: u32) -> Result<ShiodaTuple, ShiodaError> {
        self.check_unit(t)?;
        let m = u64::from(self.m);
        let mut entries: Vec<u32> = self
            .entries
            .iter()
            .map(|&b| (u64::from(t) * u64::from(b) % m) as u32)
            .collect();
        entries.sort_unstable();
        Ok(Self::from_sorted_unchecked(self.m, entries))
    }

    /// The complement tuple (m − b₂d, …, m − b₁), i.e. the image under t = m−1.
    pub fn complement(&self) -> ShiodaTuple {
        let mut entries: Vec<u32> = self.entries.iter().map(|&b| self.m - b).collect();
        entries.reverse();
        Self::from_sorted_unchecked(self.m, entries)
    }

    /// Whether each entry's complement m − b is also an entry.
    pub fn is_paired(&self) -> bool {
        self.entries.iter().all(|&b| self.contains(self.m - b))
    }

    fn check_unit(&self, t: u32) -> Result<(), ShiodaError> {
        if t == 0 || gcd(t, self.m) != 1 {
            return Err(ShiodaError::NotAUnit(t));
        }
        Ok(())
    }
}

/// How far [`enumerate_tuples`] filters the meet-in-the-middle join.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Join results only: entry sum d·m with at least d entries below m/2.
    /// This is the pre-filter population the membership test then prunes.
    Candidates,
    /// Full members of 𝔅ₘᵈ (twisted weight d for every unit).
    Members,
}

pub const DEFAULT_WORK_BUDGET: u64 = 1_000_000_000;

/// Enumerate tuples for modulus m and codimension d at the given stage,
/// under [`DEFAULT_WORK_BUDGET`].
pub fn enumerate_tuples(m: u32, d: u32, stage: Stage) -> Result<Vec<ShiodaTuple>, ShiodaError> {
    enumerate_tuples_with_budget(m, d, stage, DEFAULT_WORK_BUDGET)
}

/// Estimated enumeration work: join pairs plus materialized half-subsets.
///
/// Members use the exact d-below / d-above split; candidates additionally
/// include splits with more than d entries below m/2 (all entries below is
/// impossible, since 2d entries below m/2 sum to less than d·m).
pub fn estimate_enumeration_work(m: u32, d: u32, stage: Stage) -> Result<u128, ShiodaError> {
    validate_domain(m, d)?;
    let half = (m - 1) / 2;
    let target = u64::from(d) * u64::from(m);
    let low_counts = subset_sum_counts(1..=half, 2 * d as usize);
    let high_counts = subset_sum_counts(half + 1..=m - 1, 2 * d as usize);
    let splits = split_sizes(stage, d, half);
    let mut work: u128 = 0;
    for s in splits {
        let lo = &low_counts[s as usize];
        let hi = &high_counts[(2 * d - s) as usize];
        for (sum, &n_lo) in lo.iter().enumerate() {
            if n_lo == 0 {
                continue;
            }
            let Some(rest) = target.checked_sub(sum as u64) else {
                continue;
            };
            if let Some(&n_hi) = hi.get(rest as usize) {
                work = work.saturating_add(n_lo.saturating_mul(n_hi));
            }
        }
        work = work.saturating_add(lo.iter().copied().fold(0u128, u128::saturating_add));
        work = work.saturating_add(hi.iter().copied().fold(0u128, u128::saturating_add));
    }
    Ok(work)
}

pub fn enumerate_tuples_with_budget(
    m: u32,
    d: u32,
    stage: Stage,
    budget: u64,
) -> Result<Vec<ShiodaTuple>, ShiodaError> {
    let estimated = estimate_enumeration_work(m, d, stage)?;
    if estimated > u128::from(budget) {
        return Err(ShiodaError::BudgetExceeded { estimated, budget });
    }

    let half = (m - 1) / 2;
    let target = u64::from(d) * u64::from(m);
    let mut tuples: Vec<ShiodaTuple> = Vec::new();

    for s in split_sizes(stage, d, half) {
        let high_by_sum = subsets_by_sum(half + 1..=m - 1, (2 * d - s) as usize);
        let mut joined: Vec<Vec<u32>> = Vec::new();
        each_combination(1..=half, s as usize, &mut |low| {
            let low_sum: u64 = low.iter().map(|&b| u64::from(b)).sum();
            let Some(rest) = target.checked_sub(low_sum) else {
                return;
            };
            if let Some(highs) = high_by_sum.get(&(rest as u32)) {
                for high in highs {
                    let mut entries = Vec::with_capacity(2 * d as usize);
                    entries.extend_from_slice(low);
                    entries.extend_from_slice(high);
                    joined.push(entries);
                }
            }
        });
        let kept: Vec<Vec<u32>> = match stage {
            Stage::Candidates => joined,
            Stage::Members => {
                // Data-parallel membership filter; collect preserves the
                // deterministic join order.
                let flags: Vec<bool> = joined
                    .par_iter()
                    .map(|entries| {
                        let t = ShiodaTuple::from_sorted_unchecked(m, entries.clone());
                        t.is_member()
                    })
                    .collect();
                joined
                    .into_iter()
                    .zip(flags)
                    .filter_map(|(e, keep)| keep.then_some(e))
                    .collect()
            }
        };
        tuples.extend(
            kept.into_iter()
                .map(|e| ShiodaTuple::from_sorted_unchecked(m, e)),
        );
    }

    tuples.sort_unstable();

    // Post-hoc structural assertions, independent of the pruning above.
    for t in &tuples {
        let sum: u64 = t.entries.iter().map(|&b| u64::from(b)).sum();
        assert_eq!(sum, target, "enumerated tuple with wrong entry sum: {t}");
        let di = d as usize;
        assert!(2 * t.entries[di - 1] < m, "entry d of {t} not below m/2");
        if matches!(stage, Stage::Members) {
            assert!(
                2 * t.entries[di] > m,
                "entry d+1 of member {t} not above m/2"
            );
        }
    }
    Ok(tuples)
}

fn validate_domain(m: u32, d: u32) -> Result<(), ShiodaError> {
    if m < 3 || m % 2 == 0 {
        return Err(ShiodaError::InvalidModulus(m));
    }
    if d < 1 || d > (m - 1) / 2 {
        return Err(ShiodaError::InvalidCodimension { m, d });
    }
    Ok(())
}

/// Sizes of the below-m/2 part of the split, per stage.
fn split_sizes(stage: Stage, d: u32, half: u32) -> Vec<u32> {
    match stage {
        Stage::Members => vec![d],
        Stage::Candidates => (d..=(2 * d - 1).min(half)).collect(),
    }
}

/// counts[k][s] = number of k-subsets of the range with entry sum s,
/// saturating at u128::MAX.
fn subset_sum_counts(range: std::ops::RangeInclusive<u32>, k_max: usize) -> Vec<Vec<u128>> {
    let values: Vec<u32> = range.collect();
    let max_sum: usize = values.iter().rev().take(k_max).map(|&v| v as usize).sum();
    let mut counts = vec![vec![0u128; max_sum + 1]; k_max + 1];
    counts[0][0] = 1;
    for &v in &values {
        for k in (1..=k_max).rev() {
            for s in (v as usize..=max_sum).rev() {
                let add = counts[k - 1][s - v as usize];
                if add != 0 {
                    counts[k][s] = counts[k][s].saturating_add(add);
                }
            }
        }
    }
    counts
}

fn subsets_by_sum(range: std::ops::RangeInclusive<u32>, k: usize) -> HashMap<u32, Vec<Box<[u32]>>> {
    let mut by_sum: HashMap<u32, Vec<Box<[u32]>>> = HashMap::new();
    each_combination(range, k, &mut |combo| {
        let sum: u32 = combo.iter().sum();
        by_sum.entry(sum).or_default().push(combo.into());
    });
    by_sum
}

/// Visit all k-element subsets of the range in lexicographic order.
fn each_combination(
    range: std::ops::RangeInclusive<u32>,
    k: usize,
    visit: &mut impl FnMut(&[u32]),
) {
    let values: Vec<u32> = range.collect();
    if k > values.len() {
        return;
    }
    let mut chosen = vec![0u32; k];
    fn rec(
        values: &[u32],
        start: usize,
        depth: usize,
        chosen: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]),
    ) {
        let k = chosen.len();
        if depth == k {
            visit(chosen);
            return;
        }
        let remaining = k - depth;
        for idx in start..=values.len() - remaining {
            chosen[depth] = values[idx];
            rec(values, idx + 1, depth + 1, chosen, visit);
        }
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    rec(&values, 0, 0, &mut chosen, visit);
}

/// Structural class of a member tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleKind {
    /// Entirely made of complement pairs (b, m−b).
    Paired,
    /// Not paired, but some proper even-size subset sums to 0 mod m.
    ExceptionalDecomposable,
    /// No proper even-size subset sums to 0 mod m. Length-2 tuples are
    /// vacuously indecomposable and simultaneously paired.
    Indecomposable,
}

impl fmt::Display for TupleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TupleKind::Paired => "paired",
            TupleKind::ExceptionalDecomposable => "exceptional-decomposable",
            TupleKind::Indecomposable => "indecomposable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TupleClass {
    pub kind: TupleKind,
    /// Complement-pair closure, independent of `kind`; a length-2 tuple is
    /// both paired and indecomposable.
    pub paired: bool,
    /// Witness partition into member parts, smallest parts extracted first,
    /// sorted by (length, entries). `None` for indecomposable tuples.
    pub decomposition: Option<Vec<ShiodaTuple>>,
}

impl TupleClass {
    /// Exceptional means not entirely made of complement pairs.
    pub fn is_exceptional(&self) -> bool {
        !self.paired
    }
}

/// Classify a member tuple by exhaustive even-size proper-subset scan.
pub fn classify(beta: &ShiodaTuple) -> Result<TupleClass, ShiodaError> {
    if !beta.is_member() {
        return Err(ShiodaError::NotAMember(beta.to_string()));
    }
    let paired = beta.is_paired();
    let decomposable = has_zero_sum_proper_even_subset(beta);
    let kind = if !decomposable {
        TupleKind::Indecomposable
    } else if paired {
        TupleKind::Paired
    } else {
        TupleKind::ExceptionalDecomposable
    };
    let decomposition = if decomposable {
        let mut parts = Vec::new();
        collect_member_parts(beta, &mut parts);
        // In every observed case the greedy extraction partitions the whole
        // tuple into member parts; a tuple it cannot split is reported with
        // no witness rather than a malformed one.
        if parts.len() >= 2 {
            parts.sort_by(|a, b| (a.entries.len(), &a.entries).cmp(&(b.entries.len(), &b.entries)));
            Some(parts)
        } else {
            None
        }
    } else {
        None
    };
    Ok(TupleClass {
        kind,
        paired,
        decomposition,
    })
}

fn has_zero_sum_proper_even_subset(t: &ShiodaTuple) -> bool {
    let m = u64::from(t.m);
    let n = t.entries.len();
    for size in (2..n).step_by(2) {
        for combo in t.entries.iter().combinations(size) {
            let sum: u64 = combo.iter().map(|&&b| u64::from(b)).sum();
            if sum % m == 0 {
                return true;
            }
        }
    }
    false
}

/// Smallest proper even-size subset that is itself a member, in
/// (size, lexicographic) order. Zero-sum subsets of a member need not be
/// members themselves, so the search tests full membership per subset.
fn smallest_member_proper_subset(t: &ShiodaTuple) -> Option<ShiodaTuple> {
    let m = u64::from(t.m);
    let n = t.entries.len();
    for size in (2..n).step_by(2) {
        let part_target = (size as u64 / 2) * m;
        for combo in t.entries.iter().combinations(size) {
            let sum: u64 = combo.iter().map(|&&b| u64::from(b)).sum();
            if sum != part_target {
                continue;
            }
            let part =
                ShiodaTuple::from_sorted_unchecked(t.m, combo.into_iter().copied().collect());
            if part.is_member() {
                return Some(part);
            }
        }
    }
    None
}

fn collect_member_parts(t: &ShiodaTuple, parts: &mut Vec<ShiodaTuple>) {
    if !has_zero_sum_proper_even_subset(t) {
        parts.push(t.clone());
        return;
    }
    match smallest_member_proper_subset(t) {
        Some(part) => {
            let rest: Vec<u32> = t
                .entries
                .iter()
                .copied()
                .filter(|b| !part.contains(*b))
                .collect();
            let rest = ShiodaTuple::from_sorted_unchecked(t.m, rest);
            parts.push(part);
            collect_member_parts(&rest, parts);
        }
        None => parts.push(t.clone()),
    }
}

/// The explicit family member βᵢ = sorted {i, i+p, …, i+(p−1)p, p(p−i)}
/// for m = p².
pub fn beta_family(p: u32, i: u32) -> Result<ShiodaTuple, ShiodaError> {
    if p < 3 || !arith::is_prime(u64::from(p)) {
        return Err(ShiodaError::NotAnOddPrime(p));
    }
    if i < 1 || i > p - 1 {
        return Err(ShiodaError::FamilyIndexOutOfRange { p, i });
    }
    let mut entries: Vec<u32> = (0..p).map(|j| i + j * p).collect();
    entries.push(p * (p - i));
    entries.sort_unstable();
    Ok(ShiodaTuple::from_sorted_unchecked(p * p, entries))
}

/// All family members β₁, …, β_{p−1}.
pub fn beta_families(p: u32) -> Result<Vec<ShiodaTuple>, ShiodaError> {
    (1..p).map(|i| beta_family(p, i)).collect()
}

/// The distinguished entry p(p−i) of βᵢ.
pub fn beta_special_entry(p: u32, i: u32) -> u32 {
    p * (p - i)
}

/// Per-codimension outcome of [`verify_indecomposable_classification`].
#[derive(Debug, Clone)]
pub enum SurveyOutcome {
    Done {
        members: u64,
        paired: u64,
        exceptional: u64,
        /// Indecomposable AND exceptional. Length-2 members are vacuously
        /// indecomposable but paired, so they are excluded here; the
        /// classification theorem concerns the exceptional ones.
        exceptional_indecomposable: u64,
        indecomposables: Vec<ShiodaTuple>,
    },
    Skipped {
        estimated: u128,
        budget: u64,
    },
}

#[derive(Debug, Clone)]
pub struct SurveyEntry {
    pub d: u32,
    pub outcome: SurveyOutcome,
}

#[derive(Debug, Clone)]
pub struct ClassificationSurvey {
    pub p: u32,
    pub entries: Vec<SurveyEntry>,
    /// Member count at d = (p+1)/2 is at least p−1 (the βᵢ are members).
    pub member_bound_ok: Option<bool>,
    /// Exceptional indecomposables at d = (p+1)/2 equal the βᵢ as a set.
    pub family_matches: Option<bool>,
    /// The βᵢ are pairwise disjoint and cover [1, p²−1].
    pub partition_ok: bool,
}

/// Enumerate and classify every codimension in `d_range`, checking the
/// classification against the βᵢ family. Codimensions whose enumeration
/// exceeds the budget are reported as skipped, never silently dropped.
pub fn verify_indecomposable_classification(
    p: u32,
    d_range: impl IntoIterator<Item = u32>,
    budget: u64,
) -> Result<ClassificationSurvey, ShiodaError> {
    let families = beta_families(p)?;
    let m = p * p;
    let special_d = (p + 1) / 2;

    let mut covered = vec![false; (m as usize) + 1];
    let mut partition_ok = true;
    for f in &families {
        for &b in f.entries() {
            if covered[b as usize] {
                partition_ok = false;
            }
            covered[b as usize] = true;
        }
    }
    partition_ok &= (1..m).all(|b| covered[b as usize]);

    let mut entries = Vec::new();
    let mut member_bound_ok = None;
    let mut family_matches = None;
    for d in d_range {
        validate_domain(m, d)?;
        let estimated = estimate_enumeration_work(m, d, Stage::Members)?;
        if estimated > u128::from(budget) {
            entries.push(SurveyEntry {
                d,
                outcome: SurveyOutcome::Skipped { estimated, budget },
            });
            continue;
        }
        let members = enumerate_tuples_with_budget(m, d, Stage::Members, budget)?;
        let mut paired = 0u64;
        let mut exceptional = 0u64;
        let mut indecomposables = Vec::new();
        for t in &members {
            let class = classify(t)?;
            if class.paired {
                paired += 1;
            } else {
                exceptional += 1;
            }
            if class.kind == TupleKind::Indecomposable && class.is_exceptional() {
                indecomposables.push(t.clone());
            }
        }
        if d == special_d {
            member_bound_ok = Some(members.len() as u64 >= u64::from(p) - 1);
            let mut expect = families.clone();
            expect.sort_unstable();
            family_matches = Some(indecomposables == expect);
        }
        entries.push(SurveyEntry {
            d,
            outcome: SurveyOutcome::Done {
                members: members.len() as u64,
                paired,
                exceptional,
                exceptional_indecomposable: indecomposables.len() as u64,
                indecomposables,
            },
        });
    }
    Ok(ClassificationSurvey {
        p,
        entries,
        member_bound_ok,
        family_matches,
        partition_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(m: u32, entries: &[u32]) -> ShiodaTuple {
        ShiodaTuple::new(m, entries.to_vec()).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(ShiodaTuple::new(10, vec![1, 9]).is_err());
        assert!(ShiodaTuple::new(9, vec![1, 2, 3]).is_err());
        assert!(ShiodaTuple::new(9, vec![2, 1]).is_err());
        assert!(ShiodaTuple::new(9, vec![0, 9]).is_err());
        assert!(ShiodaTuple::new(9, vec![1, 1]).is_err());
        assert!(ShiodaTuple::new(9, vec![]).is_err());
        assert!(ShiodaTuple::new(9, vec![4, 5]).is_ok());
    }

    #[test]
    fn weight_examples() {
        let beta = t(25, &[1, 6, 11, 16, 20, 21]);
        assert_eq!(beta.weight(1).unwrap(), Ratio::from_integer(3));
        let pair = t(9, &[1, 8]);
        assert_eq!(pair.weight(2).unwrap(), Ratio::from_integer(1));
        let quad = t(9, &[1, 2, 7, 8]);
        assert_eq!(quad.weight(7).unwrap(), Ratio::from_integer(2));
        assert!(quad.weight(3).is_err());
        assert!(quad.weight(0).is_err());
    }

    #[test]
    fn weight_detects_non_member() {
        // Sum is 2m, but the twist by t=7 gives weight 1 instead of d=2.
        let not_member = t(25, &[1, 4, 22, 23]);
        assert!(!not_member.is_member());
        assert_eq!(not_member.weight(1).unwrap(), Ratio::from_integer(2));
        assert_eq!(not_member.weight(7).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn d1_members_are_complement_pairs() {
        let members = enumerate_tuples(9, 1, Stage::Members).unwrap();
        let expect: Vec<ShiodaTuple> = [(1, 8), (2, 7), (3, 6), (4, 5)]
            .iter()
            .map(|&(a, b)| t(9, &[a, b]))
            .collect();
        assert_eq!(members, expect);
        for m in (3u32..40).step_by(2) {
            let members = enumerate_tuples(m, 1, Stage::Members).unwrap();
            assert_eq!(members.len() as u32, (m - 1) / 2);
            assert!(members.iter().all(|b| b.is_paired()));
        }
    }

    #[test]
    fn frozen_counts_m25_d3() {
        let candidates = enumerate_tuples(25, 3, Stage::Candidates).unwrap();
        assert_eq!(candidates.len(), 2971);
        let members = enumerate_tuples(25, 3, Stage::Members).unwrap();
        assert_eq!(members.len(), 224);
        // Every member appears among the candidates.
        for m in &members {
            assert!(candidates.binary_search(m).is_ok());
        }
    }

    #[test]
    fn frozen_member_counts_per_codimension() {
        let m25: Vec<usize> = (1..=12)
            .map(|d| enumerate_tuples(25, d, Stage::Members).unwrap().len())
            .collect();
        assert_eq!(m25, [12, 66, 224, 519, 852, 1008, 852, 519, 224, 66, 12, 1]);
        let m9: Vec<usize> = (1..=4)
            .map(|d| enumerate_tuples(9, d, Stage::Members).unwrap().len())
            .collect();
        assert_eq!(m9, [4, 8, 4, 1]);
    }

    #[test]
    fn enumerate_rejects_bad_domain() {
        assert!(matches!(
            enumerate_tuples(10, 1, Stage::Members),
            Err(ShiodaError::InvalidModulus(10))
        ));
        assert!(matches!(
            enumerate_tuples(9, 0, Stage::Members),
            Err(ShiodaError::InvalidCodimension { .. })
        ));
        assert!(matches!(
            enumerate_tuples(9, 5, Stage::Members),
            Err(ShiodaError::InvalidCodimension { .. })
        ));
    }

    #[test]
    fn budget_gate_reports_estimate() {
        let err = enumerate_tuples_with_budget(25, 3, Stage::Members, 10).unwrap_err();
        match err {
            ShiodaError::BudgetExceeded { estimated, budget } => {
                assert!(estimated > 10);
                assert_eq!(budget, 10);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn classify_examples() {
        let indec = classify(&t(25, &[1, 6, 11, 16, 20, 21])).unwrap();
        assert_eq!(indec.kind, TupleKind::Indecomposable);
        assert!(!indec.paired);
        assert!(indec.decomposition.is_none());

        let pair = classify(&t(9, &[4, 5])).unwrap();
        assert_eq!(pair.kind, TupleKind::Indecomposable);
        assert!(pair.paired);

        let quad = classify(&t(9, &[1, 2, 7, 8])).unwrap();
        assert_eq!(quad.kind, TupleKind::Paired);
        let parts = quad.decomposition.unwrap();
        assert_eq!(parts, vec![t(9, &[1, 8]), t(9, &[2, 7])]);

        assert!(classify(&t(25, &[1, 4, 22, 23])).is_err());
    }

    #[test]
    fn classify_exceptional_decomposable() {
        // β₁ ∪ β₂ for p = 5: no complement pairs, yet decomposable.
        let union = t(25, &[1, 2, 6, 7, 11, 12, 15, 16, 17, 20, 21, 22]);
        let class = classify(&union).unwrap();
        assert_eq!(class.kind, TupleKind::ExceptionalDecomposable);
        assert!(!class.paired);
        let parts = class.decomposition.unwrap();
        assert_eq!(
            parts,
            vec![beta_family(5, 1).unwrap(), beta_family(5, 2).unwrap()]
        );
    }

    #[test]
    fn decomposition_parts_are_members_and_partition() {
        for m in [9u32, 25] {
            let d_max = if m == 9 { 4 } else { 6 };
            for d in 1..=d_max {
                for tuple in enumerate_tuples(m, d, Stage::Members).unwrap() {
                    let class = classify(&tuple).unwrap();
                    match class.decomposition {
                        None => assert_eq!(class.kind, TupleKind::Indecomposable),
                        Some(parts) => {
                            assert!(parts.len() >= 2);
                            let mut all: Vec<u32> = Vec::new();
                            let mut d_sum = 0;
                            for part in &parts {
                                assert!(part.is_member(), "part {part} of {tuple}");
                                d_sum += part.d();
                                all.extend_from_slice(part.entries());
                            }
                            all.sort_unstable();
                            assert_eq!(all, tuple.entries());
                            assert_eq!(d_sum, tuple.d());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn beta_family_examples() {
        assert_eq!(beta_family(5, 1).unwrap(), t(25, &[1, 6, 11, 16, 20, 21]));
        assert_eq!(beta_family(5, 4).unwrap(), t(25, &[4, 5, 9, 14, 19, 24]));
        assert_eq!(beta_family(3, 1).unwrap(), t(9, &[1, 4, 6, 7]));
        assert_eq!(beta_family(3, 2).unwrap(), t(9, &[2, 3, 5, 8]));
        assert!(beta_family(5, 0).is_err());
        assert!(beta_family(5, 5).is_err());
        assert!(beta_family(9, 1).is_err());
        assert!(beta_family(2, 1).is_err());
    }

    #[test]
    fn beta_family_structure() {
        for p in [3u32, 5, 7, 11, 13] {
            for i in 1..p {
                let beta = beta_family(p, i).unwrap();
                assert_eq!(beta.d(), (p + 1) / 2);
                assert!(beta.is_member(), "beta_{i} for p={p}");
                let pos = beta
                    .entries()
                    .binary_search(&beta_special_entry(p, i))
                    .unwrap();
                assert_eq!(pos as u32 + 1, p - i + 1);
            }
        }
    }

    #[test]
    fn complement_pairs_families() {
        for p in [3u32, 5, 7] {
            for i in 1..p {
                let beta = beta_family(p, i).unwrap();
                assert_eq!(beta.complement(), beta_family(p, p - i).unwrap());
            }
        }
    }

    #[test]
    fn survey_m9() {
        let survey = verify_indecomposable_classification(3, 1..=4, DEFAULT_WORK_BUDGET).unwrap();
        assert!(survey.partition_ok);
        assert_eq!(survey.member_bound_ok, Some(true));
        assert_eq!(survey.family_matches, Some(true));
        let counts: Vec<(u64, u64)> = survey
            .entries
            .iter()
            .map(|e| match &e.outcome {
                SurveyOutcome::Done {
                    members,
                    exceptional_indecomposable,
                    ..
                } => (*members, *exceptional_indecomposable),
                SurveyOutcome::Skipped { .. } => panic!("unexpected skip"),
            })
            .collect();
        assert_eq!(counts, [(4, 0), (8, 2), (4, 0), (1, 0)]);
    }

    #[test]
    fn survey_reports_skips() {
        // A 100-unit budget still admits the trivial edge codimensions
        // (d = 1 and d = 12 cost a few dozen units) but must skip the
        // combinatorial middle instead of silently dropping it.
        let survey = verify_indecomposable_classification(5, 1..=12, 100).unwrap();
        assert_eq!(survey.entries.len(), 12);
        let skipped: Vec<u32> = survey
            .entries
            .iter()
            .filter(|e| matches!(e.outcome, SurveyOutcome::Skipped { .. }))
            .map(|e| e.d)
            .collect();
        assert!(skipped.contains(&6), "midrange skips: {skipped:?}");
        for entry in &survey.entries {
            if let SurveyOutcome::Skipped { estimated, budget } = entry.outcome {
                assert!(estimated > u128::from(budget));
                assert_eq!(budget, 100);
            }
        }
        // The special codimension d = 3 was skipped, so the family
        // comparison never ran.
        assert_eq!(survey.family_matches, None);
        assert_eq!(survey.member_bound_ok, None);
    }
}
