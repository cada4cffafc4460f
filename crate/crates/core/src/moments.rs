//! Exact Haar-measure moments of the trace statistic on each component
//! of the Sato-Tate group.
//!
//! On the component Uγᵏ the trace is a finite sum Σ c·2cos(M) of cosines
//! of integer forms in the free angles. Raising it to the n-th power and
//! integrating picks out exactly the expansion terms whose exponent forms
//! cancel, so E[tⁿ] is a signed count of n-step closed walks on a lattice
//! whose steps are the forms ±M. The engine counts those walks exactly in
//! big integers, meeting in the middle to halve the walk length.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::arith;
use crate::group::{self, BlockMonomialMatrix, GroupError, SymbolicCharPoly};
use crate::hodge::{self, HodgeError, IdentityComponentModel, LinearForm};

pub const DEFAULT_MOMENT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(
        "moment walk{} for n={n} needs about {entries} lattice entries, over the budget of {budget}",
        .class.map(|k| format!(" on component k={k}")).unwrap_or_default()
    )]
    BudgetExceeded {
        class: Option<u32>,
        n: u32,
        entries: u64,
        budget: u64,
    },
}

/// The trace statistic on one component, as a canonicalized list of
/// cosine terms (c, M) standing for Σ c·2cos(M). Each form is flipped if
/// needed so its highest-index coefficient is positive, which is harmless
/// under cos and makes equal expressions compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceExpression {
    terms: Vec<(i8, LinearForm)>,
}

impl TraceExpression {
    pub fn new(terms: impl IntoIterator<Item = (i8, LinearForm)>) -> Self {
        let mut terms: Vec<(i8, LinearForm)> =
            terms.into_iter().map(|(c, m)| (c, canonical(m))).collect();
        terms.sort();
        Self { terms }
    }

    /// Trace terms of det(T·I − Uγᵏ): the length-1 cycle contributions.
    pub fn from_char_poly(cp: &SymbolicCharPoly) -> Self {
        Self::new(cp.linear_trace_terms())
    }

    pub fn terms(&self) -> &[(i8, LinearForm)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorted union of the angle coordinates the expression touches.
    pub fn support(&self) -> Vec<u32> {
        let mut dims: Vec<u32> = self.terms.iter().flat_map(|(_, m)| m.support()).collect();
        dims.sort_unstable();
        dims.dedup();
        dims
    }

    pub fn value(&self, angle: impl Fn(u32) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(c, m)| f64::from(*c) * 2.0 * m.eval(&angle).cos())
            .sum()
    }
}

fn canonical(form: LinearForm) -> LinearForm {
    match form.terms().last() {
        Some((_, c)) if c < 0 => form.negated(),
        _ => form,
    }
}

/// One walk step: an exponent delta on the support and its signed weight.
pub type WalkMove = (Box<[i16]>, i64);

/// A signed counting measure on ℤ^dims: the exact distribution of the
/// running exponent form of a lattice walk.
#[derive(Debug, Clone)]
pub struct ExponentDistribution {
    dims: Vec<u32>,
    support: HashMap<Box<[i16]>, BigInt>,
}

impl ExponentDistribution {
    /// Unit mass at the origin.
    pub fn delta(dims: Vec<u32>) -> Self {
        let origin = vec![0i16; dims.len()].into_boxed_slice();
        let mut support = HashMap::new();
        support.insert(origin, BigInt::one());
        Self { dims, support }
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn count(&self, position: &[i16]) -> BigInt {
        self.support.get(position).cloned().unwrap_or_default()
    }

    pub fn positions(&self) -> impl Iterator<Item = (&[i16], &BigInt)> + '_ {
        self.support.iter().map(|(v, c)| (v.as_ref(), c))
    }

    /// Signed total mass; after s steps it equals (Σ move weights)^s.
    pub fn total_mass(&self) -> BigInt {
        self.support.values().sum()
    }

    /// Whether the measure is invariant under v ↦ −v.
    pub fn is_symmetric(&self) -> bool {
        self.support.iter().all(|(v, c)| {
            let neg: Box<[i16]> = v.iter().map(|x| -x).collect();
            self.support.get(&neg) == Some(c)
        })
    }

    /// One convolution step. Errs with the estimated entry count when
    /// `support × moves` would exceed the budget.
    pub fn step(&self, moves: &[WalkMove], budget: u64) -> Result<Self, u64> {
        let estimated = self.support.len() as u64 * moves.len() as u64;
        if estimated > budget {
            return Err(estimated);
        }
        let mut support: HashMap<Box<[i16]>, BigInt> = HashMap::with_capacity(self.support.len());
        for (position, count) in &self.support {
            for (delta, weight) in moves {
                let next: Box<[i16]> = position
                    .iter()
                    .zip(delta.iter())
                    .map(|(a, b)| a + b)
                    .collect();
                *support.entry(next).or_default() += count * *weight;
            }
        }
        support.retain(|_, count| !count.is_zero());
        Ok(Self {
            dims: self.dims.clone(),
            support,
        })
    }

    /// Σ_v self(v)·other(−v): the number of ways to splice a walk from
    /// this half with an opposite-endpoint walk from the other half.
    pub fn join_opposite(&self, other: &Self) -> BigInt {
        debug_assert_eq!(self.dims, other.dims);
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = BigInt::zero();
        for (position, count) in &small.support {
            let neg: Box<[i16]> = position.iter().map(|x| -x).collect();
            if let Some(partner) = large.support.get(&neg) {
                acc += count * partner;
            }
        }
        acc
    }
}

/// The walk steps of a trace expression on its own support: ±M with
/// weight c for every term (c, M).
pub fn walk_moves(expr: &TraceExpression) -> (Vec<u32>, Vec<WalkMove>) {
    let dims = expr.support();
    let mut moves = Vec::with_capacity(2 * expr.terms().len());
    for (c, form) in expr.terms() {
        let vector: Box<[i16]> = dims
            .iter()
            .map(|&d| i16::try_from(form.coefficient(d)).expect("small form coefficients"))
            .collect();
        let negated: Box<[i16]> = vector.iter().map(|x| -x).collect();
        moves.push((vector, i64::from(*c)));
        moves.push((negated, i64::from(*c)));
    }
    (dims, moves)
}

/// E[tⁿ] on the component carrying this trace expression, exactly. Walks
/// meet in the middle: both halves run the same step budget and join on
/// opposite endpoints.
pub fn exact_moment(expr: &TraceExpression, n: u32, budget: u64) -> Result<BigInt, MomentError> {
    if n == 0 {
        return Ok(BigInt::one());
    }
    if expr.is_zero() {
        return Ok(BigInt::zero());
    }
    let (dims, moves) = walk_moves(expr);
    let half = n / 2;
    let mut first = ExponentDistribution::delta(dims);
    for _ in 0..half {
        first = first
            .step(&moves, budget)
            .map_err(|entries| MomentError::BudgetExceeded {
                class: None,
                n,
                entries,
                budget,
            })?;
    }
    let second = if n % 2 == 0 {
        first.clone()
    } else {
        first
            .step(&moves, budget)
            .map_err(|entries| MomentError::BudgetExceeded {
                class: None,
                n,
                entries,
                budget,
            })?
    };
    Ok(second.join_opposite(&first))
}

/// Brute-force oracle for small n: expand (Σ c·e^{iM} + c·e^{−iM})ⁿ term
/// by term and collect the constant part.
pub fn naive_moment(expr: &TraceExpression, n: u32) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let moves: Vec<(LinearForm, i64)> = expr
        .terms()
        .iter()
        .flat_map(|(c, m)| [(m.clone(), i64::from(*c)), (m.negated(), i64::from(*c))])
        .collect();
    fn recurse(moves: &[(LinearForm, i64)], depth: u32, acc: &LinearForm, weight: i64) -> BigInt {
        if depth == 0 {
            return if acc.is_zero() {
                BigInt::from(weight)
            } else {
                BigInt::zero()
            };
        }
        let mut total = BigInt::zero();
        for (form, w) in moves {
            total += recurse(moves, depth - 1, &acc.add(form), weight * w);
        }
        total
    }
    recurse(&moves, n, &LinearForm::zero(), 1)
}

/// Exact moments E[tⁿ], n = 1..=n_max, on every component k = 0..order−1.
/// Components whose trace expression is symbolically zero are detected
/// up front and skipped.
pub fn component_moments(
    model: &IdentityComponentModel,
    gamma: &BlockMonomialMatrix,
    n_max: u32,
    budget: u64,
) -> Result<Vec<Vec<BigInt>>, MomentError> {
    let order = group::gamma_power_order(gamma);
    let mut per_class = Vec::with_capacity(order as usize);
    for k in 0..order {
        let cp = group::char_poly_symbolic(model, gamma, k)?;
        let expr = TraceExpression::from_char_poly(&cp);
        let moments = if expr.is_zero() {
            vec![BigInt::zero(); n_max as usize]
        } else {
            (1..=n_max)
                .map(|n| {
                    exact_moment(&expr, n, budget).map_err(|e| match e {
                        MomentError::BudgetExceeded {
                            n, entries, budget, ..
                        } => MomentError::BudgetExceeded {
                            class: Some(k),
                            n,
                            entries,
                            budget,
                        },
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        per_class.push(moments);
    }
    Ok(per_class)
}

/// Moments of the trace statistic per component and averaged over the
/// component group.
#[derive(Debug, Clone)]
pub struct MomentReport {
    p: u32,
    generator: u32,
    n_max: u32,
    per_class: Vec<Vec<BigInt>>,
    averaged: Vec<BigRational>,
}

impl MomentReport {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Number of components, φ(p²).
    pub fn classes(&self) -> u32 {
        self.per_class.len() as u32
    }

    /// Moments n = 1..=n_max on component k.
    pub fn class_moments(&self, k: u32) -> &[BigInt] {
        &self.per_class[k as usize]
    }

    pub fn per_class(&self) -> &[Vec<BigInt>] {
        &self.per_class
    }

    /// Averaged moments, n = 1..=n_max.
    pub fn averaged(&self) -> &[BigRational] {
        &self.averaged
    }

    pub fn averaged_moment(&self, n: u32) -> &BigRational {
        &self.averaged[(n - 1) as usize]
    }
}

/// Full moment report for the curve parameter p with the default
/// component-group generator, the smallest one.
pub fn averaged_moments(p: u32, n_max: u32, budget: u64) -> Result<MomentReport, MomentError> {
    let generator = arith::primitive_root_mod_p2(p);
    averaged_moments_with_generator(p, generator, n_max, budget)
}

pub fn averaged_moments_with_generator(
    p: u32,
    generator: u32,
    n_max: u32,
    budget: u64,
) -> Result<MomentReport, MomentError> {
    let model = hodge::identity_component(p)?;
    let gamma = group::gamma_matrix(p, generator)?;
    let per_class = component_moments(&model, &gamma, n_max, budget)?;
    let order = BigInt::from(per_class.len());
    let averaged = (0..n_max as usize)
        .map(|idx| {
            let sum: BigInt = per_class.iter().map(|ms| ms[idx].clone()).sum();
            BigRational::new(sum, order.clone())
        })
        .collect();
    Ok(MomentReport {
        p,
        generator,
        n_max,
        per_class,
        averaged,
    })
}

/// Monte-Carlo estimates (mean, standard error) of E[tⁿ] for
/// n = 1..=n_max, sampling the free angles uniformly.
pub fn monte_carlo_moments(
    expr: &TraceExpression,
    n_max: u32,
    samples: u64,
    rng: &mut impl Rng,
) -> Vec<(f64, f64)> {
    let dims = expr.support();
    let mut power_sums = vec![0.0f64; 2 * n_max as usize];
    for _ in 0..samples {
        let angles: HashMap<u32, f64> = dims
            .iter()
            .map(|&d| (d, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let value = expr.value(|i| angles[&i]);
        let mut acc = 1.0;
        for slot in power_sums.iter_mut() {
            acc *= value;
            *slot += acc;
        }
    }
    (1..=n_max as usize)
        .map(|n| {
            let mean = power_sums[n - 1] / samples as f64;
            let second = power_sums[2 * n - 1] / samples as f64;
            let variance = ((second - mean * mean) / samples as f64).max(0.0);
            (mean, variance.sqrt())
        })
        .collect()
}
