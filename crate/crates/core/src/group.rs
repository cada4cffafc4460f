//! The Sato-Tate group model: the cyclotomic endomorphism α, the
//! component-group generator γ, and symbolic characteristic polynomials
//! of torus-twisted powers Uγᵏ.
//!
//! Every matrix here is a signed block permutation over 2×2 blocks of the
//! form sign·D(M)·T with D(M) = diag(e^{iM}, e^{−iM}), T ∈ {I, J},
//! J = [[0, 1], [−1, 0]], and M an integer linear form of the eigenangles
//! θ₁, …, θ_g. The family is closed under products and transposes, which
//! keeps the whole symbolic layer exact.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::arith;
use crate::hodge::{IdentityComponentModel, LinearForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u32),
    #[error("{a} does not generate the units modulo {p}^2")]
    NotAGenerator { a: u32, p: u32 },
    #[error("{a} is not a unit modulo {modulus}")]
    NotAUnit { a: u32, modulus: u32 },
    #[error("block dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("malformed block rows: {0}")]
    MalformedRows(String),
}

/// Orientation of a 2×2 block: the identity or the rotation
/// J = [[0, 1], [−1, 0]] with J² = −I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockTag {
    I,
    J,
}

impl BlockTag {
    fn compose(self, other: BlockTag) -> (BlockTag, i8) {
        match (self, other) {
            (BlockTag::I, t) => (t, 1),
            (BlockTag::J, BlockTag::I) => (BlockTag::J, 1),
            (BlockTag::J, BlockTag::J) => (BlockTag::I, -1),
        }
    }
}

/// One 2×2 block sign·D(monomial)·tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    sign: i8,
    tag: BlockTag,
    monomial: LinearForm,
}

impl Block {
    pub fn new(sign: i8, tag: BlockTag, monomial: LinearForm) -> Self {
        assert!(sign == 1 || sign == -1, "block sign must be ±1");
        Self {
            sign,
            tag,
            monomial,
        }
    }

    pub fn constant(sign: i8, tag: BlockTag) -> Self {
        Self::new(sign, tag, LinearForm::zero())
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn tag(&self) -> BlockTag {
        self.tag
    }

    pub fn monomial(&self) -> &LinearForm {
        &self.monomial
    }

    pub fn is_constant(&self) -> bool {
        self.monomial.is_zero()
    }

    /// Left-to-right product. D(M) commutes with I and anticommutes with
    /// J in the exponent: J·D(M) = D(−M)·J.
    pub fn compose(&self, rhs: &Block) -> Block {
        let (tag, extra) = self.tag.compose(rhs.tag);
        let monomial = match self.tag {
            BlockTag::I => self.monomial.add(&rhs.monomial),
            BlockTag::J => self.monomial.sub(&rhs.monomial),
        };
        Block {
            sign: self.sign * rhs.sign * extra,
            tag,
            monomial,
        }
    }

    /// Dᵀ = D and Jᵀ = −J, so transposition fixes I-blocks and maps
    /// s·D(M)·J to −s·D(−M)·J.
    pub fn transposed(&self) -> Block {
        match self.tag {
            BlockTag::I => self.clone(),
            BlockTag::J => Block {
                sign: -self.sign,
                tag: BlockTag::J,
                monomial: self.monomial.negated(),
            },
        }
    }
}

/// A 2g×2g matrix with exactly one 2×2 block per block row and block
/// column. Row i holds its block in block column `target(i)`; indices are
/// 1-based to line up with the angle coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMonomialMatrix {
    g: u32,
    rows: Vec<(u32, Block)>,
}

impl BlockMonomialMatrix {
    pub fn from_rows(g: u32, rows: Vec<(u32, Block)>) -> Result<Self, GroupError> {
        if rows.len() != g as usize {
            return Err(GroupError::MalformedRows(format!(
                "expected {g} rows, got {}",
                rows.len()
            )));
        }
        let mut seen = vec![false; g as usize];
        for &(target, _) in &rows {
            if target < 1 || target > g {
                return Err(GroupError::MalformedRows(format!(
                    "block column {target} out of range 1..={g}"
                )));
            }
            if std::mem::replace(&mut seen[(target - 1) as usize], true) {
                return Err(GroupError::MalformedRows(format!(
                    "block column {target} used twice"
                )));
            }
        }
        Ok(Self { g, rows })
    }

    pub fn identity(g: u32) -> Self {
        Self {
            g,
            rows: (1..=g)
                .map(|i| (i, Block::constant(1, BlockTag::I)))
                .collect(),
        }
    }

    /// The block-diagonal symplectic form Ω = diag(J, …, J).
    pub fn symplectic_form(g: u32) -> Self {
        Self {
            g,
            rows: (1..=g)
                .map(|i| (i, Block::constant(1, BlockTag::J)))
                .collect(),
        }
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    /// Block column of row i, 1-based.
    pub fn target(&self, i: u32) -> u32 {
        self.rows[(i - 1) as usize].0
    }

    pub fn block(&self, i: u32) -> &Block {
        &self.rows[(i - 1) as usize].1
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &Block)> + '_ {
        self.rows.iter().map(|(t, b)| (*t, b))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.g, rhs.g, "block dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|(mid, block)| {
                let (target, next) = &rhs.rows[(mid - 1) as usize];
                (*target, block.compose(next))
            })
            .collect();
        Self { g: self.g, rows }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.g);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![None; self.g as usize];
        for (i, (target, block)) in self.rows.iter().enumerate() {
            rows[(target - 1) as usize] = Some((i as u32 + 1, block.transposed()));
        }
        Self {
            g: self.g,
            rows: rows.into_iter().map(Option::unwrap).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(idx, (target, block))| {
            *target == idx as u32 + 1
                && block.sign == 1
                && block.tag == BlockTag::I
                && block.monomial.is_zero()
        })
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(idx, (target, _))| *target == idx as u32 + 1)
    }

    /// Whether the matrix lies in the maximal torus: block diagonal with
    /// every block a plain rotation D(φ). diag(−I) qualifies (φ = π);
    /// diag(J, …, J) does not.
    pub fn is_torus_element(&self) -> bool {
        self.is_block_diagonal() && self.rows.iter().all(|(_, b)| b.tag == BlockTag::I)
    }

    /// γγᵀ = I.
    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose()).is_identity()
    }

    /// γᵀΩγ = Ω with Ω = diag(J, …, J).
    pub fn preserves_symplectic_form(&self) -> bool {
        let omega = Self::symplectic_form(self.g);
        self.transpose().mul(&omega).mul(self) == omega
    }
}

/// The order-2p² endomorphism acting on H¹ block j as
/// diag(ζ^{e_j}, ζ^{−e_j}) with ζ = e^{πi/p²} and e_j = p² + 2j mod 2p².
/// The exponents encode −diag(ζ_{p²}^j, conj): the p² offset carries the
/// global minus sign, which is why all e_j are odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicEndomorphism {
    p: u32,
    exponents: Vec<u32>,
}

impl CyclotomicEndomorphism {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn g(&self) -> u32 {
        self.exponents.len() as u32
    }

    fn modulus(&self) -> u32 {
        2 * self.p * self.p
    }

    /// Exponent of ζ_{2p²} in block j, 1-based.
    pub fn exponent(&self, j: u32) -> u32 {
        self.exponents[(j - 1) as usize]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Multiplicative order: lcm over blocks of the order of ζ^{e_j}.
    pub fn order(&self) -> u64 {
        let modulus = u64::from(self.modulus());
        self.exponents
            .iter()
            .map(|&e| modulus / u64::from(e).gcd(&modulus))
            .fold(1u64, |acc, o| acc.lcm(&o))
    }

    /// Whether the n-th power is the identity matrix.
    pub fn power_is_identity(&self, n: u64) -> bool {
        let modulus = u64::from(self.modulus());
        self.exponents
            .iter()
            .all(|&e| (n * u64::from(e)) % modulus == 0)
    }

    /// Whether the n-th power is −I, i.e. every block lands on ζ^{p²} = −1.
    pub fn power_is_minus_identity(&self, n: u64) -> bool {
        let modulus = u64::from(self.modulus());
        let half = u64::from(self.p * self.p);
        self.exponents
            .iter()
            .all(|&e| (n * u64::from(e)) % modulus == half)
    }

    /// Image under the Galois automorphism ζ_{p²} ↦ ζ_{p²}^a, extended to
    /// 2p²-th roots by the odd representative of a mod 2p².
    pub fn galois_twist(&self, a: u32) -> Result<Self, GroupError> {
        let a_odd = odd_representative(self.p, a)?;
        let modulus = self.modulus();
        let exponents = self
            .exponents
            .iter()
            .map(|&e| ((u64::from(a_odd) * u64::from(e)) % u64::from(modulus)) as u32)
            .collect();
        Ok(Self {
            p: self.p,
            exponents,
        })
    }
}

/// The representative of a mod 2p² that is odd and ≡ a mod p². Exactly one
/// of a, a + p² qualifies since p² is odd.
fn odd_representative(p: u32, a: u32) -> Result<u32, GroupError> {
    let p2 = p * p;
    if a % p == 0 {
        return Err(GroupError::NotAUnit { a, modulus: p2 });
    }
    let a = a % p2;
    Ok(if a % 2 == 1 { a } else { a + p2 })
}

/// The distinguished endomorphism of the Jacobian of y² = x^{p²} − 1,
/// acting on the g = (p²−1)/2 eigenangle blocks.
pub fn alpha_endomorphism(p: u32) -> Result<CyclotomicEndomorphism, GroupError> {
    if p < 3 || p % 2 == 0 || !arith::is_prime(u64::from(p)) {
        return Err(GroupError::NotAnOddPrime(p));
    }
    let p2 = p * p;
    let g = (p2 - 1) / 2;
    // p² + 2j < 2p² for j ≤ g, so the exponents need no reduction.
    let exponents = (1..=g).map(|j| p2 + 2 * j).collect();
    Ok(CyclotomicEndomorphism { p, exponents })
}

/// The component-group generator attached to a generator a of the units
/// mod p². Row i carries an I-block at column ⟨ai⟩ when that residue is
/// at most g, otherwise a J-block at column p² − ⟨ai⟩.
pub fn gamma_matrix(p: u32, a: u32) -> Result<BlockMonomialMatrix, GroupError> {
    if p < 3 || p % 2 == 0 || !arith::is_prime(u64::from(p)) {
        return Err(GroupError::NotAnOddPrime(p));
    }
    if !arith::is_generator_mod_p2(p, a) {
        return Err(GroupError::NotAGenerator { a, p });
    }
    let p2 = p * p;
    let g = (p2 - 1) / 2;
    let rows = (1..=g)
        .map(|i| {
            let t = ((u64::from(a) * u64::from(i)) % u64::from(p2)) as u32;
            if t <= g {
                (t, Block::constant(1, BlockTag::I))
            } else {
                (p2 - t, Block::constant(1, BlockTag::J))
            }
        })
        .collect();
    BlockMonomialMatrix::from_rows(g, rows)
}

/// Verify block-by-block that γ conjugates the Galois twist of α back to
/// α: for each row i with column σ(i), the congruence
/// ±e_{σ(i)} ≡ a′·e_i (mod 2p²) must hold, with the minus sign exactly on
/// J-tagged rows. Returns false on any failing row.
pub fn twisted_lefschetz_check(
    gamma: &BlockMonomialMatrix,
    alpha: &CyclotomicEndomorphism,
    a: u32,
) -> Result<bool, GroupError> {
    if gamma.g() != alpha.g() {
        return Err(GroupError::DimensionMismatch {
            left: gamma.g(),
            right: alpha.g(),
        });
    }
    for (_, block) in gamma.rows() {
        if !block.is_constant() {
            return Err(GroupError::MalformedRows(
                "twisted Lefschetz check requires constant blocks".into(),
            ));
        }
    }
    let a_odd = u64::from(odd_representative(alpha.p(), a)?);
    let modulus = u64::from(2 * alpha.p() * alpha.p());
    for i in 1..=gamma.g() {
        let twisted = (a_odd * u64::from(alpha.exponent(i))) % modulus;
        let image = u64::from(alpha.exponent(gamma.target(i)));
        let expected = match gamma.block(i).tag() {
            BlockTag::I => image,
            BlockTag::J => (modulus - image) % modulus,
        };
        if twisted != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order of γ in the component group: the least r ≥ 1 with γʳ inside the
/// maximal torus. Block-diagonal powers with J-tags (such as γ at half
/// this order) do not terminate the search.
pub fn gamma_power_order(gamma: &BlockMonomialMatrix) -> u32 {
    let mut power = gamma.clone();
    for r in 1..=1_000_000 {
        if power.is_torus_element() {
            return r;
        }
        power = power.mul(gamma);
    }
    unreachable!("signed block permutations have small finite order");
}

/// Torus element carrying the identity-component angles: block i is
/// D(θ̃_i) with θ̃_i the angle after eliminating dependent coordinates.
pub fn unitary_matrix(model: &IdentityComponentModel) -> BlockMonomialMatrix {
    let rows = (1..=model.g())
        .map(|i| {
            let angle = model.substitute(&LinearForm::coordinate(i));
            (i, Block::new(1, BlockTag::I, angle))
        })
        .collect();
    BlockMonomialMatrix { g: model.g(), rows }
}

/// A sum of exponentials Σ c · e^{iM} keyed by the exponent form M; the
/// zero form carries the constant term.
pub type SymbolicSum = BTreeMap<LinearForm, i64>;

fn sum_add(sum: &mut SymbolicSum, form: LinearForm, coeff: i64) {
    if coeff == 0 {
        return;
    }
    use std::collections::btree_map::Entry;
    match sum.entry(form) {
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += coeff;
            if *slot.get() == 0 {
                slot.remove();
            }
        }
        Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
    }
}

/// Split a sum into its constant term and the number of conjugate pairs
/// {M, −M} with equal coefficients. None if any exponential is unpaired.
pub fn conjugate_pair_stats(sum: &SymbolicSum) -> Option<(usize, i64)> {
    let constant = sum.get(&LinearForm::zero()).copied().unwrap_or(0);
    let mut exponentials = 0usize;
    for (form, coeff) in sum {
        if form.is_zero() {
            continue;
        }
        exponentials += 1;
        if sum.get(&form.negated()) != Some(coeff) {
            return None;
        }
    }
    (exponentials % 2 == 0).then_some((exponentials / 2, constant))
}

/// One cycle of the block permutation underlying Uγᵏ. The characteristic
/// polynomial contribution is T^{2L} − tr·T^L + 1 with L the cycle length;
/// tr is 2·sign·cos(form) when the cycle's block product is I-tagged and 0
/// when it is J-tagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleFactor {
    rows: Vec<u32>,
    trace: Option<(i8, LinearForm)>,
}

impl CycleFactor {
    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn len(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// (sign, form) with tr = sign·(e^{i·form} + e^{−i·form}), or None for
    /// a traceless J-tagged cycle.
    pub fn trace(&self) -> Option<(i8, &LinearForm)> {
        self.trace.as_ref().map(|(s, f)| (*s, f))
    }
}

/// Characteristic polynomial det(T·I − Uγᵏ) in factored form, one factor
/// per permutation cycle. Every factor is palindromic with determinant 1,
/// so the full polynomial is palindromic of degree 2g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicCharPoly {
    two_g: u32,
    factors: Vec<CycleFactor>,
}

impl SymbolicCharPoly {
    pub fn two_g(&self) -> u32 {
        self.two_g
    }

    pub fn factors(&self) -> &[CycleFactor] {
        &self.factors
    }

    /// The (sign, form) trace terms of length-1 cycles; these are the only
    /// contributions to the coefficient of T¹ and, up to sign, the matrix
    /// trace Σ sign·2cos(form).
    pub fn linear_trace_terms(&self) -> Vec<(i8, LinearForm)> {
        self.factors
            .iter()
            .filter(|f| f.len() == 1)
            .filter_map(|f| f.trace.clone())
            .collect()
    }

    /// Exact expansion of the coefficient of T^degree as a sum of
    /// exponentials. Palindromy reduces degree to min(degree, 2g−degree);
    /// cost still grows combinatorially toward the middle, so keep the
    /// requested degree small.
    pub fn coefficient(&self, degree: u32) -> SymbolicSum {
        assert!(
            degree <= self.two_g,
            "degree {degree} exceeds polynomial degree {}",
            self.two_g
        );
        let target = degree.min(self.two_g - degree) as usize;
        let mut acc: Vec<SymbolicSum> = vec![SymbolicSum::new(); target + 1];
        acc[0].insert(LinearForm::zero(), 1);
        for factor in &self.factors {
            let len = factor.len() as usize;
            let mut next: Vec<SymbolicSum> = vec![SymbolicSum::new(); target + 1];
            for (d, sum) in acc.iter().enumerate() {
                if sum.is_empty() {
                    continue;
                }
                for (form, &coeff) in sum {
                    sum_add(&mut next[d], form.clone(), coeff);
                    if let (Some((sign, trace_form)), true) = (&factor.trace, d + len <= target) {
                        let c = -i64::from(*sign) * coeff;
                        sum_add(&mut next[d + len], form.add(trace_form), c);
                        sum_add(&mut next[d + len], form.sub(trace_form), c);
                    }
                    if d + 2 * len <= target {
                        sum_add(&mut next[d + 2 * len], form.clone(), coeff);
                    }
                }
            }
            acc = next;
        }
        acc.pop().unwrap()
    }
}

/// Factor det(T·I − Uγᵏ) over the cycles of γᵏ, with U the torus element
/// of the identity-component angles.
pub fn char_poly_symbolic(
    model: &IdentityComponentModel,
    gamma: &BlockMonomialMatrix,
    k: u32,
) -> Result<SymbolicCharPoly, GroupError> {
    if model.g() != gamma.g() {
        return Err(GroupError::DimensionMismatch {
            left: model.g(),
            right: gamma.g(),
        });
    }
    let matrix = unitary_matrix(model).mul(&gamma.pow(k));
    let g = matrix.g();
    let mut visited = vec![false; g as usize];
    let mut factors = Vec::new();
    for start in 1..=g {
        if visited[(start - 1) as usize] {
            continue;
        }
        let mut rows = Vec::new();
        let mut product: Option<Block> = None;
        let mut i = start;
        loop {
            visited[(i - 1) as usize] = true;
            rows.push(i);
            let block = matrix.block(i);
            product = Some(match product {
                None => block.clone(),
                Some(acc) => acc.compose(block),
            });
            i = matrix.target(i);
            if i == start {
                break;
            }
        }
        let product = product.unwrap();
        let trace = match product.tag() {
            BlockTag::J => None,
            BlockTag::I => Some((product.sign(), product.monomial().clone())),
        };
        factors.push(CycleFactor { rows, trace });
    }
    Ok(SymbolicCharPoly {
        two_g: 2 * g,
        factors,
    })
}
