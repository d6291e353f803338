//! Square-free monomial quotient algebras over a pluggable coefficient ring.
//!
//! The E-cohomology of a height-k tower is free on the 2^k monomials x_R,
//! R ⊆ \[k\], with multiplication reduced by the relations x_j² = v_j·x_j where
//! v_j is a degree-2 class in the generators of index < j. Reduction rewrites
//! the duplicated generator of highest index first; every rewrite strictly
//! lowers the exponent vector in index-reverse-lexicographic order, so it
//! terminates. Confluence is enforced by oracle tests (an independent
//! lowest-index-first strategy and the regular representation), not assumed.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::coeffs::{IntegerScalar, Scalar};
use crate::error::{BottError, Result};
use crate::towers::{BottList, Omniorientation};

/// Subset of \[k\] stored as a k-bit mask; bit i−1 stands for the generator
/// of index i.
pub type SubsetMask = u32;

pub fn mask_card(mask: SubsetMask) -> usize {
    mask.count_ones() as usize
}

/// Renders a basis monomial, e.g. `x1*x3`; the empty subset is `1`.
pub fn monomial_name(mask: SubsetMask, letter: char) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for i in 0..32 {
        if mask >> i & 1 == 1 {
            parts.push(format!("{letter}{}", i + 1));
        }
    }
    parts.join("*")
}

/// Element of the square-free monomial algebra: a finite map from subsets of
/// \[k\] to coefficients, with no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GradedClass<C: Scalar> {
    k: usize,
    terms: BTreeMap<SubsetMask, C>,
}

impl<C: Scalar> GradedClass<C> {
    pub fn zero(k: usize) -> Self {
        GradedClass {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(k: usize) -> Self {
        Self::monomial(k, 0)
    }

    /// The basis monomial x_R.
    pub fn monomial(k: usize, mask: SubsetMask) -> Self {
        Self::term(k, mask, C::one())
    }

    /// The generator x_j (1-based index).
    pub fn generator(k: usize, j: usize) -> Self {
        assert!(1 <= j && j <= k);
        Self::monomial(k, 1 << (j - 1))
    }

    pub fn term(k: usize, mask: SubsetMask, c: C) -> Self {
        debug_assert!(mask < (1u32 << k) || k >= 32);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        GradedClass { k, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (SubsetMask, C)>>(k: usize, iter: I) -> Self {
        let mut out = Self::zero(k);
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetMask, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mask: SubsetMask) -> C {
        self.terms.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, mask: SubsetMask, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(C::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.k, rhs.k, "ambient mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GradedClass {
            k: self.k,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scalar_mul(&self, s: &C) -> Self {
        let mut out = Self::zero(self.k);
        for (m, c) in &self.terms {
            out.add_term(*m, c.mul(s));
        }
        out
    }

    pub fn int_mul(&self, n: i64) -> Self {
        self.scalar_mul(&C::from_int(n))
    }

    /// The part supported on subsets of cardinality r.
    pub fn component_by_card(&self, r: usize) -> Self {
        GradedClass {
            k: self.k,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mask_card(**m) == r)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Cohomological degree 2|R| + deg(coefficient) of a homogeneous class.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for (m, c) in &self.terms {
            let d = 2 * mask_card(*m) as i64
                + c.degree()?
                    .ok_or_else(|| BottError::Internal("stored zero coefficient".into()))?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => return Err(BottError::Inhomogeneous),
            }
        }
        Ok(deg)
    }

    /// Applies a ring map on coefficients.
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> GradedClass<D> {
        GradedClass {
            k: self.k,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = f(c);
                    if d.is_zero() {
                        None
                    } else {
                        Some((*m, d))
                    }
                })
                .collect(),
        }
    }

    /// JSON list of `{"monomial": …, <coeff_key>: …}` entries in ascending
    /// mask order.
    pub fn to_json(&self, letter: char, coeff_key: &str) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "monomial": monomial_name(*m, letter),
                        coeff_key: c.to_json(),
                    })
                })
                .collect(),
        )
    }

    /// Human-readable rendering, e.g. `1 + (-2)*x2 + 4*x1*x2`.
    pub fn render(&self, letter: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono = monomial_name(*m, letter);
                let coeff = c.to_string();
                if *m == 0 {
                    if coeff.contains(['+', ' ']) {
                        format!("({coeff})")
                    } else {
                        coeff
                    }
                } else if coeff == "1" {
                    mono
                } else if coeff.contains(['+', ' ']) || coeff.starts_with('-') {
                    format!("({coeff})*{mono}")
                } else {
                    format!("{coeff}*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Rewriting order for the reduction step; the default rewrites the highest
/// duplicated index. Lowest-first exists as an independent confluence oracle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReductionOrder {
    HighestFirst,
    LowestFirst,
}

/// The quotient algebra E_*[x_1,…,x_k]/(x_j² − v_j x_j): the ambient list
/// plus the relation classes v_j (supported on indices < j).
#[derive(Clone, Debug)]
pub struct QuotientAlgebra<C: Scalar> {
    list: BottList,
    relations: Vec<GradedClass<C>>,
}

impl<C: Scalar> QuotientAlgebra<C> {
    /// Relations of the additive formal group: v_j = Σ_{i<j} a(i,j)·x_i.
    /// This is the integral/mod-2/rational cohomology presentation.
    pub fn additive(list: &BottList) -> Self {
        let k = list.height();
        let relations = (1..=k)
            .map(|j| {
                GradedClass::from_terms(
                    k,
                    (1..j).map(|i| (1u32 << (i - 1), C::from_int(list.entry(i, j)))),
                )
            })
            .collect();
        QuotientAlgebra {
            list: list.clone(),
            relations,
        }
    }

    pub(crate) fn with_relations(list: BottList, relations: Vec<GradedClass<C>>) -> Self {
        QuotientAlgebra { list, relations }
    }

    pub fn list(&self) -> &BottList {
        &self.list
    }

    pub fn k(&self) -> usize {
        self.list.height()
    }

    /// The class substituted for x_j² (1-based index).
    pub fn relation(&self, j: usize) -> &GradedClass<C> {
        &self.relations[j - 1]
    }

    pub(crate) fn relations_slice(&self) -> &[GradedClass<C>] {
        &self.relations
    }

    pub fn one(&self) -> GradedClass<C> {
        GradedClass::one(self.k())
    }

    pub fn zero(&self) -> GradedClass<C> {
        GradedClass::zero(self.k())
    }

    pub fn generator(&self, j: usize) -> GradedClass<C> {
        GradedClass::generator(self.k(), j)
    }

    pub fn mul(&self, u: &GradedClass<C>, v: &GradedClass<C>) -> GradedClass<C> {
        mul_classes(
            self.k(),
            &self.relations,
            u,
            v,
            ReductionOrder::HighestFirst,
        )
    }

    pub fn mul_with_order(
        &self,
        u: &GradedClass<C>,
        v: &GradedClass<C>,
        order: ReductionOrder,
    ) -> GradedClass<C> {
        mul_classes(self.k(), &self.relations, u, v, order)
    }

    pub fn pow(&self, u: &GradedClass<C>, n: u64) -> GradedClass<C> {
        let mut acc = self.one();
        let mut base = u.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Monomial-pair reduction shared with the incremental K-relation builder;
/// `relations` entries of index ≥ the largest generator in play may be
/// placeholders.
pub(crate) fn mul_classes<C: Scalar>(
    k: usize,
    relations: &[GradedClass<C>],
    u: &GradedClass<C>,
    v: &GradedClass<C>,
    order: ReductionOrder,
) -> GradedClass<C> {
    assert_eq!(u.k(), k, "ambient mismatch");
    assert_eq!(v.k(), k, "ambient mismatch");
    let mut out = GradedClass::zero(k);
    for (r, cr) in &u.terms {
        for (s, cs) in &v.terms {
            let c = cr.mul(cs);
            if c.is_zero() {
                continue;
            }
            if r & s == 0 {
                out.add_term(r | s, c);
            } else {
                let reduced = reduce_pair(k, relations, *r, *s, order);
                for (m, cm) in &reduced.terms {
                    out.add_term(*m, c.mul(cm));
                }
            }
        }
    }
    out
}

/// Reduces x_R·x_S to the square-free basis.
#[allow(clippy::needless_range_loop)] // bit-position loops read better indexed
fn reduce_pair<C: Scalar>(
    k: usize,
    relations: &[GradedClass<C>],
    r: SubsetMask,
    s: SubsetMask,
    order: ReductionOrder,
) -> GradedClass<C> {
    let mut exps = vec![0u8; k];
    for i in 0..k {
        exps[i] = (r >> i & 1) as u8 + (s >> i & 1) as u8;
    }
    let mut out = GradedClass::zero(k);
    let mut stack: Vec<(C, Vec<u8>)> = vec![(C::one(), exps)];
    while let Some((c, e)) = stack.pop() {
        let dup = match order {
            ReductionOrder::HighestFirst => (0..k).rev().find(|&i| e[i] >= 2),
            ReductionOrder::LowestFirst => (0..k).find(|&i| e[i] >= 2),
        };
        match dup {
            None => {
                let mut mask = 0u32;
                for i in 0..k {
                    if e[i] == 1 {
                        mask |= 1 << i;
                    }
                }
                out.add_term(mask, c);
            }
            Some(j) => {
                // x_{j+1}² ↦ v_{j+1}·x_{j+1}
                for (vm, vc) in &relations[j].terms {
                    let mut e2 = e.clone();
                    e2[j] -= 1;
                    for i in 0..k {
                        e2[i] += (vm >> i & 1) as u8;
                    }
                    stack.push((c.mul(vc), e2));
                }
            }
        }
    }
    out
}

/// Integral cohomology presentation of a tower.
pub fn h_algebra(list: &BottList) -> QuotientAlgebra<IntegerScalar> {
    QuotientAlgebra::additive(list)
}

/// Evaluation against the fundamental class of the complex-orientation
/// convention: (−1)^k times the coefficient of x_{\[k\]}.
pub fn evaluate_fundamental(cls: &GradedClass<IntegerScalar>) -> IntegerScalar {
    let k = cls.k();
    let full: SubsetMask = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let c = cls.coeff(full);
    if k % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Euler characteristic 2^k; independent of the list entries.
pub fn euler_characteristic(list: &BottList) -> IntegerScalar {
    let k = list.height();
    let chi = BigInt::from(1) << k;
    // Self-test: χ = c_k(τ_C)[M^k].
    #[cfg(debug_assertions)]
    if k <= 8 {
        let top = total_chern(list, &Omniorientation::canonical(k)).component_by_card(k);
        debug_assert_eq!(evaluate_fundamental(&top), chi);
    }
    chi
}

/// Total Chern class of the stably complex structure induced by an
/// omniorientation, built factor-by-factor from the 2k line-bundle summands:
/// the h-th pair contributes (1 + σ⁰(−x_h))·(1 + σ¹(A_h − x_h)) with
/// A_h = Σ_{i<h} a(i,h)x_i and σ = −1 exactly on flipped summands.
pub fn total_chern(list: &BottList, omni: &Omniorientation) -> GradedClass<IntegerScalar> {
    let k = list.height();
    assert_eq!(omni.k(), k, "omniorientation length mismatch");
    let alg = h_algebra(list);
    let mut acc = alg.one();
    for h in 1..=k {
        let x_h = alg.generator(h);
        let a_h = alg.relation(h).clone();
        let s0: i64 = if omni.delta[h - 1] { -1 } else { 1 };
        let s1: i64 = if omni.epsilon[h - 1] { -1 } else { 1 };
        let f0 = alg.one().add(&x_h.int_mul(-s0));
        let f1 = alg.one().add(&a_h.sub(&x_h).int_mul(s1));
        acc = alg.mul(&acc, &f0);
        acc = alg.mul(&acc, &f1);
    }
    acc
}

/// Partition of k, parts in non-increasing order; the key format is
/// `"ω₁+ω₂+…"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn name(&self) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        self.0
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// All partitions of n in lexicographically decreasing order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The Chern numbers c_ω[M^k] of an omnioriented structure, one per
/// partition ω of k, in decreasing partition order.
pub fn chern_numbers(list: &BottList, omni: &Omniorientation) -> Vec<(Partition, IntegerScalar)> {
    let total = total_chern(list, omni);
    chern_numbers_of_total(list, &total)
}

pub fn chern_numbers_of_total(
    list: &BottList,
    total: &GradedClass<IntegerScalar>,
) -> Vec<(Partition, IntegerScalar)> {
    let k = list.height();
    let alg = h_algebra(list);
    let comps: Vec<GradedClass<IntegerScalar>> =
        (0..=k).map(|r| total.component_by_card(r)).collect();
    partitions(k)
        .into_iter()
        .map(|part| {
            let mut prod = alg.one();
            for &w in &part.0 {
                prod = alg.mul(&prod, &comps[w]);
            }
            let value = evaluate_fundamental(&prod);
            (part, value)
        })
        .collect()
}

/// Dense matrix over the coefficient ring, row-major over the monomial basis
/// in mask order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<C: Scalar> {
    pub n: usize,
    pub data: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![C::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = C::one();
        }
        Matrix { n, data }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut data = vec![C::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = &self.data[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[l * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    data[i * n + j] = data[i * n + j].add(&a.mul(b));
                }
            }
        }
        Matrix { n, data }
    }
}

/// Matrix of multiplication-by-cls in the monomial basis; the brute-force
/// oracle for confluence and associativity of `mul`.
pub fn regular_representation<C: Scalar>(
    alg: &QuotientAlgebra<C>,
    cls: &GradedClass<C>,
) -> Matrix<C> {
    let k = alg.k();
    let n = 1usize << k;
    let mut data = vec![C::zero(); n * n];
    for col in 0..n {
        let prod = alg.mul(cls, &GradedClass::monomial(k, col as SubsetMask));
        for (m, c) in prod.terms() {
            data[*m as usize * n + col] = c.clone();
        }
    }
    Matrix { n, data }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k.min(n - k) {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::F2;
    use proptest::prelude::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn two_stage(a: i64) -> BottList {
        BottList::validate(vec![vec![a]]).unwrap()
    }

    #[test]
    fn h_relation_examples() {
        // k=2: x₂² = a·x₁x₂
        let alg = h_algebra(&two_stage(5));
        let x2 = alg.generator(2);
        let sq = alg.mul(&x2, &x2);
        assert_eq!(sq, GradedClass::term(2, 0b11, int(5)));
        // k=1: x₁² = 0
        let alg1 = h_algebra(&BottList::validate(vec![]).unwrap());
        let x1 = alg1.generator(1);
        assert!(alg1.mul(&x1, &x1).is_zero());
        // (CP¹)^k: all squares vanish
        let cp = h_algebra(&BottList::cp1_power(3));
        for j in 1..=3 {
            let x = cp.generator(j);
            assert!(cp.mul(&x, &x).is_zero());
        }
    }

    #[test]
    fn mul_examples() {
        let alg = h_algebra(&two_stage(3));
        let x1 = alg.generator(1);
        let x2 = alg.generator(2);
        // x₂·x₂ = 3·x₁x₂
        assert_eq!(alg.mul(&x2, &x2), GradedClass::term(2, 0b11, int(3)));
        // x₁x₂·x₂ = 3·x₁²x₂ = 0
        let x1x2 = alg.mul(&x1, &x2);
        assert!(alg.mul(&x1x2, &x2).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let cls = GradedClass::term(2, 0b11, int(4));
        assert_eq!(evaluate_fundamental(&cls), int(4));
        let low = GradedClass::term(2, 0b01, int(7));
        assert_eq!(evaluate_fundamental(&low), int(0));
        let cls3 = GradedClass::monomial(3, 0b111);
        assert_eq!(evaluate_fundamental(&cls3), int(-1));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&BottList::bounded_flag(3)), int(8));
        assert_eq!(euler_characteristic(&BottList::point()), int(1));
        for a in [-3, 0, 2, 9] {
            assert_eq!(euler_characteristic(&two_stage(a)), int(4));
        }
    }

    #[test]
    fn total_chern_canonical_two_stage() {
        // k=2, a=1: c(τ_C) = 1 − x₁ − 2x₂ + 4x₁x₂
        let list = two_stage(1);
        let c = total_chern(&list, &Omniorientation::canonical(2));
        let expected = GradedClass::from_terms(
            2,
            [
                (0b00u32, int(1)),
                (0b01, int(-1)),
                (0b10, int(-2)),
                (0b11, int(4)),
            ],
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn total_chern_top_term() {
        for (seed, k) in [(1u64, 1usize), (2, 2), (3, 3), (4, 4), (5, 5)] {
            let list = BottList::random(k, 6, seed);
            let c = total_chern(&list, &Omniorientation::canonical(k));
            let full = (1u32 << k) - 1;
            let expected = if k % 2 == 1 {
                -(int(1) << k)
            } else {
                int(1) << k
            };
            assert_eq!(c.coeff(full), expected);
            assert_eq!(evaluate_fundamental(&c.component_by_card(k)), int(1) << k);
        }
    }

    #[test]
    fn total_chern_flipped_sphere() {
        // k=1, δ₁=1: (1+x₁)(1−x₁) = 1
        let list = BottList::validate(vec![]).unwrap();
        let omni = Omniorientation {
            delta: vec![true],
            epsilon: vec![false],
        };
        assert_eq!(total_chern(&list, &omni), GradedClass::one(1));
    }

    #[test]
    fn chern_number_examples() {
        // k=2, a=1: c₂[M²] = 4 = χ, c₁²[M²] = 8
        let nums = chern_numbers(&two_stage(1), &Omniorientation::canonical(2));
        let by_name: BTreeMap<String, BigInt> =
            nums.into_iter().map(|(p, v)| (p.name(), v)).collect();
        assert_eq!(by_name["2"], int(4));
        assert_eq!(by_name["1+1"], int(8));
    }

    #[test]
    fn chern_number_all_flip_cp1_power() {
        // (CP¹)^k with every summand flipped: c_k[M^k] = (+2)^k(−1)^k.
        // Oracle: the total class is Π(1+2x_j), expanded directly below.
        for k in 1..=4usize {
            let list = BottList::cp1_power(k);
            let omni = Omniorientation {
                delta: vec![true; k],
                epsilon: vec![true; k],
            };
            let total = total_chern(&list, &omni);
            let mut direct = GradedClass::zero(k);
            for mask in 0..(1u32 << k) {
                direct = direct.add(&GradedClass::term(k, mask, int(1) << mask_card(mask)));
            }
            assert_eq!(total, direct);
            let top = total.component_by_card(k);
            let expected = if k % 2 == 1 {
                -(int(1) << k)
            } else {
                int(1) << k
            };
            assert_eq!(evaluate_fundamental(&top), expected);
        }
    }

    #[test]
    fn basis_counts() {
        // Rank of H^{2r} is C(k,r); total 2^k.
        for k in 0..=6usize {
            let masks = 1u32 << k;
            for r in 0..=k {
                let count = (0..masks).filter(|m| mask_card(*m) == r).count();
                assert_eq!(BigInt::from(count), binomial(k as u64, r as u64));
            }
        }
    }

    #[test]
    fn regular_representation_examples() {
        let alg = h_algebra(&two_stage(1));
        let id = regular_representation(&alg, &alg.one());
        assert_eq!(id, Matrix::identity(4));

        let alg1 = h_algebra(&BottList::validate(vec![]).unwrap());
        let m = regular_representation(&alg1, &alg1.generator(1));
        // x₁·1 = x₁, x₁·x₁ = 0: single off-diagonal 1, nilpotent.
        assert_eq!(m.data, vec![int(0), int(0), int(1), int(0)]);
        assert!(m.mul(&m).data.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn partitions_order() {
        let parts: Vec<String> = partitions(4).iter().map(|p| p.name()).collect();
        assert_eq!(parts, vec!["4", "3+1", "2+2", "2+1+1", "1+1+1+1"]);
        assert_eq!(partitions(0).len(), 1);
        assert_eq!(partitions(0)[0].name(), "0");
    }

    fn arb_class(k: usize) -> impl Strategy<Value = GradedClass<IntegerScalar>> {
        proptest::collection::vec((0u32..(1 << k), -5i64..=5), 0..5)
            .prop_map(move |v| GradedClass::from_terms(k, v.into_iter().map(|(m, c)| (m, int(c)))))
    }

    fn arb_small_list() -> impl Strategy<Value = BottList> {
        (1usize..=4).prop_flat_map(|k| {
            let entries = k * (k - 1) / 2;
            proptest::collection::vec(-4i64..=4, entries..=entries).prop_map(move |flat| {
                let mut stages = Vec::new();
                let mut it = flat.into_iter();
                for j in 2..=k {
                    stages.push((0..j - 1).map(|_| it.next().unwrap()).collect());
                }
                BottList::validate(stages).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_associative_commutative(list in arb_small_list(), seed in 0u64..1000) {
            let k = list.height();
            let alg = h_algebra(&list);
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rand_class = || {
                let n = rng.gen_range(0..4);
                let terms: Vec<(u32, BigInt)> = (0..n)
                    .map(|_| (rng.gen_range(0..(1u32 << k)), int(rng.gen_range(-5..=5))))
                    .collect();
                GradedClass::from_terms(k, terms)
            };
            let (u, v, w) = (rand_class(), rand_class(), rand_class());
            prop_assert_eq!(alg.mul(&u, &v), alg.mul(&v, &u));
            prop_assert_eq!(alg.mul(&alg.mul(&u, &v), &w), alg.mul(&u, &alg.mul(&v, &w)));
            // Confluence oracle: an independent rewriting order agrees.
            prop_assert_eq!(
                alg.mul(&u, &v),
                alg.mul_with_order(&u, &v, ReductionOrder::LowestFirst)
            );
        }

        #[test]
        fn regular_representation_is_ring_hom(a in 0i64..=4, u in arb_class(3), v in arb_class(3)) {
            let list = BottList::validate(vec![vec![a], vec![1, a]]).unwrap();
            let alg = h_algebra(&list);
            let mu = regular_representation(&alg, &u);
            let mv = regular_representation(&alg, &v);
            let muv = regular_representation(&alg, &alg.mul(&u, &v));
            prop_assert_eq!(mu.mul(&mv), muv);
        }

        #[test]
        fn f2_reduction_matches_mod2(a in -4i64..=4) {
            let list = two_stage(a);
            let alg_z = h_algebra(&list);
            let alg_f2: QuotientAlgebra<F2> = QuotientAlgebra::additive(&list);
            let x2z = alg_z.generator(2);
            let x2f = alg_f2.generator(2);
            let sq_z = alg_z
                .mul(&x2z, &x2z)
                .map_coeffs(|c| F2(!num_traits::Zero::is_zero(&(c % 2i64))));
            let sq_f = alg_f2.mul(&x2f, &x2f);
            prop_assert_eq!(sq_z, sq_f);
        }
    }
}
