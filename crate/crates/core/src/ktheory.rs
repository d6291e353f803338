//! Complex K-theory of a tower over K_* = Z[z, z⁻¹]: the multiplicative
//! formal-group relations g_j² = z⁻¹(Π_{i<j}(1+zg_i)^{a(i,j)} − 1)·g_j,
//! line-bundle classes with negative exponents, complex conjugation, the
//! Chern character, and complexified difference elements of omniorientations.

use num_bigint::BigInt;

use crate::coeffs::{LaurentScalar, RationalLaurentScalar, Scalar};
use crate::cohom::{mul_classes, GradedClass, QuotientAlgebra, ReductionOrder, SubsetMask};
use crate::towers::{BottList, LineBundleWord, Omniorientation};

/// Element of K*(M^k) in the square-free basis g_R.
pub type KClass = GradedClass<LaurentScalar>;

/// The K-theory ring of a tower with its precomputed generator data:
/// conjugates ḡ_j, Chern character images ch(g_j), and the per-stage
/// difference-element contributions.
pub struct KTheory {
    algebra: QuotientAlgebra<LaurentScalar>,
    rational: QuotientAlgebra<RationalLaurentScalar>,
    gbar: Vec<KClass>,
    ch_gen: Vec<GradedClass<RationalLaurentScalar>>,
    delta_contrib: Vec<KClass>,
    epsilon_contrib: Vec<KClass>,
}

impl KTheory {
    pub fn new(list: &BottList) -> Self {
        let k = list.height();

        // Relations are built stage by stage: the relation for g_j only
        // multiplies generators of index < j, whose relations are already in
        // place; later slots hold placeholders until their turn.
        let mut relations: Vec<KClass> = vec![GradedClass::zero(k); k];
        for j in 1..=k {
            let mut prod = GradedClass::one(k);
            for i in 1..j {
                let a = list.entry(i, j);
                if a != 0 {
                    let factor = line_power(k, &relations, i, a);
                    prod = mul_classes(k, &relations, &prod, &factor, ReductionOrder::HighestFirst);
                }
            }
            let v = prod
                .sub(&GradedClass::one(k))
                .scalar_mul(&LaurentScalar::z_pow(-1));
            relations[j - 1] = v;
        }
        let algebra = QuotientAlgebra::with_relations(list.clone(), relations);

        let gbar = (1..=k).map(|j| conj_generator(&algebra, j)).collect();

        let rational: QuotientAlgebra<RationalLaurentScalar> = QuotientAlgebra::additive(list);
        let ch_gen = (1..=k).map(|j| ch_generator(&rational, j)).collect();

        let mut kt = KTheory {
            algebra,
            rational,
            gbar,
            ch_gen,
            delta_contrib: Vec::new(),
            epsilon_contrib: Vec::new(),
        };
        for h in 1..=k {
            let e_h = LineBundleWord::generator(k, h);
            let w_h = list.stage_bundle(h).unwrap();
            // Flipping γ̄_h contributes z(γ_h − γ̄_h); flipping the summand
            // γ̄_h ⊗ γ(a_{h−1}) contributes z(γ_h γ̄(a_{h−1}) − γ̄_h γ(a_{h−1})).
            let d0 = kt
                .bundle_class(&e_h)
                .sub(&kt.bundle_class(&e_h.neg()))
                .scalar_mul(&LaurentScalar::z_pow(1));
            let d1 = kt
                .bundle_class(&e_h.sub(&w_h))
                .sub(&kt.bundle_class(&w_h.sub(&e_h)))
                .scalar_mul(&LaurentScalar::z_pow(1));
            kt.delta_contrib.push(d0);
            kt.epsilon_contrib.push(d1);
        }
        kt
    }

    pub fn k(&self) -> usize {
        self.algebra.k()
    }

    pub fn list(&self) -> &BottList {
        self.algebra.list()
    }

    pub fn algebra(&self) -> &QuotientAlgebra<LaurentScalar> {
        &self.algebra
    }

    /// The ambient rational cohomology ring H*(M^k; Q[z,z⁻¹]) receiving the
    /// Chern character.
    pub fn rational_algebra(&self) -> &QuotientAlgebra<RationalLaurentScalar> {
        &self.rational
    }

    pub fn one(&self) -> KClass {
        self.algebra.one()
    }

    pub fn zero(&self) -> KClass {
        self.algebra.zero()
    }

    pub fn generator(&self, j: usize) -> KClass {
        self.algebra.generator(j)
    }

    pub fn mul(&self, u: &KClass, v: &KClass) -> KClass {
        self.algebra.mul(u, v)
    }

    /// The relation class of g_j²/g_j, fully expanded in lower monomials.
    pub fn relation(&self, j: usize) -> &KClass {
        self.algebra.relation(j)
    }

    /// ḡ_j, expanded through the finite series g_j/(1 + zg_j).
    pub fn gbar(&self, j: usize) -> &KClass {
        &self.gbar[j - 1]
    }

    /// The K⁰ class of γ₁^{c₁}⊗…⊗γ_k^{c_k}, i.e. Π(1+zg_i)^{c_i}; negative
    /// exponents go through the finite Neumann series of 1/(1+zg_i).
    pub fn bundle_class(&self, word: &LineBundleWord) -> KClass {
        let k = self.k();
        assert_eq!(word.0.len(), k, "word length mismatch");
        let mut acc = self.one();
        for (idx, &c) in word.0.iter().enumerate() {
            if c != 0 {
                let f = line_power(k, relations_of(&self.algebra), idx + 1, c);
                acc = self.mul(&acc, &f);
            }
        }
        acc
    }

    /// The ring involution with z ↦ −z and g_j ↦ ḡ_j.
    pub fn conjugate(&self, cls: &KClass) -> KClass {
        let mut out = self.zero();
        for (mask, c) in cls.terms() {
            let mono = self.conj_monomial(*mask);
            out = out.add(&mono.scalar_mul(&c.conj()));
        }
        out
    }

    fn conj_monomial(&self, mask: SubsetMask) -> KClass {
        let mut acc = self.one();
        for i in 0..self.k() {
            if mask >> i & 1 == 1 {
                acc = self.mul(&acc, &self.gbar[i]);
            }
        }
        acc
    }

    /// Chern character into H*(M^k; Q[z,z⁻¹]); a ring map determined by
    /// g_j ↦ z⁻¹(e^{z x_j} − 1), injective on K* and used as the equality
    /// oracle for reduced classes.
    pub fn chern_character(&self, cls: &KClass) -> GradedClass<RationalLaurentScalar> {
        let mut out = self.rational.zero();
        for (mask, c) in cls.terms() {
            let mut acc = self.rational.one();
            for i in 0..self.k() {
                if mask >> i & 1 == 1 {
                    acc = self.rational.mul(&acc, &self.ch_gen[i]);
                }
            }
            out = out.add(&acc.scalar_mul(&c.to_rational()));
        }
        out
    }

    /// Per-stage difference-element contributions (δ-flips, ε-flips); the
    /// complexified difference element of an omniorientation is the sum of
    /// the contributions of its flipped summands.
    pub fn diff_contributions(&self) -> (&[KClass], &[KClass]) {
        (&self.delta_contrib, &self.epsilon_contrib)
    }

    /// The complexification c(Δ(τ(δ,ε), τ_C)) ∈ K⁻²(M^k).
    pub fn diff_element(&self, omni: &Omniorientation) -> KClass {
        assert_eq!(omni.k(), self.k(), "omniorientation length mismatch");
        let mut out = self.zero();
        for h in 0..self.k() {
            if omni.delta[h] {
                out = out.add(&self.delta_contrib[h]);
            }
            if omni.epsilon[h] {
                out = out.add(&self.epsilon_contrib[h]);
            }
        }
        out
    }
}

fn relations_of<C: Scalar>(alg: &QuotientAlgebra<C>) -> &[GradedClass<C>] {
    // Relations are only consumed through mul_classes during construction.
    alg.relations_slice()
}

/// (1 + zg_i)^e with e of either sign; zg_i is nilpotent, so the inverse is
/// the finite Neumann series Σ(−zg_i)^m.
fn line_power(k: usize, relations: &[KClass], i: usize, e: i64) -> KClass {
    let z_gi = GradedClass::term(k, 1 << (i - 1), LaurentScalar::z_pow(1));
    let base = if e >= 0 {
        GradedClass::one(k).add(&z_gi)
    } else {
        let mut acc = GradedClass::one(k);
        let mut p = z_gi.clone();
        let mut sign = -1i64;
        while !p.is_zero() {
            acc = acc.add(&p.int_mul(sign));
            p = mul_classes(k, relations, &p, &z_gi, ReductionOrder::HighestFirst);
            sign = -sign;
        }
        acc
    };
    // Binary power keeps large |a(i,j)| cheap.
    let mut n = e.unsigned_abs();
    let mut acc = GradedClass::one(k);
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            acc = mul_classes(k, relations, &acc, &b, ReductionOrder::HighestFirst);
        }
        n >>= 1;
        if n > 0 {
            b = mul_classes(k, relations, &b, &b, ReductionOrder::HighestFirst);
        }
    }
    acc
}

/// ḡ_j = Σ_{i≥0} (−z)^i g_j^{i+1}.
fn conj_generator(alg: &QuotientAlgebra<LaurentScalar>, j: usize) -> KClass {
    let g = alg.generator(j);
    let mut acc = alg.zero();
    let mut p = g.clone();
    let mut i = 0i64;
    while !p.is_zero() {
        let coeff = LaurentScalar::z_pow_int(i, if i % 2 == 0 { 1 } else { -1 });
        acc = acc.add(&p.scalar_mul(&coeff));
        p = alg.mul(&p, &g);
        i += 1;
    }
    acc
}

/// ch(g_j) = z⁻¹(e^{z x_j} − 1) = Σ_{m≥1} z^{m−1} x_j^m / m!.
fn ch_generator(
    alg: &QuotientAlgebra<RationalLaurentScalar>,
    j: usize,
) -> GradedClass<RationalLaurentScalar> {
    let x = alg.generator(j);
    let mut acc = alg.zero();
    let mut p = x.clone();
    let mut m = 1u64;
    let mut factorial = BigInt::from(1);
    while !p.is_zero() {
        let coeff =
            RationalLaurentScalar::z_pow_ratio(m as i64 - 1, BigInt::from(1), factorial.clone());
        acc = acc.add(&p.scalar_mul(&coeff));
        p = alg.mul(&p, &x);
        m += 1;
        factorial *= m;
    }
    acc
}
