//! The combinatorial model of a Bott tower: the triangular integer list,
//! parity classification, fiber towers, stage bundles and omniorientations.
//!
//! A tower of height k is determined by entries `a(i,j)` for 1 ≤ i < j ≤ k;
//! stage j carries the (j−1)-tuple `(a(1,j), …, a(j−1,j))`. The canonical
//! text form separates stages with `;` and entries with `,`, so `"1;0,1"` is
//! the height-3 bounded flag list. Height 1 is the empty string; the height-0
//! tower (a point) only arises internally.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{BottError, Result};

/// Parity class of a list; towers of height ≤ 1 have no entries and are
/// vacuously both totally even and terminally odd.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Trivial,
    TotallyEven,
    TerminallyOdd,
    Mixed,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Trivial => "trivial",
            Parity::TotallyEven => "totally-even",
            Parity::TerminallyOdd => "terminally-odd",
            Parity::Mixed => "mixed",
        }
    }

    pub fn is_totally_even(self) -> bool {
        matches!(self, Parity::Trivial | Parity::TotallyEven)
    }

    pub fn is_terminally_odd(self) -> bool {
        matches!(self, Parity::Trivial | Parity::TerminallyOdd)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// Triangular integer list defining a Bott tower.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BottList {
    height: usize,
    /// stages[t] holds the entries of stage t+2.
    stages: Vec<Vec<i64>>,
}

impl BottList {
    /// The height-0 tower (a point).
    pub fn point() -> Self {
        BottList {
            height: 0,
            stages: Vec::new(),
        }
    }

    /// Validates a raw triangular array; stage t (0-based) must carry t+1
    /// entries. An empty array is the height-1 tower.
    pub fn validate(stages: Vec<Vec<i64>>) -> Result<Self> {
        for (t, st) in stages.iter().enumerate() {
            if st.len() != t + 1 {
                return Err(BottError::Shape {
                    stage: t + 2,
                    got: st.len(),
                    expected: t + 1,
                });
            }
        }
        Ok(BottList {
            height: stages.len() + 1,
            stages,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Entry a(i,j) for 1 ≤ i < j ≤ height.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        assert!(
            1 <= i && i < j && j <= self.height,
            "a({i},{j}) out of range"
        );
        self.stages[j - 2][i - 1]
    }

    /// The entries (a(1,j), …, a(j−1,j)) of stage j ≥ 2.
    pub fn stage_entries(&self, j: usize) -> &[i64] {
        &self.stages[j - 2]
    }

    pub fn parity(&self) -> Parity {
        if self.height <= 1 {
            return Parity::Trivial;
        }
        let totally_even = self
            .stages
            .iter()
            .all(|st| st.iter().all(|a| a.rem_euclid(2) == 0));
        if totally_even {
            return Parity::TotallyEven;
        }
        // The test starts at j = 2: a(0,1) does not exist.
        let terminally_odd = (2..=self.height).all(|j| self.entry(j - 1, j).rem_euclid(2) == 1);
        if terminally_odd {
            Parity::TerminallyOdd
        } else {
            Parity::Mixed
        }
    }

    /// The fiber of the projection onto the first `k0` stages: drop the first
    /// `k0` stages and delete the first `k0` entries of every remaining one.
    pub fn fiber_tower(&self, k0: usize) -> Result<BottList> {
        if k0 > self.height {
            return Err(BottError::FiberRange {
                k0,
                height: self.height,
            });
        }
        if k0 == self.height {
            return Ok(BottList::point());
        }
        let stages = (k0 + 2..=self.height)
            .map(|j| self.stage_entries(j)[k0..].to_vec())
            .collect();
        Ok(BottList {
            height: self.height - k0,
            stages,
        })
    }

    /// Exponent word of the j-th stage bundle, padded to the full height;
    /// the first bundle is trivial.
    pub fn stage_bundle(&self, j: usize) -> Result<LineBundleWord> {
        if j < 1 || j > self.height {
            return Err(BottError::StageRange {
                j,
                height: self.height,
            });
        }
        let mut word = vec![0i64; self.height];
        if j >= 2 {
            word[..j - 1].copy_from_slice(self.stage_entries(j));
        }
        Ok(LineBundleWord(word))
    }

    /// Canonical text form; stages joined by `;`, entries by `,`.
    pub fn canonical_string(&self) -> String {
        self.stages
            .iter()
            .map(|st| {
                st.iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn to_json(&self) -> Value {
        json!(self.stages)
    }

    pub fn from_json(value: &Value) -> Result<BottList> {
        let arr = value
            .as_array()
            .ok_or_else(|| BottError::Parse("expected an array of stages".into()))?;
        let mut stages = Vec::with_capacity(arr.len());
        for st in arr {
            let row = st
                .as_array()
                .ok_or_else(|| BottError::Parse("expected an array of integers".into()))?
                .iter()
                .map(|v| {
                    v.as_i64()
                        .ok_or_else(|| BottError::Parse(format!("non-integer entry {v}")))
                })
                .collect::<Result<Vec<i64>>>()?;
            stages.push(row);
        }
        BottList::validate(stages)
    }

    // Preset families.

    /// (CP¹)^k: all entries zero.
    pub fn cp1_power(k: usize) -> Self {
        let stages = (2..=k).map(|j| vec![0; j - 1]).collect();
        BottList { height: k, stages }
    }

    /// Bounded flag tower B_k: a(j−1,j) = 1, all other entries zero.
    pub fn bounded_flag(k: usize) -> Self {
        let stages = (2..=k)
            .map(|j| {
                let mut st = vec![0; j - 1];
                st[j - 2] = 1;
                st
            })
            .collect();
        BottList { height: k, stages }
    }

    /// A_k: a(j−1,j) = 2, all other entries zero.
    pub fn a_family(k: usize) -> Self {
        let stages = (2..=k)
            .map(|j| {
                let mut st = vec![0; j - 1];
                st[j - 2] = 2;
                st
            })
            .collect();
        BottList { height: k, stages }
    }

    /// Seeded random list with |a(j−1,j)| ≥ 3 at every stage.
    pub fn big_entry(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let stages = (2..=k)
            .map(|j| {
                let mut st: Vec<i64> = (0..j - 1).map(|_| rng.gen_range(-4..=4)).collect();
                let sign = if rng.gen::<bool>() { 1 } else { -1 };
                st[j - 2] = sign * rng.gen_range(3..=7);
                st
            })
            .collect();
        BottList { height: k, stages }
    }

    /// Seeded random list with unconstrained entries in [-bound, bound].
    pub fn random(k: usize, bound: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let stages = (2..=k)
            .map(|j| (0..j - 1).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        BottList { height: k, stages }
    }
}

impl fmt::Display for BottList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

impl FromStr for BottList {
    type Err = BottError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return BottList::validate(Vec::new());
        }
        let stages = s
            .split(';')
            .map(|stage| {
                stage
                    .split(',')
                    .map(|e| {
                        e.trim()
                            .parse::<i64>()
                            .map_err(|_| BottError::Parse(format!("bad entry {e:?}")))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BottList::validate(stages)
    }
}

/// Exponent vector (c₁, …, c_k) standing for γ₁^{c₁} ⊗ … ⊗ γ_k^{c_k}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LineBundleWord(pub Vec<i64>);

impl LineBundleWord {
    pub fn zero(k: usize) -> Self {
        LineBundleWord(vec![0; k])
    }

    /// The word of the single bundle γ_j (1-based).
    pub fn generator(k: usize, j: usize) -> Self {
        let mut w = vec![0; k];
        w[j - 1] = 1;
        LineBundleWord(w)
    }

    pub fn neg(&self) -> Self {
        LineBundleWord(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        LineBundleWord(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scaled(&self, n: i64) -> Self {
        LineBundleWord(self.0.iter().map(|c| c * n).collect())
    }
}

/// Conjugation flags (δ, ε) for the 2k line-bundle summands of the tangent
/// splitting; δ_h flips γ̄_h and ε_h flips γ̄_h ⊗ γ(a_{h−1}).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Omniorientation {
    pub delta: Vec<bool>,
    pub epsilon: Vec<bool>,
}

impl Omniorientation {
    /// The canonical omniorientation (no flips); induces τ_C.
    pub fn canonical(k: usize) -> Self {
        Omniorientation {
            delta: vec![false; k],
            epsilon: vec![false; k],
        }
    }

    /// δ = (1,…,1), ε = 0; induces the bounding structure τ′.
    pub fn szczarba(k: usize) -> Self {
        Omniorientation {
            delta: vec![true; k],
            epsilon: vec![false; k],
        }
    }

    pub fn k(&self) -> usize {
        self.delta.len()
    }

    /// Decodes a mask with δ in bits 0..k and ε in bits k..2k.
    pub fn from_mask(mask: u64, k: usize) -> Self {
        Omniorientation {
            delta: (0..k).map(|h| mask >> h & 1 == 1).collect(),
            epsilon: (0..k).map(|h| mask >> (k + h) & 1 == 1).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        let k = self.k();
        let mut mask = 0u64;
        for h in 0..k {
            if self.delta[h] {
                mask |= 1 << h;
            }
            if self.epsilon[h] {
                mask |= 1 << (k + h);
            }
        }
        mask
    }

    fn bits(v: &[bool]) -> String {
        v.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }

    pub fn delta_bits(&self) -> String {
        Self::bits(&self.delta)
    }

    pub fn epsilon_bits(&self) -> String {
        Self::bits(&self.epsilon)
    }

    /// Parses `"<k δ-bits>;<k ε-bits>"`.
    pub fn parse(s: &str, k: usize) -> Result<Self> {
        let parse_bits = |part: &str| -> Result<Vec<bool>> {
            let bits = part
                .trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(BottError::Parse(format!("bad omniorientation bit {c:?}"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            if bits.len() != k {
                return Err(BottError::Parse(format!(
                    "expected {k} bits, got {}",
                    bits.len()
                )));
            }
            Ok(bits)
        };
        let (d, e) = s
            .split_once(';')
            .ok_or_else(|| BottError::Parse("expected \"<delta bits>;<epsilon bits>\"".into()))?;
        Ok(Omniorientation {
            delta: parse_bits(d)?,
            epsilon: parse_bits(e)?,
        })
    }
}

impl fmt::Display for Omniorientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.delta_bits(), self.epsilon_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_examples() {
        let trivial = BottList::validate(vec![]).unwrap();
        assert_eq!(trivial.height(), 1);
        assert_eq!(trivial.parity(), Parity::Trivial);
        assert!(trivial.parity().is_totally_even());
        assert!(trivial.parity().is_terminally_odd());

        let b3 = BottList::validate(vec![vec![1], vec![0, 1]]).unwrap();
        assert_eq!(b3.height(), 3);
        assert_eq!(b3.parity(), Parity::TerminallyOdd);
        assert_eq!(b3, BottList::bounded_flag(3));

        let a3 = BottList::validate(vec![vec![2], vec![0, 2]]).unwrap();
        assert_eq!(a3.parity(), Parity::TotallyEven);
        assert_eq!(a3, BottList::a_family(3));

        let err = BottList::validate(vec![vec![1], vec![2]]).unwrap_err();
        assert_eq!(
            err,
            BottError::Shape {
                stage: 3,
                got: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn mixed_parity() {
        // a(1,2) = 3 odd, a(2,3) = 2 even.
        let list = BottList::validate(vec![vec![3], vec![0, 2]]).unwrap();
        assert_eq!(list.parity(), Parity::Mixed);
    }

    #[test]
    fn fiber_examples() {
        let list = BottList::validate(vec![vec![2], vec![5, 7]]).unwrap();
        let fib = list.fiber_tower(1).unwrap();
        assert_eq!(fib, BottList::validate(vec![vec![7]]).unwrap());
        assert_eq!(list.fiber_tower(0).unwrap(), list);
        assert_eq!(list.fiber_tower(3).unwrap(), BottList::point());
        assert!(list.fiber_tower(4).is_err());
    }

    #[test]
    fn bounded_flag_shift_invariant() {
        for n in 1..=7usize {
            for k0 in 0..=n {
                assert_eq!(
                    BottList::bounded_flag(n).fiber_tower(k0).unwrap(),
                    BottList::bounded_flag(n - k0)
                );
            }
        }
    }

    #[test]
    fn stage_bundle_examples() {
        let b3 = BottList::bounded_flag(3);
        assert_eq!(b3.stage_bundle(3).unwrap(), LineBundleWord(vec![0, 1, 0]));
        assert_eq!(b3.stage_bundle(1).unwrap(), LineBundleWord::zero(3));
        let list = BottList::validate(vec![vec![2], vec![5, 7]]).unwrap();
        assert_eq!(list.stage_bundle(3).unwrap(), LineBundleWord(vec![5, 7, 0]));
        assert!(list.stage_bundle(4).is_err());
        assert!(list.stage_bundle(0).is_err());
    }

    #[test]
    fn text_form() {
        let b4 = BottList::bounded_flag(4);
        assert_eq!(b4.canonical_string(), "1;0,1;0,0,1");
        assert_eq!("1;0,1;0,0,1".parse::<BottList>().unwrap(), b4);
        assert_eq!("".parse::<BottList>().unwrap().height(), 1);
        assert!("1;2".parse::<BottList>().is_err());
        assert!("x".parse::<BottList>().is_err());
    }

    #[test]
    fn json_form() {
        let b3 = BottList::bounded_flag(3);
        let v = b3.to_json();
        assert_eq!(v, serde_json::json!([[1], [0, 1]]));
        assert_eq!(BottList::from_json(&v).unwrap(), b3);
        assert_eq!(
            BottList::from_json(&serde_json::json!([]))
                .unwrap()
                .height(),
            1
        );
    }

    #[test]
    fn omni_parse() {
        let o = Omniorientation::parse("101;010", 3).unwrap();
        assert_eq!(o.delta, vec![true, false, true]);
        assert_eq!(o.epsilon, vec![false, true, false]);
        assert_eq!(o.to_string(), "101;010");
        assert_eq!(Omniorientation::from_mask(o.to_mask(), 3), o);
        assert!(Omniorientation::parse("10;010", 3).is_err());
        assert!(Omniorientation::parse("1012;0102", 4).is_err());
    }

    fn arb_list(max_k: usize) -> impl Strategy<Value = BottList> {
        (1..=max_k).prop_flat_map(|k| {
            let entries = k * (k - 1) / 2;
            proptest::collection::vec(-6i64..=6, entries..=entries).prop_map(move |flat| {
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
        #[test]
        fn fiber_composes(list in arb_list(7), k1 in 0usize..=3, k2 in 0usize..=3) {
            prop_assume!(k1 + k2 <= list.height());
            let once = list.fiber_tower(k1).unwrap().fiber_tower(k2).unwrap();
            let both = list.fiber_tower(k1 + k2).unwrap();
            prop_assert_eq!(once, both);
        }

        #[test]
        fn text_round_trips(list in arb_list(7)) {
            let s = list.canonical_string();
            prop_assert_eq!(s.parse::<BottList>().unwrap(), list.clone());
            prop_assert_eq!(BottList::from_json(&list.to_json()).unwrap(), list);
        }

        #[test]
        fn parity_stable_under_fibers(k in 1usize..=7, k0 in 0usize..=6) {
            prop_assume!(k0 <= k);
            let te = BottList::a_family(k).fiber_tower(k0).unwrap();
            prop_assert!(te.parity().is_totally_even());
            let to = BottList::bounded_flag(k).fiber_tower(k0).unwrap();
            prop_assert!(to.parity().is_terminally_odd());
        }
    }
}
