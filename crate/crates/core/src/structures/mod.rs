//! Enumeration and classification of the 2^{2k} omniorientation-induced
//! stably complex structures: distinct-structure counts, almost complex
//! counts, bounding counts and the Szczarba structure check.
//!
//! Structures are grouped by the complexification of their difference
//! element, which determines every Chern datum. The count of groups is the
//! exact o(k) on the proved families (all heights ≤ 2, the all-zero list,
//! the ±1 bounded-flag lists, and lists with |a(j−1,j)| ≥ 3 everywhere) and
//! a lower bound elsewhere, where e-torsion could in principle separate
//! structures with equal complexification.

pub mod verify;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coeffs::IntegerScalar;
use crate::cohom::{chern_numbers_of_total, total_chern, GradedClass, Partition};
use crate::error::{BottError, Result};
use crate::ktheory::{KClass, KTheory};
use crate::towers::{BottList, Omniorientation, Parity};

/// Default height cap; the monomial basis has 2^k elements and enumeration
/// visits 4^k omniorientations.
pub const DEFAULT_CAP: usize = 16;

#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub cap: usize,
    pub jobs: Option<usize>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cap: DEFAULT_CAP,
            jobs: None,
        }
    }
}

/// One distinct stably complex structure with its Chern data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UStructureRecord {
    /// Lexicographically smallest omniorientation inducing the class.
    pub omni: Omniorientation,
    /// Complexified difference element c(Δ(τ, τ_C)).
    pub diff: KClass,
    pub total_chern: GradedClass<IntegerScalar>,
    pub chern_numbers: Vec<(Partition, IntegerScalar)>,
    pub almost_complex: bool,
    pub bounds: bool,
}

impl UStructureRecord {
    /// A structure bounds exactly when every Chern number vanishes
    /// (Chern numbers determine the complex cobordism class).
    pub fn is_bounding(&self) -> bool {
        self.chern_numbers.iter().all(|(_, v)| Zero::is_zero(v))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EnumerationReport {
    pub list: BottList,
    pub o_count: u64,
    pub o_exact: bool,
    pub ac_count: u64,
    pub b_count: u64,
    pub c1_distinct_count: u64,
    pub classes: Vec<UStructureRecord>,
}

/// The computed group count is exact on the proved families.
pub fn o_count_is_exact(list: &BottList) -> bool {
    let k = list.height();
    if k <= 2 {
        return true;
    }
    let all_zero = (2..=k).all(|j| list.stage_entries(j).iter().all(|a| *a == 0));
    if all_zero {
        return true;
    }
    let off_diag_zero = (2..=k).all(|j| list.stage_entries(j)[..j - 2].iter().all(|a| *a == 0));
    if off_diag_zero {
        let diag: Vec<i64> = (2..=k).map(|j| list.entry(j - 1, j)).collect();
        if diag.iter().all(|a| *a == 1) || diag.iter().all(|a| *a == -1) {
            return true;
        }
    }
    (2..=k).all(|j| list.entry(j - 1, j).abs() >= 3)
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| BottError::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Visits all 4^k omniorientations, groups them by complexified difference
/// element, and computes Chern data once per group. The report is
/// deterministic: groups carry their smallest omniorientation mask and are
/// sorted by it, independent of the worker count.
pub fn enumerate_structures(list: &BottList, opts: &EnumOptions) -> Result<EnumerationReport> {
    let k = list.height();
    if k > opts.cap {
        return Err(BottError::CapExceeded {
            height: k,
            cap: opts.cap,
        });
    }
    let list = list.clone();
    with_pool(opts.jobs, move || enumerate_inner(&list))
}

fn enumerate_inner(list: &BottList) -> EnumerationReport {
    let k = list.height();
    let kt = KTheory::new(list);
    let (delta_c, eps_c) = kt.diff_contributions();

    let total: u64 = 1u64 << (2 * k);
    let groups: HashMap<KClass, u64> = (0..total)
        .into_par_iter()
        .fold(HashMap::new, |mut map: HashMap<KClass, u64>, mask| {
            let mut diff = kt.zero();
            for h in 0..k {
                if mask >> h & 1 == 1 {
                    diff = diff.add(&delta_c[h]);
                }
                if mask >> (k + h) & 1 == 1 {
                    diff = diff.add(&eps_c[h]);
                }
            }
            map.entry(diff)
                .and_modify(|m| *m = (*m).min(mask))
                .or_insert(mask);
            map
        })
        .reduce(HashMap::new, |mut a, b| {
            for (cls, mask) in b {
                a.entry(cls)
                    .and_modify(|m| *m = (*m).min(mask))
                    .or_insert(mask);
            }
            a
        });

    let mut reps: Vec<(u64, KClass)> = groups.into_iter().map(|(c, m)| (m, c)).collect();
    reps.sort_by_key(|(m, _)| *m);

    let full: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let top_coeff = if k % 2 == 1 {
        -(BigInt::from(1) << k)
    } else {
        BigInt::from(1) << k
    };
    let expected_top = GradedClass::term(k, full, top_coeff);

    let classes: Vec<UStructureRecord> = reps
        .into_par_iter()
        .map(|(mask, diff)| {
            let omni = Omniorientation::from_mask(mask, k);
            let total = total_chern(list, &omni);
            let chern_numbers = chern_numbers_of_total(list, &total);
            let almost_complex = total.component_by_card(k) == expected_top;
            let mut rec = UStructureRecord {
                omni,
                diff,
                total_chern: total,
                chern_numbers,
                almost_complex,
                bounds: false,
            };
            rec.bounds = rec.is_bounding();
            rec
        })
        .collect();

    // Distinct c₁ among the 2^k top-contributing sign patterns (δ = ε).
    let c1_distinct_count = {
        let mut seen: Vec<GradedClass<IntegerScalar>> = Vec::new();
        for s in 0..(1u64 << k) {
            let omni = Omniorientation::from_mask(s | s << k, k);
            let c1 = total_chern(list, &omni).component_by_card(1);
            if !seen.contains(&c1) {
                seen.push(c1);
            }
        }
        seen.len() as u64
    };

    let o_count = classes.len() as u64;
    let ac_count = classes.iter().filter(|r| r.almost_complex).count() as u64;
    let b_count = classes.iter().filter(|r| r.bounds).count() as u64;

    EnumerationReport {
        list: list.clone(),
        o_count,
        o_exact: o_count_is_exact(list),
        ac_count,
        b_count,
        c1_distinct_count,
        classes,
    }
}

/// Number of distinct classes restricting to almost complex structures;
/// asserts the side claim that the 2^k top-sign candidates have pairwise
/// distinct c₁.
pub fn almost_complex_count(list: &BottList, opts: &EnumOptions) -> Result<u64> {
    let report = enumerate_structures(list, opts)?;
    let k = list.height();
    if report.c1_distinct_count != 1 << k {
        return Err(BottError::Internal(format!(
            "top-sign candidates share a c₁: {} distinct of {}",
            report.c1_distinct_count,
            1u64 << k
        )));
    }
    Ok(report.ac_count)
}

/// Verifies that the δ = (1,…,1), ε = 0 omniorientation realises the
/// Szczarba structure: its difference element is Σ_j z²(g_j + ḡ_j) and all
/// of its Chern numbers vanish.
pub fn szczarba_check(list: &BottList) -> bool {
    let k = list.height();
    let kt = KTheory::new(list);
    let omni = Omniorientation::szczarba(k);
    let diff = kt.diff_element(&omni);
    let mut expected = kt.zero();
    for j in 1..=k {
        expected = expected.add(
            &kt.generator(j)
                .add(kt.gbar(j))
                .scalar_mul(&crate::coeffs::LaurentScalar::z_pow(2)),
        );
    }
    if diff != expected {
        return false;
    }
    // The bounding clause applies to the tower stages; a point has the
    // empty-partition Chern number 1 and nothing bounds there.
    if k == 0 {
        return true;
    }
    chern_numbers_of_total(list, &total_chern(list, &omni))
        .iter()
        .all(|(_, v)| Zero::is_zero(v))
}

impl EnumerationReport {
    pub fn k(&self) -> usize {
        self.list.height()
    }

    pub fn parity(&self) -> Parity {
        self.list.parity()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k(),
            "list": self.list.canonical_string(),
            "parity": self.parity().as_str(),
            "o_count": self.o_count,
            "o_exact": self.o_exact,
            "ac_count": self.ac_count,
            "b_count": self.b_count,
            "c1_distinct_count": self.c1_distinct_count,
            "classes": self.classes.iter().map(|r| {
                let nums: serde_json::Map<String, Value> = r
                    .chern_numbers
                    .iter()
                    .map(|(p, v)| (p.name(), Value::String(v.to_string())))
                    .collect();
                json!({
                    "delta": r.omni.delta_bits(),
                    "epsilon": r.omni.epsilon_bits(),
                    "almost_complex": r.almost_complex,
                    "bounds": r.bounds,
                    "chern_numbers": nums,
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// The classes table; the only CSV surface.
    pub fn to_csv(&self) -> String {
        let parts = crate::cohom::partitions(self.k());
        let mut header = vec!["delta".to_string(), "epsilon".to_string()];
        header.push("almost_complex".to_string());
        header.push("bounds".to_string());
        header.extend(parts.iter().map(|p| format!("chern[{}]", p.name())));
        let mut out = header.join(",") + "\n";
        for r in &self.classes {
            let mut row = vec![
                r.omni.delta_bits(),
                r.omni.epsilon_bits(),
                r.almost_complex.to_string(),
                r.bounds.to_string(),
            ];
            row.extend(r.chern_numbers.iter().map(|(_, v)| v.to_string()));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "list {:?} (k={}, {})\n",
            self.list.canonical_string(),
            self.k(),
            self.parity().as_str()
        ));
        out.push_str(&format!(
            "o = {}{}, almost-complex = {}, bounding = {}, distinct top-sign c1 = {}\n",
            self.o_count,
            if self.o_exact { "" } else { " (lower bound)" },
            self.ac_count,
            self.b_count,
            self.c1_distinct_count
        ));
        for r in &self.classes {
            let nums = r
                .chern_numbers
                .iter()
                .map(|(p, v)| format!("c[{}]={}", p.name(), v))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(
                "  {};{} ac={} bounds={} {}\n",
                r.omni.delta_bits(),
                r.omni.epsilon_bits(),
                r.almost_complex as u8,
                r.bounds as u8,
                nums
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    fn two_stage(a: i64) -> BottList {
        BottList::validate(vec![vec![a]]).unwrap()
    }

    #[test]
    fn o_of_height_one() {
        let report = enumerate_structures(&BottList::validate(vec![]).unwrap(), &opts()).unwrap();
        assert_eq!(report.o_count, 3);
        assert!(report.o_exact);
        assert_eq!(report.ac_count, 1);
        // CP¹: the canonical class does not bound, the flipped one and the
        // c₁ = 0 class split the rest; b(1) = 1.
        assert_eq!(report.b_count, 1);
    }

    #[test]
    fn negative_bounded_flag_matches_positive() {
        // The ±1 diagonal lists share their counts and both are proved
        // exact.
        for k in 1..=4usize {
            let neg = BottList::validate(
                (2..=k)
                    .map(|j| {
                        let mut st = vec![0; j - 1];
                        st[j - 2] = -1;
                        st
                    })
                    .collect(),
            )
            .unwrap();
            let pos = enumerate_structures(&BottList::bounded_flag(k), &opts()).unwrap();
            let neg = enumerate_structures(&neg, &opts()).unwrap();
            assert!(neg.o_exact);
            assert_eq!(neg.o_count, pos.o_count, "o at k={k}");
            assert_eq!(neg.b_count, pos.b_count, "b at k={k}");
            assert_eq!(neg.ac_count, pos.ac_count, "ac at k={k}");
        }
    }

    #[test]
    fn o_two_stage_sweep() {
        for (a, expected) in [
            (0i64, 9u64),
            (1, 10),
            (-1, 10),
            (2, 11),
            (-2, 11),
            (3, 12),
            (-3, 12),
            (4, 12),
        ] {
            let report = enumerate_structures(&two_stage(a), &opts()).unwrap();
            assert_eq!(report.o_count, expected, "o({a},2)");
            assert!(report.o_exact);
        }
    }

    #[test]
    fn b3_count() {
        let report = enumerate_structures(&BottList::bounded_flag(3), &opts()).unwrap();
        assert_eq!(report.o_count, 34);
        assert!(report.o_exact);
        assert_eq!(report.b_count, 14);
        assert_eq!(report.ac_count, 4);
    }

    #[test]
    fn almost_complex_examples() {
        // k=3, arbitrary list: 2^{k−1} = 4.
        let list = BottList::validate(vec![vec![5], vec![-2, 7]]).unwrap();
        assert_eq!(almost_complex_count(&list, &opts()).unwrap(), 4);
        // k=1.
        assert_eq!(
            almost_complex_count(&BottList::validate(vec![]).unwrap(), &opts()).unwrap(),
            1
        );
        // k=2, a=7.
        assert_eq!(almost_complex_count(&two_stage(7), &opts()).unwrap(), 2);
    }

    #[test]
    fn bounding_examples() {
        // τ_C on CP¹ has c₁[M¹] = 2 ≠ 0.
        let report = enumerate_structures(&BottList::validate(vec![]).unwrap(), &opts()).unwrap();
        let canonical = report
            .classes
            .iter()
            .find(|r| r.omni.to_mask() == 0)
            .unwrap();
        assert!(!canonical.bounds);
        assert_eq!(canonical.chern_numbers[0].1, BigInt::from(2));

        // Exactly 2^k classes have c_k ≠ 0.
        for list in [two_stage(1), two_stage(2), BottList::bounded_flag(3)] {
            let k = list.height();
            let report = enumerate_structures(&list, &opts()).unwrap();
            let top_nonzero = report
                .classes
                .iter()
                .filter(|r| !Zero::is_zero(&r.chern_numbers[0].1))
                .count() as u64;
            assert_eq!(top_nonzero, 1 << k, "c_k ≠ 0 classes on {list}");
        }
    }

    #[test]
    fn szczarba_examples() {
        assert!(szczarba_check(&BottList::point()));
        for k in 1..=4 {
            assert!(szczarba_check(&BottList::cp1_power(k)), "cp1 k={k}");
            assert!(szczarba_check(&BottList::bounded_flag(k)), "B k={k}");
        }
        assert!(szczarba_check(
            &BottList::validate(vec![vec![4], vec![3, -5]]).unwrap()
        ));
    }

    #[test]
    fn group_members_share_chern_data() {
        // Equal complexified difference elements force equal total Chern
        // classes; checked exhaustively at small height.
        for list in [two_stage(2), BottList::bounded_flag(3)] {
            let k = list.height();
            let kt = KTheory::new(&list);
            let mut by_diff: HashMap<KClass, GradedClass<IntegerScalar>> = HashMap::new();
            for mask in 0..(1u64 << (2 * k)) {
                let omni = Omniorientation::from_mask(mask, k);
                let diff = kt.diff_element(&omni);
                let total = total_chern(&list, &omni);
                if let Some(prev) = by_diff.get(&diff) {
                    assert_eq!(prev, &total, "group of mask {mask} disagrees");
                } else {
                    by_diff.insert(diff, total);
                }
            }
        }
    }

    #[test]
    fn deterministic_across_jobs() {
        let list = BottList::bounded_flag(3);
        let r1 = enumerate_structures(
            &list,
            &EnumOptions {
                cap: 16,
                jobs: Some(1),
            },
        )
        .unwrap();
        let r4 = enumerate_structures(
            &list,
            &EnumOptions {
                cap: 16,
                jobs: Some(4),
            },
        )
        .unwrap();
        assert_eq!(r1, r4);
        assert_eq!(
            serde_json::to_string(&r1.to_json()).unwrap(),
            serde_json::to_string(&r4.to_json()).unwrap()
        );
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_structures(
            &BottList::bounded_flag(3),
            &EnumOptions { cap: 2, jobs: None },
        )
        .unwrap_err();
        assert_eq!(err, BottError::CapExceeded { height: 3, cap: 2 });
    }

    #[test]
    fn point_enumeration() {
        let report = enumerate_structures(&BottList::point(), &opts()).unwrap();
        assert_eq!(report.o_count, 1);
        // The empty partition has Chern number 1; a point does not bound.
        assert_eq!(report.b_count, 0);
    }
}
