//! Regression suite over the closed-form counts and presentations: runs the
//! calculators against the known formulas for the preset families and emits
//! one pass/fail line per claim.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cohom::{binomial, euler_characteristic, evaluate_fundamental, total_chern};
use crate::error::{BottError, Result};
use crate::kotheory::{ko_minus2_basis, TeRing, ToRing};
use crate::steenrod::{bb_profile, ko_groups_from_bb};
use crate::structures::{
    almost_complex_count, enumerate_structures, o_count_is_exact, szczarba_check, EnumOptions,
};
use crate::towers::{BottList, Omniorientation, Parity};

/// Preset families of towers used by the verification suite and the CLI.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Family {
    Cp1Power,
    BoundedFlag,
    AFamily,
    BigEntry,
    Custom(BottList),
}

impl Family {
    pub fn parse(name: &str) -> Result<Family> {
        match name {
            "cp1-power" => Ok(Family::Cp1Power),
            "bounded-flag" => Ok(Family::BoundedFlag),
            "A-family" | "a-family" => Ok(Family::AFamily),
            "big-entry" => Ok(Family::BigEntry),
            other => Err(BottError::Parse(format!(
                "unknown family {other:?}; expected cp1-power, bounded-flag, a-family or big-entry"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::Cp1Power => "cp1-power".to_string(),
            Family::BoundedFlag => "bounded-flag".to_string(),
            Family::AFamily => "a-family".to_string(),
            Family::BigEntry => "big-entry".to_string(),
            Family::Custom(list) => format!("custom({})", list.canonical_string()),
        }
    }

    pub fn list(&self, k: usize, seed: u64) -> BottList {
        match self {
            Family::Cp1Power => BottList::cp1_power(k),
            Family::BoundedFlag => BottList::bounded_flag(k),
            Family::AFamily => BottList::a_family(k),
            Family::BigEntry => BottList::big_entry(k, seed.wrapping_add(k as u64)),
            Family::Custom(list) => list.clone(),
        }
    }
}

/// Outcome of a single verified claim.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn of(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn render(&self) -> String {
        format!(
            "[{}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "detail": self.detail })
    }
}

fn eq_check<T: PartialEq + std::fmt::Display>(name: String, got: T, expected: T) -> Check {
    let passed = got == expected;
    Check::of(name, passed, format!("computed {got}, expected {expected}"))
}

pub fn pow_u64(base: u64, exp: usize) -> u64 {
    base.pow(exp as u32)
}

fn binom_u64(n: u64, k: u64) -> u64 {
    u64::try_from(binomial(n, k)).expect("binomial out of u64 range")
}

/// 3^k, the minimum of o over height-k towers.
pub fn o_lower(k: usize) -> u64 {
    pow_u64(3, k)
}

/// 3·4^{k−1}, the maximum of o over height-k towers.
pub fn o_upper(k: usize) -> u64 {
    if k == 0 {
        1
    } else {
        3 * pow_u64(4, k - 1)
    }
}

/// o for (CP¹)^k.
pub fn cp1_o(k: usize) -> u64 {
    pow_u64(3, k)
}

/// b for (CP¹)^k: a product structure bounds when some factor does.
pub fn cp1_b(k: usize) -> u64 {
    pow_u64(3, k) - pow_u64(2, k)
}

/// o for the bounded flag tower: Σ C(k+1,2i)·2^{k−i}.
pub fn bounded_flag_o(k: usize) -> u64 {
    (0..=k.div_ceil(2))
        .map(|i| binom_u64(k as u64 + 1, 2 * i as u64) * pow_u64(2, k - i))
        .sum()
}

/// b for the bounded flag tower: Σ C(k,2i−1)·2^{k−i}.
pub fn bounded_flag_b(k: usize) -> u64 {
    (1..=k.div_ceil(2))
        .map(|i| binom_u64(k as u64, 2 * i as u64 - 1) * pow_u64(2, k - i))
        .sum()
}

/// o(a,2) for the two-stage tower.
pub fn two_stage_o(a: i64) -> u64 {
    match a.abs() {
        0 => 9,
        1 => 10,
        2 => 11,
        _ => 12,
    }
}

/// Generic per-list checks: Chern sanity, Szczarba, o-bounds, ac-count and
/// the distinct-c₁ side claim.
fn generic_checks(
    tag: &str,
    list: &BottList,
    report: &crate::structures::EnumerationReport,
    out: &mut Vec<Check>,
) -> Result<()> {
    let k = list.height();

    // c_k(τ_C) = (−2)^k x_{[k]} and c_k[M^k] = 2^k = χ.
    let total = total_chern(list, &Omniorientation::canonical(k));
    let top = total.component_by_card(k);
    let ck = evaluate_fundamental(&top);
    let chi = euler_characteristic(list);
    let full = if k == 0 { 0u32 } else { (1u32 << k) - 1 };
    let expected_top = if k % 2 == 1 {
        -(BigInt::from(1) << k)
    } else {
        BigInt::from(1) << k
    };
    out.push(Check::of(
        format!("{tag} k={k} chern-top"),
        top.coeff(full) == expected_top && ck == chi,
        format!("c_k coefficient {}, c_k[M]={ck}, χ={chi}", top.coeff(full)),
    ));

    out.push(Check::of(
        format!("{tag} k={k} szczarba"),
        szczarba_check(list),
        "δ=1…1, ε=0 class is Σ z²(g_j+ḡ_j) and bounds".to_string(),
    ));

    let in_bounds = report.o_count >= o_lower(k) && report.o_count <= o_upper(k);
    out.push(Check::of(
        format!("{tag} k={k} o-bounds"),
        in_bounds,
        format!("{} ≤ o = {} ≤ {}", o_lower(k), report.o_count, o_upper(k)),
    ));

    if k >= 1 {
        out.push(eq_check(
            format!("{tag} k={k} ac-count"),
            report.ac_count,
            pow_u64(2, k - 1),
        ));
    }
    out.push(eq_check(
        format!("{tag} k={k} c1-distinct"),
        report.c1_distinct_count,
        pow_u64(2, k),
    ));
    out.push(Check::of(
        format!("{tag} k={k} b-partition"),
        report.b_count <= report.o_count,
        format!("b = {} of o = {}", report.b_count, report.o_count),
    ));
    Ok(())
}

/// BB profile checks for the two closed-form families, bookkeeping for the
/// rest.
fn bb_checks(tag: &str, list: &BottList, out: &mut Vec<Check>) -> Result<()> {
    let k = list.height();
    let profile = bb_profile(list)?;
    match list.parity() {
        Parity::TotallyEven | Parity::Trivial => {
            let alpha_ok = (0..=k).all(|p| profile.alpha[p] == binom_u64(k as u64, p as u64));
            let beta_ok = profile.beta.iter().all(|b| *b == 0);
            out.push(Check::of(
                format!("{tag} k={k} bb-totally-even"),
                alpha_ok && beta_ok,
                format!("alpha {:?} beta {:?}", profile.alpha, profile.beta),
            ));
        }
        Parity::TerminallyOdd => {
            let beta_ok = (0..k.saturating_sub(1)).all(|q| {
                profile.beta[q]
                    == (q..=k - 2)
                        .map(|h| binom_u64(h as u64, q as u64))
                        .sum::<u64>()
            });
            let alpha_ok = profile.alpha[0] == 1
                && profile.alpha[1] == 1
                && profile.alpha[2..].iter().all(|a| *a == 0);
            out.push(Check::of(
                format!("{tag} k={k} bb-terminally-odd"),
                alpha_ok && beta_ok,
                format!("alpha {:?} beta {:?}", profile.alpha, profile.beta),
            ));
        }
        Parity::Mixed => {
            let total: u64 =
                profile.alpha.iter().sum::<u64>() + 2 * profile.beta.iter().sum::<u64>();
            out.push(eq_check(
                format!("{tag} k={k} bb-bookkeeping"),
                total,
                pow_u64(2, k),
            ));
        }
    }

    if list.parity() != Parity::Mixed {
        let direct = ko_minus2_basis(list)?;
        let via_bb = ko_groups_from_bb(&profile, -2);
        out.push(Check::of(
            format!("{tag} k={k} ko-minus2"),
            direct.group == via_bb,
            format!(
                "basis route {}, BB route {}",
                direct.group.render(),
                via_bb.render()
            ),
        ));
    }
    Ok(())
}

/// Exhaustive product sweep for a terminally odd tower: every generator
/// pair decomposes, torsion annihilates, and 1 ∈ R ∩ R′ forces zero.
fn ko_product_checks(tag: &str, list: &BottList, out: &mut Vec<Check>) -> Result<()> {
    let k = list.height();
    let ring = ToRing::new(list)?;
    let gens = ring.generators();
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    for (a, x) in gens.iter().enumerate() {
        for y in &gens[a..] {
            pairs += 1;
            match ring.to_product(x, y) {
                Ok(p) => {
                    if let (
                        crate::kotheory::ToGenerator::N(i1),
                        crate::kotheory::ToGenerator::N(i2),
                    ) = (x, y)
                    {
                        if i1.r & i2.r & 1 == 1 && !p.is_zero() {
                            failures.push(format!("{}·{} ≠ 0", x.name(), y.name()));
                        }
                    }
                }
                Err(e) => failures.push(format!("{}·{}: {e}", x.name(), y.name())),
            }
        }
    }

    // d₁·n₁ = 2n₀ on B₂ embeds in every bounded-flag tower at stage 2.
    out.push(Check::of(
        format!("{tag} k={k} ko-products"),
        failures.is_empty(),
        if failures.is_empty() {
            format!("{pairs} generator pairs decomposed")
        } else {
            failures.join("; ")
        },
    ));
    Ok(())
}

/// te-relation checks for a totally even tower: degree homogeneity,
/// complexification consistency, torsion flags.
fn te_relation_checks(tag: &str, list: &BottList, out: &mut Vec<Check>) -> Result<()> {
    let k = list.height();
    let ring = TeRing::new(list)?;
    let mut ok = true;
    let mut detail = String::new();
    for j in 1..=k {
        let rel = ring.te_relation(j)?;
        if !rel.u.is_zero() && rel.u.degree()? != Some(2) {
            ok = false;
            detail = format!("U_{j} inhomogeneous");
            break;
        }
        let expected_determined = *list == BottList::cp1_power(k) || *list == BottList::a_family(k);
        if rel.torsion_determined != expected_determined {
            ok = false;
            detail = format!("U_{j} torsion flag wrong");
            break;
        }
    }
    if ok {
        detail = format!("d_j² = U_j·d_j for j ≤ {k}");
    }
    out.push(Check::of(format!("{tag} k={k} te-relations"), ok, detail));
    Ok(())
}

/// Runs the verification suite for one family up to the given height.
pub fn verify_family(
    family: &Family,
    max_height: usize,
    seed: u64,
    opts: &EnumOptions,
) -> Result<Vec<Check>> {
    let tag = family.name();
    let mut out = Vec::new();
    let heights: Vec<usize> = match family {
        Family::Custom(list) => vec![list.height()],
        _ => (1..=max_height).collect(),
    };

    let mut o_by_k: Vec<(usize, u64)> = Vec::new();

    for &k in &heights {
        let list = family.list(k, seed);
        if list.height() > opts.cap {
            return Err(BottError::CapExceeded {
                height: list.height(),
                cap: opts.cap,
            });
        }

        let report = enumerate_structures(&list, opts)?;
        generic_checks(&tag, &list, &report, &mut out)?;
        bb_checks(&tag, &list, &mut out)?;
        o_by_k.push((k, report.o_count));

        match family {
            Family::Cp1Power => {
                out.push(eq_check(
                    format!("{tag} k={k} o-count"),
                    report.o_count,
                    cp1_o(k),
                ));
                out.push(eq_check(
                    format!("{tag} k={k} b-count"),
                    report.b_count,
                    cp1_b(k),
                ));
                out.push(Check::of(
                    format!("{tag} k={k} o-exact"),
                    report.o_exact,
                    "all-zero list is a proved family".to_string(),
                ));
            }
            Family::BoundedFlag => {
                out.push(eq_check(
                    format!("{tag} k={k} o-count"),
                    report.o_count,
                    bounded_flag_o(k),
                ));
                out.push(eq_check(
                    format!("{tag} k={k} b-count"),
                    report.b_count,
                    bounded_flag_b(k),
                ));
                if k <= 5 {
                    ko_product_checks(&tag, &list, &mut out)?;
                }
            }
            Family::AFamily => {
                if k == 2 {
                    out.push(eq_check(
                        format!("{tag} k={k} o-count"),
                        report.o_count,
                        two_stage_o(2),
                    ));
                }
                te_relation_checks(&tag, &list, &mut out)?;
            }
            Family::BigEntry => {
                out.push(eq_check(
                    format!("{tag} k={k} o-count"),
                    report.o_count,
                    o_upper(k),
                ));
                out.push(Check::of(
                    format!("{tag} k={k} o-exact"),
                    o_count_is_exact(&list),
                    format!("list {}", list.canonical_string()),
                ));
            }
            Family::Custom(_) => {
                if k == 2 {
                    let a = list.entry(1, 2);
                    out.push(eq_check(
                        format!("{tag} k={k} o-count"),
                        report.o_count,
                        two_stage_o(a),
                    ));
                }
                if list.parity().is_terminally_odd() && k <= 5 {
                    ko_product_checks(&tag, &list, &mut out)?;
                }
                if list.parity().is_totally_even() {
                    te_relation_checks(&tag, &list, &mut out)?;
                }
            }
        }
    }

    // Recurrence o(k) = 4o(k−1) − 2o(k−2) for the bounded flag family.
    if matches!(family, Family::BoundedFlag) && o_by_k.len() >= 3 {
        let passed = o_by_k.windows(3).all(|w| {
            let (o0, o1, o2) = (w[0].1 as i64, w[1].1 as i64, w[2].1 as i64);
            o2 == 4 * o1 - 2 * o0
        });
        out.push(Check::of(
            format!("{tag} o-recurrence"),
            passed,
            format!("{:?}", o_by_k.iter().map(|(_, o)| *o).collect::<Vec<_>>()),
        ));
    }

    Ok(out)
}

/// Runs every preset family.
pub fn verify_all(max_height: usize, seed: u64, opts: &EnumOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for family in [
        Family::Cp1Power,
        Family::BoundedFlag,
        Family::AFamily,
        Family::BigEntry,
    ] {
        out.extend(verify_family(&family, max_height, seed, opts)?);
    }
    out.extend(verify_random_lists(
        12,
        max_height.min(5),
        seed.wrapping_add(0x5eed),
        opts,
    )?);
    Ok(out)
}

/// Random-list spot checks mirroring the acceptance sweeps: Chern sanity,
/// almost-complex count and bounding coherence.
pub fn verify_random_lists(
    count: usize,
    max_height: usize,
    seed: u64,
    opts: &EnumOptions,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut failures = Vec::new();
    for n in 0..count {
        let k = 1 + (n % max_height);
        let list = BottList::random(k, 5, seed.wrapping_add(n as u64));
        let ac = almost_complex_count(&list, opts)?;
        if ac != pow_u64(2, k - 1) {
            failures.push(format!("{}: ac = {ac}", list.canonical_string()));
        }
        // Group consistency at small height: every omniorientation with the
        // same complexified difference element must produce the identical
        // total Chern class.
        if k <= 3 {
            let kt = crate::ktheory::KTheory::new(&list);
            let mut by_diff: std::collections::HashMap<
                crate::ktheory::KClass,
                crate::cohom::GradedClass<crate::coeffs::IntegerScalar>,
            > = std::collections::HashMap::new();
            for mask in 0..(1u64 << (2 * k)) {
                let omni = Omniorientation::from_mask(mask, k);
                let total = total_chern(&list, &omni);
                match by_diff.entry(kt.diff_element(&omni)) {
                    std::collections::hash_map::Entry::Occupied(prev) => {
                        if prev.get() != &total {
                            failures.push(format!(
                                "{}: group of mask {mask} has drifting Chern data",
                                list.canonical_string()
                            ));
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(total);
                    }
                }
            }
        }

        let report = enumerate_structures(&list, opts)?;
        let nonzero = report
            .classes
            .iter()
            .filter(|r| r.chern_numbers.iter().any(|(_, v)| !Zero::is_zero(v)))
            .count() as u64;
        if report.b_count + nonzero != report.o_count {
            failures.push(format!("{}: bounding partition", list.canonical_string()));
        }
    }
    out.push(Check::of(
        format!("random-lists n={count} k≤{max_height}"),
        failures.is_empty(),
        if failures.is_empty() {
            "ac = 2^{k−1}, Chern data constant on classes, b-partition holds".to_string()
        } else {
            failures.join("; ")
        },
    ));
    Ok(out)
}
