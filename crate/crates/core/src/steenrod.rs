//! Sq² on H*(M^k; F₂) as a differential, and the Bahri–Bendersky summand
//! counts with the additive KO groups they determine.
//!
//! Sq¹ vanishes identically: the integral cohomology is torsion-free and
//! concentrated in even degrees, so the mod-2 Bocksteins are zero. On the
//! square-free basis the Cartan formula gives Sq²(x_R) = Σ_{j∈R} x_j²·x_{R∖j},
//! which reduces to Σ_{j∈R} v_j·x_R. β_q counts the CP²-type summands whose
//! bottom cell sits in degree 2(q+1), i.e. the rank of Sq² restricted to
//! H^{2(q+1)}; α_p is what remains of dim H^{2p}.

use serde_json::{json, Value};

use crate::coeffs::F2;
use crate::cohom::{binomial, mask_card, GradedClass, QuotientAlgebra, SubsetMask};
use crate::error::{BottError, Result};
use crate::towers::BottList;

/// Sphere and CP²-suspension multiplicities: α indexed 0..=k, β indexed
/// 0..=k−2 (empty for k ≤ 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BBProfile {
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
}

impl BBProfile {
    pub fn to_json(&self) -> Value {
        json!({ "alpha": self.alpha, "beta": self.beta })
    }
}

/// The mod-2 cohomology ring of a tower.
pub fn f2_algebra(list: &BottList) -> QuotientAlgebra<F2> {
    QuotientAlgebra::additive(list)
}

/// Sq² of a mod-2 class, Cartan-expanded on square-free monomials and
/// reduced back to the basis.
pub fn sq2(alg: &QuotientAlgebra<F2>, cls: &GradedClass<F2>) -> GradedClass<F2> {
    let mut out = alg.zero();
    for (mask, _) in cls.terms() {
        for j in 1..=alg.k() {
            if mask >> (j - 1) & 1 == 1 {
                let mono = GradedClass::monomial(alg.k(), *mask);
                out = out.add(&alg.mul(alg.relation(j), &mono));
            }
        }
    }
    out
}

fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for bit in 0..width {
        let (word, shift) = (bit / 64, bit % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] >> shift & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][word] >> shift & 1 == 1 {
                let (a, b) = if r < rank {
                    let (lo, hi) = rows.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// The BB numbers of a tower; asserts Sq²∘Sq² = 0 and the dimension
/// bookkeeping Σα + 2Σβ = 2^k along the way.
pub fn bb_profile(list: &BottList) -> Result<BBProfile> {
    let k = list.height();
    let alg = f2_algebra(list);

    // β_q = rank of Sq²: H^{2(q+1)} → H^{2(q+2)}.
    let mut beta = Vec::new();
    for q in 0..k.saturating_sub(1) {
        let sources: Vec<SubsetMask> = (0..(1u32 << k))
            .filter(|m| mask_card(*m) == q + 1)
            .collect();
        let targets: Vec<SubsetMask> = (0..(1u32 << k))
            .filter(|m| mask_card(*m) == q + 2)
            .collect();
        let words = targets.len().div_ceil(64).max(1);
        let mut rows = Vec::with_capacity(sources.len());
        for &src in &sources {
            let image = sq2(&alg, &GradedClass::monomial(k, src));
            let mut row = vec![0u64; words];
            for (m, _) in image.terms() {
                let idx = targets.binary_search(m).map_err(|_| {
                    BottError::Internal("Sq² image escaped the expected degree".into())
                })?;
                row[idx / 64] |= 1 << (idx % 64);
            }
            rows.push(row);
        }
        beta.push(gf2_rank(rows) as u64);
    }

    // Sq² must be a differential for the summand extraction to make sense.
    for mask in 0..(1u32 << k) {
        let once = sq2(&alg, &GradedClass::monomial(k, mask));
        if !sq2(&alg, &once).is_zero() {
            return Err(BottError::Internal(format!(
                "Sq²∘Sq² ≠ 0 on monomial {mask:#b}"
            )));
        }
    }

    // dim H^{2p} = α_p + β_{p−1} (bottom cells) + β_{p−2} (top cells).
    let beta_at = |q: isize| -> u64 {
        if q < 0 || q as usize >= beta.len() {
            0
        } else {
            beta[q as usize]
        }
    };
    let mut alpha = Vec::with_capacity(k + 1);
    for p in 0..=k {
        let dim = binomial(k as u64, p as u64);
        let occupied = beta_at(p as isize - 1) + beta_at(p as isize - 2);
        let dim: u64 = dim
            .try_into()
            .map_err(|_| BottError::Internal("cohomology dimension exceeds u64".into()))?;
        let a = dim
            .checked_sub(occupied)
            .ok_or_else(|| BottError::Internal(format!("negative α_{p}: reduction bug")))?;
        alpha.push(a);
    }

    let total: u64 = alpha.iter().sum::<u64>() + 2 * beta.iter().sum::<u64>();
    if total != 1u64 << k {
        return Err(BottError::Internal(format!(
            "dimension bookkeeping failed: Σα + 2Σβ = {total} ≠ 2^{k}"
        )));
    }

    Ok(BBProfile { alpha, beta })
}

/// Additive structure of an abelian group: free rank plus cyclic torsion
/// orders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupDescriptor {
    pub free_rank: u64,
    pub torsion: Vec<u64>,
}

impl GroupDescriptor {
    pub fn to_json(&self) -> Value {
        json!({ "free_rank": self.free_rank, "torsion": self.torsion })
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        let twos = self.torsion.iter().filter(|t| **t == 2).count();
        if twos > 0 {
            parts.push(if twos == 1 {
                "Z/2".to_string()
            } else {
                format!("(Z/2)^{twos}")
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// KO_m of the point (m mod 8): Z, Z/2, Z/2, 0, Z, 0, 0, 0.
fn ko_point(m: i64) -> Option<u64> {
    match m.rem_euclid(8) {
        0 | 4 => Some(0), // free rank 1
        1 | 2 => Some(2), // Z/2
        _ => None,
    }
}

/// Additive KO^n read off the BB profile: each sphere summand S^{2p}
/// contributes KO_{2p−n}(point), and each CP²-type summand contributes a
/// free rank-1 group in every even degree (Wood: KO ∧ CP² ≃ K).
pub fn ko_groups_from_bb(profile: &BBProfile, n: i64) -> GroupDescriptor {
    let mut free_rank = 0u64;
    let mut torsion = Vec::new();
    for (p, &count) in profile.alpha.iter().enumerate() {
        if count == 0 {
            continue;
        }
        match ko_point(2 * p as i64 - n) {
            Some(0) => free_rank += count,
            Some(order) => torsion.extend(std::iter::repeat_n(order, count as usize)),
            None => {}
        }
    }
    if n % 2 == 0 {
        free_rank += profile.beta.iter().sum::<u64>();
    }
    torsion.sort_unstable();
    GroupDescriptor { free_rank, torsion }
}
