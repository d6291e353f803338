//! Shared fixtures for the criterion benches.

use bott_core::{BottList, GradedClass, IntegerScalar};

/// Deterministic dense-ish integral class for multiplication benches.
pub fn dense_class(k: usize, salt: u64) -> GradedClass<IntegerScalar> {
    GradedClass::from_terms(
        k,
        (0..(1u32 << k)).map(|mask| {
            let c = ((mask as u64).wrapping_mul(0x9e37_79b9).wrapping_add(salt) % 7) as i64 - 3;
            (mask, IntegerScalar::from(c))
        }),
    )
}

pub fn presets(k: usize) -> Vec<BottList> {
    vec![
        BottList::cp1_power(k),
        BottList::bounded_flag(k),
        BottList::a_family(k),
        BottList::big_entry(k, 42),
    ]
}
