#![allow(dead_code)]

use momentconekit::glued::KInput;
use momentconekit::quiver::{build_flag_extension, BipartiteSpec, FlagExtension, Side, Weight};
use momentconekit::semiinv::ExtendedWeight;

/// Every spec with `m, ℓ, n ≤ 2` and `β(x) ≤ 2`.
pub fn small_specs() -> Vec<BipartiteSpec> {
    let mut out = Vec::new();
    for m in 1..=2 {
        for ell in 1..=2 {
            for n in 1..=2 {
                let k = m + ell;
                for code in 0..(1u32 << k) {
                    let beta = (0..k).map(|b| 1 + u64::from((code >> b) & 1)).collect();
                    out.push(BipartiteSpec::new(m, ell, n, beta).unwrap());
                }
            }
        }
    }
    out
}

/// Balanced weights on `Q_β` with entries in `[−2, 2]` meeting the sign
/// conditions: nonnegative on source flags, nonpositive on sink flags.
pub fn small_weights(ext: &FlagExtension) -> Vec<Weight> {
    let count = ext.vertex_count();
    let mut signs = vec![1i64; count];
    for base in 0..ext.base.m + ext.base.ell {
        if ext.side(base) == Side::Sink {
            for &v in ext.flag(base) {
                signs[v] = -1;
            }
        }
    }
    let mut out = Vec::new();
    let mut values = vec![0i64; count];
    loop {
        let sigma: Vec<i64> = values.iter().zip(&signs).map(|(a, s)| a * s).collect();
        let pairing: i64 = sigma.iter().zip(&ext.beta_tilde.values).map(|(s, &b)| s * b as i64).sum();
        if pairing == 0 {
            out.push(Weight::from_integers(&sigma));
        }
        let mut k = 0;
        loop {
            if k == count {
                return out;
            }
            values[k] += 1;
            if values[k] <= 2 {
                break;
            }
            values[k] = 0;
            k += 1;
        }
    }
}

pub struct Instance {
    pub ext: FlagExtension,
    pub sigma: Weight,
    pub weight: ExtendedWeight,
    pub input: KInput,
}

/// The formula–polytope family: every small spec with every small weight.
pub fn small_family() -> Vec<Instance> {
    let mut out = Vec::new();
    for spec in small_specs() {
        let ext = build_flag_extension(&spec);
        for sigma in small_weights(&ext) {
            let weight = ExtendedWeight::new(&ext, &sigma).unwrap();
            let input = weight.k_input(&ext).unwrap();
            out.push(Instance { ext: ext.clone(), sigma, weight, input });
        }
    }
    out
}
