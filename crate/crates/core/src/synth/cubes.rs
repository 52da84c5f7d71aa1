use std::collections::{BTreeMap, BTreeSet};

use super::mcrz::append_mcrz;
use super::{DiagonalSpec, ZERO_ANGLE_TOL};
use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::units::canonical_turns;

/// Subcube of target indices `{k : k & care == value}` sharing one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cube {
    pub care: usize,
    pub value: usize,
    pub angle: f64,
}

impl Cube {
    pub fn contains(&self, k: usize) -> bool {
        k & self.care == self.value
    }

    pub fn literals(&self) -> u32 {
        self.care.count_ones()
    }
}

/// Greedy cover of each phase class by subcubes: adjacent cubes (same care
/// mask, values differing in one cared bit) are merged until nothing changes.
pub fn merge_cubes(spec: &DiagonalSpec) -> Vec<Cube> {
    let full = spec.phases().len() - 1;
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (k, t) in spec.phases().iter().enumerate() {
        classes.entry(t.to_bits()).or_default().push(k);
    }
    let mut out = Vec::new();
    for (bits, members) in classes {
        let angle = f64::from_bits(bits);
        let mut set: BTreeSet<(usize, usize)> = members.into_iter().map(|k| (full, k)).collect();
        loop {
            let mut changed = false;
            for b in 0..spec.width() {
                let bit = 1usize << b;
                let lows: Vec<(usize, usize)> =
                    set.iter().copied().filter(|&(c, v)| c & bit != 0 && v & bit == 0).collect();
                for (care, value) in lows {
                    let partner = (care, value | bit);
                    if set.contains(&(care, value)) && set.contains(&partner) {
                        set.remove(&(care, value));
                        set.remove(&partner);
                        set.insert((care & !bit, value));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        out.extend(set.into_iter().map(|(care, value)| Cube { care, value, angle }));
    }
    out
}

/// Controlled-diagonal built as a product of one multi-controlled RZ per
/// cube.
#[derive(Debug, Clone)]
pub struct CdProduct {
    pub circuit: Circuit,
    pub cubes: Vec<Cube>,
    pub ancilla: Option<usize>,
}

/// Controlled-`D`, control on qubit 0, `D` on `1..=m`. An ancilla qubit
/// `m + 1` is appended only if some cube needs three or more controls.
pub fn synthesize_cd_product(spec: &DiagonalSpec) -> Result<CdProduct> {
    let m = spec.width();
    let cubes: Vec<Cube> =
        merge_cubes(spec).into_iter().filter(|c| canonical_turns(c.angle).abs() >= ZERO_ANGLE_TOL).collect();
    let ancilla = cubes.iter().any(|c| c.literals() >= 3).then_some(m + 1);
    let mut circuit = Circuit::new(m + 1 + ancilla.is_some() as usize);
    for cube in &cubes {
        let flips: Vec<usize> = (0..m).filter(|j| cube.care >> j & 1 == 1 && cube.value >> j & 1 == 0).collect();
        let mut participants = vec![0];
        participants.extend((0..m).filter(|j| cube.care >> j & 1 == 1).map(|j| j + 1));
        let (target, controls) = participants.split_last().expect("control is always present");
        for &j in &flips {
            circuit.push(Gate::x(j + 1))?;
        }
        append_mcrz(&mut circuit, controls, *target, ancilla, cube.angle)?;
        for &j in &flips {
            circuit.push(Gate::x(j + 1))?;
        }
    }
    Ok(CdProduct { circuit, cubes, ancilla })
}
