//! Closed-form gate counts and their comparison against synthesized circuits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::GateClass;
use crate::crot::{build_crot_circuit, AngleOracle};
use crate::error::{domain, Result};

/// Largest `m` for which the closed forms are evaluated (fits in `u64`).
pub const MAX_FORMULA_M: usize = 48;

/// Largest `m` accepted by [`census_vs_formula`].
pub const MAX_CENSUS_M: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ours,
    Qfbe,
    Newton,
    MeasurementBased,
    AdderReference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GateCount {
    Exact(u64),
    Class(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub method: Method,
    pub m: Option<usize>,
    pub qubit_count_class: String,
    pub gate_count: GateCount,
    pub breakdown: BTreeMap<String, u64>,
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_FORMULA_M {
        return Err(domain!("m must be in 1..={MAX_FORMULA_M}, got {m}"));
    }
    Ok(())
}

/// `m(2^{m+1} − 3) + m(m+1)/2 + m` with its three components.
pub fn ours_cost(m: usize) -> Result<CostReport> {
    check_m(m)?;
    let mu = m as u64;
    let breakdown = BTreeMap::from([
        ("controlled_powers".to_string(), mu * ((1u64 << (m + 1)) - 3)),
        ("inverse_qft".to_string(), mu * (mu + 1) / 2),
        ("ry_cascade".to_string(), mu),
    ]);
    Ok(CostReport {
        method: Method::Ours,
        m: Some(m),
        qubit_count_class: "O(m)".into(),
        gate_count: GateCount::Exact(breakdown.values().sum()),
        breakdown,
    })
}

pub fn ours_gate_count(m: usize) -> Result<u64> {
    match ours_cost(m)?.gate_count {
        GateCount::Exact(n) => Ok(n),
        GateCount::Class(_) => unreachable!("closed form"),
    }
}

/// `34m³ − 16m² + 4m`.
pub fn qfbe_gate_count(m: usize) -> Result<u64> {
    check_m(m)?;
    let m = m as u64;
    Ok(34 * m * m * m - 16 * m * m + 4 * m)
}

/// Smallest `m` where the closed form for this construction exceeds QFBE.
pub fn crossover_m() -> usize {
    (1..=MAX_FORMULA_M)
        .find(|&m| ours_gate_count(m).unwrap() > qfbe_gate_count(m).unwrap())
        .expect("crossover exists below MAX_FORMULA_M")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdderCost {
    pub qubits: u64,
    pub cnot: u64,
    pub toffoli: u64,
}

/// Reference adder: `3m+1` qubits, `20m+2` CNOT, `20m−10` Toffoli.
pub fn adder_reference(m: usize) -> Result<AdderCost> {
    check_m(m)?;
    let m = m as u64;
    Ok(AdderCost { qubits: 3 * m + 1, cnot: 20 * m + 2, toffoli: 20 * m - 10 })
}

/// Asymptotic comparison rows plus the adder annotation.
pub fn comparison_table() -> Vec<CostReport> {
    let row = |method, q: &str, g: &str| CostReport {
        method,
        m: None,
        qubit_count_class: q.into(),
        gate_count: GateCount::Class(g.into()),
        breakdown: BTreeMap::new(),
    };
    vec![
        row(Method::Newton, "O(m³)", "O(m⁴)"),
        row(Method::Qfbe, "O(m²)", "O(m³)"),
        row(Method::MeasurementBased, "O(poly(m))", "O(poly(m))"),
        row(Method::Ours, "O(m)", "O(m·2^m)"),
        row(Method::AdderReference, "3m+1", "20m+2 CNOT + 20m−10 Toffoli"),
    ]
}

pub fn format_comparison_table(rows: &[CostReport]) -> String {
    let mut out = String::from("method             qubits        gates\n");
    for r in rows {
        let gates = match &r.gate_count {
            GateCount::Exact(n) => n.to_string(),
            GateCount::Class(s) => s.clone(),
        };
        let name = serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        writeln!(out, "{name:<18} {:<13} {gates}", r.qubit_count_class).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaItem {
    pub item: String,
    pub count: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusComparison {
    pub m: usize,
    pub census: BTreeMap<String, usize>,
    /// Synthesized counts grouped like the closed-form breakdown.
    pub synthesized: BTreeMap<String, u64>,
    pub formula: CostReport,
    /// Gates present in the circuit but absent from the closed form, plus
    /// any component mismatch.
    pub delta: Vec<DeltaItem>,
}

/// Oracle with `θ_0 = 0` and pseudo-random remaining angles, so no Walsh
/// angle vanishes in any power and no control-wire phase is emitted.
pub fn generic_oracle(m: usize) -> Result<AngleOracle> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + m as u64);
    let thetas = (0..1usize << m).map(|k| if k == 0 { 0.0 } else { rng.random_range(0.01..0.99) }).collect();
    AngleOracle::from_thetas(m, thetas)
}

/// Builds the module (without uncompute) for [`generic_oracle`] and
/// compares its census with [`ours_cost`].
pub fn census_vs_formula(m: usize) -> Result<CensusComparison> {
    if m == 0 || m > MAX_CENSUS_M {
        return Err(domain!("census comparison needs 1 ≤ m ≤ {MAX_CENSUS_M}, got {m}"));
    }
    let circuit = build_crot_circuit(&generic_oracle(m)?, false)?;
    let census = circuit.census();
    let get = |c| census.get(c) as u64;
    let mu = m as u64;
    let synthesized = BTreeMap::from([
        ("controlled_powers".to_string(), get(GateClass::Toffoli) + get(GateClass::Crz)),
        ("inverse_qft".to_string(), get(GateClass::H) - mu + get(GateClass::Cphase)),
        ("ry_cascade".to_string(), get(GateClass::Cry)),
    ]);
    let formula = ours_cost(m)?;
    let mut delta = vec![DeltaItem { item: "hadamard_layer".into(), count: m as i64 }];
    if get(GateClass::Swap) > 0 {
        delta.push(DeltaItem { item: "qft_swaps".into(), count: get(GateClass::Swap) as i64 });
    }
    if get(GateClass::Rz) > 0 {
        delta.push(DeltaItem { item: "control_phase".into(), count: get(GateClass::Rz) as i64 });
    }
    for (name, &expected) in &formula.breakdown {
        let got = synthesized[name];
        if got != expected {
            delta.push(DeltaItem { item: format!("{name}_mismatch"), count: got as i64 - expected as i64 });
        }
    }
    Ok(CensusComparison { m, census: census.to_map(), synthesized, formula, delta })
}

/// `m,ours,qfbe` rows for `m = 1..=max_m`.
pub fn gate_count_csv(max_m: usize) -> Result<String> {
    check_m(max_m)?;
    let mut out = String::from("m,ours,qfbe\n");
    for m in 1..=max_m {
        writeln!(out, "{m},{},{}", ours_gate_count(m)?, qfbe_gate_count(m)?).unwrap();
    }
    Ok(out)
}

/// Two polylines on a log-scale y axis.
pub fn gate_count_svg(max_m: usize) -> Result<String> {
    check_m(max_m)?;
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let ours: Vec<f64> = (1..=max_m).map(|m| ours_gate_count(m).map(|v| v as f64)).collect::<Result<_>>()?;
    let qfbe: Vec<f64> = (1..=max_m).map(|m| qfbe_gate_count(m).map(|v| v as f64)).collect::<Result<_>>()?;
    let hi = ours.iter().chain(&qfbe).copied().fold(1.0, f64::max).log10().ceil().max(1.0);
    let x = |m: usize| pad + (w - 2.0 * pad) * if max_m == 1 { 0.5 } else { (m - 1) as f64 / (max_m - 1) as f64 };
    let y = |v: f64| h - pad - (h - 2.0 * pad) * v.max(1.0).log10() / hi;
    let poly = |vals: &[f64]| {
        vals.iter().enumerate().map(|(i, &v)| format!("{:.2},{:.2}", x(i + 1), y(v))).collect::<Vec<_>>().join(" ")
    };
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, h - pad, w - pad, h - pad).unwrap();
    writeln!(s, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="black"/>"#, h - pad).unwrap();
    for d in 0..=hi as u32 {
        let yy = y(10f64.powi(d as i32));
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">1e{d}</text>"#, pad - 6.0, yy + 4.0)
            .unwrap();
    }
    for m in 1..=max_m {
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{m}</text>"#, x(m), h - pad + 16.0)
            .unwrap();
    }
    writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, poly(&ours)).unwrap();
    writeln!(s, r#"<polyline fill="none" stroke="firebrick" stroke-width="2" points="{}"/>"#, poly(&qfbe)).unwrap();
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="steelblue">ours</text>"#, w - pad - 60.0, pad).unwrap();
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="firebrick">QFBE</text>"#, w - pad - 60.0, pad + 16.0)
        .unwrap();
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">m</text>"#, w / 2.0, h - 12.0).unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(ours_gate_count(1).unwrap(), 3);
        assert_eq!(ours_gate_count(4).unwrap(), 130);
        assert_eq!(ours_gate_count(10).unwrap(), 20515);
        assert_eq!(ours_gate_count(11).unwrap(), 45100);
        assert_eq!(qfbe_gate_count(1).unwrap(), 22);
        assert_eq!(qfbe_gate_count(10).unwrap(), 32440);
        assert_eq!(qfbe_gate_count(11).unwrap(), 43362);
        assert_eq!(crossover_m(), 11);
        assert!(ours_gate_count(0).is_err());
    }

    #[test]
    fn adder_at_8() {
        assert_eq!(adder_reference(8).unwrap(), AdderCost { qubits: 25, cnot: 162, toffoli: 150 });
    }

    #[test]
    fn table_rows() {
        let rows = comparison_table();
        let ours = rows.iter().find(|r| r.method == Method::Ours).unwrap();
        assert_eq!(ours.qubit_count_class, "O(m)");
        assert_eq!(ours.gate_count, GateCount::Class("O(m·2^m)".into()));
        let newton = rows.iter().find(|r| r.method == Method::Newton).unwrap();
        assert_eq!((newton.qubit_count_class.as_str(), &newton.gate_count), ("O(m³)", &GateCount::Class("O(m⁴)".into())));
    }

    #[test]
    fn census_m2_and_m3() {
        let c = census_vs_formula(2).unwrap();
        assert_eq!(c.synthesized["controlled_powers"], 10);
        let c = census_vs_formula(3).unwrap();
        assert_eq!(c.synthesized["inverse_qft"], 6);
        let items: Vec<&str> = c.delta.iter().map(|d| d.item.as_str()).collect();
        assert_eq!(items, vec!["hadamard_layer", "qft_swaps"]);
    }

    #[test]
    fn csv_rows() {
        assert_eq!(gate_count_csv(1).unwrap(), "m,ours,qfbe\n1,3,22\n");
        let text = gate_count_csv(20).unwrap();
        assert!(text.contains("\n11,45100,43362\n"));
        assert!(gate_count_svg(12).unwrap().starts_with("<svg"));
    }
}
