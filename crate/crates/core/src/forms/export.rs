//! CSV and JSON export of expansions.

use num_bigint::BigInt;
use serde::Serialize;

use crate::padic::CycElt;
use crate::series::PowSeries;

/// One coefficient of an exported expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionRow {
    pub exponent: usize,
    /// The coefficient as a polynomial in `ζ` (an integer for exact series).
    pub coefficient: String,
    /// Known 3-adic precision; `None` for exact integers.
    pub precision: Option<u32>,
}

pub trait ExportCoeff {
    fn render(&self) -> (String, Option<u32>);
}

impl ExportCoeff for BigInt {
    fn render(&self) -> (String, Option<u32>) {
        (self.to_string(), None)
    }
}

impl ExportCoeff for CycElt {
    fn render(&self) -> (String, Option<u32>) {
        (self.to_string(), Some(self.precision()))
    }
}

pub fn expansion_rows<C>(s: &PowSeries<C>) -> Vec<ExpansionRow>
where
    C: ExportCoeff + crate::series::Coefficient,
{
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(exponent, c)| {
            let (coefficient, precision) = c.render();
            ExpansionRow {
                exponent,
                coefficient,
                precision,
            }
        })
        .collect()
}

pub fn rows_to_csv(rows: &[ExpansionRow]) -> String {
    let mut out = String::from("exponent,coefficient,precision\n");
    for r in rows {
        let prec = r
            .precision
            .map_or_else(|| "exact".to_string(), |p| p.to_string());
        out.push_str(&format!("{},\"{}\",{}\n", r.exponent, r.coefficient, prec));
    }
    out
}

pub fn rows_to_json(rows: &[ExpansionRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}
