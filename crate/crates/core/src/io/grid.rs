use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::assignment::guarantee_alpha_assign;
use crate::error::{Error, Result};
use crate::ratio::{alpha_decimal, Alpha};
use crate::selection::guarantee_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    Select,
    Assign { m: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// `None` when the reduction does not apply.
    #[serde(serialize_with = "serialize_cell_alpha")]
    pub alpha: Option<Alpha>,
    pub alpha_decimal: Option<f64>,
}

fn serialize_cell_alpha<S: serde::Serializer>(a: &Option<Alpha>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match a {
        Some(a) => s.serialize_str(&format!("{}/{}", a.numer(), a.denom())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaGrid {
    pub cells: Vec<GridCell>,
}

/// Guarantee for every (n, k) in the ranges.
pub fn alpha_grid(ns: RangeInclusive<usize>, ks: RangeInclusive<usize>, mode: GridMode) -> Result<AlphaGrid> {
    if ns.is_empty() || ks.is_empty() {
        return Err(Error::precondition("empty n or k range"));
    }
    if let GridMode::Assign { m: 0 } = mode {
        return Err(Error::precondition("m must be positive"));
    }
    let mut cells = Vec::new();
    for n in ns {
        for k in ks.clone() {
            let (m, alpha) = match mode {
                GridMode::Select => (None, guarantee_alpha(n, k)),
                GridMode::Assign { m } => (Some(m), guarantee_alpha_assign(n, m, k)),
            };
            let alpha = alpha.ok();
            cells.push(GridCell {
                n,
                k,
                m,
                alpha_decimal: alpha.as_ref().map(alpha_decimal),
                alpha,
            });
        }
    }
    Ok(AlphaGrid { cells })
}

impl AlphaGrid {
    /// Tab-separated, one row per cell; `n/a` marks inapplicable cells.
    pub fn to_tsv(&self) -> String {
        let with_m = self.cells.first().is_some_and(|c| c.m.is_some());
        let mut out = String::new();
        out.push_str(if with_m {
            "n\tk\tm\talpha_num\talpha_den\talpha_decimal\n"
        } else {
            "n\tk\talpha_num\talpha_den\talpha_decimal\n"
        });
        for c in &self.cells {
            let _ = write!(out, "{}\t{}\t", c.n, c.k);
            if let Some(m) = c.m {
                let _ = write!(out, "{m}\t");
            }
            match &c.alpha {
                Some(a) => {
                    let _ = writeln!(out, "{}\t{}\t{:.6}", a.numer(), a.denom(), alpha_decimal(a));
                }
                None => out.push_str("n/a\tn/a\tn/a\n"),
            }
        }
        out
    }
}
