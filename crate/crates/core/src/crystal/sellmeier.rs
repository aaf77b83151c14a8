//! Sellmeier dispersion models, loaded from the versioned coefficient table.
//!
//! The table format is documented in `data/sellmeier.txt` itself and in the
//! repository README; the file shipped with the crate is embedded at compile
//! time and parsed once on first use. Alternative tables can be parsed with
//! [`SellmeierTable::parse`] for validation work.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::units::lambda_um_from_omega;

/// Contents of `data/sellmeier.txt`, the versioned coefficient file.
pub const BUILTIN_TABLE: &str = include_str!("../../data/sellmeier.txt");

/// One dispersion record: functional form, transparency window, coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexModel {
    /// n^2 = c0 + c1/(l^2 - c2) - c3 l^2, l in um (Kato-style 4-coefficient fit).
    Kato4 { c: [f64; 4], window_um: (f64, f64) },
    /// n^2 = 1 + sum_i Bi l^2/(l^2 - Ci^2), l in um (three-term Sellmeier).
    Sellmeier3 { b: [f64; 3], c: [f64; 3], window_um: (f64, f64) },
}

impl IndexModel {
    pub fn window_um(&self) -> (f64, f64) {
        match self {
            IndexModel::Kato4 { window_um, .. } => *window_um,
            IndexModel::Sellmeier3 { window_um, .. } => *window_um,
        }
    }

    /// Refractive index at vacuum wavelength `lambda_um`. No window check.
    pub fn index_at_um(&self, l: f64) -> f64 {
        match self {
            IndexModel::Kato4 { c, .. } => {
                (c[0] + c[1] / (l * l - c[2]) - c[3] * l * l).sqrt()
            }
            IndexModel::Sellmeier3 { b, c, .. } => {
                let l2 = l * l;
                let mut n2 = 1.0;
                for i in 0..3 {
                    n2 += b[i] * l2 / (l2 - c[i] * c[i]);
                }
                n2.sqrt()
            }
        }
    }

    /// dn/dlambda at `lambda_um`, in 1/um, from the analytic derivative of
    /// the fit polynomial.
    pub fn dindex_dlambda_um(&self, l: f64) -> f64 {
        let n = self.index_at_um(l);
        match self {
            IndexModel::Kato4 { c, .. } => {
                // d(n^2)/dl = -2 c1 l/(l^2-c2)^2 - 2 c3 l
                let d = l * l - c[2];
                let dn2 = -2.0 * c[1] * l / (d * d) - 2.0 * c[3] * l;
                dn2 / (2.0 * n)
            }
            IndexModel::Sellmeier3 { b, c, .. } => {
                let l2 = l * l;
                let mut dn2 = 0.0;
                for i in 0..3 {
                    let ci2 = c[i] * c[i];
                    let d = l2 - ci2;
                    // d/dl [ b l^2/(l^2-c^2) ] = -2 b l c^2 / (l^2-c^2)^2
                    dn2 += -2.0 * b[i] * l * ci2 / (d * d);
                }
                dn2 / (2.0 * n)
            }
        }
    }
}

/// Parsed coefficient table keyed by record name (`bbo_o`, `fused_silica`, ...).
#[derive(Debug, Clone)]
pub struct SellmeierTable {
    records: HashMap<String, IndexModel>,
}

impl SellmeierTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let err = |why: String| Error::Parse { what: "sellmeier table", line: lineno + 1, why };
            let key = it.next().ok_or_else(|| err("missing key".into()))?.to_string();
            let form = it.next().ok_or_else(|| err("missing form".into()))?;
            let nums: Vec<f64> = it
                .map(|t| t.parse::<f64>().map_err(|e| err(format!("bad number {t:?}: {e}"))))
                .collect::<Result<_>>()?;
            let model = match form {
                "kato4" => {
                    if nums.len() != 6 {
                        return Err(err(format!("kato4 expects 6 numbers, got {}", nums.len())));
                    }
                    IndexModel::Kato4 {
                        c: [nums[2], nums[3], nums[4], nums[5]],
                        window_um: (nums[0], nums[1]),
                    }
                }
                "sellmeier3" => {
                    if nums.len() != 8 {
                        return Err(err(format!("sellmeier3 expects 8 numbers, got {}", nums.len())));
                    }
                    IndexModel::Sellmeier3 {
                        b: [nums[2], nums[4], nums[6]],
                        c: [nums[3], nums[5], nums[7]],
                        window_um: (nums[0], nums[1]),
                    }
                }
                other => return Err(err(format!("unknown form {other:?}"))),
            };
            records.insert(key, model);
        }
        Ok(SellmeierTable { records })
    }

    pub fn get(&self, key: &str) -> Option<&IndexModel> {
        self.records.get(key)
    }
}

/// The built-in table, parsed once.
pub fn builtin() -> &'static SellmeierTable {
    static TABLE: OnceLock<SellmeierTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        SellmeierTable::parse(BUILTIN_TABLE).expect("embedded sellmeier table must parse")
    })
}

/// Look up a record in the built-in table and evaluate it at `omega`
/// (rad/fs), erroring outside the transparency window.
pub fn index_checked(key: &'static str, omega: f64) -> Result<f64> {
    let model = builtin()
        .get(key)
        .unwrap_or_else(|| panic!("record {key:?} missing from embedded table"));
    let l = lambda_um_from_omega(omega);
    let (lo, hi) = model.window_um();
    if !(lo..=hi).contains(&l) || !l.is_finite() {
        return Err(Error::OutOfWindow { material: key, wavelength_um: l, lo_um: lo, hi_um: hi });
    }
    Ok(model.index_at_um(l))
}

/// dn/domega (fs) for a record in the built-in table, window-checked.
pub fn dindex_domega_checked(key: &'static str, omega: f64) -> Result<f64> {
    let model = builtin()
        .get(key)
        .unwrap_or_else(|| panic!("record {key:?} missing from embedded table"));
    let l = lambda_um_from_omega(omega);
    let (lo, hi) = model.window_um();
    if !(lo..=hi).contains(&l) || !l.is_finite() {
        return Err(Error::OutOfWindow { material: key, wavelength_um: l, lo_um: lo, hi_um: hi });
    }
    // dn/dw = dn/dl * dl/dw, dl/dw = -l/w
    Ok(model.dindex_dlambda_um(l) * (-l / omega))
}
