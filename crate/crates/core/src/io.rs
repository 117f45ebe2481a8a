//! Symbol JSON files.
//!
//! ```json
//! { "n": 3, "sigma": 1.3, "basis": "realSH-condon-shortley-sqrt4pi-v1",
//!   "blocks": [ { "row_degree": 2, "col_degree": 4,
//!                 "re": [[...], ...], "im": [[...], ...] } ] }
//! ```
//!
//! Rows and columns follow the basis ordering of [`crate::harmonics`]. Floats
//! are written in shortest round-trip form, so reading back is bit-exact.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::harmonics::BASIS_TAG;
use crate::specfun::harmonic_dim;
use crate::star_algebra::Symbol;

#[derive(Debug, Serialize, Deserialize)]
struct SymbolFile {
    n: i64,
    sigma: f64,
    basis: String,
    blocks: Vec<BlockFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BlockFile {
    row_degree: i64,
    col_degree: i64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

pub fn symbol_to_json(symbol: &Symbol) -> String {
    let blocks = symbol
        .blocks()
        .map(|((l, m), b)| BlockFile {
            row_degree: l as i64,
            col_degree: m as i64,
            re: (0..b.nrows())
                .map(|i| (0..b.ncols()).map(|j| b[(i, j)].re).collect())
                .collect(),
            im: (0..b.nrows())
                .map(|i| (0..b.ncols()).map(|j| b[(i, j)].im).collect())
                .collect(),
        })
        .collect();
    let file = SymbolFile {
        n: symbol.n() as i64,
        sigma: symbol.sigma(),
        basis: BASIS_TAG.to_string(),
        blocks,
    };
    serde_json::to_string_pretty(&file).expect("symbol serialization")
}

fn degree(value: i64, field: String) -> Result<u32> {
    if value < 0 || value % 2 != 0 {
        return Err(Error::format(
            field,
            format!("{value} is not a non-negative even integer"),
        ));
    }
    Ok(value as u32)
}

fn matrix(rows: &[Vec<f64>], shape: (usize, usize), field: String) -> Result<Vec<f64>> {
    if rows.len() != shape.0 {
        return Err(Error::format(
            field,
            format!("{} rows, expected {}", rows.len(), shape.0),
        ));
    }
    let mut out = Vec::with_capacity(shape.0 * shape.1);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != shape.1 {
            return Err(Error::format(
                format!("{field}[{i}]"),
                format!("{} columns, expected {}", row.len(), shape.1),
            ));
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::format(format!("{field}[{i}]"), "non-finite entry"));
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

pub fn symbol_from_json(text: &str) -> Result<Symbol> {
    let file: SymbolFile =
        serde_json::from_str(text).map_err(|e| Error::format("json", e.to_string()))?;
    if file.basis != BASIS_TAG {
        return Err(Error::format(
            "basis",
            format!("unknown basis tag {:?}, expected {BASIS_TAG:?}", file.basis),
        ));
    }
    if file.n < 3 {
        return Err(Error::format("n", format!("{} < 3", file.n)));
    }
    if !file.sigma.is_finite() || file.sigma == 0.0 {
        return Err(Error::format(
            "sigma",
            format!("{} must be finite and nonzero", file.sigma),
        ));
    }
    let n = file.n as usize;
    let mut symbol = Symbol::zero(n, file.sigma);
    for (k, b) in file.blocks.iter().enumerate() {
        let l = degree(b.row_degree, format!("blocks[{k}].row_degree"))?;
        let m = degree(b.col_degree, format!("blocks[{k}].col_degree"))?;
        if symbol.block(l, m).is_some() {
            return Err(Error::format(
                format!("blocks[{k}]"),
                format!("duplicate block ({l},{m})"),
            ));
        }
        let shape = (harmonic_dim(n, l), harmonic_dim(n, m));
        let re = matrix(&b.re, shape, format!("blocks[{k}].re"))?;
        let im = matrix(&b.im, shape, format!("blocks[{k}].im"))?;
        let entries: Vec<Complex64> = re
            .iter()
            .zip(&im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        symbol.set_block(l, m, DMatrix::from_row_slice(shape.0, shape.1, &entries))?;
    }
    Ok(symbol)
}

pub fn read_symbol(path: &Path) -> Result<Symbol> {
    symbol_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_symbol(path: &Path, symbol: &Symbol) -> Result<()> {
    std::fs::write(path, symbol_to_json(symbol))?;
    Ok(())
}
