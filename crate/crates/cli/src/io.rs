//! JSON formats and argument parsing helpers.

use serde_json::{json, Map, Value};
use wittkit::lattice::{Lattice, WittMatrix};
use wittkit::linalg::Mat;
use wittkit::ore::{OreElement, OreRing};
use wittkit::plin::{PLattice, PLinearMap};
use wittkit::rla::StructureConstantAlgebra;
use wittkit::witt::GaloisRing;
use wittkit::{Error, Fe, Gf, Result};

/// Reads inline JSON (starting with `{` or `[`) or a file path.
pub fn load(input: &str) -> Result<Value> {
    let text = if input.trim_start().starts_with(['{', '[']) {
        input.to_string()
    } else {
        std::fs::read_to_string(input).map_err(|e| Error::DomainError(format!("{input}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::DomainError(format!("bad JSON: {e}")))
}

fn bad(what: &str) -> Error {
    Error::Shape(format!("malformed {what}"))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(what))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what))
}

pub fn codes(v: &Value, gf: &Gf, what: &str) -> Result<Vec<Fe>> {
    as_array(v, what)?
        .iter()
        .map(|x| {
            let c = u32::try_from(as_u64(x, what)?).map_err(|_| bad(what))?;
            gf.check(c)
        })
        .collect()
}

pub fn parse_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::DomainError(format!("not an integer: {t}"))))
        .collect()
}

pub fn witt_matrix_to_json(gr: &GaloisRing, u: &WittMatrix) -> Value {
    json!({ "n": u.rows, "s": gr.s(), "entries": u.to_digit_cols(gr) })
}

pub fn witt_matrix_from_json(gr: &GaloisRing, v: &Value) -> Result<WittMatrix> {
    let n = as_u64(&v["n"], "n")? as usize;
    let s = as_u64(&v["s"], "s")?;
    if s != gr.s() as u64 {
        return Err(Error::ParamsMismatch);
    }
    let cols: Vec<Vec<Vec<Fe>>> = as_array(&v["entries"], "entries")?
        .iter()
        .map(|col| {
            let col = as_array(col, "column")?;
            if col.len() != n {
                return Err(bad("column length"));
            }
            col.iter()
                .map(|e| {
                    let d = codes(e, gr.field(), "digits")?;
                    if d.len() != s as usize {
                        return Err(bad("digit count"));
                    }
                    Ok(d)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    WittMatrix::from_digit_cols(gr, &cols)
}

pub fn lattice_to_json(gr: &GaloisRing, lat: &Lattice) -> Value {
    let mut v = witt_matrix_to_json(gr, &lat.span);
    v["type"] = json!(lat.ty);
    v["colength"] = json!(lat.colength);
    v
}

pub fn mat_to_json(m: &Mat) -> Value {
    json!(m.to_rows())
}

pub fn mat_from_json(v: &Value, gf: &Gf) -> Result<Mat> {
    let rows: Vec<Vec<Fe>> = as_array(v, "rows")?.iter().map(|r| codes(r, gf, "row")).collect::<Result<_>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad("matrix rows"));
    }
    Ok(Mat::from_rows(&rows))
}

pub fn plin_to_json(phi: &PLinearMap) -> Value {
    json!({ "n": phi.n(), "rows": phi.b.to_rows() })
}

pub fn plin_from_json(v: &Value, gf: &Gf) -> Result<PLinearMap> {
    let n = as_u64(&v["n"], "n")? as usize;
    let b = mat_from_json(&v["rows"], gf)?;
    if b.rows != n {
        return Err(bad("map size"));
    }
    PLinearMap::new(b)
}

pub fn plattice_to_json(lat: &PLattice) -> Value {
    json!({
        "n": lat.n,
        "basis": lat.basis,
        "codim": lat.codim,
        "theta_closed": lat.theta_closed,
        "transversal": lat.transversal,
    })
}

pub fn plattice_from_json(v: &Value, gf: &Gf) -> Result<PLattice> {
    let n = as_u64(&v["n"], "n")? as usize;
    let basis: Vec<Vec<Fe>> =
        as_array(&v["basis"], "basis")?.iter().map(|r| codes(r, gf, "basis vector")).collect::<Result<_>>()?;
    if basis.iter().any(|b| b.len() != n * n) {
        return Err(bad("basis vector length"));
    }
    Ok(PLattice::from_vectors(gf, n, &basis))
}

/// {"n", "s", "rows": [[ [θ-coefficients] ]]}; short coefficient lists are zero-padded.
pub fn ore_rows_from_json(v: &Value, gf: &Gf) -> Result<(OreRing, usize, Vec<Vec<OreElement>>)> {
    let n = as_u64(&v["n"], "n")? as usize;
    let s = as_u64(&v["s"], "s")? as usize;
    let ring = OreRing::new(gf, s);
    let rows = as_array(&v["rows"], "rows")?
        .iter()
        .map(|r| {
            let r = as_array(r, "row")?;
            if r.len() != n {
                return Err(bad("row length"));
            }
            r.iter()
                .map(|e| {
                    let mut coeffs = codes(e, gf, "Ore element")?;
                    if coeffs.len() < s {
                        coeffs.resize(s, 0);
                    }
                    let el = OreElement { coeffs };
                    ring.check(&el)?;
                    Ok(el)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((ring, n, rows))
}

pub fn model_to_json(model: &StructureConstantAlgebra) -> Value {
    let mut bracket = Map::new();
    for i in 0..model.dim() {
        for j in 0..model.dim() {
            if !model.bracket[i][j].is_empty() {
                bracket.insert(format!("{i},{j}"), json!(model.bracket[i][j]));
            }
        }
    }
    let mut pmap = Map::new();
    let mut weights = Map::new();
    for i in 0..model.dim() {
        if !model.pmap[i].is_empty() {
            pmap.insert(i.to_string(), json!(model.pmap[i]));
        }
        weights.insert(i.to_string(), json!(model.weights[i]));
    }
    json!({
        "basis": model.basis.iter().map(|b| b.name()).collect::<Vec<_>>(),
        "bracket": bracket,
        "pmap": pmap,
        "weights": weights,
    })
}
