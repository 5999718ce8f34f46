//! JSON file formats. Complex numbers are `[re, im]` arrays and matrices are
//! row-major lists of rows.

use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::landscape::LandscapeParams;
use crate::linalg::{finite_complex, CMatrix, Mat2, C64};
use crate::qcore::{DensityMatrix, DilatedUnitary, KrausSet, TargetOperator};
use crate::stiefel::{Blocks, KrausPoint, C4};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

fn parse_err(e: serde_json::Error) -> LandscapeError {
    LandscapeError::Parse(e.to_string())
}

fn to_json_c(z: C64) -> JsonComplex {
    [z.re, z.im]
}

fn from_json_c(z: &JsonComplex) -> Result<C64> {
    finite_complex(z[0], z[1])
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| to_json_c(m[(i, j)])).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, nrows: usize, ncols: usize) -> Result<CMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(LandscapeError::Dimension(format!("expected a {nrows}×{ncols} matrix")));
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = from_json_c(z)?;
        }
    }
    Ok(m)
}

fn mat2_to_json(m: &Mat2) -> JsonMatrix {
    (0..2).map(|i| (0..2).map(|j| to_json_c(m[(i, j)])).collect()).collect()
}

fn mat2_from_json(rows: &JsonMatrix) -> Result<Mat2> {
    let m = matrix_from_json(rows, 2, 2)?;
    Ok(Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
}

#[derive(Debug, Serialize, Deserialize)]
struct KrausFile {
    n: usize,
    m: usize,
    operators: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorFile {
    n: usize,
    entries: JsonMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
struct UnitaryFile {
    dim: usize,
    ancilla_dim: usize,
    entries: JsonMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
struct PointFile {
    u1: Vec<JsonComplex>,
    u2: Vec<JsonComplex>,
    v1: Vec<JsonComplex>,
    v2: Vec<JsonComplex>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ParamsFile {
    w: [f64; 3],
}

fn check_n(n: usize) -> Result<()> {
    if n != 2 {
        return Err(LandscapeError::Dimension(format!("only two-level systems are supported, got n = {n}")));
    }
    Ok(())
}

/// Parses the operators without checking completeness, so callers can
/// report the residual of an infeasible file.
pub fn kraus_set_from_json_unchecked(text: &str) -> Result<KrausSet> {
    let f: KrausFile = serde_json::from_str(text).map_err(parse_err)?;
    check_n(f.n)?;
    if f.m != f.operators.len() {
        return Err(LandscapeError::Parse(format!("m = {} but {} operators given", f.m, f.operators.len())));
    }
    let ops = f.operators.iter().map(mat2_from_json).collect::<Result<Vec<_>>>()?;
    KrausSet::unchecked(ops)
}

pub fn kraus_set_from_json(text: &str) -> Result<KrausSet> {
    let k = kraus_set_from_json_unchecked(text)?;
    k.check()?;
    Ok(k)
}

pub fn kraus_set_to_json(k: &KrausSet) -> String {
    let f = KrausFile { n: 2, m: k.m(), operators: k.operators().iter().map(mat2_to_json).collect() };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}

fn operator_from_json(text: &str) -> Result<Mat2> {
    let f: OperatorFile = serde_json::from_str(text).map_err(parse_err)?;
    check_n(f.n)?;
    mat2_from_json(&f.entries)
}

fn operator_to_json(m: &Mat2) -> String {
    serde_json::to_string_pretty(&OperatorFile { n: 2, entries: mat2_to_json(m) }).expect("plain data serializes")
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(operator_from_json(text)?)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    operator_to_json(rho.entries())
}

pub fn target_from_json(text: &str) -> Result<TargetOperator> {
    TargetOperator::new(operator_from_json(text)?)
}

pub fn target_to_json(theta: &TargetOperator) -> String {
    operator_to_json(theta.entries())
}

pub fn unitary_from_json(text: &str) -> Result<DilatedUnitary> {
    let f: UnitaryFile = serde_json::from_str(text).map_err(parse_err)?;
    if f.dim != 2 * f.ancilla_dim {
        return Err(LandscapeError::Dimension(format!("dim {} ≠ 2 × ancilla_dim {}", f.dim, f.ancilla_dim)));
    }
    DilatedUnitary::from_entries(f.ancilla_dim, matrix_from_json(&f.entries, f.dim, f.dim)?)
}

pub fn unitary_to_json(u: &DilatedUnitary) -> String {
    let f = UnitaryFile { dim: u.dim(), ancilla_dim: u.ancilla_dim(), entries: matrix_to_json(u.entries()) };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}

fn block_from_json(v: &[JsonComplex], name: &str) -> Result<C4> {
    if v.len() != 4 {
        return Err(LandscapeError::Dimension(format!("block {name} must have 4 entries, got {}", v.len())));
    }
    let mut out = [C64::from(0.0); 4];
    for (o, z) in out.iter_mut().zip(v) {
        *o = from_json_c(z)?;
    }
    Ok(out)
}

pub fn point_from_json(text: &str) -> Result<KrausPoint> {
    let f: PointFile = serde_json::from_str(text).map_err(parse_err)?;
    KrausPoint::new(Blocks {
        u1: block_from_json(&f.u1, "u1")?,
        u2: block_from_json(&f.u2, "u2")?,
        v1: block_from_json(&f.v1, "v1")?,
        v2: block_from_json(&f.v2, "v2")?,
    })
}

pub fn point_to_json_value(p: &KrausPoint) -> serde_json::Value {
    let b = |v: &C4| v.iter().map(|z| to_json_c(*z)).collect::<Vec<_>>();
    serde_json::to_value(PointFile { u1: b(p.u1()), u2: b(p.u2()), v1: b(p.v1()), v2: b(p.v2()) })
        .expect("plain data serializes")
}

pub fn point_to_json(p: &KrausPoint) -> String {
    serde_json::to_string_pretty(&point_to_json_value(p)).expect("plain data serializes")
}

/// A list of points, as accepted for optimizer start files.
pub fn points_from_json(text: &str) -> Result<Vec<KrausPoint>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    match v {
        serde_json::Value::Array(items) => items.iter().map(|i| point_from_json(&i.to_string())).collect(),
        single => Ok(vec![point_from_json(&single.to_string())?]),
    }
}

pub fn params_from_json(text: &str) -> Result<LandscapeParams> {
    let f: ParamsFile = serde_json::from_str(text).map_err(parse_err)?;
    LandscapeParams::from_components(f.w[0], f.w[1], f.w[2])
}

pub fn params_to_json(p: &LandscapeParams) -> String {
    serde_json::to_string(&ParamsFile { w: p.w.components() }).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{bloch_to_density, dilate, BlochVector};
    use crate::stiefel::{random_kraus_point, random_kraus_set};

    #[test]
    fn kraus_round_trip() {
        for m in 1..=4 {
            let k = random_kraus_set(m, 7).unwrap();
            let back = kraus_set_from_json(&kraus_set_to_json(&k)).unwrap();
            assert_eq!(back.operators(), k.operators());
        }
    }

    #[test]
    fn kraus_layout_is_row_major() {
        let text = r#"{"n":2,"m":1,"operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        let k = kraus_set_from_json(text).unwrap();
        assert_eq!(k.operators()[0], Mat2::identity());
        let text = r#"{"n":2,"m":1,"operators":[[[[0,0],[1,0]],[[0,0],[0,0]]]]}"#;
        let k = kraus_set_from_json_unchecked(text).unwrap();
        assert_eq!(k.operators()[0][(0, 1)], C64::from(1.0));
        assert!(k.check().is_err());
    }

    #[test]
    fn malformed_inputs_are_errors() {
        assert!(matches!(kraus_set_from_json("{"), Err(LandscapeError::Parse(_))));
        let wrong_m = r#"{"n":2,"m":2,"operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(kraus_set_from_json(wrong_m).is_err());
        let wrong_n = r#"{"n":3,"m":1,"operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(matches!(kraus_set_from_json(wrong_n), Err(LandscapeError::Dimension(_))));
        assert!(params_from_json(r#"{"w":[1,1,0]}"#).is_err());
    }

    #[test]
    fn other_round_trips() {
        let rho = bloch_to_density(&BlochVector::new(0.2, 0.4, 0.2).unwrap());
        assert_eq!(density_from_json(&density_to_json(&rho)).unwrap(), rho);

        let p = random_kraus_point(3);
        assert_eq!(point_from_json(&point_to_json(&p)).unwrap(), p);
        let list = format!("[{}, {}]", point_to_json(&p), point_to_json(&p));
        assert_eq!(points_from_json(&list).unwrap().len(), 2);

        let u = dilate(&KrausSet::dephasing()).unwrap();
        let back = unitary_from_json(&unitary_to_json(&u)).unwrap();
        assert_eq!(back.entries(), u.entries());

        let params = LandscapeParams::from_components(0.3, -0.4, 0.2).unwrap();
        assert_eq!(params_from_json(&params_to_json(&params)).unwrap(), params);
    }
}
