//! Constructors for the explicit groups: unitary, symplectic and orthogonal
//! point stabilizers, the symmetric group family and small sanity groups.

mod classical;
mod forms;
mod sanity;
mod symmetric;

use std::collections::BTreeMap;

pub use classical::{
    block_diagonal, block_lower, go3_element, go3_stabilizers, gu3_stabilizers, orthogonal_plus_stabilizer_even,
    orthogonal_plus_stabilizer_odd, symplectic_stabilizer, unitary_field, unitary_transvection_family, Go3, Gu3,
    UnitaryTransvectionFamily,
};
pub use forms::{antidiagonal, form_membership, split_gram, FormKind, FormSpec};
pub use sanity::{diagonal_reflection_group, s3_permutation, sanity_groups, transvection_root_group, trivial_group};
pub use symmetric::{permutation_on_quotient, quotient_coordinates, symmetric_family, SymmetricFamily};

use crate::error::{Error, Result};
use crate::group::MatrixGroup;

/// Family names accepted by [`resolve`], with their parameters.
pub const FAMILY_SPECS: &[(&str, &str)] = &[
    ("gu3", "q, sub = H | Htilde | Hm (with m)"),
    ("unitary", "q, n: block transvection group over GF(q^2)"),
    ("symmetric-block", "q, n: block group with symmetric B over GF(q)"),
    ("symplectic", "q, m"),
    ("orthogonal-odd", "q (odd), m"),
    ("orthogonal-even", "q (even), m"),
    ("go3", "q (odd), sub = H | Hminus"),
    ("symmetric", "p, m, sub = S | H | sigma"),
    ("s3", "q"),
    ("diag", "q, m"),
    ("transvection", "q"),
    ("trivial", "q, n"),
];

fn parse_params(parts: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {p:?}")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn int(params: &BTreeMap<String, String>, key: &str, default: Option<u32>) -> Result<u32> {
    match params.get(key) {
        Some(v) => v.parse().map_err(|_| Error::Parse(format!("{key} = {v:?} is not an integer"))),
        None => default.ok_or_else(|| Error::InvalidParameters(format!("missing parameter {key}"))),
    }
}

/// Builds a group from a spec such as `gu3:q=2:sub=Htilde`.
pub fn resolve(spec: &str) -> Result<MatrixGroup> {
    let parts: Vec<&str> = spec.split(':').collect();
    let params = parse_params(&parts[1..])?;
    let sub = params.get("sub").map(String::as_str);
    match parts[0] {
        "gu3" => {
            let g = gu3_stabilizers(int(&params, "q", Some(2))?)?;
            match sub.unwrap_or("H") {
                "H" => Ok(g.h),
                "Htilde" => Ok(g.h_tilde),
                "Hm" => g.h_m(int(&params, "m", None)?),
                s => Err(Error::InvalidParameters(format!("unknown gu3 subgroup {s}"))),
            }
        }
        "unitary" => Ok(unitary_transvection_family(int(&params, "q", Some(2))?, int(&params, "n", Some(2))? as usize)?.group),
        "symmetric-block" | "symplectic" => {
            let m = params.get("m").or(params.get("n")).map_or(Ok(2), |v| v.parse().map_err(|_| Error::Parse(v.clone())))?;
            symplectic_stabilizer(int(&params, "q", Some(2))?, m)
        }
        "orthogonal-odd" => orthogonal_plus_stabilizer_odd(int(&params, "q", Some(3))?, int(&params, "m", Some(2))? as usize),
        "orthogonal-even" => {
            orthogonal_plus_stabilizer_even(int(&params, "q", Some(2))?, int(&params, "m", Some(2))? as usize)
        }
        "go3" => {
            let g = go3_stabilizers(int(&params, "q", Some(3))?)?;
            match sub.unwrap_or("H") {
                "H" => Ok(g.h),
                "Hminus" => Ok(g.h_minus),
                s => Err(Error::InvalidParameters(format!("unknown go3 subgroup {s}"))),
            }
        }
        "symmetric" => {
            let fam = symmetric_family(int(&params, "p", Some(3))?, int(&params, "m", Some(6))? as usize)?;
            match sub.unwrap_or("S") {
                "S" => Ok(fam.group),
                "H" => Ok(fam.h),
                "sigma" => MatrixGroup::generate(&fam.field, fam.dim(), vec![fam.sigma]),
                s => Err(Error::InvalidParameters(format!("unknown symmetric subgroup {s}"))),
            }
        }
        "s3" => s3_permutation(int(&params, "q", Some(7))?),
        "diag" => diagonal_reflection_group(int(&params, "q", Some(7))?, int(&params, "m", Some(3))?),
        "transvection" => transvection_root_group(int(&params, "q", Some(3))?),
        "trivial" => trivial_group(int(&params, "q", Some(2))?, int(&params, "n", Some(2))? as usize),
        other => Err(Error::InvalidParameters(format!("unknown family {other:?}"))),
    }
}
