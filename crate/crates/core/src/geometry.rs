//! Euclidean analogies over F_q: squared distances, spreads, and the named
//! pattern constructors (3-AP, right isosceles, 45-degree, equilateral).
//!
//! The spread between anisotropic vectors is 1 - (u·v)^2 / ((u·u)(v·v)), the
//! finite-field analogue of the squared sine. Degenerate triangles (common
//! squared side 0, possible when isotropic vectors exist) count as
//! equilateral; the corollary "no equilateral triangle implies avoiding"
//! stays sound under the inclusive reading.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{Matrix, Point};
use crate::pattern::PatternSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinPattern {
    Ap3,
    RightIsosceles,
    Rot45,
    Equilateral,
}

impl BuiltinPattern {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinPattern::Ap3 => "ap3",
            BuiltinPattern::RightIsosceles => "right_isosceles",
            BuiltinPattern::Rot45 => "rot45",
            BuiltinPattern::Equilateral => "equilateral",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ap3" => Ok(BuiltinPattern::Ap3),
            "right_isosceles" => Ok(BuiltinPattern::RightIsosceles),
            "rot45" => Ok(BuiltinPattern::Rot45),
            "equilateral" => Ok(BuiltinPattern::Equilateral),
            other => Err(Error::InvalidParameter(format!(
                "unknown builtin pattern '{other}' (expected ap3, right_isosceles, rot45, equilateral)"
            ))),
        }
    }
}

/// Dot product over all k·n coordinates.
pub fn dot(u: &Point, v: &Point) -> Result<FieldElement> {
    if u.field() != v.field() || u.k() != v.k() || u.n() != v.n() {
        return Err(Error::DimensionMismatch("dot product shape mismatch".into()));
    }
    let f = u.field();
    let mut acc = f.zero();
    for (a, b) in u.coords().iter().zip(v.coords()) {
        acc = f.add(&acc, &f.mul(a, b));
    }
    Ok(acc)
}

/// Squared distance: self-dot of the difference, all blocks summed.
pub fn sq_dist(u: &Point, v: &Point) -> Result<FieldElement> {
    let diff = u.sub(v)?;
    dot(&diff, &diff)
}

/// 1 - (u·v)^2 / ((u·u)(v·v)); None when either argument is isotropic.
pub fn spread(u: &Point, v: &Point) -> Result<Option<FieldElement>> {
    let f = u.field();
    let uu = dot(u, u)?;
    let vv = dot(v, v)?;
    if f.is_zero(&uu) || f.is_zero(&vv) {
        return Ok(None);
    }
    let uv = dot(u, v)?;
    let num = f.mul(&uv, &uv);
    let den = f.mul(&uu, &vv);
    Ok(Some(f.sub(&f.one(), &f.div(&num, &den)?)))
}

/// True iff the three points are pairwise distinct with equal pairwise
/// squared distances (a common value of 0 is allowed).
pub fn is_equilateral(p1: &Point, p2: &Point, p3: &Point) -> Result<bool> {
    if p1.k() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "equilateral check needs k = 2 points, got k = {}",
            p1.k()
        )));
    }
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Ok(false);
    }
    let d12 = sq_dist(p1, p2)?;
    let d13 = sq_dist(p1, p3)?;
    let d23 = sq_dist(p2, p3)?;
    Ok(d12 == d13 && d13 == d23)
}

/// Constructs a named pattern over the given field, validated full-rank.
/// Square roots use the canonical (lexicographically smallest) choice; use
/// `equilateral_with_root` / `rot45_with_root` to pick the other root.
pub fn builtin_pattern(name: BuiltinPattern, field: &FieldSpec) -> Result<PatternSpec> {
    match name {
        BuiltinPattern::Ap3 => crate::pattern::ap3(field),
        BuiltinPattern::RightIsosceles => {
            let m1 = Matrix::identity(field, 2);
            let m2 = Matrix::from_ints(field, 2, &[0, -1, 1, 0])?;
            PatternSpec::new(field.clone(), vec![m1, m2])?.validated()
        }
        BuiltinPattern::Rot45 => {
            let two = field.from_int(2);
            let root = field.sqrt(&two).ok_or_else(|| {
                Error::ResidueCondition(format!("2 is not a square in GF({})", field.q()))
            })?;
            rot45_with_root(field, &root)
        }
        BuiltinPattern::Equilateral => {
            let three = field.from_int(3);
            if field.is_zero(&three) {
                return Err(Error::ResidueCondition(format!(
                    "3 vanishes in GF({}), no equilateral rotation exists",
                    field.q()
                )));
            }
            let root = field.sqrt(&three).ok_or_else(|| {
                Error::ResidueCondition(format!("3 is not a square in GF({})", field.q()))
            })?;
            equilateral_with_root(field, &root)
        }
    }
}

/// 45-degree rotation analogue: M_2 = c·(1 -1; 1 1) with c = root·2^{-1},
/// for any supplied square root of 2.
pub fn rot45_with_root(field: &FieldSpec, root_of_2: &FieldElement) -> Result<PatternSpec> {
    let two = field.from_int(2);
    if field.mul(root_of_2, root_of_2) != two {
        return Err(Error::InvalidParameter(format!(
            "{} is not a square root of 2 in GF({})",
            field.render(root_of_2),
            field.q()
        )));
    }
    let c = field.mul(root_of_2, &field.inv(&two)?);
    let m1 = Matrix::identity(field, 2);
    let entries = vec![c.clone(), field.neg(&c), c.clone(), c.clone()];
    let m2 = Matrix::new(field.clone(), 2, entries)?;
    PatternSpec::new(field.clone(), vec![m1, m2])?.validated()
}

/// 60-degree rotation analogue: M_2 = (b -ab; ab b) with a a square root of
/// 3 and b = 2^{-1}.
pub fn equilateral_with_root(field: &FieldSpec, root_of_3: &FieldElement) -> Result<PatternSpec> {
    let three = field.from_int(3);
    if field.mul(root_of_3, root_of_3) != three {
        return Err(Error::InvalidParameter(format!(
            "{} is not a square root of 3 in GF({})",
            field.render(root_of_3),
            field.q()
        )));
    }
    let b = field.inv(&field.from_int(2))?;
    let ab = field.mul(root_of_3, &b);
    let m1 = Matrix::identity(field, 2);
    let entries = vec![b.clone(), field.neg(&ab), ab.clone(), b.clone()];
    let m2 = Matrix::new(field.clone(), 2, entries)?;
    PatternSpec::new(field.clone(), vec![m1, m2])?.validated()
}
